// Picker session state machine, kept free of DOM concerns so its contract is
// directly testable: every user action issues exactly one /pick request,
// displayed numbers always come from the most recent accepted server
// response, and responses to superseded requests are discarded.

import type { DeviceRow, PickFilters, PickResult } from "./types";

export interface PickerApi {
  pick(body: {
    k: number;
    locked?: string[];
  } & PickFilters): Promise<PickResult>;
  pickDelta(selection: string[], candidate: string): Promise<{ delta: number }>;
}

export interface PickerState {
  k: number;
  filters: PickFilters;
  locked: string[];
  result: PickResult | null;
  deltas: Record<string, number>;
  pending: boolean;
  error: string | null;
}

export interface PickerInit {
  k?: number;
  filters?: PickFilters;
  locked?: string[];
}

const MAX_DELTA_CANDIDATES = 50;

export class PickerSession {
  private k: number;
  private filters: PickFilters;
  private locked: string[];
  private result: PickResult | null = null;
  private deltas: Record<string, number> = {};
  private pending = false;
  private error: string | null = null;
  private candidates: DeviceRow[] = [];
  private requestCounter = 0;
  private latestRequest = 0;

  constructor(
    private api: PickerApi,
    private onChange: (state: PickerState) => void,
    initial: PickerInit = {},
  ) {
    this.k = initial.k ?? 2;
    this.filters = initial.filters ?? {};
    this.locked = [...(initial.locked ?? [])];
  }

  state(): PickerState {
    return {
      k: this.k,
      filters: this.filters,
      locked: [...this.locked],
      result: this.result,
      deltas: { ...this.deltas },
      pending: this.pending,
      error: this.error,
    };
  }

  /** Devices that pass the active filters and are not in the selection. */
  visibleCandidates(): DeviceRow[] {
    const selected = new Set(
      (this.result?.selection ?? []).map((entry) => entry.device_id),
    );
    return this.candidates.filter(
      (device) => !selected.has(device.device_id) && matchesFilters(device, this.filters),
    );
  }

  setCandidates(devices: DeviceRow[]): void {
    this.candidates = devices;
    this.emit();
  }

  // Each of the four user actions below triggers exactly one /pick request.

  setK(k: number): Promise<void> {
    this.k = k;
    return this.refresh();
  }

  setFilters(filters: PickFilters): Promise<void> {
    this.filters = filters;
    return this.refresh();
  }

  lockDevice(deviceId: string): Promise<void> {
    if (!this.locked.includes(deviceId)) {
      this.locked.push(deviceId);
      if (this.locked.length > this.k) {
        this.k = this.locked.length;
      }
    }
    return this.refresh();
  }

  unlockDevice(deviceId: string): Promise<void> {
    this.locked = this.locked.filter((id) => id !== deviceId);
    return this.refresh();
  }

  refresh(): Promise<void> {
    const requestId = ++this.requestCounter;
    this.latestRequest = requestId;
    this.pending = true;
    this.emit();
    return this.api
      .pick({ k: this.k, locked: this.locked, ...this.filters })
      .then((result) => {
        if (requestId !== this.latestRequest) {
          return; // superseded while in flight
        }
        this.result = result;
        this.deltas = {};
        this.pending = false;
        this.error = null;
        this.emit();
        return this.fetchDeltas(requestId, result);
      })
      .catch((error: unknown) => {
        if (requestId !== this.latestRequest) {
          return;
        }
        this.pending = false;
        this.error = error instanceof Error ? error.message : String(error);
        this.emit(); // last good result stays on screen
      });
  }

  private async fetchDeltas(requestId: number, result: PickResult): Promise<void> {
    const selectionIds = result.selection.map((entry) => entry.device_id);
    const candidates = this.visibleCandidates().slice(0, MAX_DELTA_CANDIDATES);
    for (const candidate of candidates) {
      let delta: number;
      try {
        ({ delta } = await this.api.pickDelta(selectionIds, candidate.device_id));
      } catch {
        continue; // candidate rows without a delta just render blank
      }
      if (requestId !== this.latestRequest) {
        return; // a newer pick superseded these deltas
      }
      this.deltas[candidate.device_id] = delta;
      this.emit();
    }
  }

  private emit(): void {
    this.onChange(this.state());
  }
}

export function matchesFilters(device: DeviceRow, filters: PickFilters): boolean {
  if (device.chipset === null) {
    return false;
  }
  if (filters.oems && filters.oems.length > 0 && !filters.oems.includes(device.oem)) {
    return false;
  }
  if (
    filters.manufacturers &&
    filters.manufacturers.length > 0 &&
    !filters.manufacturers.includes(device.chipset.manufacturer)
  ) {
    return false;
  }
  // ISO dates compare correctly as strings
  if (filters.released_from && device.release_date < filters.released_from) {
    return false;
  }
  if (filters.released_to && device.release_date > filters.released_to) {
    return false;
  }
  return true;
}
