// Fetch-based client for the knowledge-base API. The fetch function is
// injectable so tests can intercept every request.

import type {
  ChipsetDetail,
  ChipsetRow,
  DeviceDetail,
  DeviceRow,
  Page,
  PickRequestBody,
  PickResult,
  VulnerabilityDetail,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiHttpError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiHttpError(
        body.status ?? response.status,
        body.code ?? "internal",
        body.message ?? "request failed",
      );
    }
    return body as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  chipsets(limit = 500): Promise<Page<ChipsetRow>> {
    return this.request(`/chipsets?limit=${limit}`);
  }

  chipset(manufacturer: string, model: string): Promise<ChipsetDetail> {
    return this.request(
      `/chipsets/${encodeURIComponent(manufacturer)}/${encodeURIComponent(model)}`,
    );
  }

  devices(limit = 1000): Promise<Page<DeviceRow>> {
    return this.request(`/devices?limit=${limit}`);
  }

  device(deviceId: string): Promise<DeviceDetail> {
    return this.request(`/devices/${encodeURIComponent(deviceId)}`);
  }

  vulnerability(cve: string): Promise<VulnerabilityDetail> {
    return this.request(`/vulnerabilities/${encodeURIComponent(cve)}`);
  }

  pick(body: PickRequestBody): Promise<PickResult> {
    return this.request("/pick", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  pickDelta(selection: string[], candidate: string): Promise<{ candidate: string; delta: number }> {
    return this.request("/pick/delta", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ selection, candidate }),
    });
  }
}
