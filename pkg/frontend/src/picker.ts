// Interactive device picker: lock devices, change k, filter, and watch the
// marginal coverage numbers (all server-computed) feed the next choice.

import { ApiClient } from "./api";
import { PickerSession, PickerState } from "./state";
import { clear, el, errorBanner, link, table } from "./render";
import { decodeSession, encodeSession } from "./urlState";
import type { DeviceRow } from "./types";

export function mountPicker(root: HTMLElement, api: ApiClient, query: string): void {
  const initial = decodeSession(query) ?? {};
  const view = el("div", { class: "picker" });
  root.append(view);

  const session = new PickerSession(api, (state) => render(state), initial);

  api
    .devices()
    .then((page) => session.setCandidates(page.items))
    .catch(() => session.setCandidates([]));
  void session.refresh();

  function render(state: PickerState): void {
    window.history.replaceState(
      null,
      "",
      `#/picker?${encodeSession({ k: state.k, filters: state.filters, locked: state.locked })}`,
    );
    clear(view);
    view.append(el("h1", {}, "Device picker"));
    if (state.error) {
      view.append(errorBanner(`request failed: ${state.error}`));
    }
    view.append(controls(state));
    view.append(selectionSection(state));
    view.append(candidateSection(state));
  }

  function controls(state: PickerState): HTMLElement {
    const kInput = el("input", {
      id: "picker-k",
      type: "number",
      min: "1",
      value: String(state.k),
    }) as HTMLInputElement;
    kInput.addEventListener("change", () => {
      const k = Number(kInput.value);
      if (Number.isInteger(k) && k >= 1) {
        void session.setK(k);
      }
    });

    const oemInput = el("input", {
      id: "picker-oems",
      type: "text",
      placeholder: "OEMs, comma separated",
      value: (state.filters.oems ?? []).join(", "),
    }) as HTMLInputElement;
    const cmInput = el("input", {
      id: "picker-cms",
      type: "text",
      placeholder: "chipset manufacturers",
      value: (state.filters.manufacturers ?? []).join(", "),
    }) as HTMLInputElement;
    const applyButton = el("button", { id: "picker-apply" }, "Apply filters");
    applyButton.addEventListener("click", () => {
      void session.setFilters({
        oems: splitList(oemInput.value),
        manufacturers: splitList(cmInput.value),
        released_from: state.filters.released_from,
        released_to: state.filters.released_to,
      });
    });

    return el(
      "div",
      { class: "controls" },
      el("label", { for: "picker-k" }, "devices to select "),
      kInput,
      oemInput,
      cmInput,
      applyButton,
      state.pending ? el("span", { class: "pending" }, " loading…") : null,
    );
  }

  function selectionSection(state: PickerState): HTMLElement {
    const section = el("div", { class: "selection" });
    section.append(el("h2", {}, "Selection"));
    const result = state.result;
    if (!result) {
      section.append(el("p", {}, "No selection yet."));
      return section;
    }
    section.append(
      el(
        "p",
        { id: "total-coverage" },
        `distinct vulnerabilities covered: ${result.total_covered}`,
      ),
    );
    if (result.truncated) {
      section.append(el("p", {}, "fewer candidates than requested; selection truncated"));
    }
    section.append(
      table(
        ["device", "chipset", "locked", "marginal gain", "coverage", ""],
        result.selection.map((entry) => {
          const unlock = el("button", { "data-unlock": entry.device_id }, "remove");
          unlock.addEventListener("click", () => void session.unlockDevice(entry.device_id));
          return [
            link(`#/devices/${entry.device_id}`, `${entry.oem} ${entry.device_name}`),
            entry.chipset ? `${entry.chipset.manufacturer} ${entry.chipset.model_number}` : "-",
            entry.locked ? "yes" : "no",
            String(entry.marginal_gain),
            String(entry.coverage),
            entry.locked ? unlock : "",
          ];
        }),
      ),
    );
    section.append(el("h3", {}, "Pairwise shared vulnerabilities"));
    const labels = result.selection.map((entry) => entry.device_name);
    section.append(
      table(
        [""].concat(labels),
        result.overlap_matrix.map((row, i) => [
          labels[i],
          ...row.map((cell) => String(cell)),
        ]),
      ),
    );
    return section;
  }

  function candidateSection(state: PickerState): HTMLElement {
    const section = el("div", { class: "candidates" });
    section.append(el("h2", {}, "Candidates"));
    const candidates = session.visibleCandidates();
    if (candidates.length === 0) {
      section.append(el("p", { class: "empty" }, "No devices match the filters."));
      return section;
    }
    section.append(
      table(
        ["device", "chipset", "released", "would add", ""],
        candidates.map((device: DeviceRow) => {
          const lock = el("button", { "data-lock": device.device_id }, "lock");
          lock.addEventListener("click", () => void session.lockDevice(device.device_id));
          const delta = state.deltas[device.device_id];
          return [
            link(`#/devices/${device.device_id}`, `${device.oem} ${device.device_name}`),
            device.chipset
              ? `${device.chipset.manufacturer} ${device.chipset.model_number}`
              : "-",
            device.release_date,
            delta === undefined ? "…" : String(delta),
            lock,
          ];
        }),
      ),
    );
    return section;
  }
}

function splitList(text: string): string[] {
  return text
    .split(",")
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}
