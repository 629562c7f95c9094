// Knowledge-base browsing: chipset, device and vulnerability pages. Every
// number shown is an API payload echo.

import { ApiClient, ApiHttpError } from "./api";
import { clear, el, errorBanner, link, table } from "./render";
import type { VulnerabilityDetail } from "./types";

export async function renderChipsetList(root: HTMLElement, api: ApiClient): Promise<void> {
  const page = await api.chipsets();
  clear(root);
  root.append(el("h1", {}, "Chipsets"));
  root.append(
    table(
      ["manufacturer", "model", "marketing name", "released", "vulnerabilities", "devices"],
      page.items.map((row) => [
        row.manufacturer,
        link(`#/chipsets/${row.manufacturer}/${row.model_number}`, row.model_number),
        row.marketing_name ?? "-",
        row.release_date ?? "-",
        String(row.vulnerability_count),
        String(row.device_count),
      ]),
    ),
  );
}

export async function renderChipsetDetail(
  root: HTMLElement,
  api: ApiClient,
  manufacturer: string,
  model: string,
): Promise<void> {
  const detail = await api.chipset(manufacturer, model);
  clear(root);
  root.append(el("h1", {}, `${detail.manufacturer} ${detail.model_number}`));
  if (detail.marketing_name) {
    root.append(el("p", {}, `marketing name: ${detail.marketing_name}`));
  }
  root.append(el("p", {}, `released: ${detail.release_date ?? "unknown"}`));
  root.append(el("h2", {}, `Vulnerabilities (${detail.vulnerabilities.length})`));
  root.append(
    el(
      "ul",
      {},
      ...detail.vulnerabilities.map((cve) =>
        el("li", {}, link(`#/vulnerabilities/${cve}`, cve)),
      ),
    ),
  );
  root.append(el("h2", {}, `Devices (${detail.devices.length})`));
  root.append(
    el(
      "ul",
      {},
      ...detail.devices.map((id) => el("li", {}, link(`#/devices/${id}`, id))),
    ),
  );
}

export async function renderDeviceList(root: HTMLElement, api: ApiClient): Promise<void> {
  const page = await api.devices();
  clear(root);
  root.append(el("h1", {}, "Devices"));
  root.append(
    table(
      ["OEM", "device", "chipset", "released"],
      page.items.map((row) => [
        row.oem,
        link(`#/devices/${row.device_id}`, row.device_name),
        row.chipset ? `${row.chipset.manufacturer} ${row.chipset.model_number}` : "-",
        row.release_date,
      ]),
    ),
  );
}

export async function renderDeviceDetail(
  root: HTMLElement,
  api: ApiClient,
  deviceId: string,
): Promise<void> {
  const detail = await api.device(deviceId);
  clear(root);
  root.append(el("h1", {}, `${detail.oem} ${detail.device_name}`));
  if (detail.chipset) {
    root.append(
      el(
        "p",
        {},
        "chipset: ",
        link(
          `#/chipsets/${detail.chipset.manufacturer}/${detail.chipset.model_number}`,
          `${detail.chipset.manufacturer} ${detail.chipset.model_number}`,
        ),
      ),
    );
  }
  root.append(el("p", {}, `released: ${detail.release_date}`));
  root.append(el("h2", {}, "Updates"));
  root.append(
    table(
      ["released", "patch level", "explicit CVEs"],
      detail.updates.map((update) => [
        update.release_date,
        update.spl_date ?? "-",
        update.explicit_cves.join(", ") || "-",
      ]),
    ),
  );
  root.append(el("h2", {}, "Chipset vulnerabilities and first mitigating update"));
  root.append(
    table(
      ["CVE", "first mitigating update"],
      detail.vulnerabilities.map((cve) => [
        link(`#/vulnerabilities/${cve}`, cve),
        detail.first_mitigation[cve] ?? "none listed",
      ]),
    ),
  );
}

export async function renderVulnerability(
  root: HTMLElement,
  api: ApiClient,
  cve: string,
): Promise<void> {
  const detail = await api.vulnerability(cve);
  clear(root);
  root.append(el("h1", {}, detail.cve));
  root.append(
    el(
      "p",
      {},
      `component: ${detail.component} · location: ${detail.location} · ` +
        `discovery: ${detail.attribution} · published: ${detail.patch_date ?? "unknown"}` +
        (detail.report_date ? ` · reported: ${detail.report_date}` : ""),
    ),
  );
  if (detail.warning) {
    root.append(errorBanner(detail.warning));
  }

  root.append(el("h2", {}, "What each vantage point says"));
  root.append(sourceRecordTable(detail));

  root.append(
    el("h2", {}, `Affected chipsets (${detail.affected_chipsets.length})`),
  );
  root.append(
    el(
      "ul",
      {},
      ...detail.affected_chipsets.map((chipset) =>
        el(
          "li",
          {},
          link(
            `#/chipsets/${chipset.manufacturer}/${chipset.model_number}`,
            `${chipset.manufacturer} ${chipset.model_number}`,
          ),
        ),
      ),
    ),
  );

  root.append(
    el(
      "h2",
      { id: "affected-count" },
      `Affected smartphones: ${detail.affected_smartphone_count}`,
    ),
  );
  root.append(
    table(
      ["OEM", "models"],
      Object.entries(detail.per_oem).map(([oem, count]) => [oem, String(count)]),
    ),
  );

  root.append(el("h2", {}, "Update timeline per device"));
  const timeline = el("div", {}, "loading…");
  root.append(timeline);
  const shown = detail.affected_smartphones.slice(0, 25);
  const rows = await Promise.all(
    shown.map(async (deviceId) => {
      try {
        const device = await api.device(deviceId);
        return [
          link(`#/devices/${deviceId}`, deviceId),
          device.first_mitigation[detail.cve] ?? "none listed",
        ];
      } catch {
        return [deviceId, "unavailable"];
      }
    }),
  );
  clear(timeline);
  timeline.append(table(["device", "first mitigating update"], rows));
  if (detail.affected_smartphones.length > shown.length) {
    timeline.append(
      el("p", {}, `… and ${detail.affected_smartphones.length - shown.length} more`),
    );
  }
}

function sourceRecordTable(detail: VulnerabilityDetail): HTMLElement {
  return table(
    ["vantage point", "published", "severity", "credit", "affected chipset strings", "description"],
    detail.records.map((record) => [
      record.vantage_point,
      record.publication_date,
      record.severity === null
        ? "-"
        : `${record.severity}${record.severity_version ? ` (v${record.severity_version})` : ""}`,
      record.internal_flag === true
        ? "internal"
        : (record.credit ?? (record.internal_flag === false ? "external" : "-")),
      record.affected_chipset_strings.join(", ") || "-",
      record.description,
    ]),
  );
}

export function renderNotFound(root: HTMLElement, message: string): void {
  clear(root);
  root.append(el("h1", {}, "Not found"));
  root.append(el("p", {}, message));
}

export function isNotFound(error: unknown): boolean {
  return error instanceof ApiHttpError && error.status === 404;
}
