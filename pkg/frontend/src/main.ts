// Hash router for the static bundle. Routes:
//   #/chipsets            #/chipsets/{manufacturer}/{model}
//   #/devices             #/devices/{device-id}
//   #/vulnerabilities/{cve}
//   #/picker?s=...        (shareable session state)

import { ApiClient } from "./api";
import {
  isNotFound,
  renderChipsetDetail,
  renderChipsetList,
  renderDeviceDetail,
  renderDeviceList,
  renderNotFound,
  renderVulnerability,
} from "./browse";
import { el, clear, errorBanner, link } from "./render";
import { mountPicker } from "./picker";

function apiBase(): string {
  const meta = document.querySelector('meta[name="api-base"]');
  return meta?.getAttribute("content") ?? "http://127.0.0.1:8300";
}

const api = new ApiClient(apiBase());

function nav(): HTMLElement {
  return el(
    "nav",
    {},
    link("#/chipsets", "Chipsets"),
    " · ",
    link("#/devices", "Devices"),
    " · ",
    link("#/picker", "Device picker"),
  );
}

async function route(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) return;
  clear(root);
  root.append(nav());
  const body = el("main", {});
  root.append(body);

  const hash = window.location.hash || "#/chipsets";
  const [path, query] = hash.slice(1).split("?", 2);
  const parts = path.split("/").filter((p) => p.length > 0);

  try {
    if (parts[0] === "picker") {
      mountPicker(body, api, query ?? "");
    } else if (parts[0] === "chipsets" && parts.length === 3) {
      await renderChipsetDetail(body, api, decodeURIComponent(parts[1]), decodeURIComponent(parts[2]));
    } else if (parts[0] === "chipsets" || parts.length === 0) {
      await renderChipsetList(body, api);
    } else if (parts[0] === "devices" && parts.length === 2) {
      await renderDeviceDetail(body, api, decodeURIComponent(parts[1]));
    } else if (parts[0] === "devices") {
      await renderDeviceList(body, api);
    } else if (parts[0] === "vulnerabilities" && parts.length === 2) {
      await renderVulnerability(body, api, decodeURIComponent(parts[1]));
    } else {
      renderNotFound(body, `no page at ${path}`);
    }
  } catch (error) {
    if (isNotFound(error)) {
      renderNotFound(body, error instanceof Error ? error.message : "unknown resource");
    } else {
      body.append(
        errorBanner(error instanceof Error ? error.message : "request failed"),
      );
    }
  }
}

window.addEventListener("hashchange", () => void route());
window.addEventListener("DOMContentLoaded", () => void route());
