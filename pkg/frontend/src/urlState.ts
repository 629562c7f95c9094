// Picker sessions are shareable links: k, filters and locked devices are
// the only client-side state, encoded into the URL hash.

import type { PickFilters } from "./types";
import type { PickerInit } from "./state";

const KEY = "s";

export function encodeSession(init: Required<Pick<PickerInit, "k">> & PickerInit): string {
  const payload: Record<string, unknown> = { k: init.k };
  const filters = init.filters ?? {};
  if (filters.oems?.length) payload.oems = filters.oems;
  if (filters.manufacturers?.length) payload.manufacturers = filters.manufacturers;
  if (filters.released_from) payload.released_from = filters.released_from;
  if (filters.released_to) payload.released_to = filters.released_to;
  if (init.locked?.length) payload.locked = init.locked;
  return `${KEY}=${base64EncodeUtf8(JSON.stringify(payload))}`;
}

export function decodeSession(query: string): PickerInit | null {
  const match = query.match(new RegExp(`${KEY}=([A-Za-z0-9+/=_-]+)`));
  if (!match) return null;
  try {
    const parsed = JSON.parse(base64DecodeUtf8(match[1]));
    if (!parsed || typeof parsed !== "object") return null;
    const init: PickerInit = {};
    if (typeof parsed.k === "number" && Number.isInteger(parsed.k) && parsed.k >= 1) {
      init.k = parsed.k;
    }
    const filters: PickFilters = {};
    if (isStringArray(parsed.oems)) filters.oems = parsed.oems;
    if (isStringArray(parsed.manufacturers)) filters.manufacturers = parsed.manufacturers;
    if (typeof parsed.released_from === "string") filters.released_from = parsed.released_from;
    if (typeof parsed.released_to === "string") filters.released_to = parsed.released_to;
    if (Object.keys(filters).length) init.filters = filters;
    if (isStringArray(parsed.locked)) init.locked = parsed.locked;
    return init;
  } catch {
    return null;
  }
}

function isStringArray(value: unknown): value is string[] {
  return Array.isArray(value) && value.every((item) => typeof item === "string");
}

function base64EncodeUtf8(text: string): string {
  const bytes = new TextEncoder().encode(text);
  let binary = "";
  bytes.forEach((b) => {
    binary += String.fromCharCode(b);
  });
  return btoa(binary);
}

function base64DecodeUtf8(encoded: string): string {
  const binary = atob(encoded);
  const bytes = Uint8Array.from(binary, (c) => c.charCodeAt(0));
  return new TextDecoder().decode(bytes);
}
