import { describe, expect, it } from "vitest";

import { decodeSession, encodeSession } from "../src/urlState";

describe("shareable session state", () => {
  it("round-trips k, filters and locked devices", () => {
    const encoded = encodeSession({
      k: 3,
      filters: {
        oems: ["Samsung", "Xiaomi"],
        manufacturers: ["Qualcomm"],
        released_from: "2021-01-01",
      },
      locked: ["samsung-galaxy-t1"],
    });
    expect(decodeSession(encoded)).toEqual({
      k: 3,
      filters: {
        oems: ["Samsung", "Xiaomi"],
        manufacturers: ["Qualcomm"],
        released_from: "2021-01-01",
      },
      locked: ["samsung-galaxy-t1"],
    });
  });

  it("omits empty filters", () => {
    const encoded = encodeSession({ k: 2 });
    expect(decodeSession(encoded)).toEqual({ k: 2 });
  });

  it("survives unicode device names", () => {
    const encoded = encodeSession({ k: 1, locked: ["tecno-späŕk-ż"] });
    expect(decodeSession(encoded)?.locked).toEqual(["tecno-späŕk-ż"]);
  });

  it("returns null for garbage", () => {
    expect(decodeSession("")).toBeNull();
    expect(decodeSession("s=!!!not-base64!!!")).toBeNull();
    expect(decodeSession("s=" + btoa("[1, 2"))).toBeNull();
  });

  it("drops invalid field types instead of failing", () => {
    const payload = btoa(JSON.stringify({ k: "three", locked: [1, 2] }));
    expect(decodeSession(`s=${payload}`)).toEqual({});
  });
});
