// Session contract: one /pick per user action, totals always echo the most
// recent accepted server response, stale responses never overwrite newer ones.

import { describe, expect, it, vi } from "vitest";

import { PickerSession, PickerState, matchesFilters } from "../src/state";
import type { DeviceRow, PickResult } from "../src/types";

function result(total: number, ids: string[] = []): PickResult {
  return {
    selection: ids.map((id) => ({
      device_id: id,
      oem: "Acme",
      device_name: id,
      chipset: { manufacturer: "Qualcomm", model_number: "CH0" },
      release_date: "2022-01-01",
      locked: false,
      marginal_gain: 0,
      coverage: 0,
    })),
    total_covered: total,
    overlap_matrix: ids.map(() => ids.map(() => 0)),
    candidate_count: ids.length,
    truncated: false,
  };
}

function device(id: string, oem = "Acme", released = "2022-01-01"): DeviceRow {
  return {
    device_id: id,
    oem,
    device_name: id,
    chipset: { manufacturer: "Qualcomm", model_number: "CH0" },
    release_date: released,
  };
}

function makeSession(pickImpl?: (body: unknown) => Promise<PickResult>) {
  const pick = vi.fn(pickImpl ?? (async () => result(7)));
  const pickDelta = vi.fn(async () => ({ delta: 1 }));
  const states: PickerState[] = [];
  const session = new PickerSession({ pick, pickDelta }, (s) => states.push(s));
  return { session, pick, pickDelta, states };
}

describe("one pick request per user action", () => {
  it("locking a device triggers exactly one /pick", async () => {
    const { session, pick } = makeSession();
    await session.lockDevice("acme-d1");
    expect(pick).toHaveBeenCalledTimes(1);
    expect(pick.mock.calls[0][0]).toMatchObject({ locked: ["acme-d1"] });
  });

  it("changing k triggers exactly one /pick", async () => {
    const { session, pick } = makeSession();
    await session.setK(4);
    expect(pick).toHaveBeenCalledTimes(1);
    expect(pick.mock.calls[0][0]).toMatchObject({ k: 4 });
  });

  it("changing filters triggers exactly one /pick", async () => {
    const { session, pick } = makeSession();
    await session.setFilters({ oems: ["Acme"] });
    expect(pick).toHaveBeenCalledTimes(1);
    expect(pick.mock.calls[0][0]).toMatchObject({ oems: ["Acme"] });
  });

  it("removing a locked device triggers exactly one /pick", async () => {
    const { session, pick } = makeSession();
    await session.lockDevice("acme-d1");
    await session.unlockDevice("acme-d1");
    expect(pick).toHaveBeenCalledTimes(2);
    expect(pick.mock.calls[1][0]).toMatchObject({ locked: [] });
  });
});

describe("totals echo the server", () => {
  it("displays exactly the total the server sent", async () => {
    const { session, states } = makeSession(async () => result(42));
    await session.setK(3);
    const last = states[states.length - 1];
    expect(last.result?.total_covered).toBe(42);
  });

  it("candidate deltas come from /pick/delta responses", async () => {
    const pick = vi.fn(async () => result(5, ["sel-1"]));
    const pickDelta = vi.fn(async (_sel: string[], candidate: string) => ({
      delta: candidate === "acme-d1" ? 11 : 3,
    }));
    const states: PickerState[] = [];
    const session = new PickerSession({ pick, pickDelta }, (s) => states.push(s));
    session.setCandidates([device("acme-d1"), device("acme-d2")]);
    await session.refresh();
    await vi.waitFor(() => {
      const last = states[states.length - 1];
      expect(last.deltas).toEqual({ "acme-d1": 11, "acme-d2": 3 });
    });
    expect(pickDelta).toHaveBeenCalledWith(["sel-1"], "acme-d1");
  });
});

describe("stale responses are discarded", () => {
  it("a slow superseded response never overwrites the newer one", async () => {
    const resolvers: Array<(r: PickResult) => void> = [];
    const { session, states } = makeSession(
      () => new Promise<PickResult>((resolve) => resolvers.push(resolve)),
    );
    const first = session.setK(2); // request 1, will resolve last
    const second = session.setK(3); // request 2, resolves first
    expect(resolvers).toHaveLength(2);

    resolvers[1](result(30));
    await second;
    expect(states[states.length - 1].result?.total_covered).toBe(30);

    resolvers[0](result(20)); // stale: must be dropped
    await first;
    expect(states[states.length - 1].result?.total_covered).toBe(30);
  });

  it("stale delta responses are dropped after a newer pick", async () => {
    const deltaResolvers: Array<(v: { delta: number }) => void> = [];
    const pick = vi.fn(async () => result(5, ["sel-1"]));
    const pickDelta = vi.fn(
      () => new Promise<{ delta: number }>((resolve) => deltaResolvers.push(resolve)),
    );
    const states: PickerState[] = [];
    const session = new PickerSession({ pick, pickDelta }, (s) => states.push(s));
    session.setCandidates([device("acme-d1")]);

    const firstRefresh = session.refresh(); // pick 1 accepted, delta 1 pending
    await vi.waitFor(() => expect(deltaResolvers).toHaveLength(1));
    const secondRefresh = session.setK(5); // pick 2 supersedes pick 1
    await vi.waitFor(() => expect(deltaResolvers).toHaveLength(2));

    deltaResolvers[0]({ delta: 99 }); // stale: belongs to pick 1
    deltaResolvers[1]({ delta: 4 });
    await Promise.all([firstRefresh, secondRefresh]);

    const last = states[states.length - 1];
    expect(last.deltas["acme-d1"]).toBe(4);
  });

  it("a failed request keeps the last good result and reports the error", async () => {
    let fail = false;
    const { session, states } = makeSession(async () => {
      if (fail) throw new Error("boom");
      return result(9);
    });
    await session.setK(2);
    fail = true;
    await session.setK(3);
    const last = states[states.length - 1];
    expect(last.error).toContain("boom");
    expect(last.result?.total_covered).toBe(9); // view stays consistent
  });
});

describe("session bookkeeping", () => {
  it("locking more devices than k grows k", async () => {
    const { session, pick } = makeSession();
    await session.setK(1);
    await session.lockDevice("a");
    await session.lockDevice("b");
    expect(pick.mock.calls[2][0]).toMatchObject({ k: 2, locked: ["a", "b"] });
  });

  it("visible candidates respect filters and exclude the selection", async () => {
    const { session } = makeSession(async () => result(1, ["keep-d1"]));
    session.setCandidates([
      device("keep-d1", "Keep"),
      device("keep-d2", "Keep"),
      device("drop-d3", "Drop"),
    ]);
    await session.setFilters({ oems: ["Keep"] });
    expect(session.visibleCandidates().map((d) => d.device_id)).toEqual(["keep-d2"]);
  });

  it("filter matching handles date ranges and missing chipsets", () => {
    const row = device("d1", "Acme", "2022-06-15");
    expect(matchesFilters(row, {})).toBe(true);
    expect(matchesFilters(row, { released_from: "2022-01-01" })).toBe(true);
    expect(matchesFilters(row, { released_from: "2022-07-01" })).toBe(false);
    expect(matchesFilters(row, { released_to: "2022-06-15" })).toBe(true);
    expect(matchesFilters({ ...row, chipset: null }, {})).toBe(false);
  });
});
