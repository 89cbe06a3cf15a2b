import { describe, expect, it } from "vitest";

import { PlanBoard, TRAY, rulBadge } from "../src/state.js";
import type { BacklogCard, PlanResult } from "../src/types.js";

const CARDS: BacklogCard[] = [
  { id: "F1", title: "crash", kind: "fault", severity: "Critical", story_points: 5 },
  { id: "F2", title: "export", kind: "enhancement", severity: "Minor", story_points: 3 },
  { id: "F3", title: "timeout", kind: "fault", severity: "Major", story_points: 8 },
];

function result(rul: number, censored = false): PlanResult {
  return {
    allocation: {},
    trajectory: [{ version: "+1", rt_ms: 5000, below_threshold: true }],
    rul_releases: rul,
    censored,
    threshold_ms: 10000,
  };
}

describe("PlanBoard", () => {
  it("starts with every card in the tray", () => {
    const board = new PlanBoard(CARDS, 3);
    expect(board.tray()).toEqual(["F1", "F2", "F3"]);
    expect(board.allocation()).toEqual({});
    expect(board.isFullyAssigned()).toBe(false);
  });

  it("keeps each card in exactly one column or the tray", () => {
    const board = new PlanBoard(CARDS, 3);
    board.moveCard("F1", 0);
    board.moveCard("F2", 2);
    board.moveCard("F1", 1); // re-move: leaves column 0
    const memberships = [TRAY, 0, 1, 2].map((c) => board.column(c));
    const seen = memberships.flat().sort();
    expect(seen).toEqual(["F1", "F2", "F3"]);
    expect(board.column(0)).toEqual([]);
    expect(board.column(1)).toEqual(["F1"]);
    expect(board.columnOf("F2")).toBe(2);
  });

  it("rejects unknown cards and out-of-range columns", () => {
    const board = new PlanBoard(CARDS, 2);
    expect(() => board.moveCard("nope", 0)).toThrow(/unknown/);
    expect(() => board.moveCard("F1", 2)).toThrow(/horizon/);
    expect(() => board.moveCard("F1", -2)).toThrow(/horizon/);
  });

  it("allocation covers only assigned cards, sorted by id", () => {
    const board = new PlanBoard(CARDS, 3);
    board.moveCard("F3", 1);
    board.moveCard("F1", 0);
    expect(board.allocation()).toEqual({ F1: 0, F3: 1 });
    board.moveCard("F2", 2);
    expect(board.isFullyAssigned()).toBe(true);
  });

  it("builds evaluate payloads with and without env overrides", () => {
    const board = new PlanBoard(CARDS, 3);
    board.moveCard("F1", 0);
    board.thresholdS = 9;
    expect(board.evaluateRequest()).toEqual({
      allocation: { F1: 0 },
      horizon: 3,
      threshold_s: 9,
    });
    board.setEnvOverride(2, { os_bits: 64, clock_ghz: 2.4 });
    board.osFactor = 1.25;
    expect(board.evaluateRequest().env_overrides).toEqual({
      "2": { os_bits: 64, clock_ghz: 2.4 },
    });
    expect(board.evaluateRequest().os_factor).toBe(1.25);
    // the unadjusted twin omits the overrides entirely
    expect(board.evaluateRequest(false).env_overrides).toBeUndefined();
    board.setEnvOverride(2, null);
    expect(board.hasEnvOverrides()).toBe(false);
  });

  it("drops stale responses via the monotone request counter", () => {
    const board = new PlanBoard(CARDS, 3);
    const first = board.nextRequest();
    const second = board.nextRequest();
    // the response to the newer request lands first and wins
    expect(board.acceptResult(second, result(2))).toBe(true);
    expect(board.lastResult?.rul_releases).toBe(2);
    // the out-of-order older response is discarded
    expect(board.acceptResult(first, result(7))).toBe(false);
    expect(board.lastResult?.rul_releases).toBe(2);
  });

  it("drops responses when a newer request has been issued meanwhile", () => {
    const board = new PlanBoard(CARDS, 3);
    const ticket = board.nextRequest();
    board.nextRequest(); // board changed again before the reply arrived
    expect(board.acceptResult(ticket, result(3))).toBe(false);
    expect(board.lastResult).toBeNull();
  });

  it("repopulates from a best-plan allocation", () => {
    const board = new PlanBoard(CARDS, 3);
    board.moveCard("F1", 2);
    board.applyAllocation({ F1: 0, F2: 1 });
    expect(board.columnOf("F1")).toBe(0);
    expect(board.columnOf("F2")).toBe(1);
    expect(board.columnOf("F3")).toBe(TRAY); // not in the allocation -> tray
  });
});

describe("rulBadge", () => {
  it("mirrors the server numbers verbatim", () => {
    expect(rulBadge(null)).toBe("RUL: –");
    expect(rulBadge(result(1))).toBe("RUL: 1 release");
    expect(rulBadge(result(4))).toBe("RUL: 4 releases");
    expect(rulBadge(result(3, true))).toBe("RUL: 3+ (censored at horizon) releases");
  });
});
