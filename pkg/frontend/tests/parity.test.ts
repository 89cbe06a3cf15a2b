// UI parity with the CLI: the board renders exactly what /plan/evaluate
// returned, and the committed API fixtures are value-identical to the CLI
// outputs for the same inputs (fixtures regenerated by
// scripts/generate_fixtures.py against the real server and CLI).

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { renderChartSvg } from "../src/chart.js";
import { PlanBoard, rulBadge } from "../src/state.js";
import type { BacklogCard, PlanResult, RulEstimate } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

function load<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

interface CardsFixture {
  backlog: BacklogCard[];
  allocation: Record<string, number>;
  spec: { horizon: number; items: string[] };
  threshold_s: number;
}

const cards = load<CardsFixture>("cards.json");
const apiEvaluate = load<PlanResult>("api_evaluate.json");
const apiBest = load<PlanResult>("api_best.json");
const cliRul = load<RulEstimate>("cli_rul.json");
const cliPlan = load<PlanResult>("cli_plan.json");

function boardWithAllocation(): PlanBoard {
  const board = new PlanBoard(cards.backlog, cards.spec.horizon);
  board.thresholdS = cards.threshold_s;
  for (const [id, column] of Object.entries(cards.allocation)) {
    board.moveCard(id, column);
  }
  return board;
}

describe("CLI parity", () => {
  it("the API evaluate fixture equals the CLI rul output exactly", () => {
    // same allocation through both surfaces; floats included
    const apiAsRul: RulEstimate = {
      trajectory: apiEvaluate.trajectory,
      rul_releases: apiEvaluate.rul_releases,
      censored: apiEvaluate.censored,
      threshold_ms: apiEvaluate.threshold_ms,
    };
    expect(apiAsRul).toEqual(cliRul);
  });

  it("the API best-plan fixture equals the CLI plan winner exactly", () => {
    expect(apiBest).toEqual(cliPlan);
  });

  it("the board sends exactly the fixture allocation", () => {
    const board = boardWithAllocation();
    expect(board.evaluateRequest()).toEqual({
      allocation: cards.allocation,
      horizon: cards.spec.horizon,
      threshold_s: cards.threshold_s,
    });
  });

  it("the rendered RUL badge and chart carry the server numbers verbatim", () => {
    const board = boardWithAllocation();
    const ticket = board.nextRequest();
    expect(board.acceptResult(ticket, apiEvaluate)).toBe(true);

    // badge shows the CLI's rul_releases
    expect(rulBadge(board.lastResult)).toContain(`RUL: ${cliRul.rul_releases}`);

    // chart markers carry the CLI's exact rt values
    const svg = renderChartSvg(
      [{ label: "predicted", points: board.lastResult!.trajectory }],
      board.lastResult!.threshold_ms,
    );
    for (const point of cliRul.trajectory) {
      expect(svg).toContain(`data-rt="${point.rt_ms}"`);
    }
  });

  it("applying the best plan reproduces the CLI winner's board", () => {
    const board = boardWithAllocation();
    const ticket = board.nextRequest();
    expect(board.acceptResult(ticket, apiBest)).toBe(true);
    board.applyAllocation(apiBest.allocation);
    expect(board.allocation()).toEqual(cliPlan.allocation);
    expect(board.isFullyAssigned()).toBe(true);
  });
});
