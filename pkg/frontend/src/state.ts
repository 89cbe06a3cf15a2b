// Board state: which card sits in which future-release column, per-column
// environment overrides, the threshold, and the last accepted server
// response. The board never computes RT or RUL itself; it only arranges
// requests and keeps stale responses from being rendered.

import type { BacklogCard, EnvSpec, EvaluateRequest, PlanResult } from "./types.js";

export const TRAY = -1;

export class PlanBoard {
  readonly cards = new Map<string, BacklogCard>();
  /** card id -> column index, or TRAY for the unassigned tray. */
  private positions = new Map<string, number>();
  private envOverrides = new Map<number, EnvSpec>();
  horizon: number;
  thresholdS = 10;
  osFactor?: number;

  lastResult: PlanResult | null = null;
  /** unadjusted twin of lastResult, for the before/after comparison */
  lastBaselineResult: PlanResult | null = null;

  private requestCounter = 0;
  private acceptedRequest = 0;

  constructor(cards: BacklogCard[], horizon: number) {
    if (horizon < 1) throw new Error("horizon must be >= 1");
    this.horizon = horizon;
    for (const card of cards) {
      if (this.cards.has(card.id)) throw new Error(`duplicate card ${card.id}`);
      this.cards.set(card.id, card);
      this.positions.set(card.id, TRAY);
    }
  }

  // -- invariant: every card is in exactly one column or the tray ---------

  columnOf(id: string): number {
    const position = this.positions.get(id);
    if (position === undefined) throw new Error(`unknown card ${id}`);
    return position;
  }

  column(index: number): string[] {
    return [...this.positions.entries()]
      .filter(([, position]) => position === index)
      .map(([id]) => id)
      .sort();
  }

  tray(): string[] {
    return this.column(TRAY);
  }

  moveCard(id: string, to: number): void {
    if (!this.positions.has(id)) throw new Error(`unknown card ${id}`);
    if (to !== TRAY && (to < 0 || to >= this.horizon)) {
      throw new Error(`column ${to} outside horizon`);
    }
    this.positions.set(id, to);
  }

  /** Every card assigned to a release column (tray cards excluded). */
  allocation(): Record<string, number> {
    const allocation: Record<string, number> = {};
    for (const [id, position] of [...this.positions.entries()].sort()) {
      if (position !== TRAY) allocation[id] = position;
    }
    return allocation;
  }

  isFullyAssigned(): boolean {
    return this.tray().length === 0;
  }

  // -- environment controls ----------------------------------------------

  setEnvOverride(column: number, env: EnvSpec | null): void {
    if (column < 0 || column >= this.horizon) throw new Error("column outside horizon");
    if (env === null) this.envOverrides.delete(column);
    else this.envOverrides.set(column, env);
  }

  envOverride(column: number): EnvSpec | undefined {
    return this.envOverrides.get(column);
  }

  hasEnvOverrides(): boolean {
    return this.envOverrides.size > 0;
  }

  // -- request building ----------------------------------------------------

  evaluateRequest(withEnv = true): EvaluateRequest {
    const request: EvaluateRequest = {
      allocation: this.allocation(),
      horizon: this.horizon,
      threshold_s: this.thresholdS,
    };
    if (withEnv && this.envOverrides.size > 0) {
      const overrides: Record<string, EnvSpec> = {};
      for (const [column, env] of this.envOverrides) overrides[String(column)] = env;
      request.env_overrides = overrides;
      if (this.osFactor !== undefined) request.os_factor = this.osFactor;
    }
    return request;
  }

  // -- stale-response bookkeeping ------------------------------------------

  /** Take a ticket before sending a request. */
  nextRequest(): number {
    return ++this.requestCounter;
  }

  /**
   * Accept a response only if no newer request has been issued since the
   * ticket was taken; out-of-order (stale) responses are dropped so the
   * displayed RUL always matches the currently rendered allocation.
   */
  acceptResult(ticket: number, result: PlanResult, baseline: PlanResult | null = null): boolean {
    if (ticket < this.requestCounter || ticket <= this.acceptedRequest) return false;
    this.acceptedRequest = ticket;
    this.lastResult = result;
    this.lastBaselineResult = baseline;
    return true;
  }

  /** Repopulate the board from a best-plan allocation. */
  applyAllocation(allocation: Record<string, number>): void {
    for (const [id, column] of Object.entries(allocation)) {
      this.moveCard(id, column);
    }
    for (const id of this.cards.keys()) {
      if (!(id in allocation)) this.positions.set(id, TRAY);
    }
  }
}

/** Displayed RUL badge text; mirrors the server response verbatim. */
export function rulBadge(result: PlanResult | null): string {
  if (result === null) return "RUL: –";
  const suffix = result.censored ? "+ (censored at horizon)" : "";
  return `RUL: ${result.rul_releases}${suffix} release${result.rul_releases === 1 && !result.censored ? "" : "s"}`;
}
