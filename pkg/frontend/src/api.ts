// Thin fetch wrapper; every number shown in the UI originates here.

import type {
  ApiError,
  BestPlanRequest,
  EvaluateRequest,
  PlanResult,
  RulEstimate,
} from "./types.js";

export class ApiRequestError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
  }
}

async function post<T>(base: string, path: string, body: unknown): Promise<T> {
  const response = await fetch(base + path, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  if (!response.ok) {
    let code = "http-error";
    let detail = `${response.status}`;
    try {
      const payload = (await response.json()) as ApiError;
      code = payload.error ?? code;
      detail = payload.detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiRequestError(response.status, code, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  evaluatePlan(request: EvaluateRequest): Promise<PlanResult> {
    return post(this.base, "/plan/evaluate", request);
  }

  bestPlan(request: BestPlanRequest): Promise<PlanResult> {
    return post(this.base, "/plan/best", request);
  }

  rul(plan: unknown, thresholdS: number): Promise<RulEstimate> {
    return post(this.base, "/rul", { plan, threshold_s: thresholdS });
  }

  async model(): Promise<unknown> {
    const response = await fetch(this.base + "/model");
    if (!response.ok) {
      const payload = (await response.json()) as ApiError;
      throw new ApiRequestError(response.status, payload.error, payload.detail);
    }
    return response.json();
  }
}
