// JSON contracts of the swphm HTTP API.

export interface EnvSpec {
  os_bits: 32 | 64;
  clock_ghz: number;
  ram_gb?: number;
  disk_gb?: number;
}

export interface BacklogCard {
  id: string;
  title: string;
  kind: "fault" | "enhancement";
  severity?: string;
  story_points?: number;
}

export interface TrajectoryPoint {
  version: string;
  rt_ms: number;
  below_threshold: boolean;
}

export interface RulEstimate {
  trajectory: TrajectoryPoint[];
  rul_releases: number;
  censored: boolean;
  threshold_ms: number;
}

export interface PlanResult extends RulEstimate {
  allocation: Record<string, number>;
}

export interface ApiError {
  error: string;
  detail: string;
}

export interface EvaluateRequest {
  allocation: Record<string, number>;
  horizon: number;
  threshold_s: number;
  env_overrides?: Record<string, EnvSpec>;
  os_factor?: number;
}

export interface BestPlanRequest {
  spec: {
    horizon: number;
    strategy: "exhaustive" | "greedy";
    items: string[];
    env_overrides?: Record<string, EnvSpec>;
  };
  threshold_s: number;
  os_factor?: number;
}
