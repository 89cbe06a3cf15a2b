// DOM wiring: the planning board, drag & drop, environment toggles, the
// threshold slider, and the trajectory chart. All numbers come from the
// server; this file only arranges requests and paints responses.

import { ApiClient, ApiRequestError } from "./api.js";
import { renderChartSvg, type ChartSeries } from "./chart.js";
import { PlanBoard, TRAY, rulBadge } from "./state.js";
import type { BacklogCard, EnvSpec, PlanResult } from "./types.js";

const DEFAULT_HORIZON = 4;
const CLOCK_CHOICES = [1.8, 2.0, 2.4];

const api = new ApiClient("");
let board: PlanBoard | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function showBanner(message: string, kind: "error" | "info" = "error"): void {
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = message;
  banner.className = `banner ${kind}`;
  banner.hidden = false;
}

function hideBanner(): void {
  el<HTMLDivElement>("banner").hidden = true;
}

function toast(message: string): void {
  const node = el<HTMLDivElement>("toast");
  node.textContent = message;
  node.hidden = false;
  setTimeout(() => {
    node.hidden = true;
  }, 6000);
}

// -- board rendering -------------------------------------------------------

function cardNode(card: BacklogCard): HTMLElement {
  const node = document.createElement("div");
  node.className = `card ${card.kind}`;
  node.draggable = true;
  node.dataset.id = card.id;
  const sp = card.story_points != null ? `${card.story_points} pt` : "?";
  const severity = card.severity ?? "";
  node.innerHTML =
    `<span class="card-id">${card.id}</span> ${card.title}` +
    `<span class="card-meta">${severity} · ${sp}</span>`;
  node.addEventListener("dragstart", (event) => {
    event.dataTransfer?.setData("text/plain", card.id);
  });
  return node;
}

function dropTarget(node: HTMLElement, column: number): void {
  node.addEventListener("dragover", (event) => {
    event.preventDefault();
    node.classList.add("drop-active");
  });
  node.addEventListener("dragleave", () => node.classList.remove("drop-active"));
  node.addEventListener("drop", (event) => {
    event.preventDefault();
    node.classList.remove("drop-active");
    const id = event.dataTransfer?.getData("text/plain");
    if (!id || !board) return;
    board.moveCard(id, column);
    renderBoard();
    void evaluateBoard();
  });
}

function envControls(column: number): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = "env-controls";
  const clock = document.createElement("select");
  clock.innerHTML =
    `<option value="">base clock</option>` +
    CLOCK_CHOICES.map((g) => `<option value="${g}">${g} GHz</option>`).join("");
  const bits = document.createElement("select");
  bits.innerHTML =
    `<option value="">base OS</option><option value="64">64-bit</option><option value="32">32-bit</option>`;
  const current = board?.envOverride(column);
  if (current) {
    clock.value = String(current.clock_ghz);
    bits.value = String(current.os_bits);
  }
  const onChange = () => {
    if (!board) return;
    if (!clock.value && !bits.value) {
      board.setEnvOverride(column, null);
    } else {
      const env: EnvSpec = {
        os_bits: (bits.value ? Number(bits.value) : 64) as 32 | 64,
        clock_ghz: clock.value ? Number(clock.value) : 1.8,
      };
      board.setEnvOverride(column, env);
    }
    void evaluateBoard();
  };
  clock.addEventListener("change", onChange);
  bits.addEventListener("change", onChange);
  wrap.append(clock, bits);
  return wrap;
}

function renderBoard(): void {
  if (!board) return;
  const columns = el<HTMLDivElement>("columns");
  columns.innerHTML = "";

  const tray = document.createElement("div");
  tray.className = "column tray";
  tray.innerHTML = `<h3>Backlog tray</h3>`;
  dropTarget(tray, TRAY);
  for (const id of board.tray()) tray.appendChild(cardNode(board.cards.get(id)!));
  columns.appendChild(tray);

  for (let c = 0; c < board.horizon; c++) {
    const col = document.createElement("div");
    col.className = "column";
    const rt = board.lastResult?.trajectory[c];
    const rtLabel = rt ? `${Math.round(rt.rt_ms)} ms` : "";
    const crossed = rt && !rt.below_threshold ? " crossed" : "";
    col.innerHTML = `<h3>Release +${c + 1} <span class="rt${crossed}">${rtLabel}</span></h3>`;
    dropTarget(col, c);
    col.appendChild(envControls(c));
    for (const id of board.column(c)) col.appendChild(cardNode(board.cards.get(id)!));
    columns.appendChild(col);
  }

  el<HTMLSpanElement>("rul-badge").textContent = rulBadge(board.lastResult);
}

function renderChart(): void {
  if (!board) return;
  const chart = el<HTMLDivElement>("chart");
  if (!board.lastResult) {
    chart.innerHTML = `<p class="placeholder">Assign items and the predicted trajectory appears here.</p>`;
    return;
  }
  const series: ChartSeries[] = [
    { label: "predicted", points: board.lastResult.trajectory },
  ];
  if (board.lastBaselineResult) {
    series.push({ label: "without env changes", points: board.lastBaselineResult.trajectory });
  }
  chart.innerHTML = renderChartSvg(series, board.lastResult.threshold_ms);
}

// -- server round-trips ----------------------------------------------------

async function evaluateBoard(): Promise<void> {
  if (!board) return;
  const ticket = board.nextRequest();
  try {
    const request = board.evaluateRequest();
    const result = await api.evaluatePlan(request);
    // when a column overrides the environment, also fetch the unadjusted
    // twin so the chart can show the before/after pair
    let baseline: PlanResult | null = null;
    if (board.hasEnvOverrides()) {
      baseline = await api.evaluatePlan(board.evaluateRequest(false));
    }
    if (board.acceptResult(ticket, result, baseline)) {
      hideBanner();
      renderBoard();
      renderChart();
    }
  } catch (error) {
    if (error instanceof ApiRequestError) {
      if (error.status === 409) {
        showBanner("No trained model yet. Upload a dataset and POST /train first.");
      } else if (error.status === 422) {
        showBanner(`Outside calibrated range: ${error.message}`);
      } else {
        showBanner(`${error.code}: ${error.message}`);
      }
    } else {
      showBanner(String(error));
    }
  }
}

async function requestBestPlan(strategy: "exhaustive" | "greedy"): Promise<void> {
  if (!board) return;
  const ticket = board.nextRequest();
  try {
    const request = board.evaluateRequest();
    const result = await api.bestPlan({
      spec: {
        horizon: board.horizon,
        strategy,
        items: [...board.cards.keys()].sort(),
        ...(request.env_overrides ? { env_overrides: request.env_overrides } : {}),
      },
      threshold_s: board.thresholdS,
      ...(request.os_factor !== undefined ? { os_factor: request.os_factor } : {}),
    });
    if (board.acceptResult(ticket, result, null)) {
      board.applyAllocation(result.allocation);
      hideBanner();
      renderBoard();
      renderChart();
    }
  } catch (error) {
    if (error instanceof ApiRequestError && error.code === "enumeration-cap") {
      toast("Too many combinations for exhaustive search; try the greedy strategy.");
    } else if (error instanceof ApiRequestError && error.status === 409) {
      showBanner("No trained model yet. Upload a dataset and POST /train first.");
    } else {
      showBanner(String(error));
    }
  }
}

// -- boot -------------------------------------------------------------------

interface DatasetResponse {
  backlog: BacklogCard[];
  unshipped: string[];
}

async function loadBoard(): Promise<void> {
  const response = await fetch("/datasets");
  if (!response.ok) {
    showBanner("No dataset on the server yet. POST /datasets, then /train.", "info");
    return;
  }
  const dataset = (await response.json()) as DatasetResponse;
  const unshipped = new Set(dataset.unshipped);
  const cards = dataset.backlog.filter((item) => unshipped.has(item.id));
  board = new PlanBoard(cards, DEFAULT_HORIZON);
  renderBoard();
  renderChart();
}

function wireControls(): void {
  const slider = el<HTMLInputElement>("threshold");
  const label = el<HTMLSpanElement>("threshold-label");
  slider.addEventListener("input", () => {
    label.textContent = `${Number(slider.value).toFixed(1)} s`;
  });
  slider.addEventListener("change", () => {
    if (!board) return;
    board.thresholdS = Number(slider.value);
    void evaluateBoard();
  });
  el<HTMLButtonElement>("preset-10").addEventListener("click", () => {
    slider.value = "10";
    slider.dispatchEvent(new Event("input"));
    slider.dispatchEvent(new Event("change"));
  });
  el<HTMLButtonElement>("preset-9").addEventListener("click", () => {
    slider.value = "9";
    slider.dispatchEvent(new Event("input"));
    slider.dispatchEvent(new Event("change"));
  });
  el<HTMLButtonElement>("best-exhaustive").addEventListener("click", () => {
    void requestBestPlan("exhaustive");
  });
  el<HTMLButtonElement>("best-greedy").addEventListener("click", () => {
    void requestBestPlan("greedy");
  });
  el<HTMLInputElement>("os-factor").addEventListener("change", (event) => {
    if (!board) return;
    const value = (event.target as HTMLInputElement).value;
    board.osFactor = value ? Number(value) : undefined;
    void evaluateBoard();
  });
  el<HTMLInputElement>("horizon").addEventListener("change", (event) => {
    const value = Number((event.target as HTMLInputElement).value);
    if (!board || !Number.isInteger(value) || value < 1) return;
    const cards = [...board.cards.values()];
    const previous = board;
    board = new PlanBoard(cards, value);
    board.thresholdS = previous.thresholdS;
    board.osFactor = previous.osFactor;
    renderBoard();
    renderChart();
  });
}

document.addEventListener("DOMContentLoaded", () => {
  wireControls();
  void loadBoard();
});
