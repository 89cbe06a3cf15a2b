// Line chart geometry and SVG rendering for RT trajectories. Pure string
// output so the math is testable without a DOM.

import type { TrajectoryPoint } from "./types.js";

export interface ChartSeries {
  label: string;
  points: TrajectoryPoint[];
}

export interface ChartLayout {
  width: number;
  height: number;
  padding: number;
}

export const DEFAULT_LAYOUT: ChartLayout = { width: 640, height: 300, padding: 42 };

export interface ScaledPoint {
  x: number;
  y: number;
  rtMs: number;
  version: string;
}

export interface ChartGeometry {
  series: { label: string; points: ScaledPoint[] }[];
  thresholdY: number;
  yMax: number;
  yMin: number;
}

/**
 * Scale trajectories into pixel space. The y-range spans all series plus the
 * threshold line with 5% headroom; x positions are evenly spaced releases.
 */
export function chartGeometry(
  series: ChartSeries[],
  thresholdMs: number,
  layout: ChartLayout = DEFAULT_LAYOUT,
): ChartGeometry {
  const allRts = series.flatMap((s) => s.points.map((p) => p.rt_ms));
  const rawMax = Math.max(thresholdMs, ...(allRts.length ? allRts : [thresholdMs]));
  const rawMin = Math.min(0, ...allRts);
  const span = rawMax - rawMin || 1;
  const yMax = rawMax + 0.05 * span;
  const yMin = rawMin;
  const innerW = layout.width - 2 * layout.padding;
  const innerH = layout.height - 2 * layout.padding;
  const n = Math.max(1, ...series.map((s) => s.points.length));

  const toY = (rt: number) =>
    layout.padding + innerH - ((rt - yMin) / (yMax - yMin)) * innerH;
  const toX = (i: number) =>
    layout.padding + (n === 1 ? innerW / 2 : (i / (n - 1)) * innerW);

  return {
    series: series.map((s) => ({
      label: s.label,
      points: s.points.map((p, i) => ({
        x: toX(i),
        y: toY(p.rt_ms),
        rtMs: p.rt_ms,
        version: p.version,
      })),
    })),
    thresholdY: toY(thresholdMs),
    yMax,
    yMin,
  };
}

const SERIES_COLORS = ["#2563eb", "#9ca3af"];

/** Render the chart as an SVG string: one polyline per series, a dashed
 * threshold line, and markers that flip color once the threshold is hit. */
export function renderChartSvg(
  series: ChartSeries[],
  thresholdMs: number,
  layout: ChartLayout = DEFAULT_LAYOUT,
): string {
  const geometry = chartGeometry(series, thresholdMs, layout);
  const parts: string[] = [];
  parts.push(
    `<svg viewBox="0 0 ${layout.width} ${layout.height}" class="trajectory-chart" role="img">`,
  );
  parts.push(
    `<line class="threshold" x1="${layout.padding}" x2="${layout.width - layout.padding}" ` +
      `y1="${geometry.thresholdY.toFixed(1)}" y2="${geometry.thresholdY.toFixed(1)}" ` +
      `stroke="#dc2626" stroke-dasharray="6 4"/>`,
  );
  parts.push(
    `<text x="${layout.width - layout.padding}" y="${(geometry.thresholdY - 6).toFixed(1)}" ` +
      `text-anchor="end" class="threshold-label">${(thresholdMs / 1000).toFixed(1)} s</text>`,
  );
  geometry.series.forEach((s, idx) => {
    const color = SERIES_COLORS[idx % SERIES_COLORS.length];
    const coords = s.points.map((p) => `${p.x.toFixed(1)},${p.y.toFixed(1)}`).join(" ");
    parts.push(
      `<polyline fill="none" stroke="${color}" stroke-width="2" points="${coords}" data-series="${s.label}"/>`,
    );
    for (const p of s.points) {
      const crossed = p.rtMs >= thresholdMs;
      parts.push(
        `<circle cx="${p.x.toFixed(1)}" cy="${p.y.toFixed(1)}" r="4" ` +
          `fill="${crossed ? "#dc2626" : color}" data-version="${p.version}" ` +
          `data-rt="${p.rtMs}"><title>${p.version}: ${Math.round(p.rtMs)} ms</title></circle>`,
      );
    }
    if (s.points.length > 0) {
      const last = s.points[s.points.length - 1]!;
      parts.push(
        `<text x="${last.x.toFixed(1)}" y="${(last.y - 10).toFixed(1)}" ` +
          `text-anchor="end" class="series-label" fill="${color}">${s.label}</text>`,
      );
    }
  });
  const versions = geometry.series[0]?.points ?? [];
  for (const p of versions) {
    parts.push(
      `<text x="${p.x.toFixed(1)}" y="${layout.height - layout.padding + 18}" ` +
        `text-anchor="middle" class="axis-label">${p.version}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}
