import { describe, expect, it } from "vitest";

import { DEFAULT_LAYOUT, chartGeometry, renderChartSvg } from "../src/chart.js";
import type { TrajectoryPoint } from "../src/types.js";

function points(rts: number[], threshold = 10000): TrajectoryPoint[] {
  return rts.map((rt, i) => ({
    version: `+${i + 1}`,
    rt_ms: rt,
    below_threshold: rt < threshold,
  }));
}

describe("chartGeometry", () => {
  it("maps higher RT to smaller y (screen coordinates)", () => {
    const geometry = chartGeometry(
      [{ label: "predicted", points: points([3000, 6000, 9000]) }],
      10000,
    );
    const ys = geometry.series[0]!.points.map((p) => p.y);
    expect(ys[0]!).toBeGreaterThan(ys[1]!);
    expect(ys[1]!).toBeGreaterThan(ys[2]!);
  });

  it("spaces releases evenly along x", () => {
    const geometry = chartGeometry(
      [{ label: "predicted", points: points([1, 2, 3, 4]) }],
      10,
    );
    const xs = geometry.series[0]!.points.map((p) => p.x);
    const gaps = xs.slice(1).map((x, i) => x - xs[i]!);
    for (const gap of gaps) expect(gap).toBeCloseTo(gaps[0]!, 6);
  });

  it("keeps every point inside the padded box and spans the threshold", () => {
    const layout = DEFAULT_LAYOUT;
    const geometry = chartGeometry(
      [{ label: "predicted", points: points([500, 20000]) }],
      10000,
      layout,
    );
    for (const p of geometry.series[0]!.points) {
      expect(p.x).toBeGreaterThanOrEqual(layout.padding);
      expect(p.x).toBeLessThanOrEqual(layout.width - layout.padding);
      expect(p.y).toBeGreaterThanOrEqual(layout.padding);
      expect(p.y).toBeLessThanOrEqual(layout.height - layout.padding);
    }
    expect(geometry.thresholdY).toBeGreaterThan(layout.padding);
    expect(geometry.thresholdY).toBeLessThan(layout.height - layout.padding);
    // the threshold line sits between the two points vertically
    const [low, high] = geometry.series[0]!.points;
    expect(geometry.thresholdY).toBeLessThan(low!.y);
    expect(geometry.thresholdY).toBeGreaterThan(high!.y);
  });

  it("handles a single-release trajectory", () => {
    const geometry = chartGeometry(
      [{ label: "predicted", points: points([5000]) }],
      10000,
    );
    expect(geometry.series[0]!.points).toHaveLength(1);
    expect(Number.isFinite(geometry.series[0]!.points[0]!.x)).toBe(true);
  });
});

describe("renderChartSvg", () => {
  it("draws one polyline per series plus the dashed threshold", () => {
    const svg = renderChartSvg(
      [
        { label: "predicted", points: points([3000, 11000]) },
        { label: "without env changes", points: points([3500, 12000]) },
      ],
      10000,
    );
    expect(svg.match(/<polyline/g)).toHaveLength(2);
    expect(svg).toContain('stroke-dasharray="6 4"');
    expect(svg).toContain('data-series="predicted"');
    expect(svg).toContain('data-series="without env changes"');
    expect(svg).toContain("10.0 s");
  });

  it("marks threshold-crossing points in the alarm color", () => {
    const svg = renderChartSvg(
      [{ label: "predicted", points: points([3000, 11000]) }],
      10000,
    );
    const circles = svg.match(/<circle[^>]*>/g) ?? [];
    expect(circles).toHaveLength(2);
    expect(circles[0]).toContain('fill="#2563eb"');
    expect(circles[1]).toContain('fill="#dc2626"');
  });

  it("renders the exact rt values it was given (no local math)", () => {
    const rts = [4321.125, 9876.5];
    const svg = renderChartSvg([{ label: "predicted", points: points(rts) }], 10000);
    for (const rt of rts) expect(svg).toContain(`data-rt="${rt}"`);
  });
});
