// @vitest-environment happy-dom
//
// Boot the real page wiring against a stubbed server: the board renders
// cards from /datasets, a move triggers /plan/evaluate, and the response
// lands in the badge, column headers, and chart.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { beforeEach, describe, expect, it, vi } from "vitest";

import type { PlanResult } from "../src/types.js";

const ROOT = join(dirname(fileURLToPath(import.meta.url)), "..");
const FIXTURES = join(ROOT, "tests", "fixtures");

const cardsFixture = JSON.parse(readFileSync(join(FIXTURES, "cards.json"), "utf-8"));
const evaluateFixture = JSON.parse(
  readFileSync(join(FIXTURES, "api_evaluate.json"), "utf-8"),
) as PlanResult;

function pageBody(): string {
  const html = readFileSync(join(ROOT, "index.html"), "utf-8");
  const match = /<body>([\s\S]*)<\/body>/.exec(html);
  return match![1]!.replace(/<script[\s\S]*?<\/script>/, "");
}

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

const fetchCalls: { url: string; body: unknown }[] = [];

beforeEach(() => {
  document.body.innerHTML = pageBody();
  fetchCalls.length = 0;
  vi.stubGlobal(
    "fetch",
    vi.fn(async (url: RequestInfo | URL, init?: RequestInit) => {
      const path = String(url);
      const body = init?.body ? JSON.parse(String(init.body)) : null;
      fetchCalls.push({ url: path, body });
      if (path === "/datasets") {
        return jsonResponse({
          backlog: cardsFixture.backlog,
          unshipped: cardsFixture.backlog.map((c: { id: string }) => c.id),
        });
      }
      if (path === "/plan/evaluate") return jsonResponse(evaluateFixture);
      if (path === "/plan/best") return jsonResponse(evaluateFixture);
      return jsonResponse({ error: "not-found", detail: path }, 404);
    }),
  );
});

async function boot(): Promise<void> {
  vi.resetModules();
  await import("../src/main.js");
  document.dispatchEvent(new Event("DOMContentLoaded"));
  await vi.waitFor(() => {
    if (!document.querySelector(".card")) throw new Error("board not rendered");
  });
}

describe("page wiring", () => {
  it("renders a card per unshipped backlog item in the tray", async () => {
    await boot();
    const cards = [...document.querySelectorAll(".card")];
    expect(cards.length).toBe(cardsFixture.backlog.length);
    const tray = document.querySelector(".column.tray")!;
    expect(tray.querySelectorAll(".card").length).toBe(cardsFixture.backlog.length);
    // horizon columns plus the tray
    expect(document.querySelectorAll(".column").length).toBe(5);
  });

  it("card ids and metadata come from the dataset", async () => {
    await boot();
    const first = cardsFixture.backlog[0];
    const card = document.querySelector(`.card[data-id="${first.id}"]`);
    expect(card).not.toBeNull();
    expect(card!.textContent).toContain(first.id);
  });

  it("threshold slider label follows input", async () => {
    await boot();
    const slider = document.getElementById("threshold") as HTMLInputElement;
    slider.value = "9";
    slider.dispatchEvent(new Event("input"));
    expect(document.getElementById("threshold-label")!.textContent).toBe("9.0 s");
  });

  it("best-plan button posts to /plan/best and fills the badge from the response", async () => {
    await boot();
    (document.getElementById("best-exhaustive") as HTMLButtonElement).click();
    await vi.waitFor(() => {
      if (!fetchCalls.some((c) => c.url === "/plan/best")) throw new Error("no call yet");
    });
    await vi.waitFor(() => {
      const badge = document.getElementById("rul-badge")!.textContent ?? "";
      if (!badge.includes(`RUL: ${evaluateFixture.rul_releases}`)) {
        throw new Error(`badge not updated: ${badge}`);
      }
    });
    const call = fetchCalls.find((c) => c.url === "/plan/best")!;
    const body = call.body as { spec: { items: string[] }; threshold_s: number };
    expect(body.spec.items).toEqual(
      cardsFixture.backlog.map((c: { id: string }) => c.id).sort(),
    );
    // the chart now shows the trajectory returned by the server
    const chart = document.getElementById("chart")!;
    expect(chart.querySelectorAll("polyline").length).toBe(1);
    expect(chart.querySelectorAll("circle").length).toBe(evaluateFixture.trajectory.length);
  });
});
