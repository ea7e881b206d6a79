/**
 * End-to-end: spawn the real ranking service and drive it through the
 * typed client and view models, asserting client-server agreement.
 */

import { ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiRefusal, DeliberationApi } from "../src/api.js";
import { initialState, selectOrderBy, withDeltas } from "../src/state.js";
import {
  buildGridView,
  buildRankingView,
  buildWeightPanel,
  equalWeights,
  renderedOrder,
  validateCellEntry,
} from "../src/viewmodel.js";

const PORT = 8912;
const BASE = `http://127.0.0.1:${PORT}`;

let service: ChildProcess;
const api = new DeliberationApi(BASE);

beforeAll(async () => {
  service = spawn(
    "python3",
    ["-m", "uvicorn", "policyrank.service:app", "--host", "127.0.0.1",
     "--port", String(PORT), "--log-level", "warning"],
    { stdio: "ignore" },
  );
  const deadline = Date.now() + 30_000;
  while (Date.now() < deadline) {
    if (await api.health()) return;
    await new Promise((resolve) => setTimeout(resolve, 250));
  }
  throw new Error("ranking service did not come up on time");
}, 35_000);

afterAll(() => {
  service?.kill();
});

describe("client-server ranking agreement", () => {
  it("renders exactly the ordering the service computed", async () => {
    const payload = await api.createSession("informed_assessment");
    const state = selectOrderBy(initialState(), "topsis");
    const view = buildRankingView(payload, state);
    // independent fetch of the same session's rankings
    const direct = await api.getRankings(payload.session_id, "all", "all");
    expect(renderedOrder(view)).toEqual(direct.order["topsis"]);
    expect(view.rows).toHaveLength(21);
  });

  it("restricted to the policies scored by both exercises, the shared top four lead", async () => {
    const payload = await api.createSession("informed_assessment");
    const common = new Set([5, 7, 2, 6, 3, 14, 9, 17, 4, 20, 13]);
    const restricted = payload.order["topsis"]!.filter((id) => common.has(id));
    expect(restricted.slice(0, 4)).toEqual([5, 7, 2, 6]);
  });
});

describe("table grid", () => {
  it("shows all 21 policies and the fractional cell (14, Q2) = 4.2", async () => {
    const payload = await api.createSession("informed_assessment");
    const grid = buildGridView(payload, initialState());
    expect(grid.rows).toHaveLength(21);
    const row14 = grid.rows.find((row) => row.id === 14)!;
    const q2 = row14.cells.find((cell) => cell.criterionId === "Q2")!;
    expect(q2.value).toBe(4.2);
  });

  it("rejects out-of-scale entries inline with the criterion bounds", async () => {
    const payload = await api.createSession("informed_assessment");
    const message = validateCellEntry(payload, "Q5", "7");
    expect(message).toContain("[0, 5]");
    // and the service refuses the same edit, naming the bounds too
    await expect(
      api.editCell(payload.session_id, { alternative_id: 0, criterion_id: "Q5", value: 7 }),
    ).rejects.toSatisfy((err: unknown) =>
      err instanceof ApiRefusal && err.body.code === "out_of_scale"
      && err.body.message.includes("[0.0, 5.0]"));
  });

  it("round-trips an edit through a session reload", async () => {
    const payload = await api.createSession("informed_assessment");
    await api.editCell(payload.session_id, {
      alternative_id: 3, criterion_id: "Q4", value: 2.5,
    });
    const reloaded = await api.getRankings(payload.session_id);
    const grid = buildGridView(reloaded, initialState());
    const cell = grid.rows.find((r) => r.id === 3)!
      .cells.find((c) => c.criterionId === "Q4")!;
    expect(cell.value).toBe(2.5);
    expect(cell.provenance).toBe("manual_edit");
  });
});

describe("rank-delta badges after edits", () => {
  it("a single zero cleared leaves the worst-case rank alone but moves others", async () => {
    // policy 0 holds zeros at both Q5 and Q6: clearing one leaves the
    // row minimum at 0.0, so no worst-case badge may appear yet
    const payload = await api.createSession("informed_assessment");
    const response = await api.editCell(payload.session_id, {
      alternative_id: 0, criterion_id: "Q5", value: 5.0,
    });
    const row0 = response.etable.rows.find((row) => row.id === 0)!;
    const minScore = Math.min(...response.table.scores[0]!);
    expect(row0.raw["maximin"]).toBe(minScore);
    expect(row0.raw["maximin"]).toBe(0.0);
    const view = buildRankingView(response, withDeltas(initialState(), response.deltas));
    const badges = view.rows.find((row) => row.id === 0)!.badges;
    expect(badges["maximin"]).toBeUndefined();
    expect(badges["maximax"]).toBe("up");
  });

  it("clearing the second zero lifts the worst case to 1.0 and badges it", async () => {
    const payload = await api.createSession("informed_assessment");
    await api.editCell(payload.session_id, {
      alternative_id: 0, criterion_id: "Q5", value: 5.0,
    });
    const response = await api.editCell(payload.session_id, {
      alternative_id: 0, criterion_id: "Q6", value: 5.0,
    });
    const row0 = response.etable.rows.find((row) => row.id === 0)!;
    expect(row0.raw["maximin"]).toBe(Math.min(...response.table.scores[0]!));
    expect(row0.raw["maximin"]).toBe(1.0);
    const view = buildRankingView(response, withDeltas(initialState(), response.deltas));
    expect(view.rows.find((row) => row.id === 0)!.badges["maximin"]).toBe("up");
  });

  it("a no-op edit produces no badges at all", async () => {
    const payload = await api.createSession("informed_assessment");
    const response = await api.editCell(payload.session_id, {
      alternative_id: 0, criterion_id: "Q5", value: 0.0,
    });
    expect(response.deltas).toEqual([]);
  });
});

describe("weight panel", () => {
  it("equal-weights reset displays 1/9 per criterion on the 9-criterion table", async () => {
    const payload = await api.createSession("informed_assessment");
    await api.editWeights(payload.session_id, { Q1: 4.0 });
    const response = await api.editWeights(payload.session_id, equalWeights(payload));
    const rows = buildWeightPanel(response);
    expect(rows).toHaveLength(9);
    for (const row of rows) {
      expect(row.normalized).toBeCloseTo(1 / 9, 12);
    }
  });

  it("a weight change only moves weight-sensitive rules", async () => {
    const payload = await api.createSession("informed_assessment");
    const response = await api.editWeights(payload.session_id, { Q1: 5.0 });
    const rules = new Set(response.deltas.map((delta) => delta.rule));
    expect(rules.size).toBeGreaterThan(0);
    for (const rule of rules) {
      expect(["saw", "promethee", "topsis"]).toContain(rule);
    }
  });
});

describe("criterion subsets on an 11-criterion table", () => {
  it("the mitigation/adaptation subset recomputes over 2 columns", async () => {
    const payload = await api.createSession("llm_demo");
    expect(payload.selection.criteria).toHaveLength(11);
    const subset = await api.getRankings(payload.session_id, "all", "ma");
    expect(subset.selection.criteria).toEqual(["mitigation", "adaptation"]);
    const view = buildRankingView(subset, initialState());
    expect(view.criteria).toHaveLength(2);
    expect(renderedOrder(view)).toEqual(subset.order["aggregate"]);
  });

  it("the qol subset covers the nine quality-of-life columns", async () => {
    const payload = await api.createSession("llm_demo");
    const subset = await api.getRankings(payload.session_id, "all", "qol");
    expect(subset.selection.criteria).toEqual(
      ["Q1", "Q2", "Q3", "Q4", "Q5", "Q6", "Q7", "Q8", "Q9"]);
  });
});

describe("comparison view", () => {
  it("matches the shared top four against the model-scored ordering", async () => {
    const payload = await api.createSession("informed_assessment");
    const externalOrder = [5, 7, 2, 6, 4, 17, 13, 9, 20, 21, 22, 3, 14];
    const comparison = await api.compare(payload.session_id, externalOrder, "topsis");
    expect(comparison.common_ids).toHaveLength(11);
    expect(comparison.top_k_overlap["4"]).toBe(4);
  });
});

describe("session export", () => {
  it("hands back CLI-shaped files including the edit log", async () => {
    const payload = await api.createSession("informed_assessment");
    await api.editCell(payload.session_id, {
      alternative_id: 1, criterion_id: "Q1", value: 3.5,
    });
    const exported = await api.exportSession(payload.session_id);
    expect(Object.keys(exported.files).sort()).toEqual(
      ["atable.csv", "edit_log.json", "etable.csv", "table.criteria.json", "table.csv"]);
    const log = JSON.parse(exported.files["edit_log.json"]!);
    expect(log).toHaveLength(1);
    expect(log[0].payload.value).toBe(3.5);
    expect(exported.files["table.csv"]).toContain("3.5");
  });
});
