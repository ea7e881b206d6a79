import { describe, expect, it } from "vitest";

import { initialState, queueEdit, selectOrderBy, withDeltas } from "../src/state.js";
import {
  buildComparisonView,
  buildGridView,
  buildRankingView,
  buildWeightPanel,
  equalWeights,
  renderedOrder,
  validateCellEntry,
} from "../src/viewmodel.js";
import { cannedEditResponse, cannedPayload } from "./fixtures.js";

describe("buildRankingView", () => {
  it("renders rows exactly in the payload's order list", () => {
    const payload = cannedPayload();
    const view = buildRankingView(payload, initialState());
    expect(renderedOrder(view)).toEqual(payload.order["aggregate"]);
  });

  it("switches ordering with the selected column, still payload-driven", () => {
    const payload = cannedPayload();
    const state = selectOrderBy(initialState(), "maximin");
    const view = buildRankingView(payload, state);
    expect(renderedOrder(view)).toEqual(payload.order["maximin"]);
    expect(view.orderBy).toBe("maximin");
  });

  it("falls back to aggregate for unknown order keys", () => {
    const payload = cannedPayload();
    const view = buildRankingView(payload, selectOrderBy(initialState(), "nonsense"));
    expect(view.orderBy).toBe("aggregate");
  });

  it("derives up/down badges from the last deltas", () => {
    const response = cannedEditResponse();
    const state = withDeltas(initialState(), response.deltas);
    const view = buildRankingView(response, state);
    const first = view.rows.find((row) => row.id === 0)!;
    const third = view.rows.find((row) => row.id === 2)!;
    expect(first.badges["topsis"]).toBe("up");
    expect(third.badges["topsis"]).toBe("down");
    expect(view.rows.find((row) => row.id === 1)!.badges).toEqual({});
  });

  it("carries aggregate measures onto the rows", () => {
    const view = buildRankingView(cannedPayload(), initialState());
    expect(view.rows[0]!.aggregate?.borda).toBe(6.0);
  });
});

describe("buildGridView", () => {
  it("exposes cells with provenance and bounds", () => {
    const view = buildGridView(cannedPayload(), initialState());
    expect(view.rows).toHaveLength(3);
    expect(view.criteria[0]).toEqual({ id: "c1", name: "criterion one", scaleMin: 0, scaleMax: 5 });
    expect(view.rows[1]!.cells[1]!.provenance).toBe("manual_edit");
    expect(view.rows[0]!.cells[1]!.value).toBe(4.0);
  });

  it("overlays pending edits without touching server values", () => {
    const state = queueEdit(initialState(), { alternative_id: 0, criterion_id: "c1", value: 2.5 });
    const view = buildGridView(cannedPayload(), state);
    expect(view.rows[0]!.cells[0]!.pending).toBe(2.5);
    expect(view.rows[0]!.cells[0]!.value).toBe(1.0);
  });
});

describe("validateCellEntry", () => {
  it("accepts an in-scale number", () => {
    expect(validateCellEntry(cannedPayload(), "c1", "4.5")).toBeNull();
  });

  it("rejects out-of-scale entries naming the bounds", () => {
    const message = validateCellEntry(cannedPayload(), "c1", "7");
    expect(message).toContain("[0, 5]");
    expect(message).toContain("c1");
  });

  it("rejects non-numeric entries", () => {
    expect(validateCellEntry(cannedPayload(), "c1", "abc")).toBe("enter a number");
  });
});

describe("weight panel", () => {
  it("shows normalized shares next to raw weights", () => {
    const rows = buildWeightPanel(cannedPayload());
    expect(rows.map((r) => r.normalized)).toEqual([0.25, 0.75]);
  });

  it("builds an equal-weights reset payload", () => {
    expect(equalWeights(cannedPayload())).toEqual({ c1: 1.0, c2: 1.0 });
  });
});

describe("buildComparisonView", () => {
  it("aligns positions and sorts top-k badges", () => {
    const view = buildComparisonView({
      common_ids: [5, 7, 2],
      kendall_tau: 0.33,
      spearman_rho: 0.5,
      top_k_overlap: { "2": 1, "1": 0, "3": 3 },
      positions_a: { "5": 1, "7": 2, "2": 3 },
      positions_b: { "5": 2, "7": 1, "2": 3 },
      deltas: { "5": 1, "7": -1, "2": 0 },
    });
    expect(view.topK.map((t) => t.k)).toEqual([1, 2, 3]);
    expect(view.rows[0]).toEqual({ id: 5, positionA: 1, positionB: 2, delta: 1 });
  });
});
