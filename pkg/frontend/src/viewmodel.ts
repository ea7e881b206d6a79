/**
 * Pure view-model layer: service payload + view state -> render model.
 *
 * Row order is read straight off the payload's `order` lists; badges are
 * read off the last mutating response's deltas. Nothing here re-ranks,
 * re-sorts by score, or otherwise second-guesses the engine.
 */

import { ViewState } from "./state.js";
import { Comparison, RankDelta, RankingsPayload } from "./types.js";

export interface RankingRow {
  id: number;
  name: string;
  ranks: Record<string, number>;
  aggregate: { borda: number; simple_median: number; averaged_rank_median: number } | null;
  badges: Record<string, "up" | "down">;
}

export interface RankingView {
  orderBy: string;
  rules: string[];
  criteria: string[];
  rows: RankingRow[];
}

export interface GridCell {
  alternativeId: number;
  criterionId: string;
  value: number;
  provenance: string;
  pending: number | null;
}

export interface GridView {
  criteria: { id: string; name: string; scaleMin: number; scaleMax: number }[];
  rows: { id: number; name: string; cells: GridCell[] }[];
}

export interface WeightRow {
  criterionId: string;
  raw: number;
  /** share of total weight, what the panel displays next to each slider */
  normalized: number;
}

export interface ComparisonRow {
  id: number;
  positionA: number;
  positionB: number;
  delta: number;
}

export interface ComparisonView {
  kendallTau: number;
  spearmanRho: number;
  topK: { k: number; overlap: number }[];
  rows: ComparisonRow[];
}

function badgeIndex(deltas: RankDelta[]): Map<number, Record<string, "up" | "down">> {
  const byAlt = new Map<number, Record<string, "up" | "down">>();
  for (const delta of deltas) {
    const badges = byAlt.get(delta.alternative_id) ?? {};
    badges[delta.rule] = delta.after > delta.before ? "up" : "down";
    byAlt.set(delta.alternative_id, badges);
  }
  return byAlt;
}

export function buildRankingView(payload: RankingsPayload, state: ViewState): RankingView {
  const orderBy = payload.order[state.orderBy] !== undefined ? state.orderBy : "aggregate";
  const order = payload.order[orderBy] ?? [];
  const etableById = new Map(payload.etable.rows.map((row) => [row.id, row]));
  const atableById = new Map(payload.atable.rows.map((row) => [row.id, row]));
  const badges = badgeIndex(state.lastDeltas);
  const rows: RankingRow[] = [];
  for (const id of order) {
    const row = etableById.get(id);
    if (!row) continue;
    const agg = atableById.get(id);
    rows.push({
      id,
      name: row.name,
      ranks: row.ranks,
      aggregate: agg
        ? {
            borda: agg.borda,
            simple_median: agg.simple_median,
            averaged_rank_median: agg.averaged_rank_median,
          }
        : null,
      badges: badges.get(id) ?? {},
    });
  }
  return { orderBy, rules: payload.etable.rules, criteria: payload.selection.criteria, rows };
}

export function buildGridView(payload: RankingsPayload, state: ViewState): GridView {
  const pending = new Map(
    state.pendingEdits.map((e) => [`${e.alternative_id}|${e.criterion_id}`, e.value]),
  );
  const criteria = payload.table.criteria.map((c) => ({
    id: c.id,
    name: c.name,
    scaleMin: c.scale_min,
    scaleMax: c.scale_max,
  }));
  const rows = payload.table.alternatives.map((alt, i) => ({
    id: alt.id,
    name: alt.name,
    cells: payload.table.criteria.map((crit, j) => ({
      alternativeId: alt.id,
      criterionId: crit.id,
      value: payload.table.scores[i]![j]!,
      provenance: payload.table.provenance[i]![j]!,
      pending: pending.get(`${alt.id}|${crit.id}`) ?? null,
    })),
  }));
  return { criteria, rows };
}

/**
 * Inline validation for the grid editor. Returns null when the entry is
 * acceptable, otherwise the message to show at the offending cell
 * (naming the criterion's bounds, mirroring the service refusal).
 */
export function validateCellEntry(
  payload: RankingsPayload,
  criterionId: string,
  raw: string,
): string | null {
  const crit = payload.table.criteria.find((c) => c.id === criterionId);
  if (!crit) return `unknown criterion ${criterionId}`;
  const value = Number(raw);
  if (raw.trim() === "" || Number.isNaN(value)) return "enter a number";
  if (value < crit.scale_min || value > crit.scale_max) {
    return `out of scale: ${crit.id} allows [${crit.scale_min}, ${crit.scale_max}]`;
  }
  return null;
}

export function buildWeightPanel(payload: RankingsPayload): WeightRow[] {
  const entries = payload.table.criteria.map((c) => ({
    criterionId: c.id,
    raw: payload.weights[c.id] ?? 0,
  }));
  const total = entries.reduce((acc, e) => acc + e.raw, 0);
  return entries.map((e) => ({
    ...e,
    normalized: total > 0 ? e.raw / total : 0,
  }));
}

export function equalWeights(payload: RankingsPayload): Record<string, number> {
  return Object.fromEntries(payload.table.criteria.map((c) => [c.id, 1.0]));
}

export function buildComparisonView(comparison: Comparison): ComparisonView {
  const rows = comparison.common_ids.map((id) => ({
    id,
    positionA: comparison.positions_a[String(id)]!,
    positionB: comparison.positions_b[String(id)]!,
    delta: comparison.deltas[String(id)]!,
  }));
  const topK = Object.entries(comparison.top_k_overlap)
    .map(([k, overlap]) => ({ k: Number(k), overlap }))
    .sort((a, b) => a.k - b.k);
  return {
    kendallTau: comparison.kendall_tau,
    spearmanRho: comparison.spearman_rho,
    topK,
    rows,
  };
}

/** The ordering the ranking view renders, for agreement checks. */
export function renderedOrder(view: RankingView): number[] {
  return view.rows.map((row) => row.id);
}
