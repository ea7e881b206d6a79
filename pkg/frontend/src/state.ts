/**
 * View state for one workbench tab: what is selected, what is pending.
 *
 * The state never holds computed rankings; those always come from the
 * most recent service payload (the client does no ranking math).
 */

import { CellEdit, CriteriaSubset, RankDelta, RankingsPayload } from "./types.js";

export interface ViewState {
  sessionId: string | null;
  subset: CriteriaSubset;
  selectedRules: string[] | "all";
  /** ranking column the rows are ordered by; "aggregate" = Borda order */
  orderBy: string;
  /** two-ranking comparison: rule on the left, external ids on the right */
  comparison: { rule: string; external: number[] } | null;
  /** optimistic edit buffer, flushed serially */
  pendingEdits: CellEdit[];
  /** deltas from the most recent mutating response, for badges */
  lastDeltas: RankDelta[];
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    subset: "all",
    selectedRules: "all",
    orderBy: "aggregate",
    comparison: null,
    pendingEdits: [],
    lastDeltas: [],
  };
}

export function withSession(state: ViewState, payload: RankingsPayload): ViewState {
  return { ...state, sessionId: payload.session_id, pendingEdits: [], lastDeltas: [] };
}

export function selectSubset(state: ViewState, subset: CriteriaSubset): ViewState {
  return { ...state, subset };
}

export function selectOrderBy(state: ViewState, orderBy: string): ViewState {
  return { ...state, orderBy };
}

export function queueEdit(state: ViewState, edit: CellEdit): ViewState {
  // the buffer keeps one pending value per cell; later entries replace earlier
  const rest = state.pendingEdits.filter(
    (p) => p.alternative_id !== edit.alternative_id || p.criterion_id !== edit.criterion_id,
  );
  return { ...state, pendingEdits: [...rest, edit] };
}

export function shiftEdit(state: ViewState): [CellEdit | undefined, ViewState] {
  const [next, ...rest] = state.pendingEdits;
  return [next, { ...state, pendingEdits: rest }];
}

export function withDeltas(state: ViewState, deltas: RankDelta[]): ViewState {
  return { ...state, lastDeltas: deltas };
}

export function rulesParam(state: ViewState): string {
  return state.selectedRules === "all" ? "all" : state.selectedRules.join(",");
}
