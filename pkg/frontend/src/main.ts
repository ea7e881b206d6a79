/**
 * Workbench bootstrap: wires the controls to the service client.
 *
 * Each user action maps to exactly one service call; the pending edit
 * buffer is flushed serially so edits land in the order they were made.
 */

import { ApiRefusal, DeliberationApi } from "./api.js";
import {
  renderComparisonView,
  renderGrid,
  renderRankingView,
  renderWeightPanel,
  showCellError,
} from "./render.js";
import {
  ViewState,
  initialState,
  queueEdit,
  selectOrderBy,
  selectSubset,
  shiftEdit,
  withDeltas,
  withSession,
  rulesParam,
} from "./state.js";
import { CriteriaSubset, RankingsPayload } from "./types.js";
import {
  buildComparisonView,
  buildGridView,
  buildRankingView,
  buildWeightPanel,
  equalWeights,
  validateCellEntry,
} from "./viewmodel.js";

const api = new DeliberationApi(
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8765",
);

let state: ViewState = initialState();
let payload: RankingsPayload | null = null;
let flushing = false;

const root = document.getElementById("app")!;

function refresh(): void {
  if (!payload) return;
  root.replaceChildren();

  const controls = document.createElement("div");
  controls.className = "controls";
  for (const subset of ["all", "qol", "ma"] as CriteriaSubset[]) {
    const button = document.createElement("button");
    button.textContent = subset === "all" ? "All criteria" : subset === "qol" ? "QoL only" : "Mitigation/adaptation";
    button.className = state.subset === subset ? "active" : "";
    button.addEventListener("click", () => void selectCriteria(subset));
    controls.appendChild(button);
  }
  const orderPick = document.createElement("select");
  for (const key of [...payload.etable.rules, "aggregate"]) {
    const option = document.createElement("option");
    option.value = key;
    option.textContent = `order by ${key}`;
    option.selected = key === state.orderBy;
    orderPick.appendChild(option);
  }
  orderPick.addEventListener("change", () => {
    state = selectOrderBy(state, orderPick.value);
    refresh();
  });
  controls.appendChild(orderPick);
  root.appendChild(controls);

  root.appendChild(renderWeightPanel(buildWeightPanel(payload), {
    onWeightChange: (criterionId, value) => void putWeights({ [criterionId]: value }),
    onEqualWeights: () => void putWeights(equalWeights(payload!)),
  }));

  root.appendChild(renderRankingView(buildRankingView(payload, state)));

  root.appendChild(renderGrid(buildGridView(payload, state), {
    onCellEdit: (alternativeId, criterionId, raw) => {
      const problem = validateCellEntry(payload!, criterionId, raw);
      showCellError(root, alternativeId, criterionId, problem);
      if (problem !== null) return;
      state = queueEdit(state, {
        alternative_id: alternativeId,
        criterion_id: criterionId,
        value: Number(raw),
      });
      void flushEdits();
    },
  }));

  const compareBox = document.createElement("div");
  compareBox.className = "compare-input";
  const field = document.createElement("input");
  field.placeholder = "external ordering, best first: 5,7,2,6";
  const go = document.createElement("button");
  go.textContent = "compare against topsis";
  go.addEventListener("click", () => void runCompare(field.value));
  compareBox.append(field, go);
  root.appendChild(compareBox);
}

async function selectCriteria(subset: CriteriaSubset): Promise<void> {
  const sessionId = state.sessionId;
  if (!sessionId) return;
  state = selectSubset(state, subset);
  try {
    payload = await api.getRankings(sessionId, rulesParam(state), subset);
  } catch (err) {
    reportRefusal(err);
  }
  refresh();
}

async function flushEdits(): Promise<void> {
  const sessionId = state.sessionId;
  if (flushing || !sessionId) return;
  flushing = true;
  try {
    while (state.pendingEdits.length > 0) {
      const [edit, next] = shiftEdit(state);
      state = next;
      if (!edit) break;
      try {
        const response = await api.editCell(sessionId, edit);
        state = withDeltas(state, response.deltas);
        payload = response;
      } catch (err) {
        if (err instanceof ApiRefusal) {
          showCellError(root, edit.alternative_id, edit.criterion_id, err.body.message);
        } else {
          throw err;
        }
      }
    }
  } finally {
    flushing = false;
  }
  refresh();
}

async function putWeights(weights: Record<string, number>): Promise<void> {
  const sessionId = state.sessionId;
  if (!sessionId) return;
  try {
    const response = await api.editWeights(sessionId, weights);
    state = withDeltas(state, response.deltas);
    payload = response;
  } catch (err) {
    reportRefusal(err);
  }
  refresh();
}

async function runCompare(text: string): Promise<void> {
  if (!state.sessionId) return;
  const ranking = text.split(",").map((part) => Number(part.trim())).filter((n) => !Number.isNaN(n));
  try {
    const comparison = await api.compare(state.sessionId, ranking);
    const old = root.querySelector(".comparison");
    old?.remove();
    root.appendChild(renderComparisonView(buildComparisonView(comparison)));
  } catch (err) {
    reportRefusal(err);
  }
}

function reportRefusal(err: unknown): void {
  const banner = document.getElementById("banner")!;
  banner.textContent = err instanceof ApiRefusal ? err.message : String(err);
}

async function boot(): Promise<void> {
  const picker = document.getElementById("fixture") as HTMLSelectElement;
  const load = document.getElementById("load")!;
  load.addEventListener("click", async () => {
    try {
      payload = await api.createSession(picker.value);
      state = withSession(initialState(), payload);
      refresh();
    } catch (err) {
      reportRefusal(err);
    }
  });
}

void boot();
