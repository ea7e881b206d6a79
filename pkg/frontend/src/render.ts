/**
 * DOM rendering for the workbench. Purely presentational: every element
 * is produced from a view model, and user intent is reported through
 * callback props rather than handled here.
 */

import {
  ComparisonView,
  GridView,
  RankingView,
  WeightRow,
} from "./viewmodel.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface GridCallbacks {
  onCellEdit(alternativeId: number, criterionId: string, raw: string): void;
}

export function renderGrid(view: GridView, callbacks: GridCallbacks): HTMLTableElement {
  const table = el("table", "grid");
  const head = table.createTHead().insertRow();
  head.appendChild(el("th", undefined, "policy"));
  for (const crit of view.criteria) {
    const th = el("th", undefined, crit.id);
    th.title = `${crit.name} [${crit.scaleMin}, ${crit.scaleMax}]`;
    head.appendChild(th);
  }
  const body = table.createTBody();
  for (const row of view.rows) {
    const tr = body.insertRow();
    const label = tr.insertCell();
    label.textContent = `${row.id}: ${row.name}`;
    label.className = "row-label";
    for (const cell of row.cells) {
      const td = tr.insertCell();
      const input = el("input", `cell prov-${cell.provenance}`);
      input.type = "text";
      input.value = String(cell.pending ?? cell.value);
      input.dataset.alternativeId = String(cell.alternativeId);
      input.dataset.criterionId = cell.criterionId;
      input.addEventListener("change", () =>
        callbacks.onCellEdit(cell.alternativeId, cell.criterionId, input.value),
      );
      td.appendChild(input);
      const note = el("span", "cell-error");
      td.appendChild(note);
    }
  }
  return table;
}

export function showCellError(
  root: HTMLElement,
  alternativeId: number,
  criterionId: string,
  message: string | null,
): void {
  const input = root.querySelector<HTMLInputElement>(
    `input[data-alternative-id="${alternativeId}"][data-criterion-id="${criterionId}"]`,
  );
  const note = input?.parentElement?.querySelector<HTMLElement>(".cell-error");
  if (note) note.textContent = message ?? "";
  input?.classList.toggle("invalid", message !== null);
}

export function renderRankingView(view: RankingView): HTMLTableElement {
  const table = el("table", "rankings");
  const caption = table.createCaption();
  caption.textContent = `ordered by ${view.orderBy} over ${view.criteria.length} criteria`;
  const head = table.createTHead().insertRow();
  head.appendChild(el("th", undefined, "policy"));
  for (const rule of view.rules) head.appendChild(el("th", undefined, rule));
  head.appendChild(el("th", undefined, "borda"));
  head.appendChild(el("th", undefined, "median"));
  const body = table.createTBody();
  for (const row of view.rows) {
    const tr = body.insertRow();
    tr.dataset.alternativeId = String(row.id);
    tr.insertCell().textContent = `${row.id}: ${row.name}`;
    for (const rule of view.rules) {
      const td = tr.insertCell();
      td.textContent = (row.ranks[rule] ?? NaN).toFixed(1);
      const badge = row.badges[rule];
      if (badge) {
        const mark = el("span", `badge badge-${badge}`, badge === "up" ? "▲" : "▼");
        mark.dataset.rule = rule;
        td.appendChild(mark);
      }
    }
    tr.insertCell().textContent = row.aggregate ? row.aggregate.borda.toFixed(2) : "";
    tr.insertCell().textContent = row.aggregate ? row.aggregate.simple_median.toFixed(2) : "";
  }
  return table;
}

export interface WeightCallbacks {
  onWeightChange(criterionId: string, value: number): void;
  onEqualWeights(): void;
}

export function renderWeightPanel(
  rows: WeightRow[],
  callbacks: WeightCallbacks,
): HTMLElement {
  const panel = el("div", "weights");
  for (const row of rows) {
    const line = el("label", "weight-row");
    line.appendChild(el("span", "weight-name", row.criterionId));
    const slider = el("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "5";
    slider.step = "0.1";
    slider.value = String(row.raw);
    slider.dataset.criterionId = row.criterionId;
    slider.addEventListener("change", () =>
      callbacks.onWeightChange(row.criterionId, Number(slider.value)),
    );
    line.appendChild(slider);
    const share = el("span", "weight-share", row.normalized.toFixed(3));
    share.dataset.criterionId = row.criterionId;
    line.appendChild(share);
    panel.appendChild(line);
  }
  const reset = el("button", "equal-weights", "equal weights");
  reset.addEventListener("click", () => callbacks.onEqualWeights());
  panel.appendChild(reset);
  return panel;
}

export function renderComparisonView(view: ComparisonView): HTMLElement {
  const box = el("div", "comparison");
  box.appendChild(
    el("p", "stats",
      `tau ${view.kendallTau.toFixed(3)} | rho ${view.spearmanRho.toFixed(3)}`),
  );
  const badges = el("p", "topk");
  for (const { k, overlap } of view.topK) {
    badges.appendChild(el("span", "topk-badge", `top-${k}: ${overlap}/${k}`));
  }
  box.appendChild(badges);
  const table = el("table", "comparison-rows");
  const head = table.createTHead().insertRow();
  for (const title of ["id", "A", "B", "delta"]) head.appendChild(el("th", undefined, title));
  const body = table.createTBody();
  for (const row of view.rows) {
    const tr = body.insertRow();
    tr.insertCell().textContent = String(row.id);
    tr.insertCell().textContent = `#${row.positionA}`;
    tr.insertCell().textContent = `#${row.positionB}`;
    tr.insertCell().textContent = row.delta === 0 ? "=" : row.delta > 0 ? `+${row.delta}` : String(row.delta);
  }
  box.appendChild(table);
  return box;
}
