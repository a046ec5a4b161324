/** Pair browser: paginated pair views with full records, classification
 * badges, sort keys, selection strategies, and error drill-down. All
 * rendering is a pure function of API payloads. */

import type { ApiClient, Page, PairView, PartitionSummary } from "./api.js";
import { formatCount, formatMetric, UNDEFINED_LABEL } from "./format.js";

export interface PairBrowserState {
  datasetId: string;
  attributeNames: string[];
  expression?: { include: string[]; exclude: string[]; pairMode: string };
  page: number;
  pageSize: number;
  sortKey?: string;
  sortDescending: boolean;
  experimentId?: string;
  goldId?: string;
}

function badge(classification: string | null): HTMLElement {
  const span = document.createElement("span");
  span.classList.add("badge");
  span.classList.add(`badge-${(classification ?? "none").toLowerCase()}`);
  span.textContent = classification ?? UNDEFINED_LABEL;
  return span;
}

export function renderPairRows(
  table: HTMLTableElement,
  attributeNames: string[],
  pairs: PairView[],
  onExplain?: (pair: PairView) => void,
): void {
  const head = document.createElement("tr");
  for (const title of ["pair", ...attributeNames.map((a) => `a: ${a}`),
    ...attributeNames.map((a) => `b: ${a}`), "similarity", "class", ""]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  const body = pairs.map((view) => {
    const row = document.createElement("tr");
    const idCell = document.createElement("td");
    idCell.textContent = `${view.nativeIds[0]} / ${view.nativeIds[1]}`;
    row.appendChild(idCell);
    for (const record of view.records) {
      for (const value of record) {
        const cell = document.createElement("td");
        cell.textContent = value ?? UNDEFINED_LABEL;
        row.appendChild(cell);
      }
    }
    const sim = document.createElement("td");
    sim.classList.add("similarity");
    sim.textContent = formatMetric(view.similarity);
    row.appendChild(sim);
    const cls = document.createElement("td");
    cls.appendChild(badge(view.classification));
    row.appendChild(cls);
    const actions = document.createElement("td");
    if (onExplain && (view.classification === "FP" || view.classification === "FN")) {
      const button = document.createElement("button");
      button.textContent = "explain";
      button.addEventListener("click", () => onExplain(view));
      actions.appendChild(button);
    }
    row.appendChild(actions);
    return row;
  });
  table.replaceChildren(head, ...body);
}

export function renderPartitions(
  container: HTMLElement,
  attributeNames: string[],
  partitions: PartitionSummary[],
): void {
  const blocks = partitions.map((partition) => {
    const block = document.createElement("section");
    block.classList.add("partition");
    const header = document.createElement("h4");
    header.textContent =
      `similarity ${formatMetric(partition.low)} .. ${formatMetric(partition.high)}` +
      ` (${partition.size} pairs)`;
    const matrix = document.createElement("p");
    matrix.classList.add("partition-matrix");
    matrix.textContent =
      `TP ${formatCount(partition.matrix.tp)} FP ${formatCount(partition.matrix.fp)} ` +
      `FN ${formatCount(partition.matrix.fn)} TN ${formatCount(partition.matrix.tn)}`;
    const table = document.createElement("table");
    renderPairRows(table, attributeNames, partition.representatives);
    block.replaceChildren(header, matrix, table);
    return block;
  });
  container.replaceChildren(...blocks);
}

export function renderExplainPanel(
  container: HTMLElement,
  attributeNames: string[],
  misclassified: PairView,
  counterpart: PairView,
  score: number,
): void {
  const panel = document.createElement("aside");
  panel.classList.add("explain-panel");
  const title = document.createElement("h4");
  title.textContent =
    `closest correctly classified counterpart (score ${formatMetric(score)})`;
  const table = document.createElement("table");
  renderPairRows(table, attributeNames, [misclassified, counterpart]);
  panel.replaceChildren(title, table);
  container.replaceChildren(panel);
}

export function renderPagination(
  container: HTMLElement,
  page: Page<PairView>,
  goto: (page: number) => void,
): void {
  const info = document.createElement("span");
  info.textContent = `${page.total} pairs, page ${page.page}/${page.pages}`;
  const previous = document.createElement("button");
  previous.textContent = "prev";
  previous.disabled = page.page <= 1;
  previous.addEventListener("click", () => goto(page.page - 1));
  const next = document.createElement("button");
  next.textContent = "next";
  next.disabled = page.page >= page.pages;
  next.addEventListener("click", () => goto(page.page + 1));
  container.replaceChildren(previous, info, next);
}

/** Fetch one page for the active expression and render table + pager. */
export async function showExpressionPage(
  api: ApiClient,
  state: PairBrowserState,
  table: HTMLTableElement,
  pager: HTMLElement,
  explainTarget?: HTMLElement,
): Promise<Page<PairView>> {
  if (!state.expression) throw new Error("no active set expression");
  const page = await api.evaluateSet({
    datasetId: state.datasetId,
    expression: state.expression,
    page: state.page,
    pageSize: state.pageSize,
    sortKey: state.sortKey,
    sortDescending: state.sortDescending,
  });
  const explain = explainTarget && state.experimentId && state.goldId
    ? async (view: PairView) => {
        const response = await api.explainError(
          state.datasetId, state.experimentId!, state.goldId!, view.pair);
        renderExplainPanel(explainTarget, state.attributeNames, view,
          response.counterpart, response.score);
      }
    : undefined;
  renderPairRows(table, state.attributeNames, page.items, explain);
  renderPagination(pager, page, (p) => {
    state.page = p;
    void showExpressionPage(api, state, table, pager, explainTarget);
  });
  return page;
}
