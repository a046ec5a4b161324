/** Soft-KPI decision matrix and attribute-ratio bar charts. Missing
 * values always render as a dash; a bar of height zero would claim a
 * measured zero that never happened. */

import type { AttributeRatio, DecisionRow } from "./api.js";
import { formatMetric, UNDEFINED_LABEL } from "./format.js";

export function renderDecisionMatrix(
  container: HTMLElement,
  rows: DecisionRow[],
  metricNames: string[],
  scores?: Map<string, number>,
): void {
  const table = document.createElement("table");
  table.classList.add("kpi-matrix");

  const ordered = scores
    ? [...rows].sort((a, b) =>
        (scores.get(b.solutionId) ?? -Infinity) - (scores.get(a.solutionId) ?? -Infinity))
    : rows;

  const head = document.createElement("tr");
  const columns = [
    "solution", "general costs", "integration", "domain config",
    "technique config", "deployment", "interfaces", "techniques",
    "setup cost", "runtime (s)", ...metricNames,
    ...(scores ? ["score"] : []),
  ];
  for (const column of columns) {
    const th = document.createElement("th");
    th.textContent = column;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const row of ordered) {
    const tr = document.createElement("tr");
    const cells: (string | null)[] = [
      row.solutionName,
      row.generalCosts === null ? null : formatMetric(row.generalCosts, 2),
      row.effortCosts.integration === null || row.effortCosts.integration === undefined
        ? null : formatMetric(row.effortCosts.integration, 2),
      row.effortCosts.domainConfig === null || row.effortCosts.domainConfig === undefined
        ? null : formatMetric(row.effortCosts.domainConfig, 2),
      row.effortCosts.techniqueConfig === null || row.effortCosts.techniqueConfig === undefined
        ? null : formatMetric(row.effortCosts.techniqueConfig, 2),
      row.deploymentType.length ? row.deploymentType.join(", ") : null,
      row.interfaces.length ? row.interfaces.join(", ") : null,
      row.techniques.length ? row.techniques.join(", ") : null,
      row.setupEffortCost === null ? null : formatMetric(row.setupEffortCost, 2),
      row.runtimeSeconds === null ? null : formatMetric(row.runtimeSeconds, 2),
      ...metricNames.map((name) => {
        const value = row.metrics[name];
        return value === null || value === undefined ? null : formatMetric(value);
      }),
      ...(scores ? [formatMetric(scores.get(row.solutionId))] : []),
    ];
    for (const value of cells) {
      const td = document.createElement("td");
      td.textContent = value ?? UNDEFINED_LABEL;
      if (value === null) td.classList.add("undefined-cell");
      tr.appendChild(td);
    }
    table.appendChild(tr);
  }
  container.replaceChildren(table);
}

export function renderRatioBars(
  container: HTMLElement,
  title: string,
  ratios: AttributeRatio[],
): void {
  const section = document.createElement("section");
  section.classList.add("ratio-chart");
  const heading = document.createElement("h4");
  heading.textContent = title;
  section.appendChild(heading);

  const chart = document.createElement("div");
  chart.classList.add("bars");
  for (const entry of ratios) {
    const item = document.createElement("div");
    item.classList.add("bar-item");
    item.dataset.attribute = entry.attribute;

    const value = document.createElement("span");
    value.classList.add("bar-value");
    value.textContent =
      entry.ratio === null ? UNDEFINED_LABEL : formatMetric(entry.ratio);

    const bar = document.createElement("div");
    bar.classList.add("bar");
    if (entry.ratio === null) {
      bar.classList.add("bar-undefined");
      bar.style.height = "0px";
    } else {
      bar.style.height = `${Math.round(entry.ratio * 120)}px`;
      bar.title = `${entry.falseCount} of ${entry.totalCount} misclassified`;
    }

    const label = document.createElement("span");
    label.classList.add("bar-label");
    label.textContent = entry.attribute;

    item.replaceChildren(value, bar, label);
    chart.appendChild(item);
  }
  section.appendChild(chart);
  container.replaceChildren(section);
}
