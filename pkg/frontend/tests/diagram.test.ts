// Criterion: dragging the threshold marker displays exactly the
// precision/recall pair the API reported for that threshold, and
// undefined metric values render as a dash.

import { describe, expect, inject, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { renderMetricDiagram } from "../src/diagram.js";
import { formatMetric, UNDEFINED_LABEL } from "../src/format.js";

const base = inject("baseUrl");
const seed = inject("seed");
const api = new ApiClient(base);

describe("metric/metric diagram with threshold marker", () => {
  it("marker positions reproduce the API values for every sample", async () => {
    const diagram = await api.diagram(
      seed.runOneId, seed.goldId, "recall", "precision", 4);
    expect(diagram.points.length).toBe(4);

    const container = document.createElement("div");
    document.body.appendChild(container);
    const handle = renderMetricDiagram(container, diagram);

    for (let index = 0; index < diagram.points.length; index++) {
      handle.selectPoint(index);
      const point = diagram.points[index];
      const readout = container.querySelector(".diagram-readout")!;
      const texts = [...readout.querySelectorAll("span")].map(
        (node) => node.textContent);
      expect(texts).toContain(`recall ${formatMetric(point.x)}`);
      expect(texts).toContain(`precision ${formatMetric(point.y)}`);
      expect(texts.some((t) => t?.startsWith("TP"))).toBe(true);
    }
  });

  it("drag gestures snap to samples and update the readout", async () => {
    const diagram = await api.diagram(
      seed.runOneId, seed.goldId, "recall", "precision", 4);
    const container = document.createElement("div");
    document.body.appendChild(container);
    const handle = renderMetricDiagram(container, diagram);
    const svg = container.querySelector("svg")!;

    // pointer near the left edge of the strip selects the first sample
    svg.dispatchEvent(new MouseEvent("pointerdown", { clientX: 0, clientY: 340 }));
    expect(handle.selectedIndex()).toBe(0);
    const point = diagram.points[0];
    const readout = container.querySelector(".diagram-readout")!.textContent!;
    // entry 0 applies no matches: precision is undefined and must show a dash
    expect(point.y).toBeNull();
    expect(readout).toContain(`precision ${UNDEFINED_LABEL}`);
    expect(readout).toContain(`recall ${formatMetric(point.x)}`);

    // drag to the right end: final sample with all matches applied
    svg.dispatchEvent(new MouseEvent("pointermove", { clientX: 4000, clientY: 340 }));
    expect(handle.selectedIndex()).toBe(3);
    const last = diagram.points[3];
    expect(last.x).toBe(1.0);
    expect(container.querySelector(".diagram-readout")!.textContent)
      .toContain(`precision ${formatMetric(last.y)}`);
  });

  it("marker at the maximum threshold shows the zero-match matrix", async () => {
    const diagram = await api.diagram(
      seed.runOneId, seed.goldId, "recall", "precision", 4);
    const container = document.createElement("div");
    const handle = renderMetricDiagram(container, diagram);
    handle.selectPoint(0);
    expect(diagram.points[0].matrix).toEqual({ tp: 0, fp: 0, fn: 2, tn: 4 });
    const readout = container.querySelector(".diagram-readout")!.textContent!;
    expect(readout).toContain("TP 0 FP 0 FN 2 TN 4");
  });
});
