/** Metric/metric and effort/metric charts.
 *
 * The metric chart plots the swept points and carries a draggable
 * threshold marker along the sample axis. Moving the marker re-renders
 * the readout (metric pair and confusion matrix) from the already
 * fetched API points; the client never recomputes a metric.
 */

import type { DiagramPoint, DiagramResponse, EffortSeries } from "./api.js";
import { formatCount, formatMetric, formatThreshold } from "./format.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const PLOT_W = 420;
const PLOT_H = 320;
const MARGIN = 44;
const STRIP_H = 46;

export interface DiagramHandle {
  element: HTMLElement;
  selectPoint(index: number): void;
  selectedIndex(): number;
  /** marker drag in strip coordinates; snaps to the nearest sample */
  dragTo(stripX: number): void;
  pointCount(): number;
}

function scale(value: number, max: number): number {
  return MARGIN + value * (max - 2 * MARGIN);
}

function plotX(v: number): number {
  return scale(v, PLOT_W);
}

function plotY(v: number): number {
  return PLOT_H - scale(v, PLOT_H);
}

function stripXFor(index: number, count: number): number {
  if (count <= 1) return MARGIN;
  return MARGIN + (index / (count - 1)) * (PLOT_W - 2 * MARGIN);
}

function axisLine(x1: number, y1: number, x2: number, y2: number): SVGLineElement {
  const line = document.createElementNS(SVG_NS, "line");
  line.setAttribute("x1", String(x1));
  line.setAttribute("y1", String(y1));
  line.setAttribute("x2", String(x2));
  line.setAttribute("y2", String(y2));
  line.setAttribute("stroke", "#888");
  return line;
}

function readoutFor(diagram: DiagramResponse, point: DiagramPoint): string[] {
  return [
    `threshold ${formatThreshold(point.threshold)}`,
    `${diagram.xMetric} ${formatMetric(point.x)}`,
    `${diagram.yMetric} ${formatMetric(point.y)}`,
    `TP ${formatCount(point.matrix.tp)} FP ${formatCount(point.matrix.fp)}` +
      ` FN ${formatCount(point.matrix.fn)} TN ${formatCount(point.matrix.tn)}`,
  ];
}

export function renderMetricDiagram(
  container: HTMLElement,
  diagram: DiagramResponse,
  onSelect?: (point: DiagramPoint, index: number) => void,
): DiagramHandle {
  const root = document.createElement("div");
  root.classList.add("diagram");

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${PLOT_W} ${PLOT_H + STRIP_H}`);
  svg.setAttribute("width", "100%");
  svg.appendChild(axisLine(MARGIN, PLOT_H - MARGIN, PLOT_W - MARGIN, PLOT_H - MARGIN));
  svg.appendChild(axisLine(MARGIN, MARGIN, MARGIN, PLOT_H - MARGIN));

  const xLabel = document.createElementNS(SVG_NS, "text");
  xLabel.setAttribute("x", String(PLOT_W / 2));
  xLabel.setAttribute("y", String(PLOT_H - 8));
  xLabel.setAttribute("text-anchor", "middle");
  xLabel.textContent = diagram.xMetric;
  svg.appendChild(xLabel);
  const yLabel = document.createElementNS(SVG_NS, "text");
  yLabel.setAttribute("x", "12");
  yLabel.setAttribute("y", String(PLOT_H / 2));
  yLabel.setAttribute("transform", `rotate(-90 12 ${PLOT_H / 2})`);
  yLabel.setAttribute("text-anchor", "middle");
  yLabel.textContent = diagram.yMetric;
  svg.appendChild(yLabel);

  // curve through the defined points; undefined values leave gaps
  const defined = diagram.points
    .map((point, index) => ({ point, index }))
    .filter(({ point }) => point.x !== null && point.y !== null);
  if (defined.length > 1) {
    const path = document.createElementNS(SVG_NS, "polyline");
    path.setAttribute(
      "points",
      defined.map(({ point }) => `${plotX(point.x!)},${plotY(point.y!)}`).join(" "),
    );
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", "#4e79a7");
    svg.appendChild(path);
  }
  for (const { point, index } of defined) {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(plotX(point.x!)));
    dot.setAttribute("cy", String(plotY(point.y!)));
    dot.setAttribute("r", "4");
    dot.setAttribute("fill", "#4e79a7");
    dot.dataset.index = String(index);
    svg.appendChild(dot);
  }

  // threshold strip with the draggable marker
  const stripY = PLOT_H + STRIP_H / 2;
  svg.appendChild(axisLine(MARGIN, stripY, PLOT_W - MARGIN, stripY));
  diagram.points.forEach((_, index) => {
    const tick = axisLine(stripXFor(index, diagram.points.length), stripY - 5,
      stripXFor(index, diagram.points.length), stripY + 5);
    svg.appendChild(tick);
  });
  const marker = document.createElementNS(SVG_NS, "circle");
  marker.setAttribute("cy", String(stripY));
  marker.setAttribute("r", "8");
  marker.setAttribute("fill", "#e15759");
  marker.classList.add("threshold-marker");
  svg.appendChild(marker);

  const readout = document.createElement("div");
  readout.classList.add("diagram-readout");

  let selected = 0;

  const selectPoint = (index: number): void => {
    selected = Math.max(0, Math.min(diagram.points.length - 1, index));
    marker.setAttribute("cx", String(stripXFor(selected, diagram.points.length)));
    const point = diagram.points[selected];
    readout.replaceChildren(
      ...readoutFor(diagram, point).map((text) => {
        const span = document.createElement("span");
        span.textContent = text;
        return span;
      }),
    );
    onSelect?.(point, selected);
  };

  const dragTo = (stripX: number): void => {
    let best = 0;
    let bestDistance = Infinity;
    diagram.points.forEach((_, index) => {
      const distance = Math.abs(stripXFor(index, diagram.points.length) - stripX);
      if (distance < bestDistance) {
        best = index;
        bestDistance = distance;
      }
    });
    selectPoint(best);
  };

  let dragging = false;
  const toStripX = (event: PointerEvent): number => {
    const rect = svg.getBoundingClientRect();
    const scaleX = rect.width > 0 ? PLOT_W / rect.width : 1;
    return (event.clientX - rect.left) * scaleX;
  };
  svg.addEventListener("pointerdown", (event: PointerEvent) => {
    dragging = true;
    dragTo(toStripX(event));
  });
  svg.addEventListener("pointermove", (event: PointerEvent) => {
    if (dragging) dragTo(toStripX(event));
  });
  svg.addEventListener("pointerup", () => {
    dragging = false;
  });

  root.appendChild(svg);
  root.appendChild(readout);
  container.replaceChildren(root);
  selectPoint(diagram.points.length - 1);

  return {
    element: root,
    selectPoint,
    selectedIndex: () => selected,
    dragTo,
    pointCount: () => diagram.points.length,
  };
}

export function renderEffortChart(container: HTMLElement, series: EffortSeries[]): void {
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${PLOT_W} ${PLOT_H}`);
  svg.setAttribute("width", "100%");
  svg.appendChild(axisLine(MARGIN, PLOT_H - MARGIN, PLOT_W - MARGIN, PLOT_H - MARGIN));
  svg.appendChild(axisLine(MARGIN, MARGIN, MARGIN, PLOT_H - MARGIN));

  const allPoints = series.flatMap((s) => s.points);
  const maxEffort = Math.max(1, ...allPoints.map((p) => p.effortHours));
  const palette = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2"];

  series.forEach((entry, index) => {
    const visible = entry.points.filter((p) => p.value !== null);
    if (visible.length === 0) return;
    const coordinates = visible.map((p) => {
      const x = plotX(p.effortHours / maxEffort);
      const y = plotY(p.value!);
      return `${x},${y}`;
    });
    if (visible.length > 1) {
      const line = document.createElementNS(SVG_NS, "polyline");
      line.setAttribute("points", coordinates.join(" "));
      line.setAttribute("fill", "none");
      line.setAttribute("stroke", palette[index % palette.length]);
      svg.appendChild(line);
    }
    visible.forEach((p) => {
      const dot = document.createElementNS(SVG_NS, "circle");
      dot.setAttribute("cx", String(plotX(p.effortHours / maxEffort)));
      dot.setAttribute("cy", String(plotY(p.value!)));
      dot.setAttribute("r", "4");
      dot.setAttribute("fill", palette[index % palette.length]);
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${p.experimentName}: ${formatMetric(p.value)} at ${p.effortHours}h`;
      dot.appendChild(title);
      svg.appendChild(dot);
    });
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(PLOT_W - MARGIN));
    label.setAttribute("y", String(MARGIN + 16 * index));
    label.setAttribute("text-anchor", "end");
    label.setAttribute("fill", palette[index % palette.length]);
    label.textContent = entry.solutionId ?? "(no solution)";
    svg.appendChild(label);
  });

  container.replaceChildren(svg);
}
