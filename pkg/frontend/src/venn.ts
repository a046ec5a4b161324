/** Clickable Venn diagrams for 2-4 pair sources.
 *
 * Two and three sources use circles; four sources use the classic
 * rotated-ellipse construction, since circles cannot produce all 15
 * regions. Region membership is decided by point-in-shape tests, so a
 * click anywhere resolves to the exact region under the cursor; labels
 * sit at sampled region centroids and carry the counts reported by the
 * API. Selecting a region hands the API-provided set expression to the
 * caller untouched.
 */

import type { VennRegion, VennResponse } from "./api.js";

export interface Shape {
  cx: number;
  cy: number;
  rx: number;
  ry: number;
  /** rotation in degrees, counter-clockwise */
  angle: number;
}

export const VIEW_WIDTH = 520;
export const VIEW_HEIGHT = 420;

const PALETTE = ["#4e79a7", "#f28e2b", "#59a14f", "#e15759"];

export function layoutShapes(count: number): Shape[] {
  const w = VIEW_WIDTH;
  const h = VIEW_HEIGHT;
  if (count === 2) {
    return [
      { cx: w * 0.38, cy: h * 0.5, rx: w * 0.26, ry: w * 0.26, angle: 0 },
      { cx: w * 0.62, cy: h * 0.5, rx: w * 0.26, ry: w * 0.26, angle: 0 },
    ];
  }
  if (count === 3) {
    return [
      { cx: w * 0.4, cy: h * 0.4, rx: w * 0.24, ry: w * 0.24, angle: 0 },
      { cx: w * 0.6, cy: h * 0.4, rx: w * 0.24, ry: w * 0.24, angle: 0 },
      { cx: w * 0.5, cy: h * 0.66, rx: w * 0.24, ry: w * 0.24, angle: 0 },
    ];
  }
  if (count === 4) {
    // four rotated ellipses, the classic construction with all 15 regions
    return [
      { cx: w * 0.35, cy: h * 0.42, rx: w * 0.31, ry: w * 0.165, angle: -40 },
      { cx: w * 0.44, cy: h * 0.52, rx: w * 0.31, ry: w * 0.165, angle: -40 },
      { cx: w * 0.56, cy: h * 0.52, rx: w * 0.31, ry: w * 0.165, angle: 40 },
      { cx: w * 0.65, cy: h * 0.42, rx: w * 0.31, ry: w * 0.165, angle: 40 },
    ];
  }
  throw new Error(`venn layouts exist for 2-4 sources, got ${count}`);
}

export function insideShape(shape: Shape, x: number, y: number): boolean {
  const theta = (-shape.angle * Math.PI) / 180;
  const dx = x - shape.cx;
  const dy = y - shape.cy;
  const localX = dx * Math.cos(theta) - dy * Math.sin(theta);
  const localY = dx * Math.sin(theta) + dy * Math.cos(theta);
  return (localX / shape.rx) ** 2 + (localY / shape.ry) ** 2 <= 1;
}

export function signatureAt(shapes: Shape[], x: number, y: number): number[] {
  const members: number[] = [];
  shapes.forEach((shape, index) => {
    if (insideShape(shape, x, y)) members.push(index);
  });
  return members;
}

export function regionKey(members: number[]): string {
  return members.join(",");
}

/** Sampled centroid per region signature; used to place labels. */
export function regionCentroids(shapes: Shape[], samples = 140): Map<string, { x: number; y: number }> {
  const sums = new Map<string, { x: number; y: number; n: number }>();
  for (let i = 0; i < samples; i++) {
    for (let j = 0; j < samples; j++) {
      const x = ((i + 0.5) / samples) * VIEW_WIDTH;
      const y = ((j + 0.5) / samples) * VIEW_HEIGHT;
      const members = signatureAt(shapes, x, y);
      if (members.length === 0) continue;
      const key = regionKey(members);
      const entry = sums.get(key) ?? { x: 0, y: 0, n: 0 };
      entry.x += x;
      entry.y += y;
      entry.n += 1;
      sums.set(key, entry);
    }
  }
  const centroids = new Map<string, { x: number; y: number }>();
  for (const [key, { x, y, n }] of sums) {
    centroids.set(key, { x: x / n, y: y / n });
  }
  return centroids;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export interface VennHandle {
  element: SVGSVGElement;
  /** resolve a click position (svg coordinates) to a region */
  regionAt(x: number, y: number): VennRegion | undefined;
  /** programmatic selection, same path a click takes */
  selectAt(x: number, y: number): void;
  centroidOf(members: number[]): { x: number; y: number } | undefined;
}

export function renderVenn(
  container: HTMLElement,
  venn: VennResponse,
  onRegionSelect: (region: VennRegion) => void,
): VennHandle {
  const shapes = layoutShapes(venn.sources.length);
  const byKey = new Map<string, VennRegion>();
  for (const region of venn.regions) byKey.set(regionKey(region.members), region);

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${VIEW_WIDTH} ${VIEW_HEIGHT}`);
  svg.setAttribute("width", "100%");
  svg.classList.add("venn");

  shapes.forEach((shape, index) => {
    const node = document.createElementNS(SVG_NS, "ellipse");
    node.setAttribute("cx", String(shape.cx));
    node.setAttribute("cy", String(shape.cy));
    node.setAttribute("rx", String(shape.rx));
    node.setAttribute("ry", String(shape.ry));
    if (shape.angle !== 0) {
      node.setAttribute("transform", `rotate(${shape.angle} ${shape.cx} ${shape.cy})`);
    }
    node.setAttribute("fill", PALETTE[index % PALETTE.length]);
    node.setAttribute("fill-opacity", "0.25");
    node.setAttribute("stroke", PALETTE[index % PALETTE.length]);
    svg.appendChild(node);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(shape.cx));
    label.setAttribute("y", String(shape.cy - shape.ry - 6));
    label.setAttribute("text-anchor", "middle");
    label.classList.add("venn-source-label");
    label.textContent = venn.sources[index];
    svg.appendChild(label);
  });

  const centroids = regionCentroids(shapes);
  for (const region of venn.regions) {
    const centroid = centroids.get(regionKey(region.members));
    if (!centroid) continue;
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(centroid.x));
    label.setAttribute("y", String(centroid.y));
    label.setAttribute("text-anchor", "middle");
    label.classList.add("venn-count");
    label.dataset.members = regionKey(region.members);
    label.textContent = String(region.count);
    svg.appendChild(label);
  }

  const regionAt = (x: number, y: number): VennRegion | undefined => {
    const members = signatureAt(shapes, x, y);
    if (members.length === 0) return undefined;
    return byKey.get(regionKey(members));
  };

  const selectAt = (x: number, y: number): void => {
    const region = regionAt(x, y);
    if (region) onRegionSelect(region);
  };

  svg.addEventListener("click", (event: MouseEvent) => {
    const rect = svg.getBoundingClientRect();
    const scaleX = rect.width > 0 ? VIEW_WIDTH / rect.width : 1;
    const scaleY = rect.height > 0 ? VIEW_HEIGHT / rect.height : 1;
    selectAt((event.clientX - rect.left) * scaleX, (event.clientY - rect.top) * scaleY);
  });

  container.replaceChildren(svg);
  return {
    element: svg,
    regionAt,
    selectAt,
    centroidOf: (members) => centroids.get(regionKey(members)),
  };
}
