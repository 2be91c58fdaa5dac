/** Thin SVG writer: transcribes a Scene into DOM nodes. All geometry was
 * decided in scene.ts/geometry.ts. */

import type { Scene } from "./scene.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el(name: string, attrs: Record<string, string | number>): SVGElement {
  const node = document.createElementNS(SVG_NS, name);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  return node;
}

export function ensureArrowMarker(svg: SVGSVGElement): void {
  if (svg.querySelector("marker#arrowhead")) return;
  const defs = el("defs", {});
  const marker = el("marker", {
    id: "arrowhead",
    viewBox: "0 0 10 10",
    refX: 9,
    refY: 5,
    markerWidth: 7,
    markerHeight: 7,
    orient: "auto-start-reverse",
  });
  marker.appendChild(el("path", { d: "M 0 0 L 10 5 L 0 10 z", fill: "#1a1a1a" }));
  defs.appendChild(marker);
  svg.appendChild(defs);
}

export function drawScene(
  svg: SVGSVGElement,
  scene: Scene,
  onTokenClick: (token: string) => void,
  selectedToken: string | null,
): void {
  ensureArrowMarker(svg);
  svg.querySelectorAll("g.layer").forEach((g) => g.remove());
  const root = el("g", { class: "layer" });

  // faint axes through the origin (always the canvas center)
  root.appendChild(el("line", {
    class: "axis", x1: 0, y1: scene.axes.cy, x2: scene.axes.width, y2: scene.axes.cy,
  }));
  root.appendChild(el("line", {
    class: "axis", x1: scene.axes.cx, y1: 0, x2: scene.axes.cx, y2: scene.axes.height,
  }));

  for (const seg of scene.segments) {
    root.appendChild(el("line", {
      class: "direction",
      x1: seg.x1, y1: seg.y1, x2: seg.x2, y2: seg.y2,
      "marker-end": "url(#arrowhead)",
    }));
  }

  for (const c of scene.circles) {
    const dot = el("circle", {
      class: `point group-${c.group}` + (c.token === selectedToken ? " selected" : ""),
      cx: c.cx, cy: c.cy, r: c.r, "data-token": c.token,
    });
    dot.addEventListener("click", () => onTokenClick(c.token));
    root.appendChild(dot);
  }

  for (const label of scene.labels) {
    const text = el("text", { class: "label", x: label.x, y: label.y });
    text.textContent = label.token;
    root.appendChild(text);
  }

  if (scene.notice) {
    const note = el("text", { class: "notice", x: 8, y: 16 });
    note.textContent = scene.notice;
    root.appendChild(note);
  }

  svg.appendChild(root);
}
