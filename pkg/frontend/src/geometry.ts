/** Pure view geometry: fit-to-frame scaling with the origin pinned to the
 * canvas center, keyframe interpolation, and deterministic label placement.
 * No DOM access here so everything is unit-testable. */

import type { FrameDto, FramePoint } from "./types.js";

export interface Viewport {
  width: number;
  height: number;
  margin: number;
}

export interface ViewTransform {
  scale: number;
  cx: number;
  cy: number;
}

/** One scale for the whole trace so the animation does not zoom between
 * steps; the origin always maps to the canvas center, y grows upward. */
export function fitTransform(frames: FrameDto[], viewport: Viewport): ViewTransform {
  let extent = 0;
  for (const frame of frames) {
    for (const p of frame.points) {
      extent = Math.max(extent, Math.abs(p.x), Math.abs(p.y));
    }
    for (const d of frame.directions) {
      extent = Math.max(extent, Math.abs(d.x), Math.abs(d.y));
    }
  }
  if (extent === 0) extent = 1;
  const half = Math.min(viewport.width, viewport.height) / 2 - viewport.margin;
  return {
    scale: Math.max(half, 1) / extent,
    cx: viewport.width / 2,
    cy: viewport.height / 2,
  };
}

export function toScreen(x: number, y: number, t: ViewTransform): [number, number] {
  return [t.cx + x * t.scale, t.cy - y * t.scale];
}

/** Linear interpolation of per-token positions between two keyframes.
 * Tokens are matched by name; both frames of one trace share the display
 * set, so the zip is total. Direction segments interpolate the same way. */
export function interpolateFrame(a: FrameDto, b: FrameDto, t: number): FrameDto {
  const clamp = Math.max(0, Math.min(1, t));
  const byToken = new Map(b.points.map((p) => [p.token, p]));
  const points: FramePoint[] = a.points.map((p) => {
    const q = byToken.get(p.token) ?? p;
    return {
      token: p.token,
      group: p.group,
      x: p.x + (q.x - p.x) * clamp,
      y: p.y + (q.y - p.y) * clamp,
    };
  });
  const byLabel = new Map(b.directions.map((d) => [d.label, d]));
  const directions = a.directions.map((d) => {
    const e = byLabel.get(d.label) ?? d;
    return { label: d.label, x: d.x + (e.x - d.x) * clamp, y: d.y + (e.y - d.y) * clamp };
  });
  return { ...(clamp < 1 ? a : b), points, directions };
}

export interface LabelBox {
  token: string;
  x: number; // screen coords of the label's top-left corner
  y: number;
  width: number;
  height: number;
}

const LABEL_HEIGHT = 12;
const CHAR_WIDTH = 6.5;

interface Candidate {
  dx: number;
  dy: number;
  align: "left" | "right";
}

// Tried in fixed order: E, W, N, S, diagonals, then further east.
const CANDIDATES: Candidate[] = [
  { dx: 8, dy: -4, align: "left" },
  { dx: -8, dy: -4, align: "right" },
  { dx: 0, dy: -14, align: "left" },
  { dx: 0, dy: 10, align: "left" },
  { dx: 8, dy: -14, align: "left" },
  { dx: -8, dy: 10, align: "right" },
  { dx: -8, dy: -14, align: "right" },
  { dx: 8, dy: 10, align: "left" },
  { dx: 20, dy: -4, align: "left" },
  { dx: 32, dy: -4, align: "left" },
  { dx: 44, dy: -4, align: "left" },
];

function overlaps(a: LabelBox, b: LabelBox): boolean {
  return (
    a.x < b.x + b.width &&
    b.x < a.x + a.width &&
    a.y < b.y + b.height &&
    b.y < a.y + a.height
  );
}

/** Greedy collision avoidance: points are processed in input order and each
 * label takes the first candidate offset that clears all placed labels.
 * If every candidate collides the first one is used (never hide a label). */
export function placeLabels(
  anchors: { token: string; sx: number; sy: number }[],
): LabelBox[] {
  const placed: LabelBox[] = [];
  for (const a of anchors) {
    const width = Math.max(1, a.token.length) * CHAR_WIDTH;
    let chosen: LabelBox | null = null;
    for (const c of CANDIDATES) {
      const x = c.align === "left" ? a.sx + c.dx : a.sx + c.dx - width;
      const box: LabelBox = { token: a.token, x, y: a.sy + c.dy, width, height: LABEL_HEIGHT };
      if (chosen === null) chosen = box;
      if (!placed.some((p) => overlaps(p, box))) {
        chosen = box;
        break;
      }
    }
    placed.push(chosen!);
  }
  return placed;
}
