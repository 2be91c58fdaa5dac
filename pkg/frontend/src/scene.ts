/** Builds a declarative scene (circles, segments, labels, axes) from one
 * view frame plus the toggles. Pure data in, pure data out; the SVG writer
 * in render.ts only transcribes it. */

import { fitTransform, placeLabels, toScreen, ViewTransform, Viewport } from "./geometry.js";
import type { FrameDto, Toggles } from "./types.js";

export interface SceneCircle {
  token: string;
  cx: number;
  cy: number;
  r: number;
  group: string;
}

export interface SceneSegment {
  label: string;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
}

export interface SceneLabel {
  token: string;
  x: number;
  y: number;
}

export interface Scene {
  circles: SceneCircle[];
  segments: SceneSegment[];
  labels: SceneLabel[];
  axes: { cx: number; cy: number; width: number; height: number };
  notice: string | null;
}

export const POINT_RADIUS = 4;

export function buildScene(
  frame: FrameDto,
  toggles: Toggles,
  transform: ViewTransform,
  viewport: Viewport,
): Scene {
  const shown = frame.points.filter(
    (p) => toggles.evaluation || p.group !== "evaluation",
  );
  const circles: SceneCircle[] = shown.map((p) => {
    const [cx, cy] = toScreen(p.x, p.y, transform);
    return { token: p.token, cx, cy, r: POINT_RADIUS, group: p.group };
  });

  const segments: SceneSegment[] = toggles.direction
    ? frame.directions.map((d) => {
        const [x2, y2] = toScreen(d.x, d.y, transform);
        return { label: d.label, x1: transform.cx, y1: transform.cy, x2, y2 };
      })
    : [];

  const labels: SceneLabel[] = toggles.labels
    ? placeLabels(circles.map((c) => ({ token: c.token, sx: c.cx, sy: c.cy }))).map(
        (b) => ({ token: b.token, x: b.x, y: b.y + b.height - 2 }),
      )
    : [];

  return {
    circles,
    segments,
    labels,
    axes: { cx: transform.cx, cy: transform.cy, width: viewport.width, height: viewport.height },
    notice: frame.camera.degenerate
      ? "degenerate view: the display set spans fewer than two directions"
      : null,
  };
}

export function traceTransform(frames: FrameDto[], viewport: Viewport): ViewTransform {
  return fitTransform(frames, viewport);
}
