"""2D view pipeline: cameras, frames, and step-by-step transform traces.

Every frame is a *linear* view: a point's screen position is exactly its
inner products with two orthonormal camera axes, so the origin is always at
the view center and no nonlinear distortion is introduced.  A trace is the
ordered frame sequence that decomposes one debiasing job into interpretable
steps, ending with a PCA view of the modified data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .metrics import MetricReport, metric_report
from .store import EmbeddingSnapshot, as_tokens, get_vectors
from .subspace import ConceptDirection, canonical_sign
from .transforms import (
    DebiasJob,
    HD,
    INLP,
    JobRun,
    LP,
    _span_frame,
    run_job,
)

GROUPS = ("seed_f", "seed_m", "evaluation", "equalize", "other")


class ViewError(ValueError):
    """Camera construction failed (degenerate display set)."""


@dataclass(frozen=True)
class Camera:
    kind: str  # pca | aligned | span
    basis1: np.ndarray
    basis2: np.ndarray
    degenerate: bool = False

    def project(self, vectors: np.ndarray) -> np.ndarray:
        """(n, 2) view coordinates: raw inner products, origin at (0, 0)."""
        return np.stack([vectors @ self.basis1, vectors @ self.basis2], axis=1)


@dataclass(frozen=True)
class FramePoint:
    token: str
    x: float
    y: float
    group: str


@dataclass(frozen=True)
class DirectionSegment:
    label: str
    x: float
    y: float


@dataclass(frozen=True)
class ViewFrame:
    step_index: int
    step_label: str
    description: str
    camera: Camera
    points: tuple[FramePoint, ...]
    directions: tuple[DirectionSegment, ...]
    snapshot_id: str


@dataclass(frozen=True)
class StepTrace:
    method: str
    subspace_method: str
    label: str
    frames: tuple[ViewFrame, ...]
    output: EmbeddingSnapshot
    metrics_before: MetricReport | None = None
    metrics_after: MetricReport | None = None


def _orthonormalize(b2: np.ndarray, b1: np.ndarray) -> np.ndarray:
    b2 = b2 - float(b2 @ b1) * b1
    n = float(np.linalg.norm(b2))
    if n <= 1e-12:
        raise ViewError("second camera axis collapsed onto the first")
    return b2 / n


def _fallback_axis(b1: np.ndarray) -> np.ndarray:
    """Deterministic unit vector orthogonal to b1 (for rank-1 display sets)."""
    i = int(np.argmin(np.abs(b1)))
    e = np.zeros_like(b1)
    e[i] = 1.0
    return canonical_sign(_orthonormalize(e, b1))


def camera_pca(snapshot: EmbeddingSnapshot, display) -> Camera:
    """Top-2 principal directions of the centered display vectors.

    The *axes* come from centered PCA but points are projected without
    subtracting the mean, which keeps the origin pinned to the view center.
    A rank-1 display set degrades gracefully: the second axis is an arbitrary
    (deterministic) orthogonal unit vector and the camera is flagged.
    """
    tokens = as_tokens(display)
    if len(tokens) < 2:
        raise ViewError("camera needs at least two display tokens")
    X = get_vectors(snapshot, tokens)
    M = X - X.mean(axis=0)
    _, s, vt = np.linalg.svd(M, full_matrices=False)
    scale = max(1.0, float(np.abs(X).max()))
    if s[0] <= 1e-10 * scale:
        raise ViewError("display set is degenerate (all vectors identical)")
    b1 = canonical_sign(vt[0])
    if len(s) < 2 or s[1] <= 1e-10 * scale:
        return Camera(kind="pca", basis1=b1, basis2=_fallback_axis(b1), degenerate=True)
    b2 = canonical_sign(_orthonormalize(vt[1], b1))
    return Camera(kind="pca", basis1=b1, basis2=b2)


def camera_aligned(snapshot: EmbeddingSnapshot, v, display) -> Camera:
    """Concept direction on the x-axis; y-axis is the top residual PC."""
    vec = v.v if isinstance(v, ConceptDirection) else np.asarray(v, dtype=np.float64)
    tokens = as_tokens(display)
    if len(tokens) < 2:
        raise ViewError("camera needs at least two display tokens")
    X = get_vectors(snapshot, tokens)
    R = X - np.outer(X @ vec, vec)
    M = R - R.mean(axis=0)
    _, s, vt = np.linalg.svd(M, full_matrices=False)
    scale = max(1.0, float(np.abs(X).max()))
    if s[0] <= 1e-10 * scale:
        raise ViewError("display set is degenerate after removing the direction")
    b2 = canonical_sign(_orthonormalize(vt[0], vec))
    return Camera(kind="aligned", basis1=vec, basis2=b2)


def _camera_span(v1: np.ndarray, v2: np.ndarray) -> Camera:
    _, e2, _ = _span_frame(v1, v2)
    return Camera(kind="span", basis1=v1, basis2=e2)


def _group_of(token: str, job: DebiasJob) -> str:
    if job.seeds_f is not None and token in job.seeds_f.tokens:
        return "seed_f"
    if job.seeds_m is not None and token in job.seeds_m.tokens:
        return "seed_m"
    if job.seed_pairs is not None:
        for a, b in job.seed_pairs:
            if token == a:
                return "seed_m"
            if token == b:
                return "seed_f"
    if job.equalize is not None and token in job.equalize.flat_tokens():
        return "equalize"
    if token in job.evaluation.tokens:
        return "evaluation"
    return "other"


def display_tokens(job: DebiasJob) -> tuple[str, ...]:
    """Seeds + evaluation + equalize (+ second seeds), order-preserving."""
    toks = list(job.seed_tokens())
    if job.equalize is not None:
        toks.extend(job.equalize.flat_tokens())
    toks.extend(job.evaluation.tokens)
    if job.second_seeds is not None:
        toks.extend(job.second_seeds.tokens)
    return tuple(dict.fromkeys(toks))


def _make_frame(
    index: int,
    label: str,
    description: str,
    camera: Camera,
    snapshot: EmbeddingSnapshot,
    tokens: Sequence[str],
    job: DebiasJob,
    directions: Sequence[tuple[str, np.ndarray]],
) -> ViewFrame:
    coords = camera.project(get_vectors(snapshot, tokens))
    points = tuple(
        FramePoint(token=t, x=float(coords[i, 0]), y=float(coords[i, 1]), group=_group_of(t, job))
        for i, t in enumerate(tokens)
    )
    segs = tuple(
        DirectionSegment(
            label=name,
            x=float(u @ camera.basis1),
            y=float(u @ camera.basis2),
        )
        for name, u in directions
    )
    return ViewFrame(
        step_index=index,
        step_label=label,
        description=description,
        camera=camera,
        points=points,
        directions=segs,
        snapshot_id=snapshot.snapshot_id,
    )


def build_trace(snapshot: EmbeddingSnapshot, job: DebiasJob) -> StepTrace:
    """Run a job and decompose it into the method's frame schedule.

    Frame counts: LP 4, HD 5, OSCaR 4, INLP 2 + 2 per projection round.  The
    first and last frames always use PCA cameras; the last is computed from
    the modified data.
    """
    run: JobRun = run_job(snapshot, job)
    tokens = display_tokens(job)
    frames: list[ViewFrame] = []

    def add(label, description, camera, snap, directions):
        frames.append(
            _make_frame(
                len(frames), label, description, camera, snap, tokens, job, directions
            )
        )

    if job.method == LP:
        v = run.directions[0]
        dirs = ((v.label, v.v),)
        add(
            "original data (PCA view)",
            "The original embedding from its best two-dimensional PCA perspective.",
            camera_pca(snapshot, tokens),
            snapshot,
            dirs,
        )
        aligned = camera_aligned(snapshot, v, tokens)
        add(
            "reorient",
            f"The view rotates so the {v.label} direction lies along the x-axis.",
            aligned,
            snapshot,
            dirs,
        )
        step = run.result.steps[0]
        add("project", step.description, aligned, step.snapshot, dirs)
        add(
            "debiased data (PCA view)",
            "The modified embedding re-oriented to its own best PCA perspective.",
            camera_pca(run.result.output, tokens),
            run.result.output,
            dirs,
        )
    elif job.method == HD:
        v = run.directions[0]
        dirs = ((v.label, v.v),)
        add(
            "original data (PCA view)",
            "The original embedding from its best two-dimensional PCA perspective.",
            camera_pca(snapshot, tokens),
            snapshot,
            dirs,
        )
        aligned = camera_aligned(snapshot, v, tokens)
        add(
            "reorient",
            f"The view rotates so the {v.label} direction lies along the x-axis.",
            aligned,
            snapshot,
            dirs,
        )
        project_step, equalize_step = run.result.steps
        add("project", project_step.description, aligned, project_step.snapshot, dirs)
        add("equalize", equalize_step.description, aligned, equalize_step.snapshot, dirs)
        add(
            "debiased data (PCA view)",
            "The modified embedding re-oriented to its own best PCA perspective.",
            camera_pca(run.result.output, tokens),
            run.result.output,
            dirs,
        )
    elif job.method == INLP:
        add(
            "original data (PCA view)",
            "The original embedding from its best two-dimensional PCA perspective.",
            camera_pca(snapshot, tokens),
            snapshot,
            (),
        )
        prev = snapshot
        for step in run.result.steps:
            if not step.info.get("projected"):
                continue
            name, normal = step.directions[0]
            aligned = camera_aligned(prev, normal, tokens)
            add(
                f"reorient ({name})",
                f"The view rotates so classifier {name} lies along the x-axis.",
                aligned,
                prev,
                step.directions,
            )
            add(step.label, step.description, aligned, step.snapshot, step.directions)
            prev = step.snapshot
        add(
            "debiased data (PCA view)",
            "The modified embedding re-oriented to its own best PCA perspective.",
            camera_pca(run.result.output, tokens),
            run.result.output,
            (),
        )
    else:  # oscar
        v1, v2 = run.directions
        rotated = run.result.steps[0].directions[2]
        dirs_before = ((v1.label, v1.v), (v2.label, v2.v))
        dirs_after = ((v1.label, v1.v), rotated)
        add(
            "original data (PCA view)",
            "The original embedding from its best two-dimensional PCA perspective.",
            camera_pca(snapshot, tokens),
            snapshot,
            dirs_before,
        )
        span = _camera_span(v1.v, v2.v)
        add(
            "span view",
            (
                f"The view shows the plane spanned by the {v1.label} and"
                f" {v2.label} directions, with {v1.label} on the x-axis;"
                " all changes happen inside this plane."
            ),
            span,
            snapshot,
            dirs_before,
        )
        step = run.result.steps[0]
        add("rotate", step.description, span, step.snapshot, dirs_after)
        add(
            "debiased data (PCA view)",
            "The modified embedding re-oriented to its own best PCA perspective.",
            camera_pca(run.result.output, tokens),
            run.result.output,
            dirs_after,
        )

    metrics_before = metrics_after = None
    if job.metrics is not None:
        metrics_before = metric_report(
            snapshot, job.metrics.weat_sets, job.metrics.ect_attributes
        )
        metrics_after = metric_report(
            run.result.output, job.metrics.weat_sets, job.metrics.ect_attributes
        )
    return StepTrace(
        method=job.method,
        subspace_method=job.subspace_method,
        label=job.label,
        frames=tuple(frames),
        output=run.result.output,
        metrics_before=metrics_before,
        metrics_after=metrics_after,
    )


def frame_to_dict(frame: ViewFrame) -> dict:
    return {
        "step_index": frame.step_index,
        "step_label": frame.step_label,
        "description": frame.description,
        "snapshot_id": frame.snapshot_id,
        "camera": {
            "kind": frame.camera.kind,
            "basis1": [float(x) for x in frame.camera.basis1],
            "basis2": [float(x) for x in frame.camera.basis2],
            "degenerate": frame.camera.degenerate,
        },
        "points": [
            {"token": p.token, "x": p.x, "y": p.y, "group": p.group}
            for p in frame.points
        ],
        "directions": [
            {"label": d.label, "x": d.x, "y": d.y} for d in frame.directions
        ],
    }


def trace_to_dict(trace: StepTrace) -> dict:
    return {
        "method": trace.method,
        "subspace_method": trace.subspace_method,
        "label": trace.label,
        "frames": [frame_to_dict(f) for f in trace.frames],
        "output_snapshot_id": trace.output.snapshot_id,
        "metrics_before": trace.metrics_before.to_dict() if trace.metrics_before else None,
        "metrics_after": trace.metrics_after.to_dict() if trace.metrics_after else None,
    }
