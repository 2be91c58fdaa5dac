"""Bias-mitigation transforms over embedding snapshots.

Four mechanisms: plain linear projection, hard debiasing (projection plus
pair equalization, definitional words preserved), iterated nullspace
projection along retrained classifier normals, and a graded in-plane
rotation that makes two concept subspaces orthogonal.

Every transform is pure: it returns a new snapshot plus an ordered list of
step descriptors, each carrying the snapshot state *after* that step so the
view pipeline can render intermediate geometry.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import svm
from .metrics import WeatSets
from .store import (
    EmbeddingSnapshot,
    PairedWordSet,
    TokenSetLike,
    WordSet,
    as_tokens,
)
from .subspace import (
    CLASSIFIER_NORMAL,
    ConceptDirection,
    IterativeConfig,
    METHODS,
    PAIRED_PCA,
    PCA,
    identify_classifier_normal,
    identify_iterative,
    identify_paired_pca,
    identify_pca,
    identify_two_means,
)

LP = "lp"
HD = "hd"
INLP = "inlp"
OSCAR = "oscar"
TRANSFORM_METHODS = (LP, HD, INLP, OSCAR)

# Projection coefficients at or below noise level are snapped to "no change";
# this keeps re-applying a projection a bitwise no-op.
_SNAP_EPS = 1e-12


class TransformError(ValueError):
    """Invalid transform inputs (non-unit direction, bad pair sets, ...)."""


class JobValidationError(ValueError):
    """A DebiasJob violates a method invariant."""


@dataclass(frozen=True)
class StepDescriptor:
    """One interpretable operation inside a transform."""

    label: str
    description: str
    directions: tuple[tuple[str, np.ndarray], ...]
    snapshot: EmbeddingSnapshot
    modified: tuple[str, ...] | None  # None means "all rows in scope"
    info: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TransformResult:
    input: EmbeddingSnapshot
    output: EmbeddingSnapshot
    steps: tuple[StepDescriptor, ...]

    def __post_init__(self):
        if not self.steps:
            raise TransformError("a transform must produce at least one step")


def _as_unit_vector(v) -> np.ndarray:
    vec = v.v if isinstance(v, ConceptDirection) else np.asarray(v, dtype=np.float64)
    n = float(np.linalg.norm(vec))
    dev = abs(n - 1.0)
    if dev > 1e-6:
        raise TransformError(f"direction is not a unit vector (|v| = {n})")
    if dev > 1e-9:
        warnings.warn(f"normalizing near-unit direction (|v| = {n})", stacklevel=3)
        vec = vec / n
    return np.asarray(vec, dtype=np.float64)


def project_rows(
    matrix: np.ndarray, v: np.ndarray, rows: np.ndarray | None = None
) -> np.ndarray:
    """Remove the v-component of the selected rows (all rows by default).

    Rows whose v-component is already at rounding-noise level are returned
    bit-identical, which makes the projection idempotent as a float map.
    """
    new = matrix.copy()
    idx = np.arange(len(matrix)) if rows is None else np.asarray(rows, dtype=int)
    if len(idx) == 0:
        return new
    sub = matrix[idx]
    coeffs = sub @ v
    norms = np.linalg.norm(sub, axis=1)
    active = np.abs(coeffs) > _SNAP_EPS * (norms + 1.0)
    act = idx[active]
    new[act] = matrix[act] - np.outer(coeffs[active], v)
    return new


def linear_projection(
    snapshot: EmbeddingSnapshot,
    v,
    exclude: TokenSetLike = (),
) -> TransformResult:
    """x' = x - <v,x> v for every row not in ``exclude``."""
    vec = _as_unit_vector(v)
    excl = as_tokens(exclude)
    excl_rows = set(snapshot.rows(excl))
    rows = np.array([i for i in range(len(snapshot)) if i not in excl_rows], dtype=int)
    out = snapshot.replace_matrix(project_rows(snapshot.matrix, vec, rows))
    label = getattr(v, "label", "concept")
    step = StepDescriptor(
        label="project",
        description=f"Remove every word's component along the {label} direction.",
        directions=((label, vec),),
        snapshot=out,
        modified=None if not excl else tuple(t for t in snapshot.tokens if t not in excl),
        info={"excluded": list(excl)},
    )
    return TransformResult(input=snapshot, output=out, steps=(step,))


def hard_debias(
    snapshot: EmbeddingSnapshot,
    v,
    definitional: TokenSetLike,
    equalize: PairedWordSet,
    targets: TokenSetLike | None = None,
) -> TransformResult:
    """Project all in-scope words except the definitional ones, then re-extend
    each equalize pair along v so its within-pair separation is preserved.

    ``targets=None`` means the whole vocabulary is in scope; otherwise only
    the given tokens (plus the equalize pairs) are touched.
    """
    vec = _as_unit_vector(v)
    defs = as_tokens(definitional)
    snapshot.rows(defs)  # resolve early, reporting all missing tokens
    pair_tokens = equalize.flat_tokens()
    snapshot.rows(pair_tokens)
    overlap = sorted(set(defs) & set(pair_tokens))
    if overlap:
        raise TransformError(
            f"equalize pairs overlap the definitional set: {overlap}"
        )

    if targets is None:
        scope = set(range(len(snapshot)))
    else:
        scope = set(snapshot.rows(as_tokens(targets)))
        scope.update(snapshot.rows(pair_tokens))
    scope -= set(snapshot.rows(defs))
    rows = np.array(sorted(scope), dtype=int)

    label = getattr(v, "label", "concept")
    mid = snapshot.replace_matrix(project_rows(snapshot.matrix, vec, rows))
    step_project = StepDescriptor(
        label="project",
        description=(
            f"Remove the {label} component of every word in scope except the"
            " definitional seed words."
        ),
        directions=((label, vec),),
        snapshot=mid,
        modified=tuple(snapshot.tokens[i] for i in rows),
        info={"definitional": list(defs)},
    )

    # Equalization uses the ORIGINAL pair vectors: midpoint off-v part plus
    # the original signed along-v separation, split evenly.
    final = mid.matrix.copy()
    orig = snapshot.matrix
    for a, b in equalize:
        ia, ib = snapshot.row(a), snapshot.row(b)
        mu = 0.5 * (orig[ia] + orig[ib])
        nu = mu - float(mu @ vec) * vec
        s = float((orig[ia] - orig[ib]) @ vec)
        final[ia] = nu + (0.5 * s) * vec
        final[ib] = nu - (0.5 * s) * vec
    out = mid.replace_matrix(final)
    step_equalize = StepDescriptor(
        label="equalize",
        description=(
            "Re-extend each equalize pair along the direction so the two words"
            " are as far apart as before, centered on their projected midpoint."
        ),
        directions=((label, vec),),
        snapshot=out,
        modified=pair_tokens,
        info={"pairs": [list(p) for p in equalize.pairs]},
    )
    return TransformResult(input=snapshot, output=out, steps=(step_project, step_equalize))


def inlp(
    snapshot: EmbeddingSnapshot,
    set_f: TokenSetLike,
    set_m: TokenSetLike,
    max_iters: int = 35,
    accuracy_floor: float = 0.55,
) -> TransformResult:
    """Repeatedly project along retrained classifier normals.

    Each round trains a linear SVM on the *current* vectors of F and M and
    measures the best threshold accuracy along its normal.  While that beats
    ``accuracy_floor`` the whole snapshot is projected along the normal; the
    loop stops when no useful direction remains or after ``max_iters``
    projections.
    """
    tf, tm = as_tokens(set_f), as_tokens(set_m)
    if not tf or not tm:
        raise TransformError("INLP needs two non-empty word sets")
    if set(tf) & set(tm):
        raise TransformError("INLP word sets must be disjoint")
    f_rows = snapshot.rows(tf)
    m_rows = snapshot.rows(tm)
    y = np.concatenate([np.ones(len(f_rows)), -np.ones(len(m_rows))])

    current = snapshot
    steps: list[StepDescriptor] = []
    for it in range(1, max_iters + 1):
        X = np.vstack([current.matrix[f_rows], current.matrix[m_rows]])
        model = svm.train_linear_svm(X, y)
        wnorm = float(np.linalg.norm(model.w))
        if wnorm <= 1e-12:
            # No informative direction left; the best the boundary can do is
            # pick the majority class.
            acc = max(len(f_rows), len(m_rows)) / len(y)
            steps.append(
                StepDescriptor(
                    label=f"stop (round {it})",
                    description=(
                        "The classifier collapsed to a zero normal; the sets are"
                        f" no longer separable (accuracy {acc:.3f})."
                    ),
                    directions=(),
                    snapshot=current,
                    modified=(),
                    info={"accuracy": acc, "projected": False, "round": it},
                )
            )
            break
        v = model.w / wnorm
        if float(v @ (X[: len(f_rows)].mean(axis=0) - X[len(f_rows):].mean(axis=0))) < 0:
            v = -v
        acc = svm.best_threshold_accuracy(X @ v, y)
        if acc <= accuracy_floor:
            steps.append(
                StepDescriptor(
                    label=f"stop (round {it})",
                    description=(
                        f"Best achievable accuracy along the new normal is {acc:.3f}"
                        f" <= {accuracy_floor}; the procedure stops."
                    ),
                    directions=((f"normal {it}", v),),
                    snapshot=current,
                    modified=(),
                    info={"accuracy": acc, "projected": False, "round": it},
                )
            )
            break
        current = current.replace_matrix(project_rows(current.matrix, v))
        steps.append(
            StepDescriptor(
                label=f"project round {it}",
                description=(
                    f"Round {it}: classifier separates the sets with accuracy"
                    f" {acc:.3f}; project all words along its normal."
                ),
                directions=((f"normal {it}", v),),
                snapshot=current,
                modified=None,
                info={"accuracy": acc, "projected": True, "round": it},
            )
        )
    else:
        steps.append(
            StepDescriptor(
                label="iteration cap",
                description=f"Stopped after the maximum of {max_iters} projections.",
                directions=(),
                snapshot=current,
                modified=(),
                info={"projected": False, "cap": max_iters},
            )
        )
    return TransformResult(input=snapshot, output=current, steps=tuple(steps))


def graded_rotation_angle(phi, phi1: float):
    """Rotation magnitude applied to a point at in-plane angle ``phi``.

    Piecewise linear: 0 at the reference axis (phi = 0), the full target
    rotation pi/2 - phi1 at phi = +-phi1, and 0 again at phi = +-pi; points in
    the negative half-plane rotate the mirror-symmetric (clockwise) way.
    """
    theta = math.pi / 2.0 - phi1
    phi = np.asarray(phi, dtype=np.float64)
    aphi = np.abs(phi)
    base = np.where(
        aphi <= phi1,
        theta * aphi / phi1,
        theta * (math.pi - aphi) / (math.pi - phi1),
    )
    return np.sign(phi) * base


def _span_frame(v1: np.ndarray, v2: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Orthonormal in-plane frame (e1, e2) and the acute angle of v2.

    e1 is +-v1 chosen so v2 makes an acute angle with it; e2 completes the
    plane with <v2, e2> > 0.
    """
    c0 = float(v1 @ v2)
    if abs(c0) >= 1.0 - 1e-9:
        raise TransformError("the two directions are (near) parallel")
    e1 = v1 if c0 >= 0.0 else -v1
    w = v2 - float(v2 @ e1) * e1
    s = float(np.linalg.norm(w))
    e2 = w / s
    phi1 = math.atan2(s, abs(c0)) if c0 != 0.0 else math.pi / 2.0
    return e1, e2, phi1


def _graded_rotate(
    matrix: np.ndarray, e1: np.ndarray, e2: np.ndarray, phi1: float
) -> np.ndarray:
    new = matrix.copy()
    p1 = matrix @ e1
    p2 = matrix @ e2
    r = np.hypot(p1, p2)
    norms = np.linalg.norm(matrix, axis=1)
    active = r > _SNAP_EPS * (norms + 1.0)
    if not np.any(active):
        return new
    phi = np.arctan2(p2[active], p1[active])
    rho = graded_rotation_angle(phi, phi1)
    moving = rho != 0.0
    if not np.any(moving):
        return new
    idx = np.flatnonzero(active)[moving]
    psi = phi[moving] + rho[moving]
    ra = r[active][moving]
    d1 = ra * np.cos(psi) - p1[idx]
    d2 = ra * np.sin(psi) - p2[idx]
    new[idx] = matrix[idx] + np.outer(d1, e1) + np.outer(d2, e2)
    return new


def oscar(snapshot: EmbeddingSnapshot, v1, v2) -> TransformResult:
    """Graded rotation inside span(v1, v2) making the two subspaces orthogonal.

    v1 (and -v1) stay fixed, v2 lands orthogonal to v1, everything else in the
    plane rotates by an angle interpolating between those extremes; components
    outside the plane are untouched.
    """
    u1 = _as_unit_vector(v1)
    u2raw = _as_unit_vector(v2)
    e1, e2, phi1 = _span_frame(u1, u2raw)
    out = snapshot.replace_matrix(_graded_rotate(snapshot.matrix, e1, e2, phi1))
    v2_rot = _graded_rotate(u2raw[None, :], e1, e2, phi1)[0]
    label1 = getattr(v1, "label", "first concept")
    label2 = getattr(v2, "label", "second concept")
    step = StepDescriptor(
        label="rotate",
        description=(
            f"Rotate each word within the plane of the {label1} and {label2}"
            f" directions so the two concepts become orthogonal; the {label1}"
            " direction itself stays fixed."
        ),
        directions=((label1, u1), (label2, u2raw), (f"{label2} (rotated)", v2_rot)),
        snapshot=out,
        modified=None,
        info={"phi1": phi1, "target_rotation": math.pi / 2.0 - phi1},
    )
    return TransformResult(input=snapshot, output=out, steps=(step,))


@dataclass(frozen=True)
class MetricConfig:
    """Which word sets to score a job with, before and after."""

    weat_sets: WeatSets
    ect_attributes: WordSet


@dataclass(frozen=True)
class DebiasJob:
    """Declarative description of one debiasing run."""

    method: str
    subspace_method: str
    evaluation: WordSet
    seeds_f: WordSet | None = None
    seeds_m: WordSet | None = None
    seed_pairs: PairedWordSet | None = None
    seed_pool: WordSet | None = None
    equalize: PairedWordSet | None = None
    second_seeds: WordSet | None = None
    label: str = "concept"
    second_label: str = "second concept"
    inlp_max_iters: int = 35
    inlp_accuracy_floor: float = 0.55
    iterative_weat: WeatSets | None = None
    iterative_rounds: int = 2
    iterative_tolerance: float = 1e-3
    hd_scope_all: bool = True
    metrics: MetricConfig | None = None

    def __post_init__(self):
        if self.method not in TRANSFORM_METHODS:
            raise JobValidationError(f"unknown method: {self.method!r}")
        if self.subspace_method not in METHODS:
            raise JobValidationError(
                f"unknown subspace method: {self.subspace_method!r}"
            )
        if self.method == HD and self.equalize is None:
            raise JobValidationError("hard debiasing requires an equalize set")
        if self.method == OSCAR and self.second_seeds is None:
            raise JobValidationError("oscar requires a second seed set")
        if self.method == INLP and self.subspace_method != CLASSIFIER_NORMAL:
            raise JobValidationError("inlp requires the classifier-normal subspace")
        if self.subspace_method == PAIRED_PCA:
            if self.seed_pairs is None:
                raise JobValidationError("paired PCA requires seed pairs")
        elif self.subspace_method == PCA:
            if not self._pool_tokens():
                raise JobValidationError("pca requires seed words")
        else:
            if self.seeds_f is None or self.seeds_m is None:
                raise JobValidationError(
                    f"{self.subspace_method} requires both seed sets"
                )
        if self.subspace_method == "iterative" and self.iterative_weat is None:
            raise JobValidationError(
                "iterative subspace identification requires training WEAT sets"
            )

    def _pool_tokens(self) -> tuple[str, ...]:
        toks: list[str] = []
        if self.seed_pool is not None:
            toks.extend(self.seed_pool.tokens)
        if self.seeds_f is not None:
            toks.extend(self.seeds_f.tokens)
        if self.seeds_m is not None:
            toks.extend(self.seeds_m.tokens)
        if self.seed_pairs is not None:
            toks.extend(self.seed_pairs.flat_tokens())
        return tuple(dict.fromkeys(toks))

    def seed_tokens(self) -> tuple[str, ...]:
        return self._pool_tokens()


@dataclass(frozen=True)
class JobRun:
    job: DebiasJob
    directions: tuple[ConceptDirection, ...]
    result: TransformResult


def resolve_direction(snapshot: EmbeddingSnapshot, job: DebiasJob) -> ConceptDirection:
    """Identify the job's primary concept direction from its seeds."""
    m = job.subspace_method
    if m == PCA:
        return identify_pca(snapshot, job.seed_tokens(), label=job.label)
    if m == PAIRED_PCA:
        return identify_paired_pca(snapshot, job.seed_pairs, label=job.label)
    if m == "two_means":
        return identify_two_means(snapshot, job.seeds_f, job.seeds_m, label=job.label)
    if m == CLASSIFIER_NORMAL:
        return identify_classifier_normal(
            snapshot, job.seeds_f, job.seeds_m, label=job.label
        )
    cfg = IterativeConfig(
        weat_sets=job.iterative_weat,
        rounds=job.iterative_rounds,
        gss_tolerance=job.iterative_tolerance,
    )
    return identify_iterative(snapshot, job.seeds_f, job.seeds_m, cfg, label=job.label)


def run_job(snapshot: EmbeddingSnapshot, job: DebiasJob) -> JobRun:
    """Execute a job against a snapshot: identify directions, transform."""
    if job.method == INLP:
        result = inlp(
            snapshot,
            job.seeds_f,
            job.seeds_m,
            max_iters=job.inlp_max_iters,
            accuracy_floor=job.inlp_accuracy_floor,
        )
        directions: tuple[ConceptDirection, ...] = ()
        return JobRun(job=job, directions=directions, result=result)

    v = resolve_direction(snapshot, job)
    if job.method == LP:
        result = linear_projection(snapshot, v)
        return JobRun(job=job, directions=(v,), result=result)
    if job.method == HD:
        targets = None
        if not job.hd_scope_all:
            toks = list(job.seed_tokens()) + list(job.evaluation.tokens)
            targets = tuple(dict.fromkeys(toks))
        result = hard_debias(
            snapshot,
            v,
            definitional=job.seed_tokens(),
            equalize=job.equalize,
            targets=targets,
        )
        return JobRun(job=job, directions=(v,), result=result)
    # oscar
    v2 = identify_pca(snapshot, job.second_seeds, label=job.second_label)
    result = oscar(snapshot, v, v2)
    return JobRun(job=job, directions=(v, v2), result=result)
