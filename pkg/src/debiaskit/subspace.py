"""Concept-subspace identification.

Five ways to turn seed words into a unit direction: PCA over the seeds,
PCA over paired differences, the two-means difference, the normal of a linear
SVM boundary, and an iterative refinement that slides the two class means
inside their convex hulls to minimize a post-projection WEAT objective via
golden-section search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import svm
from .metrics import WeatSets, weat_from_vectors
from .store import (
    EmbeddingSnapshot,
    PairedWordSet,
    TokenSetLike,
    as_tokens,
    get_vectors,
)

PCA = "pca"
PAIRED_PCA = "paired_pca"
TWO_MEANS = "two_means"
CLASSIFIER_NORMAL = "classifier_normal"
ITERATIVE = "iterative"
METHODS = (PCA, PAIRED_PCA, TWO_MEANS, CLASSIFIER_NORMAL, ITERATIVE)

# Interval shrink factor per golden-section step.
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

_DEGENERATE_EPS = 1e-12


class SubspaceError(ValueError):
    """Seed configuration cannot produce a direction."""


@dataclass(frozen=True)
class ConceptDirection:
    """A unit vector in embedding space with provenance."""

    v: np.ndarray
    method: str
    label: str = "concept"
    seeds: tuple = ()

    def __post_init__(self):
        v = np.asarray(self.v, dtype=np.float64)
        n = float(np.linalg.norm(v))
        if not math.isfinite(n) or abs(n - 1.0) > 1e-10:
            raise SubspaceError(f"direction is not unit norm (|v| = {n})")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "v", v)

    @property
    def dim(self) -> int:
        return self.v.shape[0]


@dataclass(frozen=True)
class IterativeConfig:
    """Settings for iterative subspace refinement."""

    weat_sets: WeatSets
    rounds: int = 2
    gss_tolerance: float = 1e-3

    def __post_init__(self):
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if not 0.0 < self.gss_tolerance < 1.0:
            raise ValueError("gss_tolerance must be in (0, 1)")


def golden_section_search(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> float:
    """Argmin of a unimodal function on [lo, hi] within ``tol``.

    Pure interval reduction by the golden ratio; one new function evaluation
    per step, no gradients.  Raises on non-finite function values.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError("tol must be positive")

    def ev(x: float) -> float:
        y = f(x)
        if not math.isfinite(y):
            raise ValueError(f"objective returned non-finite value at {x}")
        return y

    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = ev(c), ev(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = ev(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = ev(d)
    return 0.5 * (a + b)


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip so the largest-magnitude component is positive (ties: lowest index)."""
    idx = int(np.argmax(np.abs(v)))
    return -v if v[idx] < 0 else v


def _unit(v: np.ndarray) -> np.ndarray:
    n = float(np.linalg.norm(v))
    if n <= _DEGENERATE_EPS:
        raise SubspaceError("degenerate (zero-length) direction")
    return v / n


def _top_component(X: np.ndarray, center: bool) -> np.ndarray:
    """Leading right singular vector; optionally mean-center first."""
    M = X - X.mean(axis=0) if center else X
    _, s, vt = np.linalg.svd(M, full_matrices=False)
    if s[0] <= 1e-9 * max(1.0, float(np.abs(X).max())):
        raise SubspaceError("degenerate seeds: no principal direction")
    return canonical_sign(vt[0])


def identify_pca(snapshot: EmbeddingSnapshot, seeds: TokenSetLike, label: str = "concept") -> ConceptDirection:
    """Top principal component of the mean-centered seed vectors."""
    tokens = as_tokens(seeds)
    if len(tokens) < 2:
        raise SubspaceError("PCA needs at least 2 seed words")
    X = get_vectors(snapshot, tokens)
    v = _top_component(X, center=True)
    return ConceptDirection(v=v, method=PCA, label=label, seeds=(tuple(tokens),))


def identify_paired_pca(
    snapshot: EmbeddingSnapshot, pairs: PairedWordSet, label: str = "concept"
) -> ConceptDirection:
    """Top principal component of paired difference vectors, *not* centered."""
    if len(pairs) < 1:
        raise SubspaceError("paired PCA needs at least one pair")
    A = get_vectors(snapshot, [a for a, _ in pairs])
    B = get_vectors(snapshot, [b for _, b in pairs])
    D = A - B
    if np.all(np.linalg.norm(D, axis=1) <= _DEGENERATE_EPS):
        raise SubspaceError("all difference vectors are zero")
    v = _top_component(D, center=False)
    return ConceptDirection(v=v, method=PAIRED_PCA, label=label, seeds=(pairs.pairs,))


def _mean_difference(F: np.ndarray, M: np.ndarray) -> np.ndarray:
    delta = F.mean(axis=0) - M.mean(axis=0)
    n = float(np.linalg.norm(delta))
    if n <= _DEGENERATE_EPS:
        raise SubspaceError("seed sets have identical means")
    return delta / n


def identify_two_means(
    snapshot: EmbeddingSnapshot,
    set_f: TokenSetLike,
    set_m: TokenSetLike,
    label: str = "concept",
) -> ConceptDirection:
    """Normalized difference of the two seed-set means, oriented F-positive."""
    tf, tm = as_tokens(set_f), as_tokens(set_m)
    if not tf or not tm:
        raise SubspaceError("two-means needs two non-empty seed sets")
    v = _mean_difference(get_vectors(snapshot, tf), get_vectors(snapshot, tm))
    return ConceptDirection(v=v, method=TWO_MEANS, label=label, seeds=(tf, tm))


def identify_classifier_normal(
    snapshot: EmbeddingSnapshot,
    set_f: TokenSetLike,
    set_m: TokenSetLike,
    label: str = "concept",
    c: float = 1.0,
) -> ConceptDirection:
    """Unit normal of a linear SVM boundary separating F (+1) from M (-1)."""
    tf, tm = as_tokens(set_f), as_tokens(set_m)
    if not tf or not tm:
        raise SubspaceError("classifier normal needs two non-empty seed sets")
    if set(tf) & set(tm):
        raise SubspaceError("seed sets must be disjoint")
    F = get_vectors(snapshot, tf)
    M = get_vectors(snapshot, tm)
    X = np.vstack([F, M])
    y = np.concatenate([np.ones(len(F)), -np.ones(len(M))])
    model = svm.train_linear_svm(X, y, c=c)
    n = float(np.linalg.norm(model.w))
    if n <= _DEGENERATE_EPS:
        raise SubspaceError("classifier collapsed to a zero normal")
    v = model.w / n
    if float(v @ (F.mean(axis=0) - M.mean(axis=0))) < 0:
        v = -v
    return ConceptDirection(v=v, method=CLASSIFIER_NORMAL, label=label, seeds=(tf, tm))


def _project_out(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    return M - np.outer(M @ v, v)


def identify_iterative(
    snapshot: EmbeddingSnapshot,
    set_f: TokenSetLike,
    set_m: TokenSetLike,
    cfg: IterativeConfig,
    label: str = "concept",
) -> ConceptDirection:
    """Refine the two-means direction by sliding each mean in its convex hull.

    The objective S(v) is |WEAT| of the configured sets *after* linearly
    projecting their vectors along v; smaller is better.  Each pass walks the
    seed words in their given order and, for each, golden-section searches the
    step fraction toward that word; a move is kept only if it improves S, so
    the result is never worse than plain two-means on the training sets.
    """
    tf, tm = as_tokens(set_f), as_tokens(set_m)
    if not tf or not tm:
        raise SubspaceError("iterative refinement needs two non-empty seed sets")
    F = get_vectors(snapshot, tf)
    M = get_vectors(snapshot, tm)
    W = cfg.weat_sets
    blocks = [
        get_vectors(snapshot, ws) for ws in (W.x, W.y, W.a, W.b)
    ]
    sizes = [len(b) for b in blocks]
    stacked = np.vstack(blocks)

    def split(P: np.ndarray) -> list[np.ndarray]:
        out, at = [], 0
        for s in sizes:
            out.append(P[at : at + s])
            at += s
        return out

    def score(m_vec: np.ndarray, f_vec: np.ndarray) -> float:
        delta = f_vec - m_vec
        n = float(np.linalg.norm(delta))
        if n <= _DEGENERATE_EPS:
            return 1e6  # collapsed means: maximally uninformative, finite
        v = delta / n
        Xp, Yp, Ap, Bp = split(_project_out(stacked, v))
        value, _ = weat_from_vectors(Xp, Yp, Ap, Bp)
        return abs(value)

    m = M.mean(axis=0)
    f = F.mean(axis=0)
    current = score(m, f)
    for _ in range(cfg.rounds):
        for x in M:  # fixed permutation: the order the words were given in
            if np.array_equal(x, m):
                continue  # stepping toward the current mean is a no-op
            best_a = golden_section_search(
                lambda a: score((1.0 - a) * m + a * x, f), 0.0, 1.0, cfg.gss_tolerance
            )
            cand = (1.0 - best_a) * m + best_a * x
            cand_score = score(cand, f)
            if cand_score < current:
                m, current = cand, cand_score
        for x in F:
            if np.array_equal(x, f):
                continue
            best_a = golden_section_search(
                lambda a: score(m, (1.0 - a) * f + a * x), 0.0, 1.0, cfg.gss_tolerance
            )
            cand = (1.0 - best_a) * f + best_a * x
            cand_score = score(m, cand)
            if cand_score < current:
                f, current = cand, cand_score
    v = _mean_difference(f[None, :], m[None, :])
    return ConceptDirection(v=v, method=ITERATIVE, label=label, seeds=(tf, tm))
