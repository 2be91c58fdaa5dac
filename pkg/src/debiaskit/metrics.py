"""Bias measurement: WEAT effect size and the embedding coherence test (ECT).

WEAT internals use ``math.fsum`` (exactly rounded summation) so that the
effect size is *exactly* antisymmetric under swapping the target sets or the
attribute sets, independent of summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .store import (
    EmbeddingSnapshot,
    TokenSetLike,
    WordSet,
    ZERO_NORM_EPS,
    as_tokens,
    get_vectors,
)


@dataclass(frozen=True)
class WeatSets:
    """Two target sets (x, y) and two attribute sets (a, b)."""

    x: WordSet
    y: WordSet
    a: WordSet
    b: WordSet

    def __post_init__(self):
        for name, ws in (("x", self.x), ("y", self.y), ("a", self.a), ("b", self.b)):
            if len(ws) == 0:
                raise ValueError(f"WEAT set {name!r} is empty")
        if set(self.x.tokens) & set(self.y.tokens):
            raise ValueError("WEAT target sets x and y overlap")
        if set(self.a.tokens) & set(self.b.tokens):
            raise ValueError("WEAT attribute sets a and b overlap")


@dataclass(frozen=True)
class MetricReport:
    weat: float
    ect: float
    degenerate: bool
    snapshot_id: str
    sets: dict

    def to_dict(self) -> dict:
        return {
            "weat": self.weat,
            "ect": self.ect,
            "degenerate": self.degenerate,
            "snapshot_id": self.snapshot_id,
            "sets": self.sets,
        }


def _unit_rows(M: np.ndarray) -> tuple[np.ndarray, bool]:
    """Rows scaled to unit norm; zero rows stay zero and raise the flag."""
    norms = np.linalg.norm(M, axis=1)
    degenerate = bool(np.any(norms <= ZERO_NORM_EPS))
    safe = np.where(norms <= ZERO_NORM_EPS, 1.0, norms)
    return M / safe[:, None], degenerate


def weat_from_vectors(
    X: np.ndarray, Y: np.ndarray, A: np.ndarray, B: np.ndarray
) -> tuple[float, bool]:
    """WEAT effect size from raw vector blocks; returns (value, degenerate).

    s(w,A,B) = mean_a cos(a,w) - mean_b cos(b,w); the statistic is
    mean_X s - mean_Y s, normalized by the *population* standard deviation of
    s over X u Y.  Zero standard deviation yields 0.0 with the degenerate
    flag set.
    """
    Xu, dx = _unit_rows(np.asarray(X, dtype=np.float64))
    Yu, dy = _unit_rows(np.asarray(Y, dtype=np.float64))
    Au, da = _unit_rows(np.asarray(A, dtype=np.float64))
    Bu, db = _unit_rows(np.asarray(B, dtype=np.float64))
    degenerate = dx or dy or da or db

    def assoc(w: np.ndarray) -> float:
        ca = math.fsum(float(a @ w) for a in Au) / len(Au)
        cb = math.fsum(float(b @ w) for b in Bu) / len(Bu)
        return ca - cb

    s_x = [assoc(w) for w in Xu]
    s_y = [assoc(w) for w in Yu]
    num = math.fsum(s_x) / len(s_x) - math.fsum(s_y) / len(s_y)
    s_all = s_x + s_y
    mu = math.fsum(s_all) / len(s_all)
    var = math.fsum((s - mu) ** 2 for s in s_all) / len(s_all)
    if var == 0.0:
        return 0.0, True
    return num / math.sqrt(var), degenerate


def weat(snapshot: EmbeddingSnapshot, sets: WeatSets) -> float:
    """WEAT effect size on a snapshot; closer to 0 means less association."""
    if len(sets.x) + len(sets.y) < 2:
        raise ValueError("WEAT needs at least two target words in total")
    value, _ = weat_from_vectors(
        get_vectors(snapshot, sets.x),
        get_vectors(snapshot, sets.y),
        get_vectors(snapshot, sets.a),
        get_vectors(snapshot, sets.b),
    )
    return value


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """Fractional (average) ranks, 1-based; ties share the mean rank."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(len(v))
    i = 0
    while i < len(v):
        j = i
        while j + 1 < len(v) and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman(a: Sequence[float], b: Sequence[float]) -> tuple[float, bool]:
    """Spearman rank correlation with average ranks; (value, degenerate)."""
    ra = average_ranks(a)
    rb = average_ranks(b)
    da = ra - ra.mean()
    db = rb - rb.mean()
    na = float(np.linalg.norm(da))
    nb = float(np.linalg.norm(db))
    if na == 0.0 or nb == 0.0:
        return 0.0, True
    rho = float(da @ db / (na * nb))
    return min(1.0, max(-1.0, rho)), False


def ect_from_vectors(
    X: np.ndarray, Y: np.ndarray, attributes: np.ndarray
) -> tuple[float, bool]:
    m = np.mean(np.asarray(X, dtype=np.float64), axis=0)
    f = np.mean(np.asarray(Y, dtype=np.float64), axis=0)
    At, da = _unit_rows(np.asarray(attributes, dtype=np.float64))
    nm = float(np.linalg.norm(m))
    nf = float(np.linalg.norm(f))
    degenerate = da or nm <= ZERO_NORM_EPS or nf <= ZERO_NORM_EPS
    mu = m / nm if nm > ZERO_NORM_EPS else np.zeros_like(m)
    fu = f / nf if nf > ZERO_NORM_EPS else np.zeros_like(f)
    sims_m = At @ mu
    sims_f = At @ fu
    rho, dr = spearman(sims_m, sims_f)
    return rho, degenerate or dr


def ect(
    snapshot: EmbeddingSnapshot,
    X: TokenSetLike,
    Y: TokenSetLike,
    attributes: TokenSetLike,
) -> float:
    """Embedding coherence test: Spearman correlation in [-1, 1].

    Ranks the attribute words by similarity to the means of X and of Y and
    correlates the two orderings; larger means less bias.
    """
    if len(as_tokens(attributes)) < 2:
        raise ValueError("ECT needs at least two attribute words")
    if len(as_tokens(X)) == 0 or len(as_tokens(Y)) == 0:
        raise ValueError("ECT target sets must be non-empty")
    value, _ = ect_from_vectors(
        get_vectors(snapshot, X),
        get_vectors(snapshot, Y),
        get_vectors(snapshot, attributes),
    )
    return value


def metric_report(
    snapshot: EmbeddingSnapshot,
    weat_sets: WeatSets,
    ect_attributes: TokenSetLike,
) -> MetricReport:
    """Joint WEAT + ECT report; ECT reuses the WEAT target sets as X, Y."""
    w, dw = weat_from_vectors(
        get_vectors(snapshot, weat_sets.x),
        get_vectors(snapshot, weat_sets.y),
        get_vectors(snapshot, weat_sets.a),
        get_vectors(snapshot, weat_sets.b),
    )
    e, de = ect_from_vectors(
        get_vectors(snapshot, weat_sets.x),
        get_vectors(snapshot, weat_sets.y),
        get_vectors(snapshot, ect_attributes),
    )
    attrs = as_tokens(ect_attributes)
    return MetricReport(
        weat=w,
        ect=e,
        degenerate=dw or de,
        snapshot_id=snapshot.snapshot_id,
        sets={
            "weat_x": list(weat_sets.x.tokens),
            "weat_y": list(weat_sets.y.tokens),
            "weat_a": list(weat_sets.a.tokens),
            "weat_b": list(weat_sets.b.tokens),
            "ect_attributes": list(attrs),
        },
    )
