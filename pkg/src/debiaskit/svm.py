"""Deterministic linear SVM trainer (hinge loss, L2 regularization).

Dual coordinate descent in the style of Hsieh et al. (2008), with a *fixed*
visit order instead of random permutations so that identical inputs always
produce bit-identical weights.  The bias term is handled by augmenting each
example with a constant feature, which folds the intercept into the
regularizer (the usual liblinear trick).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SvmTrainingError(RuntimeError):
    """Solver failed to converge within the epoch cap."""


@dataclass(frozen=True)
class SvmModel:
    w: np.ndarray          # (d,) normal of the decision boundary
    b: float               # intercept: decision value is <w, x> + b
    converged: bool
    epochs: int

    def decision(self, X: np.ndarray) -> np.ndarray:
        return X @ self.w + self.b

    def accuracy(self, X: np.ndarray, y: np.ndarray) -> float:
        return float(np.mean(np.sign(self.decision(X)) == y))


def train_linear_svm(
    X: np.ndarray,
    y: np.ndarray,
    c: float = 1.0,
    max_epochs: int = 10_000,
    tol: float = 1e-6,
) -> SvmModel:
    """Fit sign(<w,x> + b) to labels y in {-1, +1}.

    Raises SvmTrainingError if the projected gradient has not dropped below
    ``tol`` after ``max_epochs`` sweeps.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, d = X.shape
    if n == 0:
        raise ValueError("no training examples")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be -1 or +1")

    Xa = np.hstack([X, np.ones((n, 1))])
    qii = np.einsum("ij,ij->i", Xa, Xa)
    alpha = np.zeros(n)
    w = np.zeros(d + 1)

    converged = False
    epoch = 0
    for epoch in range(1, max_epochs + 1):
        max_pg = 0.0
        for i in range(n):
            g = y[i] * float(w @ Xa[i]) - 1.0
            a = alpha[i]
            if a <= 0.0:
                pg = min(g, 0.0)
            elif a >= c:
                pg = max(g, 0.0)
            else:
                pg = g
            if abs(pg) > max_pg:
                max_pg = abs(pg)
            if pg != 0.0:
                new_a = min(max(a - g / qii[i], 0.0), c)
                if new_a != a:
                    w += (new_a - a) * y[i] * Xa[i]
                    alpha[i] = new_a
        if max_pg < tol:
            converged = True
            break
    if not converged:
        raise SvmTrainingError(
            f"dual coordinate descent did not converge in {max_epochs} epochs"
        )
    return SvmModel(w=w[:d].copy(), b=float(w[d]), converged=converged, epochs=epoch)


def best_threshold_accuracy(scores: np.ndarray, y: np.ndarray) -> float:
    """Best accuracy of sign(score - t) over all thresholds t.

    Orientation is fixed (positive scores predict +1); only the cut point is
    optimized.  Used as the 'best achievable accuracy along this normal'
    measure when deciding whether a separating direction is still useful.
    """
    scores = np.asarray(scores, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n = len(scores)
    order = np.argsort(scores, kind="stable")
    s_sorted = scores[order]
    y_sorted = y[order]
    # threshold below everything: all predicted +1
    best = float(np.sum(y_sorted > 0))
    # moving the threshold above s_sorted[i] flips prediction i to -1
    correct = best
    for i in range(n):
        correct += 1.0 if y_sorted[i] < 0 else -1.0
        # only valid as a threshold if the next score is strictly larger
        if i + 1 < n and s_sorted[i + 1] == s_sorted[i]:
            continue
        if correct > best:
            best = correct
    return best / n
