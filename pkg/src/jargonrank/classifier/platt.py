"""Platt sigmoid calibration of decision values.

Fits ``p(f) = 1 / (1 + exp(A f + B))`` by minimizing cross-entropy against
the smoothed targets ``(N+ + 1) / (N+ + 2)`` and ``1 / (N- + 2)``, using the
Newton method with backtracking line search of Lin, Lin and Weng (2007).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PlattCalibration:
    A: float
    B: float

    def __call__(self, f) -> np.ndarray:
        return sigmoid_proba(np.asarray(f, dtype=float), self.A, self.B)


def sigmoid_proba(f: np.ndarray, A: float, B: float) -> np.ndarray:
    """``1 / (1 + exp(A f + B))`` without overflow."""
    z = A * f + B
    out = np.empty_like(z, dtype=float)
    nonneg = z >= 0
    ez = np.exp(-z[nonneg])
    out[nonneg] = ez / (1.0 + ez)
    out[~nonneg] = 1.0 / (1.0 + np.exp(z[~nonneg]))
    return out


def platt_targets(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y)
    n_pos = int((y > 0).sum())
    n_neg = len(y) - n_pos
    return np.where(y > 0, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))


def platt_nll(f, t, A: float, B: float) -> float:
    """Cross-entropy of targets ``t`` under the sigmoid ``(A, B)``."""
    z = A * np.asarray(f, dtype=float) + B
    # -[t log p + (1-t) log(1-p)] with p = 1/(1+e^z) equals t z + log(1 + e^-z).
    return float(np.sum(t * z + np.logaddexp(0.0, -z)))


def platt_fit(
    decision_values,
    y,
    max_iter: int = 100,
    grad_tol: float = 1e-8,
    min_step: float = 1e-10,
    sigma: float = 1e-12,
) -> PlattCalibration:
    """Fit ``(A, B)`` to decision values and {+1, -1} labels.

    Newton steps on the 2x2 problem, each followed by an Armijo backtracking
    line search, until the gradient norm drops below ``grad_tol``.
    """
    f = np.asarray(decision_values, dtype=float)
    y = np.asarray(y)
    if f.shape != y.shape:
        raise ValueError("decision values and labels must have the same length")
    n_pos = int((y > 0).sum())
    n_neg = len(y) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("Platt calibration needs both classes")
    t = platt_targets(y)

    A, B = 0.0, float(np.log((n_neg + 1.0) / (n_pos + 1.0)))
    fval = platt_nll(f, t, A, B)
    for _ in range(max_iter):
        p = sigmoid_proba(f, A, B)
        d2 = p * (1.0 - p)
        h11 = sigma + np.dot(f * f, d2)
        h22 = sigma + d2.sum()
        h21 = np.dot(f, d2)
        d1 = t - p
        g1 = np.dot(f, d1)
        g2 = d1.sum()
        if np.hypot(g1, g2) <= grad_tol:
            break
        det = h11 * h22 - h21 * h21
        dA = -(h22 * g1 - h21 * g2) / det
        dB = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * dA + g2 * dB
        step = 1.0
        while step >= min_step:
            nA, nB = A + step * dA, B + step * dB
            nf = platt_nll(f, t, nA, nB)
            if nf < fval + 1e-4 * step * gd:
                A, B, fval = nA, nB, nf
                break
            step /= 2.0
        else:
            # No representable decrease left; the current point is as good as it gets.
            break
    else:
        warnings.warn("Platt calibration reached the iteration cap", RuntimeWarning)
    return PlattCalibration(float(A), float(B))
