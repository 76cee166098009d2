"""Soft-margin kernel SVM trained by sequential minimal optimization.

The solver works on the dual

    min_a  1/2 a^T Q a - sum(a)    s.t.  y^T a = 0,  0 <= a_i <= C_i

with ``Q_ij = y_i y_j K(x_i, x_j)`` and per-example upper bounds
``C_i = C * class_weight[y_i]``. Each step picks the maximal violating pair
and solves the two-variable subproblem exactly.
"""

from __future__ import annotations

import logging
import warnings
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)

KKT_TOL = 1e-3
_TAU = 1e-12
_FULL_KERNEL_MAX = 4000


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Kernel:
    name: str = "rbf"
    gamma: float = 1.0

    def __post_init__(self):
        if self.name not in ("rbf", "linear"):
            raise ValueError(f"unsupported kernel {self.name!r}")
        if self.name == "rbf" and not self.gamma > 0:
            raise ValueError("gamma must be > 0")

    def __call__(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        G = A @ B.T
        if self.name == "linear":
            return G
        d2 = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * G
        return np.exp(-self.gamma * np.maximum(d2, 0.0))


@dataclass
class SvmModel:
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i
    bias: float
    kernel: Kernel
    C: float
    class_weight: dict[int, float] = field(default_factory=lambda: {1: 1.0, -1: 1.0})
    support_index: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=int))
    n_iter: int = 0
    converged: bool = True

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1]

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        if len(self.dual_coef) == 0:
            return np.full(X.shape[0], self.bias)
        out = np.empty(X.shape[0])
        # Chunked to bound the kernel block's memory.
        step = max(1, 2_000_000 // max(1, len(self.dual_coef)))
        for s in range(0, X.shape[0], step):
            out[s:s + step] = self.kernel(X[s:s + step], self.support_vectors) @ self.dual_coef + self.bias
        return out


class _KernelColumns:
    """Kernel columns on demand, with the full matrix precomputed for small problems."""

    def __init__(self, X: np.ndarray, kernel: Kernel, cache_mb: float = 256.0):
        self.X = X
        self.kernel = kernel
        n = X.shape[0]
        self.full = kernel(X, X) if n <= _FULL_KERNEL_MAX else None
        self.diag = np.diag(self.full).copy() if self.full is not None else np.einsum(
            "ij,ij->i", X, X) if kernel.name == "linear" else np.ones(n)
        self.capacity = max(2, int(cache_mb * 2**20 / (8 * n)))
        self.cache: OrderedDict[int, np.ndarray] = OrderedDict()

    def __getitem__(self, i: int) -> np.ndarray:
        if self.full is not None:
            return self.full[i]
        col = self.cache.get(i)
        if col is None:
            col = self.kernel(self.X, self.X[i:i + 1])[:, 0]
            self.cache[i] = col
            if len(self.cache) > self.capacity:
                self.cache.popitem(last=False)
        else:
            self.cache.move_to_end(i)
        return col


@dataclass
class SmoResult:
    alpha: np.ndarray
    bias: float
    n_iter: int
    converged: bool
    gap: float
    objective: list[float]


def _bounds(y: np.ndarray, C: float, class_weight: dict[int, float]) -> np.ndarray:
    return np.where(y > 0, C * class_weight.get(1, 1.0), C * class_weight.get(-1, 1.0))


def smo(
    X: np.ndarray,
    y: np.ndarray,
    kernel: Kernel,
    C: float = 1.0,
    class_weight: dict[int, float] | None = None,
    tol: float = KKT_TOL,
    max_iter: int = 10_000_000,
    track_objective: bool = False,
) -> SmoResult:
    """Solve the SVM dual with maximal-violating-pair SMO.

    Stops when ``max_{I_up}(-y G) - min_{I_low}(-y G) <= tol``. With
    ``track_objective`` the dual objective ``sum(a) - 1/2 a^T Q a`` is recorded
    after every step.
    """
    n = X.shape[0]
    Cb = _bounds(y, C, class_weight or {})
    cols = _KernelColumns(X, kernel)
    alpha = np.zeros(n)
    # s_t = -y_t * grad_t; at alpha = 0, grad = -1.
    s = y.astype(float).copy()
    pos = y > 0
    objective = [0.0] if track_objective else []

    converged = False
    it = 0
    gap = np.inf
    while it < max_iter:
        up = np.where(pos, alpha < Cb, alpha > 0)
        low = np.where(pos, alpha > 0, alpha < Cb)
        s_up = np.where(up, s, -np.inf)
        s_low = np.where(low, s, np.inf)
        i = int(np.argmax(s_up))
        j = int(np.argmin(s_low))
        gap = s_up[i] - s_low[j]
        if gap <= tol:
            converged = True
            break
        Ki, Kj = cols[i], cols[j]
        eta = cols.diag[i] + cols.diag[j] - 2.0 * Ki[j]
        if eta <= 0:
            eta = _TAU
        lam = gap / eta
        lam = min(lam, Cb[i] - alpha[i] if y[i] > 0 else alpha[i])
        lam = min(lam, alpha[j] if y[j] > 0 else Cb[j] - alpha[j])

        ai = alpha[i] + y[i] * lam
        aj = alpha[j] - y[j] * lam
        # Snap to the box so the active-set tests stay exact.
        ai = 0.0 if ai < 1e-14 * Cb[i] else (Cb[i] if ai > Cb[i] * (1 - 1e-14) else ai)
        aj = 0.0 if aj < 1e-14 * Cb[j] else (Cb[j] if aj > Cb[j] * (1 - 1e-14) else aj)
        di = (ai - alpha[i]) * y[i]
        dj = (aj - alpha[j]) * y[j]
        alpha[i], alpha[j] = ai, aj
        s -= di * Ki + dj * Kj
        it += 1
        if track_objective:
            # Q a = grad + 1, so sum(a) - 1/2 a^T Q a = -1/2 a^T (grad - 1).
            grad = -y * s
            objective.append(-0.5 * float(alpha @ (grad - 1.0)))

    if not converged:
        warnings.warn(f"SMO stopped at the iteration cap ({max_iter}) with gap {gap:.3g}", ConvergenceWarning)

    free = (alpha > 0) & (alpha < Cb)
    if free.any():
        bias = float(s[free].mean())
    else:
        up = np.where(pos, alpha < Cb, alpha > 0)
        low = np.where(pos, alpha > 0, alpha < Cb)
        hi = s[up].max() if up.any() else s[low].min()
        lo = s[low].min() if low.any() else hi
        bias = 0.5 * (hi + lo)
    return SmoResult(alpha, bias, it, converged, float(gap), objective)


def _check_training_data(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ValueError("X must be 2-D with one row per label")
    if not np.isfinite(X).all():
        raise ValueError("features must be finite")
    if not np.isin(y, (-1, 1)).all():
        raise ValueError("labels must be +1 or -1")
    if len(np.unique(y)) < 2:
        raise ValueError("training data must contain both classes")
    return X, y.astype(int)


def train_svm(
    X,
    y,
    C: float = 1.0,
    gamma: float | None = None,
    class_weight: dict[int, float] | None = None,
    kernel: str = "rbf",
    tol: float = KKT_TOL,
    max_iter: int = 10_000_000,
) -> SvmModel:
    """Fit a binary SVM.

    Parameters
    ----------
    X : array-like, shape (n, d)
    y : array-like of {+1, -1}
    C : float
        Soft-margin penalty.
    gamma : float, optional
        RBF width; defaults to ``1 / d``.
    class_weight : dict, optional
        Multiplier on ``C`` per label.
    """
    X, y = _check_training_data(X, y)
    if not C > 0:
        raise ValueError("C must be > 0")
    if gamma is None:
        gamma = 1.0 / X.shape[1]
    k = Kernel(kernel, float(gamma))
    cw = {1: 1.0, -1: 1.0, **(class_weight or {})}
    res = smo(X, y, k, C, cw, tol=tol, max_iter=max_iter)
    sv = res.alpha > 0
    log.debug("SMO: %d iterations, %d support vectors, gap %.2e", res.n_iter, sv.sum(), res.gap)
    return SvmModel(
        support_vectors=X[sv].copy(),
        dual_coef=(res.alpha * y)[sv],
        bias=res.bias,
        kernel=k,
        C=float(C),
        class_weight=cw,
        support_index=np.flatnonzero(sv),
        n_iter=res.n_iter,
        converged=res.converged,
    )


def kkt_residuals(model: SvmModel, X, y) -> np.ndarray:
    """Per-example violation of the soft-margin optimality conditions.

    ``alpha = 0`` needs ``y f >= 1``, ``alpha = C_i`` needs ``y f <= 1`` and
    free examples need ``y f = 1``. ``X`` and ``y`` must be the training
    set in its original order.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(int)
    margin = y * model.decision_function(X)
    alpha = dual_alphas(model, X.shape[0])
    Cb = _bounds(y, model.C, model.class_weight)
    at_zero = alpha <= 0
    at_c = alpha >= Cb
    res = np.abs(margin - 1.0)
    res = np.where(at_zero, np.maximum(0.0, 1.0 - margin), res)
    res = np.where(at_c, np.maximum(0.0, margin - 1.0), res)
    return res


def dual_alphas(model: SvmModel, n_train: int) -> np.ndarray:
    """Dense ``alpha`` over the training set (0 for non-support vectors)."""
    alpha = np.zeros(n_train)
    alpha[model.support_index] = np.abs(model.dual_coef)
    return alpha
