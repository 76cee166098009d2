"""L2-regularized logistic regression, used as a natively probabilistic fallback."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit


@dataclass
class LogisticModel:
    coef: np.ndarray
    intercept: float

    @property
    def n_features(self) -> int:
        return len(self.coef)

    def decision_function(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        return X @ self.coef + self.intercept

    def predict_proba(self, X) -> np.ndarray:
        return expit(self.decision_function(X))


def train_logistic(X, y, C: float = 1.0, class_weight: dict[int, float] | None = None) -> LogisticModel:
    """Minimize ``1/2 |w|^2 + C * sum_i c_i log(1 + exp(-y_i (w x_i + b)))`` with L-BFGS."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(float)
    if len(np.unique(y)) < 2:
        raise ValueError("training data must contain both classes")
    cw = class_weight or {}
    c = C * np.where(y > 0, cw.get(1, 1.0), cw.get(-1, 1.0))
    d = X.shape[1]

    def objective(theta):
        w, b = theta[:d], theta[d]
        m = y * (X @ w + b)
        loss = 0.5 * w @ w + np.sum(c * np.logaddexp(0.0, -m))
        r = -c * y * expit(-m)
        grad = np.concatenate([w + X.T @ r, [r.sum()]])
        return loss, grad

    res = minimize(objective, np.zeros(d + 1), jac=True, method="L-BFGS-B", options={"maxiter": 1000})
    return LogisticModel(res.x[:d].copy(), float(res.x[d]))
