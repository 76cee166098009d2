"""Probabilistic binary classifiers: calibrated RBF SVM (default) or logistic regression."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .logistic import LogisticModel, train_logistic
from .platt import PlattCalibration, platt_fit, sigmoid_proba
from .svm import Kernel, SvmModel, kkt_residuals, smo, train_svm

__all__ = [
    "ClassifierConfig",
    "Kernel",
    "LogisticModel",
    "PlattCalibration",
    "SvmModel",
    "TrainedClassifier",
    "kkt_residuals",
    "load_model",
    "platt_fit",
    "predict_proba",
    "save_model",
    "smo",
    "train_classifier",
    "train_logistic",
    "train_svm",
]

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ClassifierConfig:
    kind: str = "svm"
    C: float = 1.0
    gamma: float | None = None  # None -> 1 / n_features
    kernel: str = "rbf"
    balance_classes: bool = True
    platt_cv: int = 5  # 0 fits the sigmoid on training decision values


def predict_proba(model, calibration: PlattCalibration | None, x) -> np.ndarray | float:
    """Calibrated probability of the positive class for one vector or a matrix of rows."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    f = model.decision_function(x)
    if calibration is None:
        p = model.predict_proba(x)
    else:
        p = sigmoid_proba(f, calibration.A, calibration.B)
    return float(p[0]) if single else p


@dataclass
class TrainedClassifier:
    model: SvmModel | LogisticModel
    calibration: PlattCalibration | None

    def decision_function(self, X) -> np.ndarray:
        return self.model.decision_function(X)

    def predict_proba(self, X) -> np.ndarray:
        return predict_proba(self.model, self.calibration, np.atleast_2d(X))


def _class_weight(y: np.ndarray, balance: bool) -> dict[int, float]:
    if not balance:
        return {1: 1.0, -1: 1.0}
    n_pos = int((y > 0).sum())
    return {1: (len(y) - n_pos) / n_pos, -1: 1.0}


def _cv_decision_values(X, y, cfg: ClassifierConfig, cw, folds: int, seed: int) -> np.ndarray:
    # Stratified split so every internal training set sees both classes.
    rng = np.random.default_rng(seed)
    fold_of = np.empty(len(y), dtype=int)
    offset = 0
    for label in (1, -1):
        idx = np.flatnonzero(y == label)
        idx = idx[rng.permutation(len(idx))]
        fold_of[idx] = (np.arange(len(idx)) + offset) % folds
        offset += len(idx)
    f = np.empty(len(y))
    for k in range(folds):
        test = fold_of == k
        train = ~test
        if not test.any():
            continue
        if len(np.unique(y[train])) < 2:
            return None
        m = train_svm(X[train], y[train], cfg.C, cfg.gamma or 1.0 / X.shape[1], cw, cfg.kernel)
        f[test] = m.decision_function(X[test])
    return f


def train_classifier(X, y, cfg: ClassifierConfig = ClassifierConfig(), seed: int = 0) -> TrainedClassifier:
    """Train the configured classifier and its calibration on ``(X, y)``.

    With ``cfg.platt_cv > 1`` the sigmoid is fitted on out-of-fold decision
    values from an internal stratified split seeded by ``seed``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(int)
    cw = _class_weight(y, cfg.balance_classes)
    if cfg.kind == "logistic":
        return TrainedClassifier(train_logistic(X, y, cfg.C, cw), None)
    if cfg.kind != "svm":
        raise ValueError(f"unknown classifier kind {cfg.kind!r}")
    gamma = cfg.gamma or 1.0 / X.shape[1]
    model = train_svm(X, y, cfg.C, gamma, cw, cfg.kernel)
    f = None
    if cfg.platt_cv > 1 and min((y > 0).sum(), (y < 0).sum()) >= cfg.platt_cv:
        f = _cv_decision_values(X, y, cfg, cw, cfg.platt_cv, seed)
    if f is None:
        f = model.decision_function(X)
    return TrainedClassifier(model, platt_fit(f, y))


def save_model(clf: TrainedClassifier, path: str | Path) -> None:
    """Write a versioned JSON dump; floats use repr so loading is exact."""
    m = clf.model
    if isinstance(m, SvmModel):
        body = {
            "type": "svm",
            "kernel": {"name": m.kernel.name, "gamma": m.kernel.gamma},
            "C": m.C,
            "class_weight": {str(k): v for k, v in m.class_weight.items()},
            "bias": m.bias,
            "dual_coef": m.dual_coef.tolist(),
            "support_vectors": m.support_vectors.tolist(),
            "n_features": m.n_features,
        }
    else:
        body = {"type": "logistic", "coef": m.coef.tolist(), "intercept": m.intercept}
    if clf.calibration is not None:
        body["calibration"] = {"A": clf.calibration.A, "B": clf.calibration.B}
    body["format_version"] = MODEL_FORMAT_VERSION
    Path(path).write_text(json.dumps(body, indent=1) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> TrainedClassifier:
    body = json.loads(Path(path).read_text(encoding="utf-8"))
    if body.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported model format version {body.get('format_version')!r}")
    cal = body.get("calibration")
    cal = PlattCalibration(cal["A"], cal["B"]) if cal else None
    if body["type"] == "svm":
        sv = np.array(body["support_vectors"], dtype=float).reshape(-1, body["n_features"])
        model = SvmModel(
            support_vectors=sv,
            dual_coef=np.array(body["dual_coef"], dtype=float),
            bias=body["bias"],
            kernel=Kernel(body["kernel"]["name"], body["kernel"]["gamma"]),
            C=body["C"],
            class_weight={int(k): v for k, v in body["class_weight"].items()},
        )
    elif body["type"] == "logistic":
        model = LogisticModel(np.array(body["coef"], dtype=float), body["intercept"])
    else:
        raise ValueError(f"{path}: unknown model type {body['type']!r}")
    return TrainedClassifier(model, cal)
