"""ROC / ROC-AUC against gold labels and the PU metric curve."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .pu_rank import RankedList
from .terms import normalize_term

POSITIVE = "positive"
NEGATIVE = "negative"


class EvaluationError(ValueError):
    pass


@dataclass
class CurveSeries:
    kind: str  # "roc" or "pu"
    x: np.ndarray
    y: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def n_points(self) -> int:
        return len(self.x)


def read_gold_terms(path: str | Path) -> set[str]:
    """One important term per line, normalized for exact matching."""
    with open(path, encoding="utf-8") as fh:
        return {normalize_term(line) for line in fh if line.strip()}


def gold_labels(keys: Iterable[str], gold_terms: set[str]) -> dict[str, str]:
    """Exact-match labeling: a term is positive iff its key is a gold term."""
    return {k: POSITIVE if k in gold_terms else NEGATIVE for k in keys}


def roc_auc(scores: Mapping[str, float], gold: Mapping[str, str]) -> tuple[CurveSeries, float]:
    """ROC curve over all distinct thresholds and its trapezoidal area.

    Equal scores form a single threshold step, which is the same as giving
    tied positive/negative pairs half credit.
    """
    keys = [k for k in scores if k in gold]
    missing = set(scores) - set(gold)
    if missing:
        raise EvaluationError(f"{len(missing)} scored terms have no gold label (e.g. {sorted(missing)[0]!r})")
    s = np.array([scores[k] for k in keys], dtype=float)
    pos = np.array([gold[k] == POSITIVE for k in keys])
    n_pos = int(pos.sum())
    n_neg = len(pos) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise EvaluationError("ROC-AUC needs at least one positive and one negative gold term")

    order = np.argsort(-s, kind="mergesort")
    s, pos = s[order], pos[order]
    tp = np.cumsum(pos)
    fp = np.cumsum(~pos)
    # Last index of each run of equal scores.
    ends = np.r_[np.flatnonzero(np.diff(s) != 0), len(s) - 1]
    tpr = np.r_[0.0, tp[ends] / n_pos]
    fpr = np.r_[0.0, fp[ends] / n_neg]
    auc = float(np.sum((fpr[1:] - fpr[:-1]) * (tpr[1:] + tpr[:-1]) / 2.0))
    series = CurveSeries("roc", fpr, tpr, {"n_pos": n_pos, "n_neg": n_neg, "auc": auc})
    return series, auc


def pu_metric(true_positives: int, n_labeled: int, k: int, n: int) -> float:
    """``r^2 / Pr[system positive]`` with ``r = TP / |P|`` and ``Pr = k / N``."""
    r = true_positives / n_labeled
    return r * r * n / k


def pu_curve(ranking: RankedList | list[str], labeled_positives: Iterable[str], stride: int = 1) -> CurveSeries:
    """PU metric at each rank ``k`` (every ``stride``-th rank, always including ``N``)."""
    keys = ranking.keys if isinstance(ranking, RankedList) else list(ranking)
    positives = set(labeled_positives)
    if not positives:
        raise EvaluationError("PU metric needs a non-empty set of labeled positives")
    if not keys:
        raise EvaluationError("PU metric needs a non-empty ranking")
    n = len(keys)
    hits = np.cumsum([k in positives for k in keys])
    ks = np.arange(1, n + 1)
    r = hits / len(positives)
    pu = r * r * n / ks
    if stride > 1:
        sel = np.r_[np.arange(0, n, stride), n - 1] if (n - 1) % stride else np.arange(0, n, stride)
        ks, pu = ks[sel], pu[sel]
    return CurveSeries("pu", ks.astype(float), pu, {"n": n, "n_labeled": len(positives)})


def peak(series: CurveSeries) -> tuple[float, int]:
    """Largest PU value and the first rank where it occurs."""
    i = int(np.argmax(series.y))
    return float(series.y[i]), int(series.x[i])


def export_curve(series: CurveSeries, path: str | Path) -> None:
    header = "x,y" if series.kind == "roc" else "k,pu"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for x, y in zip(series.x, series.y):
            if series.kind == "pu":
                fh.write(f"{int(x)},{y:.6f}\n")
            else:
                fh.write(f"{x:.6f},{y:.6f}\n")


def summarize(ranking: RankedList, gold_terms: set[str]) -> dict:
    """``{auc, peak_pu, peak_k}`` for a ranking.

    AUC uses the list order against exact-match gold labels; the PU peak
    uses the ranking's own positive labels.
    """
    gold = gold_labels(ranking.keys, gold_terms)
    _, auc = roc_auc(ranking.rank_scores(), gold)
    positives = {r.key for r in ranking.records if r.label == "positive"}
    if positives:
        peak_pu, peak_k = peak(pu_curve(ranking, positives))
    else:
        peak_pu, peak_k = None, None
    return {"auc": auc, "peak_pu": peak_pu, "peak_k": peak_k}


def write_summary(summary: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
