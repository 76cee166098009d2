"""Positive-unlabeled labeling, cross-fold ranking and post-processing.

Candidates found in the lexicon as jargon are positives; everything else is
unlabeled and treated as negative. Each fold's held-out terms are scored by
a calibrated classifier trained on the remaining folds, and the per-fold
probabilities are merged into one global ranking.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .classifier import ClassifierConfig, train_classifier
from .features import FeatureVector, fit_scaler
from .lexicons import JARGON_THRESHOLD, Lexicon, is_jargon
from .terms import CandidateTerm

log = logging.getLogger(__name__)

POSITIVE = "positive"
UNLABELED = "unlabeled"
DEMOTE_TOKENS = frozenset({"not", "no", "and", "or"})


class RankingError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledTerm:
    key: str
    label: str
    features: FeatureVector


@dataclass(frozen=True)
class RankRecord:
    rank: int
    key: str
    score: float
    label: str
    fold: int = -1
    post_action: str = "none"


@dataclass
class RankedList:
    records: list[RankRecord]
    removed: list[RankRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def keys(self) -> list[str]:
        return [r.key for r in self.records]

    def scores(self) -> dict[str, float]:
        return {r.key: r.score for r in self.records}

    def rank_scores(self) -> dict[str, float]:
        """Scores that reproduce the list order exactly (``N - rank + 1``)."""
        n = len(self.records)
        return {r.key: float(n - r.rank + 1) for r in self.records}


def label_positive_unlabeled(
    vectors: Sequence[FeatureVector], lexicon: Lexicon, threshold: float = JARGON_THRESHOLD
) -> list[LabeledTerm]:
    """Positive iff the term is lexicon jargon at ``threshold``; unlabeled otherwise."""
    return [
        LabeledTerm(v.key, POSITIVE if is_jargon(v.key, lexicon, threshold) else UNLABELED, v)
        for v in vectors
    ]


def rank_by_scores(scores: dict[str, float], labels: dict[str, str] | None = None, fold: int = -1) -> RankedList:
    """Order by descending score, ties broken by term key."""
    labels = labels or {}
    order = sorted(scores, key=lambda k: (-scores[k], k))
    return RankedList(
        [RankRecord(i, k, float(scores[k]), labels.get(k, UNLABELED), fold) for i, k in enumerate(order, 1)]
    )


def assign_folds(labels: Sequence[str], k_folds: int, seed: int) -> np.ndarray:
    """Seeded stratified fold assignment.

    Positives then unlabeled terms are each shuffled and dealt round-robin,
    continuing the deal across the two groups, so fold sizes differ by at
    most one and every fold gets its share of positives.
    """
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    folds = np.empty(len(labels), dtype=int)
    offset = 0
    for label in (POSITIVE, UNLABELED):
        idx = np.flatnonzero(labels == label)
        idx = idx[rng.permutation(len(idx))]
        folds[idx] = (np.arange(len(idx)) + offset) % k_folds
        offset += len(idx)
    return folds


def _score_fold(k, X, y, folds, cfg, seed, max_train_unlabeled):
    test = folds == k
    train_idx = np.flatnonzero(~test)
    ytr = y[train_idx]
    neg = train_idx[ytr < 0]
    if max_train_unlabeled is not None and len(neg) > max_train_unlabeled:
        rng = np.random.default_rng([seed, k, 1])
        keep = np.sort(rng.choice(len(neg), size=max_train_unlabeled, replace=False))
        train_idx = np.sort(np.concatenate([train_idx[ytr > 0], neg[keep]]))
    scaler = fit_scaler(X[train_idx])
    clf = train_classifier(scaler.transform(X[train_idx]), y[train_idx], cfg, seed=seed * 1_000 + k)
    return k, clf.predict_proba(scaler.transform(X[test]))


def rank_crossfold(
    terms: Sequence[LabeledTerm],
    k_folds: int = 10,
    seed: int = 0,
    classifier: ClassifierConfig = ClassifierConfig(),
    max_train_unlabeled: int | None = 20_000,
    workers: int = 1,
) -> RankedList:
    """Score every term once from a model trained on the other folds and merge.

    Per fold: the scaler is fitted on the training folds only, unlabeled
    training terms are subsampled to ``max_train_unlabeled``, then a
    calibrated classifier scores the held-out fold. Probabilities from all
    folds are compared directly in the merged ranking.
    """
    n = len(terms)
    if k_folds < 2:
        raise RankingError("k_folds must be >= 2")
    if n < k_folds:
        raise RankingError(f"need at least k_folds={k_folds} terms, got {n}")
    labels = [t.label for t in terms]
    y = np.where(np.asarray(labels) == POSITIVE, 1, -1)
    n_pos = int((y > 0).sum())
    if n_pos == 0 or n_pos == n:
        raise RankingError("cross-fold ranking needs both positive and unlabeled terms")
    folds = assign_folds(labels, k_folds, seed)
    for k in range(k_folds):
        train = folds != k
        if not (y[train] > 0).any():
            raise RankingError(f"training split for fold {k} has no positives; reduce k_folds")
        if not (y[train] < 0).any():
            raise RankingError(f"training split for fold {k} has no unlabeled terms; reduce k_folds")
    X = np.vstack([t.features.values for t in terms])

    args = [(k, X, y, folds, classifier, seed, max_train_unlabeled) for k in range(k_folds)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda a: _score_fold(*a), args))
    else:
        results = [_score_fold(*a) for a in args]

    scores = np.empty(n)
    for k, p in sorted(results, key=lambda r: r[0]):
        scores[folds == k] = p
        log.info("fold %d scored %d terms", k, int((folds == k).sum()))
    order = sorted(range(n), key=lambda i: (-scores[i], terms[i].key))
    return RankedList(
        [
            RankRecord(r, terms[i].key, float(scores[i]), labels[i], int(folds[i]))
            for r, i in enumerate(order, 1)
        ]
    )


def postprocess(
    ranking: RankedList, stoplist: Iterable[str] = (), demote_tokens: Iterable[str] = DEMOTE_TOKENS
) -> RankedList:
    """Drop stoplist terms and move compound terms containing a demote token to the bottom.

    Relative order is preserved inside the kept, demoted and removed groups
    and ranks are renumbered from 1.
    """
    stop = set(stoplist)
    demote = set(demote_tokens)
    kept, demoted, removed = [], [], []
    for r in ranking.records:
        words = r.key.split()
        if r.key in stop:
            removed.append(replace(r, post_action="removed"))
        elif len(words) > 1 and demote.intersection(words):
            demoted.append(replace(r, post_action="demoted"))
        else:
            kept.append(replace(r, post_action="none"))
    records = [replace(r, rank=i) for i, r in enumerate(kept + demoted, 1)]
    removed = [replace(r, rank=0) for r in removed]
    return RankedList(records, list(ranking.removed) + removed)


def generate_stoplist(candidates: Sequence[CandidateTerm], n: int = 100, medical_keys: Iterable[str] = ()) -> list[str]:
    """The ``n`` most frequent single-word candidates outside ``medical_keys``."""
    medical = set(medical_keys)
    singles = [c for c in candidates if c.length == 1 and c.key not in medical]
    singles.sort(key=lambda c: (-c.tf_total, c.key))
    return [c.key for c in singles[:max(0, n)]]


def write_ranking(ranking: RankedList, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("rank\tterm\tscore\tlabel\tfold\tpost_action\n")
        for r in ranking.records:
            fh.write(f"{r.rank}\t{r.key}\t{r.score:.6f}\t{r.label}\t{r.fold}\t{r.post_action}\n")


def read_ranking(path: str | Path) -> RankedList:
    records = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header != ["rank", "term", "score", "label", "fold", "post_action"]:
            raise RankingError(f"{path}: unexpected header {header}")
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 6:
                raise RankingError(f"{path}: line {lineno}: expected 6 columns")
            rank, key, score, label, fold, action = parts
            records.append(RankRecord(int(rank), key, float(score), label, int(fold), action))
    return RankedList(records)
