"""Corpus-level TF*IDF and C-Value termhood scores."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .terms import CandidateTerm, NestingIndex, build_nesting_index

CVALUE_VARIANTS = ("tf_weighted", "frantzi")


@dataclass
class AtrScores:
    tfidf: dict[str, float]
    cvalue: dict[str, float]


def idf(term: CandidateTerm, corpus_size: int) -> float:
    """Natural-log inverse document frequency, ``log(|D| / df)``."""
    df = term.df
    if df == 0:
        raise ValueError(f"term {term.key!r} does not occur in the corpus")
    if df > corpus_size:
        raise ValueError(f"term {term.key!r} has df={df} > corpus size {corpus_size}")
    return math.log(corpus_size / df)


def tfidf_corpus(term: CandidateTerm, corpus_size: int) -> float:
    """Per-document TF*IDF summed over the corpus.

    The idf factor does not depend on the document, so the sum collapses to
    ``tf_total * idf``.
    """
    return term.tf_total * idf(term, corpus_size)


def cvalue(
    term: CandidateTerm,
    nesting: NestingIndex,
    variant: str = "tf_weighted",
) -> float:
    """C-Value of ``term``.

    ``variant="tf_weighted"`` subtracts the mean parent frequency after weighting by
    ``log2(length)``; ``variant="frantzi"`` subtracts it inside the weight,
    as in the original C-Value formulation. Parent frequencies come from
    ``nesting.tf``.
    """
    weight = math.log2(term.length)
    tf = term.tf_total
    parents = nesting.parents.get(term.key, ())
    if not parents:
        return weight * tf
    penalty = sum(nesting.tf[b] for b in parents) / len(parents)
    if variant == "tf_weighted":
        return weight * tf - penalty
    if variant == "frantzi":
        return weight * (tf - penalty)
    raise ValueError(f"unknown C-Value variant {variant!r}; expected one of {CVALUE_VARIANTS}")


def score_terms(
    candidates: Sequence[CandidateTerm],
    corpus_size: int,
    variant: str = "tf_weighted",
    nesting: NestingIndex | None = None,
) -> AtrScores:
    """TF*IDF and C-Value for every candidate against a corpus of ``corpus_size`` documents."""
    if nesting is None:
        nesting = build_nesting_index(candidates)
    return AtrScores(
        tfidf={c.key: tfidf_corpus(c, corpus_size) for c in candidates},
        cvalue={c.key: cvalue(c, nesting, variant) for c in candidates},
    )


def write_scores(scores: AtrScores, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("key\ttfidf\tcvalue\n")
        for key in sorted(scores.tfidf):
            fh.write(f"{key}\t{scores.tfidf[key]:.6f}\t{scores.cvalue[key]:.6f}\n")


def read_scores(path: str | Path) -> AtrScores:
    tfidf, cval = {}, {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if header != ["key", "tfidf", "cvalue"]:
            raise ValueError(f"{path}: unexpected header {header}")
        for line in fh:
            key, t, c = line.rstrip("\n").split("\t")
            tfidf[key] = float(t)
            cval[key] = float(c)
    return AtrScores(tfidf, cval)
