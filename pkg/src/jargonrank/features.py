"""Feature vectors for candidate terms and leakage-free min-max scaling."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .atr import AtrScores
from .lexicons import EmbeddingTable, Lexicon, semantic_types_of
from .terms import CandidateTerm


@dataclass
class FeatureVector:
    key: str
    values: np.ndarray
    oov: bool = False


def feature_names(type_codes: Sequence[str], dim: int) -> list[str]:
    return ["tfidf", "cvalue"] + [f"sem:{t}" for t in type_codes] + [f"emb:{i}" for i in range(dim)]


def term_embedding(term: CandidateTerm, table: EmbeddingTable) -> tuple[np.ndarray, bool]:
    """Mean of the in-vocabulary word vectors; zeros and ``oov=True`` if none exist."""
    vecs = [table.vectors[w] for w in term.tokens if w in table.vectors]
    if not vecs:
        return np.zeros(table.dim), True
    return np.mean(vecs, axis=0), False


def assemble_features(
    term: CandidateTerm,
    atr: AtrScores,
    lexicon: Lexicon,
    table: EmbeddingTable,
    type_codes: Sequence[str] | None = None,
) -> FeatureVector:
    """Lay out ``[tfidf, cvalue, semantic-type indicators, embedding]`` for one term.

    ``type_codes`` fixes the indicator block; it defaults to every type code
    in the lexicon, sorted.
    """
    if term.key not in atr.tfidf or term.key not in atr.cvalue:
        raise KeyError(f"no ATR scores for term {term.key!r}")
    if type_codes is None:
        type_codes = lexicon.type_codes
    types = semantic_types_of(term.key, lexicon)
    indicators = [1.0 if t in types else 0.0 for t in type_codes]
    emb, oov = term_embedding(term, table)
    values = np.concatenate([[atr.tfidf[term.key], atr.cvalue[term.key]], indicators, emb])
    return FeatureVector(term.key, values, oov)


def feature_matrix(vectors: Sequence[FeatureVector]) -> np.ndarray:
    if not vectors:
        return np.zeros((0, 0))
    return np.vstack([v.values for v in vectors])


@dataclass
class Scaler:
    min: np.ndarray
    max: np.ndarray

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        span = self.max - self.min
        safe = np.where(span > 0, span, 1.0)
        out = np.clip((X - self.min) / safe, 0.0, 1.0)
        return np.where(span > 0, out, 0.0)


def fit_scaler(train) -> Scaler:
    """Per-component min and max over the training vectors only."""
    X = train if isinstance(train, np.ndarray) else feature_matrix(train)
    if X.shape[0] == 0:
        raise ValueError("cannot fit a scaler on an empty training set")
    return Scaler(X.min(axis=0), X.max(axis=0))


def apply_scaler(scaler: Scaler, v) -> np.ndarray:
    """Map components to ``[0, 1]``; clamps out-of-range values, constant components become 0."""
    if isinstance(v, FeatureVector):
        v = v.values
    return scaler.transform(v)


def write_feature_matrix(vectors: Sequence[FeatureVector], names: Sequence[str], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("key\t" + "\t".join(names) + "\n")
        for v in vectors:
            fh.write(v.key + "\t" + "\t".join(f"{x:.6f}" for x in v.values) + "\n")
