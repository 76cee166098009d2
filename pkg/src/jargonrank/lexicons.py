"""Familiarity lexicon, embedding table and the lookups built on them."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .terms import normalize_term

JARGON_THRESHOLD = 0.6


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class LexiconEntry:
    key: str
    familiarity: float
    semantic_types: frozenset[str]


class Lexicon(dict):
    """Term key -> :class:`LexiconEntry`."""

    @property
    def type_codes(self) -> list[str]:
        codes = set()
        for entry in self.values():
            codes |= entry.semantic_types
        return sorted(codes)


def load_lexicon(path: str | Path) -> Lexicon:
    """Read a lexicon TSV with columns ``term``, ``familiarity``, ``semantic_types``.

    ``semantic_types`` is a comma-separated list of type codes and may be
    empty. Terms are normalized with :func:`normalize_term`.
    """
    lex = Lexicon()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
        missing = {"term", "familiarity", "semantic_types"} - set(reader.fieldnames or ())
        if missing:
            raise LexiconError(f"{path}: missing column(s) {', '.join(sorted(missing))}")
        for lineno, row in enumerate(reader, start=2):
            key = normalize_term(row["term"] or "")
            if not key:
                raise LexiconError(f"{path}: line {lineno}: empty term")
            try:
                fam = float(row["familiarity"])
            except (TypeError, ValueError):
                raise LexiconError(f"{path}: line {lineno}: familiarity {row['familiarity']!r} is not a number")
            if not 0.0 <= fam <= 1.0:
                raise LexiconError(f"{path}: line {lineno}: familiarity {fam} outside [0, 1]")
            if key in lex:
                raise LexiconError(f"{path}: line {lineno}: duplicate term {key!r}")
            types = frozenset(t.strip() for t in (row["semantic_types"] or "").split(",") if t.strip())
            lex[key] = LexiconEntry(key, fam, types)
    return lex


def write_lexicon(entries, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("term\tfamiliarity\tsemantic_types\n")
        for e in entries:
            fh.write(f"{e.key}\t{e.familiarity:g}\t{','.join(sorted(e.semantic_types))}\n")


def is_jargon(key: str, lexicon: Lexicon, threshold: float = JARGON_THRESHOLD) -> bool:
    """True when ``key`` is in the lexicon with familiarity at or below ``threshold``."""
    entry = lexicon.get(key)
    return entry is not None and entry.familiarity <= threshold


def semantic_types_of(key: str, lexicon: Lexicon) -> frozenset[str]:
    """Types of the exact lexicon match, else of the head noun (last word)."""
    entry = lexicon.get(key)
    if entry is not None:
        return entry.semantic_types
    head = key.rsplit(" ", 1)[-1]
    entry = lexicon.get(head)
    if entry is not None:
        return entry.semantic_types
    return frozenset()


@dataclass
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]

    def __contains__(self, word: str) -> bool:
        return word in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Read word2vec text format: a ``<vocab_size> <dim>`` header, then one word per line."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise LexiconError(f"{path}: header must be '<vocab_size> <dim>'")
        try:
            vocab_size, dim = int(header[0]), int(header[1])
        except ValueError:
            raise LexiconError(f"{path}: non-integer header {header}")
        if vocab_size < 0 or dim <= 0:
            raise LexiconError(f"{path}: invalid header {header}")
        vectors = {}
        count = 0
        for lineno, line in enumerate(fh, start=2):
            parts = line.rstrip("\n").split(" ")
            if not line.strip():
                continue
            count += 1
            if count > vocab_size:
                raise LexiconError(f"{path}: more than {vocab_size} vectors")
            word, values = parts[0], [p for p in parts[1:] if p]
            if len(values) != dim:
                raise LexiconError(f"{path}: line {lineno}: expected {dim} components, got {len(values)}")
            try:
                vec = np.array([float(v) for v in values])
            except ValueError:
                raise LexiconError(f"{path}: line {lineno}: non-numeric component")
            if not all(math.isfinite(v) for v in vec):
                raise LexiconError(f"{path}: line {lineno}: non-finite component")
            if word in vectors:
                raise LexiconError(f"{path}: line {lineno}: duplicate word {word!r}")
            vectors[word] = vec
    if count != vocab_size:
        raise LexiconError(f"{path}: header declares {vocab_size} vectors, found {count}")
    return EmbeddingTable(dim, vectors)


def write_embeddings(table: EmbeddingTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(table.vectors)} {table.dim}\n")
        for word, vec in table.vectors.items():
            fh.write(word + " " + " ".join(f"{v:.6f}" for v in vec) + "\n")
