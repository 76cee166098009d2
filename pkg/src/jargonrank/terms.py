"""Candidate term extraction and the nesting index used by C-Value."""

from __future__ import annotations

import csv
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import WORD, Document


@dataclass
class CandidateTerm:
    key: str
    tokens: tuple[str, ...]
    tf_by_doc: dict[str, int] = field(default_factory=dict)
    surface: str = ""

    @property
    def length(self) -> int:
        return len(self.tokens)

    @property
    def tf_total(self) -> int:
        return sum(self.tf_by_doc.values())

    @property
    def df(self) -> int:
        return sum(1 for c in self.tf_by_doc.values() if c > 0)


def normalize_term(surface: str) -> str:
    """Lowercase, collapse internal whitespace and trim."""
    return " ".join(surface.lower().split())


def _word_runs(doc: Document) -> Iterable[list[int]]:
    run: list[int] = []
    for i, tok in enumerate(doc.tokens):
        if tok.cls == WORD:
            run.append(i)
        elif run:
            yield run
            run = []
    if run:
        yield run


def count_ngrams(doc: Document, max_ngram: int) -> tuple[Counter, dict[tuple[str, ...], str]]:
    """Count every word n-gram (length 1..max_ngram) in one document.

    Returns the counts keyed by token tuple, plus the first surface form of
    each n-gram in document order.
    """
    counts: Counter = Counter()
    surfaces: dict[tuple[str, ...], str] = {}
    toks = doc.tokens
    for run in _word_runs(doc):
        words = [toks[i].normalized for i in run]
        for start in range(len(run)):
            for n in range(1, min(max_ngram, len(run) - start) + 1):
                gram = tuple(words[start:start + n])
                counts[gram] += 1
                if gram not in surfaces:
                    first, last = toks[run[start]], toks[run[start + n - 1]]
                    surfaces[gram] = doc.text[first.span[0]:last.span[1]]
    return counts, surfaces


def extract_candidates(
    corpus: Sequence[Document], max_ngram: int = 4, min_tf: int = 2
) -> list[CandidateTerm]:
    """Extract candidate terms from a tokenized corpus.

    A candidate is any run of 1..``max_ngram`` consecutive word tokens; any
    stopword, number or punctuation token breaks a run. Occurrences are
    counted at every window position, so nested n-grams are counted inside
    their longer parents. Candidates with fewer than ``min_tf`` occurrences
    are dropped. The result is sorted by key.
    """
    if max_ngram < 1:
        raise ValueError("max_ngram must be >= 1")
    if min_tf < 1:
        raise ValueError("min_tf must be >= 1")

    by_doc: dict[tuple[str, ...], dict[str, int]] = defaultdict(dict)
    surfaces: dict[tuple[str, ...], str] = {}
    for doc in sorted(corpus, key=lambda d: d.id):
        counts, doc_surfaces = count_ngrams(doc, max_ngram)
        for gram, c in counts.items():
            by_doc[gram][doc.id] = c
        for gram, s in doc_surfaces.items():
            surfaces.setdefault(gram, s)

    candidates = []
    for gram, tf in by_doc.items():
        if sum(tf.values()) >= min_tf:
            candidates.append(CandidateTerm(" ".join(gram), gram, dict(sorted(tf.items())), surfaces[gram]))
    candidates.sort(key=lambda c: c.key)
    return candidates


def count_terms(corpus: Sequence[Document], keys: Iterable[str], max_ngram: int) -> list[CandidateTerm]:
    """Recount the given term keys against another (background) corpus.

    Keys that never occur in ``corpus`` come back with empty ``tf_by_doc``.
    """
    wanted = {tuple(k.split()): k for k in keys}
    longest = max((len(g) for g in wanted), default=1)
    by_doc: dict[tuple[str, ...], dict[str, int]] = {g: {} for g in wanted}
    for doc in sorted(corpus, key=lambda d: d.id):
        counts, _ = count_ngrams(doc, min(max_ngram, longest))
        for gram in wanted.keys() & counts.keys():
            by_doc[gram][doc.id] = counts[gram]
    return sorted(
        (CandidateTerm(wanted[g], g, tf, wanted[g]) for g, tf in by_doc.items()),
        key=lambda c: c.key,
    )


@dataclass
class NestingIndex:
    parents: dict[str, set[str]]
    tf: dict[str, int] = field(default_factory=dict)

    def is_nested(self, key: str) -> bool:
        return bool(self.parents.get(key))


def build_nesting_index(candidates: Sequence[CandidateTerm]) -> NestingIndex:
    """Map every candidate to the longer candidates that contain it contiguously."""
    by_tokens = {c.tokens: c.key for c in candidates}
    if len(by_tokens) != len(candidates):
        raise ValueError("candidate keys must be unique")
    parents: dict[str, set[str]] = {c.key: set() for c in candidates}
    for c in candidates:
        toks = c.tokens
        n = len(toks)
        seen = set()
        for length in range(1, n):
            for start in range(n - length + 1):
                sub = toks[start:start + length]
                if sub in seen:
                    continue
                seen.add(sub)
                key = by_tokens.get(sub)
                if key is not None:
                    parents[key].add(c.key)
    return NestingIndex(parents, {c.key: c.tf_total for c in candidates})


def write_candidates(candidates: Sequence[CandidateTerm], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["key", "length", "tf_total", "df"])
        for c in candidates:
            w.writerow([c.key, c.length, c.tf_total, c.df])


def read_candidate_keys(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh, delimiter="\t")
        if reader.fieldnames is None or "key" not in reader.fieldnames:
            raise ValueError(f"{path}: missing 'key' column")
        return [row["key"] for row in reader]
