"""Seeded synthetic corpus with planted jargon, for end-to-end checks.

The generator writes a corpus of notes built from two disjoint vocabularies
(lay words and jargon words), a lexicon that exposes only part of the jargon
as supervision, an embedding file where jargon words form their own
cluster, and a hidden gold list of every jargon term that occurs.
Planted phrases are always separated by stopwords, numbers or punctuation,
so the candidate set is known exactly from the generator's own bookkeeping.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .lexicons import EmbeddingTable, LexiconEntry, write_embeddings, write_lexicon

SEPARATORS = ("of", "the", "with", "was", "in", "to", "for", "on", "and", "is", "a", "her", "his", "no")
_LAY_SYLLABLES = ("ba", "ko", "mi", "ta", "lo", "pe", "su", "ri", "na", "do", "fe", "gu", "ho", "ja", "wi", "le")
_JARGON_ROOTS = ("neph", "cardi", "hepat", "myel", "oste", "derm", "gastr", "lymph", "angi", "pneum",
                 "thromb", "enter", "cyst", "arthr", "encephal", "hem", "leuk", "chol", "pyel", "onych")
_JARGON_SUFFIXES = ("itis", "osis", "emia", "ectomy", "opathy", "algia", "oma", "uria", "plasty", "ostomy")
_JARGON_INFIX = ("o", "a", "i", "ro", "eno", "ulo")
JARGON_TYPES = ("T046", "T047", "T061", "T121", "T184", "T191")
LAY_TYPES = ("T033", "T078", "T080", "T170")


@dataclass(frozen=True)
class SynthParams:
    seed: int = 42
    n_docs: int = 1000
    n_lay_words: int = 300
    n_jargon_words: int = 160
    n_terms: int = 700
    jargon_fraction: float = 0.3
    visible_fraction: float = 0.5
    sentences_per_doc: int = 6
    slots_per_sentence: int = 5
    jargon_slot_share: float = 0.25
    n_topics: int = 6
    topic_focus: float = 0.8
    dim: int = 16
    max_ngram: int = 4

    def validate(self) -> "SynthParams":
        for name in ("n_docs", "n_lay_words", "n_jargon_words", "n_terms", "sentences_per_doc",
                     "slots_per_sentence", "dim", "max_ngram", "n_topics"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("jargon_fraction", "visible_fraction", "jargon_slot_share", "topic_focus"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        return self


def _unique_words(n: int, make, taken: set[str]) -> list[str]:
    words = []
    while len(words) < n:
        w = make()
        if w not in taken:
            taken.add(w)
            words.append(w)
    return words


def _phrases(rng, words, n, lengths, probs, taken: set[tuple[str, ...]]) -> list[tuple[str, ...]]:
    out = []
    attempts = 0
    while len(out) < n and attempts < 100 * n:
        attempts += 1
        length = int(rng.choice(lengths, p=probs))
        phrase = tuple(words[i] for i in rng.choice(len(words), size=length, replace=False))
        if phrase not in taken:
            taken.add(phrase)
            out.append(phrase)
    return out


def _subgrams(phrase: tuple[str, ...], max_ngram: int):
    n = len(phrase)
    for length in range(1, min(n, max_ngram) + 1):
        for start in range(n - length + 1):
            yield phrase[start:start + length]


def generate(out_dir: str | Path, params: SynthParams = SynthParams()) -> dict:
    """Write a fixture tree under ``out_dir`` and return its manifest.

    Layout: ``corpus/*.txt``, ``lexicon.tsv``, ``embeddings.txt``,
    ``stopwords.txt``, ``stoplist.txt``, ``gold.txt``, ``pipeline.cfg`` and
    ``manifest.json``.
    """
    p = params.validate()
    rng = np.random.default_rng(p.seed)
    out = Path(out_dir)
    (out / "corpus").mkdir(parents=True, exist_ok=True)

    taken = set(SEPARATORS)
    lay_words = _unique_words(
        p.n_lay_words,
        lambda: "".join(rng.choice(_LAY_SYLLABLES, size=int(rng.integers(2, 4)))),
        taken,
    )
    jargon_words = _unique_words(
        p.n_jargon_words,
        lambda: str(rng.choice(_JARGON_ROOTS)) + str(rng.choice(_JARGON_INFIX)) * int(rng.integers(0, 2))
        + str(rng.choice(_JARGON_SUFFIXES)),
        taken,
    )

    n_jargon_terms = int(round(p.jargon_fraction * p.n_terms))
    seen: set[tuple[str, ...]] = set()
    jargon_terms = _phrases(rng, jargon_words, n_jargon_terms, [1, 2], [0.5, 0.5], seen) if n_jargon_terms else []
    lay_terms = _phrases(rng, lay_words, p.n_terms - n_jargon_terms, [1, 2, 3], [0.4, 0.4, 0.2], seen)

    # Zipf-like usage weights within each inventory.
    def zipf(n):
        w = 1.0 / np.arange(1, n + 1) ** 0.9
        return w[rng.permutation(n)] / w.sum()

    lay_w = zipf(len(lay_terms))
    jar_w = zipf(len(jargon_terms)) if jargon_terms else None
    jargon_share = p.jargon_slot_share if jargon_terms else 0.0
    # Each note has one diagnosis topic; jargon is mostly drawn from that topic's terms.
    jar_topic = rng.integers(0, p.n_topics, size=len(jargon_terms))
    topic_w = []
    for z in range(p.n_topics):
        w = np.where(jar_topic == z, jar_w, 0.0) if jargon_terms else None
        topic_w.append(w / w.sum() if w is not None and w.sum() > 0 else jar_w)

    emitted: dict[tuple[str, ...], int] = {}
    for d in range(p.n_docs):
        topic = int(rng.integers(0, p.n_topics))
        sentences = []
        for _ in range(p.sentences_per_doc):
            parts = []
            for slot in range(p.slots_per_sentence):
                if rng.random() < jargon_share:
                    w = topic_w[topic] if rng.random() < p.topic_focus else jar_w
                    phrase = jargon_terms[int(rng.choice(len(jargon_terms), p=w))]
                else:
                    phrase = lay_terms[int(rng.choice(len(lay_terms), p=lay_w))]
                emitted[phrase] = emitted.get(phrase, 0) + 1
                text = " ".join(phrase)
                if slot == 0 and rng.random() < 0.5:
                    text = text[0].upper() + text[1:]
                parts.append(text)
                if slot < p.slots_per_sentence - 1:
                    r = rng.random()
                    if r < 0.15:
                        parts.append(f"{rng.integers(1, 100)}.{rng.integers(0, 100):02d}")
                    elif r < 0.25:
                        parts[-1] += ","
                    else:
                        parts.append(str(rng.choice(SEPARATORS)))
            sentences.append(" ".join(parts) + ".")
        (out / "corpus" / f"note_{d:05d}.txt").write_text(" ".join(sentences) + "\n", encoding="utf-8")

    jargon_set = set(jargon_words)
    candidates: set[tuple[str, ...]] = set()
    for phrase in emitted:
        candidates.update(_subgrams(phrase, p.max_ngram))
    gold = sorted(" ".join(g) for g in candidates if g[0] in jargon_set)

    # Lexicon: visible jargon plus a share of lay terms marked as familiar.
    used_jargon = [t for t in jargon_terms if t in emitted]
    n_visible = int(round(p.visible_fraction * len(used_jargon)))
    if 0 < n_visible == len(used_jargon) and len(used_jargon) > 1:
        n_visible -= 1  # keep some jargon hidden so generalization is measurable
    visible = [used_jargon[i] for i in sorted(rng.choice(len(used_jargon), size=n_visible, replace=False))]
    entries = []
    for t in visible:
        types = set(rng.choice(JARGON_TYPES, size=int(rng.integers(1, 3)), replace=False))
        entries.append(LexiconEntry(" ".join(t), round(float(rng.uniform(0.05, 0.6)), 3), frozenset(types)))
    for t in lay_terms:
        if t in emitted and rng.random() < 0.4:
            types = {str(rng.choice(LAY_TYPES))}
            if rng.random() < 0.15:
                types.add(str(rng.choice(JARGON_TYPES)))
            entries.append(LexiconEntry(" ".join(t), round(float(rng.uniform(0.65, 1.0)), 3), frozenset(types)))
    entries.sort(key=lambda e: e.key)
    write_lexicon(entries, out / "lexicon.tsv")

    # Embeddings: two clusters; a few lay words drift toward the jargon side and ~3% of words are missing.
    lay_center = rng.normal(0.0, 1.0, p.dim)
    jar_center = lay_center + rng.normal(0.0, 1.0, p.dim) * 0.9
    vectors = {}
    for w in lay_words:
        if rng.random() < 0.03:
            continue
        center = jar_center if rng.random() < 0.05 else lay_center
        vectors[w] = center + rng.normal(0.0, 0.6, p.dim)
    for w in jargon_words:
        if rng.random() < 0.03:
            continue
        vectors[w] = jar_center + rng.normal(0.0, 0.6, p.dim)
    write_embeddings(EmbeddingTable(p.dim, vectors), out / "embeddings.txt")

    (out / "stopwords.txt").write_text("\n".join(sorted(SEPARATORS)) + "\n", encoding="utf-8")
    lay_unigram_tf = sorted(
        ((c, t[0]) for t, c in emitted.items() if len(t) == 1 and t[0] not in jargon_set), key=lambda x: (-x[0], x[1])
    )
    (out / "stoplist.txt").write_text("".join(f"{w}\n" for _, w in lay_unigram_tf[:20]), encoding="utf-8")
    (out / "gold.txt").write_text("".join(f"{g}\n" for g in gold), encoding="utf-8")
    (out / "pipeline.cfg").write_text(
        "\n".join([
            "# synthetic fixture",
            "corpus = corpus",
            "lexicon = lexicon.tsv",
            "embeddings = embeddings.txt",
            "stopwords = stopwords.txt",
            "stoplist = stoplist.txt",
            "gold = gold.txt",
            "out = out",
            f"max_ngram = {p.max_ngram}",
            "min_tf = 1",
            "k_folds = 10",
            f"seed = {p.seed}",
        ]) + "\n",
        encoding="utf-8",
    )
    manifest = {
        "params": asdict(p),
        "planted_candidates": len(candidates),
        "n_gold": len(gold),
        "n_visible_jargon": len(visible),
        "n_lexicon_entries": len(entries),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest
