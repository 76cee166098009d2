"""Corpus loading and rule-based tokenization."""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

WORD = "word"
NUMBER = "number"
PUNCTUATION = "punctuation"
STOPWORD = "stopword"

# Letters, digits, then any single other non-space character.
_TOKEN_RE = re.compile(r"(?P<word>[^\W\d_]+)|(?P<number>\d+)|(?P<punct>[^\w\s]|_)")


class CorpusError(ValueError):
    """Raised for unreadable, malformed or inconsistent corpus input."""


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    span: tuple[int, int]
    cls: str


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    tokens: tuple[Token, ...] = field(default=())


def tokenize(text: str, stopwords: Iterable[str] = frozenset()) -> list[Token]:
    """Split ``text`` into word, number and punctuation tokens.

    Alphabetic runs become words, digit runs become numbers and every other
    non-whitespace character is a one-character punctuation token. A token
    whose lowercased form is in ``stopwords`` is classed as a stopword.
    Spans are character offsets into ``text``.
    """
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        surface = m.group(0)
        normalized = surface.lower()
        if normalized in stop:
            cls = STOPWORD
        elif m.lastgroup == "word":
            cls = WORD
        elif m.lastgroup == "number":
            cls = NUMBER
        else:
            cls = PUNCTUATION
        tokens.append(Token(surface, normalized, (m.start(), m.end()), cls))
    return tokens


def read_stopwords(path: str | Path) -> frozenset[str]:
    """One term per line; blank lines and ``#`` comments are ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                words.add(line.lower())
    return frozenset(words)


def default_stopwords() -> frozenset[str]:
    """The generic English stopword list bundled with the package."""
    return read_stopwords(Path(__file__).parent / "data" / "stopwords_en.txt")


def _read_txt_dir(path: Path) -> list[tuple[str, str]]:
    raw = []
    for f in sorted(path.glob("*.txt")):
        try:
            raw.append((f.stem, f.read_text(encoding="utf-8")))
        except (OSError, UnicodeDecodeError) as exc:
            raise CorpusError(f"cannot read {f}: {exc}") from exc
    return raw


def _read_jsonl(path: Path) -> list[tuple[str, str]]:
    raw = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from exc
            if (
                not isinstance(rec, dict)
                or not isinstance(rec.get("id"), str)
                or not isinstance(rec.get("text"), str)
            ):
                raise CorpusError(f'{path}: line {lineno}: expected string fields "id" and "text"')
            raw.append((rec["id"], rec["text"]))
    return raw


def load_corpus(
    path: str | Path,
    format: str = "txt-dir",
    stopwords: Iterable[str] = frozenset(),
    workers: int = 1,
) -> list[Document]:
    """Load and tokenize a corpus, returning documents sorted by id.

    Parameters
    ----------
    path : str or Path
        A directory of ``*.txt`` files (``format="txt-dir"``, id is the file
        stem) or a JSON-lines file with ``id`` and ``text`` fields
        (``format="jsonl"``).
    stopwords : iterable of str
        Normalized stopwords used to class tokens.
    workers : int
        Number of threads used for tokenization.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus path does not exist: {path}")
    if format == "txt-dir":
        if not path.is_dir():
            raise CorpusError(f"txt-dir corpus must be a directory: {path}")
        raw = _read_txt_dir(path)
    elif format == "jsonl":
        if not path.is_file():
            raise CorpusError(f"jsonl corpus must be a file: {path}")
        raw = _read_jsonl(path)
    else:
        raise CorpusError(f"unknown corpus format {format!r} (expected txt-dir or jsonl)")

    seen = set()
    for doc_id, _ in raw:
        if not doc_id:
            raise CorpusError("document ids must be non-empty")
        if doc_id in seen:
            raise CorpusError(f"duplicate document id {doc_id!r}")
        seen.add(doc_id)

    stop = frozenset(stopwords)
    raw.sort(key=lambda r: r[0])
    if workers > 1 and len(raw) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            token_lists = list(pool.map(lambda r: tokenize(r[1], stop), raw))
    else:
        token_lists = [tokenize(text, stop) for _, text in raw]
    return [Document(doc_id, text, tuple(toks)) for (doc_id, text), toks in zip(raw, token_lists)]
