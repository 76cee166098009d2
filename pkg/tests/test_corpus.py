import json

import pytest
from hypothesis import given, strategies as st

from jargonrank.corpus import CorpusError, default_stopwords, load_corpus, tokenize


def _pairs(tokens):
    return [(t.normalized, t.cls) for t in tokens]


class TestTokenize:
    def test_sentence(self):
        toks = tokenize("Her creatinine rose.", {"her"})
        assert _pairs(toks) == [
            ("her", "stopword"),
            ("creatinine", "word"),
            ("rose", "word"),
            (".", "punctuation"),
        ]
        assert toks[0].surface == "Her"

    def test_empty(self):
        assert tokenize("") == []

    def test_decimal_splits(self):
        assert _pairs(tokenize("4.41")) == [("4", "number"), (".", "punctuation"), ("41", "number")]

    def test_hyphen_and_digits(self):
        assert [t.surface for t in tokenize("chem-8 now")] == ["chem", "-", "8", "now"]

    @given(st.text(max_size=200))
    def test_spans_reconstruct_text(self, text):
        toks = tokenize(text)
        pos = 0
        rebuilt = []
        for t in toks:
            start, end = t.span
            assert pos <= start < end
            assert text[start:end] == t.surface
            assert text[pos:start].strip() == ""
            rebuilt.append(text[pos:start])
            rebuilt.append(t.surface)
            pos = end
        rebuilt.append(text[pos:])
        assert "".join(rebuilt) == text

    @given(st.text(max_size=100), st.sets(st.sampled_from(["the", "a", "of", "x"])))
    def test_normalized_and_stopword_class(self, text, stop):
        toks = tokenize(text, stop)
        for t in toks:
            assert t.normalized == t.surface.lower()
            assert (t.cls == "stopword") == (t.normalized in stop)
        assert tokenize(text, stop) == toks


class TestLoadCorpus:
    def test_txt_dir(self, tmp_path):
        (tmp_path / "b.txt").write_text("y", encoding="utf-8")
        (tmp_path / "a.txt").write_text("x", encoding="utf-8")
        docs = load_corpus(tmp_path)
        assert [d.id for d in docs] == ["a", "b"]

    def test_empty_dir(self, tmp_path):
        assert load_corpus(tmp_path) == []

    def test_empty_file_has_no_tokens(self, tmp_path):
        (tmp_path / "e.txt").write_text("", encoding="utf-8")
        (doc,) = load_corpus(tmp_path)
        assert doc.tokens == ()

    def test_jsonl_duplicate_id(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "n1", "text": "a"}\n{"id": "n1", "text": "b"}\n', encoding="utf-8")
        with pytest.raises(CorpusError, match="duplicate"):
            load_corpus(p, "jsonl")

    def test_jsonl_malformed_line_number(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text('{"id": "n1", "text": "a"}\n{oops\n', encoding="utf-8")
        with pytest.raises(CorpusError, match="line 2"):
            load_corpus(p, "jsonl")

    def test_jsonl_sorted(self, tmp_path):
        p = tmp_path / "c.jsonl"
        p.write_text("\n".join(json.dumps({"id": i, "text": i}) for i in ["z", "m", "a"]), encoding="utf-8")
        assert [d.id for d in load_corpus(p, "jsonl")] == ["a", "m", "z"]

    def test_missing_path(self, tmp_path):
        with pytest.raises(CorpusError):
            load_corpus(tmp_path / "nope")

    def test_workers_do_not_change_result(self, tmp_path):
        for i in range(8):
            (tmp_path / f"n{i}.txt").write_text(f"note {i} with Renal scan.", encoding="utf-8")
        stop = default_stopwords()
        assert load_corpus(tmp_path, stopwords=stop, workers=4) == load_corpus(tmp_path, stopwords=stop)
