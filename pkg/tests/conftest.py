import math

import numpy as np
import pytest

from jargonrank.corpus import Document, tokenize

VOCAB = ["pain", "back", "chest", "kidney", "disease", "chronic", "renal", "scan", "acute", "edema"]
STOP = ["the", "of", "and", "no"]


def random_corpus(seed, max_docs=20, max_tokens=50):
    """Random documents plus the raw token streams they were built from.

    Returns ``(docs, streams, stopwords)``; each stream is the list of
    emitted tokens, so oracles can count without going through the tokenizer.
    """
    rng = np.random.default_rng(seed)
    n_docs = int(rng.integers(1, max_docs + 1))
    docs, streams = [], {}
    for d in range(n_docs):
        n = int(rng.integers(0, max_tokens + 1))
        stream = []
        for _ in range(n):
            r = rng.random()
            if r < 0.75:
                stream.append(str(rng.choice(VOCAB[: int(rng.integers(3, len(VOCAB) + 1))])))
            elif r < 0.88:
                stream.append(str(rng.choice(STOP)))
            elif r < 0.94:
                stream.append(",")
            else:
                stream.append(str(rng.integers(0, 99)))
        doc_id = f"d{d:02d}"
        text = " ".join(stream)
        docs.append(Document(doc_id, text, tuple(tokenize(text, STOP))))
        streams[doc_id] = stream
    return docs, streams, set(STOP)


def oracle_word_runs(stream, stopwords):
    runs, run = [], []
    for tok in stream:
        if tok.isalpha() and tok not in stopwords:
            run.append(tok)
        else:
            if run:
                runs.append(run)
            run = []
    if run:
        runs.append(run)
    return runs


def oracle_tf(stream, stopwords, words):
    """Occurrences of ``words`` as a contiguous slice of any stopword-free run."""
    n = len(words)
    count = 0
    for run in oracle_word_runs(stream, stopwords):
        for i in range(len(run) - n + 1):
            if run[i:i + n] == list(words):
                count += 1
    return count


def oracle_tfidf(key, streams, stopwords):
    words = key.split()
    tf = {d: oracle_tf(s, stopwords, words) for d, s in streams.items()}
    df = sum(1 for c in tf.values() if c > 0)
    idf = math.log(len(streams) / df)
    return sum(c * idf for c in tf.values())


def oracle_cvalue(key, all_keys, tf_total, variant):
    """C-Value straight from the formula, with nesting found by padded substring search."""
    padded = f" {key} "
    parents = [b for b in all_keys if b != key and padded in f" {b} "]
    weight = math.log2(len(key.split()))
    if not parents:
        return weight * tf_total[key]
    mean_parent = sum(tf_total[b] for b in parents) / len(parents)
    if variant == "tf_weighted":
        return weight * tf_total[key] - mean_parent
    return weight * (tf_total[key] - mean_parent)


def oracle_auc(pos_scores, neg_scores):
    """Mann-Whitney: fraction of positive/negative pairs ordered correctly, ties count 1/2."""
    total = 0.0
    for p in pos_scores:
        for n in neg_scores:
            total += 1.0 if p > n else 0.5 if p == n else 0.0
    return total / (len(pos_scores) * len(neg_scores))


@pytest.fixture(scope="session")
def synth_fixture(tmp_path_factory):
    from jargonrank import synth

    out = tmp_path_factory.mktemp("synth")
    manifest = synth.generate(out, synth.SynthParams(seed=42))
    return out, manifest


ACCEPTANCE_RESULTS: dict[int, tuple[str, bool]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        desc, ok = ACCEPTANCE_RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {desc}")
