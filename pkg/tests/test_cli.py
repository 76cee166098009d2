import json

import pytest

from jargonrank import synth
from jargonrank.cli import main
from jargonrank.config import ConfigError, parse_config
from jargonrank.pu_rank import read_ranking

RANKINGS = ["ranked", "ranked_post", "baseline_tfidf", "baseline_tfidf_post", "baseline_cvalue", "baseline_cvalue_post"]


@pytest.fixture(scope="module")
def small(tmp_path_factory):
    root = tmp_path_factory.mktemp("small")
    manifest = synth.generate(root, synth.SynthParams(seed=5, n_docs=200))
    return root, manifest


def _run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def ranked(small, tmp_path_factory):
    root, _ = small
    out = tmp_path_factory.mktemp("rank")
    assert _run("rank", "--config", root / "pipeline.cfg", "--out", out) == 0
    return out


class TestExtract:
    def test_count_matches_manifest(self, small, tmp_path):
        root, manifest = small
        assert _run("extract", "--config", root / "pipeline.cfg", "--out", tmp_path) == 0
        lines = (tmp_path / "candidates.tsv").read_text(encoding="utf-8").splitlines()
        assert lines[0].split("\t") == ["key", "length", "tf_total", "df"]
        assert len(lines) - 1 == manifest["planted_candidates"]

    def test_missing_corpus(self, tmp_path, capsys):
        cfg = tmp_path / "p.cfg"
        cfg.write_text("corpus = nowhere\n", encoding="utf-8")
        assert _run("extract", "--config", cfg, "--out", tmp_path / "o") == 1
        assert "jargonrank extract: error:" in capsys.readouterr().err


class TestRank:
    def test_outputs(self, ranked):
        for name in RANKINGS:
            assert (ranked / f"{name}.tsv").is_file()
        for name in ["candidates.tsv", "atr_scores.tsv", "features.tsv"]:
            assert (ranked / name).is_file()

    def test_rerun_byte_identical(self, small, ranked, tmp_path):
        root, _ = small
        assert _run("rank", "--config", root / "pipeline.cfg", "--out", tmp_path, "--workers", 4) == 0
        for name in RANKINGS:
            assert (tmp_path / f"{name}.tsv").read_bytes() == (ranked / f"{name}.tsv").read_bytes(), name

    def test_different_seed_changes_folds(self, small, ranked, tmp_path):
        root, _ = small
        assert _run("rank", "--config", root / "pipeline.cfg", "--out", tmp_path, "--seed", 9) == 0
        assert (tmp_path / "ranked.tsv").read_bytes() != (ranked / "ranked.tsv").read_bytes()

    def test_evaluate(self, small, ranked, capsys):
        root, _ = small
        assert _run("evaluate", "--config", root / "pipeline.cfg", "--out", ranked) == 0
        printed = capsys.readouterr().out
        for name in RANKINGS:
            summary = json.loads((ranked / f"{name}.summary.json").read_text())
            assert 0.0 <= summary["auc"] <= 1.0
            assert name in printed
        assert json.loads((ranked / "ranked.summary.json").read_text())["auc"] > 0.8

    def test_evaluate_single_class_gold(self, small, ranked, tmp_path, capsys):
        root, _ = small
        gold = tmp_path / "gold.txt"
        gold.write_text("\n".join(read_ranking(ranked / "ranked.tsv").keys) + "\n", encoding="utf-8")
        code = _run("evaluate", "--config", root / "pipeline.cfg", "--out", tmp_path,
                    "--gold", gold, "--ranking", ranked / "ranked.tsv")
        assert code != 0
        assert "ROC-AUC" in capsys.readouterr().err

    def test_curves(self, small, ranked):
        root, _ = small
        assert _run("curves", "--config", root / "pipeline.cfg", "--out", ranked) == 0
        for name in RANKINGS:
            assert (ranked / f"roc_{name}.csv").read_text().startswith("x,y\n")
        assert (ranked / "pu_ranked.csv").read_text().startswith("k,pu\n")
        for png in ["roc.png", "roc_post.png", "pu.png"]:
            assert (ranked / png).read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


class TestConfig:
    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="bogus"):
            parse_config("bogus = 1\n")

    def test_dotted_keys(self):
        cfg = parse_config("svm.c = 2.5\nk_folds = 5\n")
        assert cfg.svm_c == 2.5 and cfg.k_folds == 5

    def test_cli_reports_bad_config(self, tmp_path, capsys):
        cfg = tmp_path / "p.cfg"
        cfg.write_text("k_folds = many\n", encoding="utf-8")
        assert _run("rank", "--config", cfg) == 1
        assert "error" in capsys.readouterr().err


def test_synth_command(tmp_path, capsys):
    assert _run("synth", "--out", tmp_path / "s", "--n-docs", 20, "--seed", 1) == 0
    assert (tmp_path / "s" / "manifest.json").is_file()
    assert "planted candidates" in capsys.readouterr().out
