"""Command-line entry point.

Subcommands mirror the pipeline stages and exchange TSV/CSV files through
the output directory:

    extract   candidates.tsv (+ stoplist_suggested.txt when a lexicon is set)
    score     atr_scores.tsv
    rank      ranked.tsv, ranked_post.tsv and the TF*IDF / C-Value baselines
    evaluate  <ranking>.summary.json for each ranking, against the gold list
    curves    roc_/pu_ CSVs per ranking plus PNG figures
    synth     a seeded synthetic fixture tree
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import atr, evaluation, features, lexicons, pu_rank, synth, terms
from .config import ConfigError, PipelineConfig, load_config, with_overrides
from .corpus import CorpusError, default_stopwords, load_corpus, read_stopwords

log = logging.getLogger("jargonrank")

RANKING_FILES = (
    "ranked.tsv",
    "ranked_post.tsv",
    "baseline_tfidf.tsv",
    "baseline_tfidf_post.tsv",
    "baseline_cvalue.tsv",
    "baseline_cvalue_post.tsv",
)


class UsageError(Exception):
    pass


def _require(cfg: PipelineConfig, *names: str) -> None:
    for name in names:
        value = getattr(cfg, name)
        if value is None:
            raise UsageError(f"config key {name!r} is required for this command")
        if not Path(value).exists():
            raise UsageError(f"{name} not found: {value}")


def _stopwords(cfg: PipelineConfig) -> frozenset[str]:
    return read_stopwords(cfg.stopwords) if cfg.stopwords else default_stopwords()


def _corpus(cfg: PipelineConfig, path=None):
    _require(cfg, "corpus")
    return load_corpus(path or cfg.corpus, cfg.corpus_format, _stopwords(cfg), cfg.workers)


def _candidates(cfg: PipelineConfig):
    docs = _corpus(cfg)
    return docs, terms.extract_candidates(docs, cfg.max_ngram, cfg.min_tf)


def _atr_scores(cfg: PipelineConfig, docs, cands) -> atr.AtrScores:
    if cfg.background_corpus is None:
        return atr.score_terms(cands, len(docs), cfg.cvalue_variant)
    _require(cfg, "background_corpus")
    bg = load_corpus(cfg.background_corpus, cfg.corpus_format, _stopwords(cfg), cfg.workers)
    recounted = terms.count_terms(bg, [c.key for c in cands], cfg.max_ngram)
    absent = [c.key for c in recounted if c.df == 0]
    if absent:
        raise UsageError(f"{len(absent)} candidates do not occur in the background corpus (e.g. {absent[0]!r})")
    return atr.score_terms(recounted, len(bg), cfg.cvalue_variant)


def cmd_extract(cfg: PipelineConfig, args) -> None:
    _, cands = _candidates(cfg)
    terms.write_candidates(cands, cfg.out / "candidates.tsv")
    log.info("wrote %d candidates to %s", len(cands), cfg.out / "candidates.tsv")
    if cfg.lexicon is not None:
        lex = lexicons.load_lexicon(cfg.lexicon)
        stop = pu_rank.generate_stoplist(cands, 100, lex.keys())
        (cfg.out / "stoplist_suggested.txt").write_text("".join(f"{w}\n" for w in stop), encoding="utf-8")


def cmd_score(cfg: PipelineConfig, args) -> None:
    docs, cands = _candidates(cfg)
    scores = _atr_scores(cfg, docs, cands)
    atr.write_scores(scores, cfg.out / "atr_scores.tsv")
    log.info("scored %d candidates", len(cands))


def cmd_rank(cfg: PipelineConfig, args) -> None:
    _require(cfg, "lexicon", "embeddings")
    docs, cands = _candidates(cfg)
    terms.write_candidates(cands, cfg.out / "candidates.tsv")
    scores = _atr_scores(cfg, docs, cands)
    atr.write_scores(scores, cfg.out / "atr_scores.tsv")

    lex = lexicons.load_lexicon(cfg.lexicon)
    table = lexicons.load_embeddings(cfg.embeddings)
    codes = lex.type_codes
    vectors = [features.assemble_features(c, scores, lex, table, codes) for c in cands]
    features.write_feature_matrix(vectors, features.feature_names(codes, table.dim), cfg.out / "features.tsv")

    labeled = pu_rank.label_positive_unlabeled(vectors, lex, cfg.familiarity_threshold)
    n_pos = sum(t.label == pu_rank.POSITIVE for t in labeled)
    log.info("%d positive / %d unlabeled terms", n_pos, len(labeled) - n_pos)
    ranking = pu_rank.rank_crossfold(
        labeled, cfg.k_folds, cfg.seed, cfg.classifier_config(), cfg.max_train_unlabeled, cfg.workers
    )
    labels = {t.key: t.label for t in labeled}
    stoplist = read_stopwords(cfg.stoplist) if cfg.stoplist else frozenset()
    outputs = {
        "ranked": ranking,
        "baseline_tfidf": pu_rank.rank_by_scores(scores.tfidf, labels),
        "baseline_cvalue": pu_rank.rank_by_scores(scores.cvalue, labels),
    }
    for name, r in outputs.items():
        pu_rank.write_ranking(r, cfg.out / f"{name}.tsv")
        pu_rank.write_ranking(pu_rank.postprocess(r, stoplist, cfg.demote_tokens), cfg.out / f"{name}_post.tsv")
    log.info("wrote rankings to %s", cfg.out)


def _rankings(cfg: PipelineConfig, args) -> dict[str, pu_rank.RankedList]:
    paths = [Path(p) for p in args.ranking] if args.ranking else [
        cfg.out / f for f in RANKING_FILES if (cfg.out / f).exists()
    ]
    if not paths:
        raise UsageError(f"no ranking files found in {cfg.out}; run `rank` first or pass --ranking")
    return {p.name.removesuffix(".tsv"): pu_rank.read_ranking(p) for p in paths}


def _gold(cfg: PipelineConfig, args) -> set[str]:
    gold = Path(args.gold) if args.gold else cfg.gold
    if gold is None or not Path(gold).exists():
        raise UsageError(f"gold labels file not found: {gold}")
    return evaluation.read_gold_terms(gold)


def cmd_evaluate(cfg: PipelineConfig, args) -> None:
    gold = _gold(cfg, args)
    for name, r in _rankings(cfg, args).items():
        summary = evaluation.summarize(r, gold)
        evaluation.write_summary(summary, cfg.out / f"{name}.summary.json")
        peak = "n/a" if summary["peak_pu"] is None else f"{summary['peak_pu']:.4f} at k={summary['peak_k']}"
        print(f"{name}\tauc={summary['auc']:.4f}\tpeak_pu={peak}")


def cmd_curves(cfg: PipelineConfig, args) -> None:
    from . import plotting

    gold = _gold(cfg, args)
    roc_raw, roc_post, pu_curves = {}, {}, {}
    for name, r in _rankings(cfg, args).items():
        series, _ = evaluation.roc_auc(r.rank_scores(), evaluation.gold_labels(r.keys, gold))
        evaluation.export_curve(series, cfg.out / f"roc_{name}.csv")
        (roc_post if name.endswith("_post") else roc_raw)[name] = series
        positives = {x.key for x in r.records if x.label == pu_rank.POSITIVE}
        if positives and not name.endswith("_post"):
            pu = evaluation.pu_curve(r, positives, cfg.pu_stride)
            evaluation.export_curve(pu, cfg.out / f"pu_{name}.csv")
            pu_curves[name] = pu
    if roc_raw:
        plotting.plot_roc(roc_raw, cfg.out / "roc.png", "ROC without post-processing")
    if roc_post:
        plotting.plot_roc(roc_post, cfg.out / "roc_post.png", "ROC with post-processing")
    if pu_curves:
        plotting.plot_pu(pu_curves, cfg.out / "pu.png")


def cmd_synth(cfg: PipelineConfig, args) -> None:
    params = synth.SynthParams(
        seed=args.seed if args.seed is not None else 42,
        n_docs=args.n_docs,
        jargon_fraction=args.jargon_fraction,
        visible_fraction=args.visible_fraction,
    )
    out = Path(args.out) if args.out else Path("synth")
    manifest = synth.generate(out, params)
    print(f"wrote fixture to {out} ({manifest['planted_candidates']} planted candidates, {manifest['n_gold']} gold)")


COMMANDS = {
    "extract": cmd_extract,
    "score": cmd_score,
    "rank": cmd_rank,
    "evaluate": cmd_evaluate,
    "curves": cmd_curves,
    "synth": cmd_synth,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value pipeline config file")
    common.add_argument("--seed", type=int, help="overrides the config seed")
    common.add_argument("--out", help="output directory (overrides the config)")
    common.add_argument("--workers", type=int, help="worker threads (overrides the config)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="jargonrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("extract", "score", "rank"):
        sub.add_parser(name, parents=[common])
    for name in ("evaluate", "curves"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--gold", help="gold important terms, one per line")
        p.add_argument("--ranking", action="append", help="ranking TSV (repeatable); default: all in --out")
    p = sub.add_parser("synth", parents=[common])
    p.add_argument("--n-docs", type=int, default=1000)
    p.add_argument("--jargon-fraction", type=float, default=0.3)
    p.add_argument("--visible-fraction", type=float, default=0.5)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "synth":
            cmd_synth(None, args)
            return 0
        cfg = with_overrides(
            load_config(args.config),
            seed=args.seed,
            out=Path(args.out) if args.out else None,
            workers=args.workers,
        )
        cfg.out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](cfg, args)
    except (UsageError, ConfigError, CorpusError, lexicons.LexiconError, pu_rank.RankingError,
            evaluation.EvaluationError, ValueError, OSError) as exc:
        print(f"jargonrank {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
