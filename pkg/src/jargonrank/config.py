"""Pipeline configuration read from ``key = value`` text files."""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .classifier import ClassifierConfig
from .pu_rank import DEMOTE_TOKENS


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    corpus: Path | None = None
    corpus_format: str = "txt-dir"
    background_corpus: Path | None = None
    lexicon: Path | None = None
    embeddings: Path | None = None
    stopwords: Path | None = None
    stoplist: Path | None = None
    gold: Path | None = None
    out: Path = Path("out")

    max_ngram: int = 4
    min_tf: int = 2
    k_folds: int = 10
    seed: int = 0
    workers: int = 1
    familiarity_threshold: float = 0.6
    classifier: str = "svm"
    svm_c: float = 1.0
    svm_gamma: float | None = None
    svm_platt_cv: int = 5
    max_train_unlabeled: int = 20_000
    cvalue_variant: str = "tf_weighted"
    demote_tokens: tuple[str, ...] = tuple(sorted(DEMOTE_TOKENS))
    pu_stride: int = 1

    def classifier_config(self) -> ClassifierConfig:
        return ClassifierConfig(
            kind=self.classifier, C=self.svm_c, gamma=self.svm_gamma, platt_cv=self.svm_platt_cv
        )

    def validate(self) -> "PipelineConfig":
        checks = [
            (self.max_ngram >= 1, "max_ngram must be >= 1"),
            (self.min_tf >= 1, "min_tf must be >= 1"),
            (self.k_folds >= 2, "k_folds must be >= 2"),
            (self.workers >= 1, "workers must be >= 1"),
            (0.0 <= self.familiarity_threshold <= 1.0, "familiarity_threshold must be in [0, 1]"),
            (self.classifier in ("svm", "logistic"), "classifier must be svm or logistic"),
            (self.svm_c > 0, "svm.c must be > 0"),
            (self.svm_gamma is None or self.svm_gamma > 0, "svm.gamma must be > 0 or auto"),
            (self.svm_platt_cv >= 0, "svm.platt_cv must be >= 0"),
            (self.max_train_unlabeled >= 1, "max_train_unlabeled must be >= 1"),
            (self.cvalue_variant in ("tf_weighted", "frantzi"), "cvalue.variant must be tf_weighted or frantzi"),
            (self.corpus_format in ("txt-dir", "jsonl"), "corpus_format must be txt-dir or jsonl"),
            (self.pu_stride >= 1, "pu_stride must be >= 1"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)
        return self


_PATH_KEYS = {"corpus", "background_corpus", "lexicon", "embeddings", "stopwords", "stoplist", "gold", "out"}
_INT_KEYS = {"max_ngram", "min_tf", "k_folds", "seed", "workers", "svm_platt_cv", "max_train_unlabeled", "pu_stride"}
_FLOAT_KEYS = {"familiarity_threshold", "svm_c"}
_FIELDS = {f.name for f in fields(PipelineConfig)}


def _parse_value(field: str, raw: str, base: Path):
    if field in _PATH_KEYS:
        p = Path(raw).expanduser()
        return p if p.is_absolute() else base / p
    if field in _INT_KEYS:
        return int(raw)
    if field in _FLOAT_KEYS:
        return float(raw)
    if field == "svm_gamma":
        return None if raw.lower() == "auto" else float(raw)
    if field == "demote_tokens":
        return tuple(sorted({t.strip().lower() for t in raw.split(",") if t.strip()}))
    return raw


def parse_config(text: str, base: Path = Path(".")) -> PipelineConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment, dots in keys map to underscores."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        field = key.replace(".", "_")
        if field not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[field] = _parse_value(field, raw, base)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key}: {raw!r}")
    return PipelineConfig(**values).validate()


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig().validate()
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    try:
        return parse_config(text, path.parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def with_overrides(cfg: PipelineConfig, **overrides) -> PipelineConfig:
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return replace(cfg, **overrides).validate() if overrides else cfg
