"""Experiment configuration: a versioned, human-editable JSON file.

Every key is validated; unknown keys are rejected with their location so
typos fail loudly. `apply_overrides` implements the CLI's repeatable
`--set dotted.path=value` flag, which may only touch keys that already
exist in the resolved config.
"""

import copy
import hashlib
import json
from dataclasses import dataclass, field

from .dataset import Schema
from .errors import ConfigError
from .learners import ALGORITHMS, LearnerSpec

CONFIG_VERSION = 1

PROTOCOLS = ("clean", "paper_faithful")


@dataclass(frozen=True)
class DatasetConfig:
    path: str
    columns: tuple
    label_column: int
    zero_as_missing: tuple = ()
    has_header: bool = True

    def schema(self) -> Schema:
        return Schema(
            column_names=self.columns,
            label_column=self.label_column,
            missing_as_zero_columns=frozenset(self.zero_as_missing),
        )


@dataclass(frozen=True)
class PreprocessConfig:
    impute: bool = True
    clip: bool = True
    iqr_multiplier: float = 1.5


@dataclass(frozen=True)
class SplitConfig:
    mode: str = "holdout"
    train_fraction: float = 0.7
    ks: tuple = (5, 10, 15)
    stratified: bool = True


@dataclass(frozen=True)
class StackSettings:
    enabled: bool = True
    base: tuple = ()  # empty means: the configured benchmark learner list
    meta: dict = field(default_factory=lambda: {"algorithm": "gradient_boosting", "hyperparameters": {}})
    level1_mode: str = "out_of_fold"
    level1_folds: int = 5
    level1_feature_kind: str = "probability"


@dataclass(frozen=True)
class GaSettings:
    enabled: bool = True
    wrapper: dict = field(
        default_factory=lambda: {"algorithm": "logistic_regression", "hyperparameters": {}}
    )
    cv_folds: int = 5
    nind: int = 20
    maxgen: int = 100
    migr: float = 0.2
    insr: float = 0.95
    subpop: int = 5
    miggen: int = 20
    mutation_rate: float = None
    crossover_rate: float = 0.9
    selective_pressure: float = 2.0
    stall_generations: int = 25
    nvar: int = 9
    preci: int = 20


@dataclass(frozen=True)
class ReportConfig:
    path: str = "out/report.json"
    format: str = "json"
    include_timings: bool = False


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: DatasetConfig
    preprocessing: PreprocessConfig = PreprocessConfig()
    split: SplitConfig = SplitConfig()
    learners: tuple = ()
    stack: StackSettings = StackSettings()
    ga: GaSettings = GaSettings()
    protocol: str = "clean"
    master_seed: int = 0
    report: ReportConfig = ReportConfig()
    version: int = CONFIG_VERSION


def _require_keys(d: dict, allowed, where: str) -> None:
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}; allowed: {sorted(allowed)}")


def _learner_entry(entry, where: str) -> dict:
    if isinstance(entry, str):
        entry = {"algorithm": entry}
    if not isinstance(entry, dict):
        raise ConfigError(f"{where}: expected an algorithm name or object")
    _require_keys(entry, ("algorithm", "hyperparameters"), where)
    if "algorithm" not in entry:
        raise ConfigError(f"{where}: missing 'algorithm'")
    if entry["algorithm"] not in ALGORITHMS:
        raise ConfigError(
            f"{where}: unknown algorithm {entry['algorithm']!r}; choose from {sorted(ALGORITHMS)}"
        )
    out = {"algorithm": entry["algorithm"], "hyperparameters": dict(entry.get("hyperparameters", {}))}
    LearnerSpec(out["algorithm"], out["hyperparameters"])  # validate hyperparameter keys now
    return out


def _column_index(ref, columns, where: str) -> int:
    if isinstance(ref, bool):
        raise ConfigError(f"{where}: expected a column name or index, got {ref!r}")
    if isinstance(ref, int):
        if not 0 <= ref < len(columns):
            raise ConfigError(f"{where}: column index {ref} out of range")
        return ref
    if ref not in columns:
        raise ConfigError(f"{where}: unknown column {ref!r}")
    return columns.index(ref)


def _parse_dataset(d: dict) -> DatasetConfig:
    _require_keys(d, ("path", "columns", "label_column", "zero_as_missing", "has_header"),
                  "dataset")
    for key in ("path", "columns", "label_column"):
        if key not in d:
            raise ConfigError(f"dataset: missing required key {key!r}")
    columns = list(d["columns"])
    label = _column_index(d["label_column"], columns, "dataset.label_column")
    zeros = tuple(
        _column_index(z, columns, "dataset.zero_as_missing") for z in d.get("zero_as_missing", [])
    )
    return DatasetConfig(
        path=d["path"],
        columns=tuple(columns),
        label_column=label,
        zero_as_missing=zeros,
        has_header=bool(d.get("has_header", True)),
    )


def _parse_section(d: dict, cls, where: str, special=()):
    fields = {f for f in cls.__dataclass_fields__ if f not in special}
    _require_keys(d, fields | set(special), where)
    kwargs = {k: v for k, v in d.items() if k in fields}
    if "ks" in kwargs:
        kwargs["ks"] = tuple(kwargs["ks"])
    return cls(**kwargs)


def config_from_dict(d: dict) -> ExperimentConfig:
    _require_keys(
        d,
        ("version", "dataset", "preprocessing", "split", "learners", "stack", "ga",
         "protocol", "master_seed", "report"),
        "config",
    )
    if d.get("version", CONFIG_VERSION) != CONFIG_VERSION:
        raise ConfigError(f"unsupported config version {d.get('version')!r}")
    if "dataset" not in d:
        raise ConfigError("config: missing required section 'dataset'")
    dataset = _parse_dataset(d["dataset"])
    preprocessing = _parse_section(d.get("preprocessing", {}), PreprocessConfig, "preprocessing")
    split = _parse_section(d.get("split", {}), SplitConfig, "split")
    if split.mode not in ("holdout", "kfold"):
        raise ConfigError(f"split.mode must be 'holdout' or 'kfold', got {split.mode!r}")
    if not 0 < split.train_fraction < 1:
        raise ConfigError("split.train_fraction must lie strictly between 0 and 1")
    learners = tuple(
        _learner_entry(e, f"learners[{i}]") for i, e in enumerate(d.get("learners", []))
    )

    stack_d = dict(d.get("stack", {}))
    if "base" in stack_d:
        stack_d["base"] = tuple(
            _learner_entry(e, f"stack.base[{i}]") for i, e in enumerate(stack_d["base"])
        )
    if "meta" in stack_d:
        stack_d["meta"] = _learner_entry(stack_d["meta"], "stack.meta")
    stack = _parse_section(stack_d, StackSettings, "stack")

    ga_d = dict(d.get("ga", {}))
    if "wrapper" in ga_d:
        ga_d["wrapper"] = _learner_entry(ga_d["wrapper"], "ga.wrapper")
    ga = _parse_section(ga_d, GaSettings, "ga")

    protocol = d.get("protocol", "clean")
    if protocol not in PROTOCOLS:
        raise ConfigError(f"protocol must be one of {PROTOCOLS}, got {protocol!r}")
    report = _parse_section(d.get("report", {}), ReportConfig, "report")
    if report.format not in ("json", "csv", "markdown"):
        raise ConfigError(f"report.format must be json, csv, or markdown, got {report.format!r}")
    if not learners and not stack.enabled:
        raise ConfigError("config enables no learners and no stack; nothing to run")
    return ExperimentConfig(
        dataset=dataset,
        preprocessing=preprocessing,
        split=split,
        learners=learners,
        stack=stack,
        ga=ga,
        protocol=protocol,
        master_seed=int(d.get("master_seed", 0)),
        report=report,
    )


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})") from None
    cfg = config_from_dict(raw)
    return cfg


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Plain-dict echo of the resolved config (defaults filled in)."""

    def spec_dicts(entries):
        return [{"algorithm": e["algorithm"], "hyperparameters": e["hyperparameters"]}
                for e in entries]

    return {
        "version": cfg.version,
        "dataset": {
            "path": cfg.dataset.path,
            "columns": list(cfg.dataset.columns),
            "label_column": cfg.dataset.label_column,
            "zero_as_missing": list(cfg.dataset.zero_as_missing),
            "has_header": cfg.dataset.has_header,
        },
        "preprocessing": {
            "impute": cfg.preprocessing.impute,
            "clip": cfg.preprocessing.clip,
            "iqr_multiplier": cfg.preprocessing.iqr_multiplier,
        },
        "split": {
            "mode": cfg.split.mode,
            "train_fraction": cfg.split.train_fraction,
            "ks": list(cfg.split.ks),
            "stratified": cfg.split.stratified,
        },
        "learners": spec_dicts(cfg.learners),
        "stack": {
            "enabled": cfg.stack.enabled,
            "base": spec_dicts(cfg.stack.base),
            "meta": dict(cfg.stack.meta),
            "level1_mode": cfg.stack.level1_mode,
            "level1_folds": cfg.stack.level1_folds,
            "level1_feature_kind": cfg.stack.level1_feature_kind,
        },
        "ga": {
            "enabled": cfg.ga.enabled,
            "wrapper": dict(cfg.ga.wrapper),
            "cv_folds": cfg.ga.cv_folds,
            "nind": cfg.ga.nind,
            "maxgen": cfg.ga.maxgen,
            "migr": cfg.ga.migr,
            "insr": cfg.ga.insr,
            "subpop": cfg.ga.subpop,
            "miggen": cfg.ga.miggen,
            "mutation_rate": cfg.ga.mutation_rate,
            "crossover_rate": cfg.ga.crossover_rate,
            "selective_pressure": cfg.ga.selective_pressure,
            "stall_generations": cfg.ga.stall_generations,
            "nvar": cfg.ga.nvar,
            "preci": cfg.ga.preci,
        },
        "protocol": cfg.protocol,
        "master_seed": cfg.master_seed,
        "report": {
            "path": cfg.report.path,
            "format": cfg.report.format,
            "include_timings": cfg.report.include_timings,
        },
    }


def config_hash(cfg: ExperimentConfig) -> str:
    """Short fingerprint of the resolved config, printed by every run."""
    canon = json.dumps(config_to_dict(cfg), sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()[:12]


def apply_overrides(raw: dict, overrides) -> dict:
    """Apply `key.path=value` pairs onto the raw config dict.

    Paths must name existing keys (list indices allowed); values parse as
    JSON, falling back to bare strings.
    """
    out = copy.deepcopy(raw)
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key.path=value")
        path, _, raw_value = item.partition("=")
        try:
            value = json.loads(raw_value)
        except json.JSONDecodeError:
            value = raw_value
        parts = path.split(".")
        node = out
        for i, part in enumerate(parts[:-1]):
            node = _descend(node, part, path)
        _assign(node, parts[-1], value, path)
    return out


def _descend(node, part, path):
    if isinstance(node, list):
        idx = _list_index(node, part, path)
        return node[idx]
    if isinstance(node, dict):
        if part not in node:
            raise ConfigError(f"override {path!r}: no such config key {part!r}")
        return node[part]
    raise ConfigError(f"override {path!r}: {part!r} is not a section")


def _assign(node, part, value, path):
    if isinstance(node, list):
        node[_list_index(node, part, path)] = value
    elif isinstance(node, dict):
        if part not in node:
            raise ConfigError(f"override {path!r}: no such config key {part!r}")
        node[part] = value
    else:
        raise ConfigError(f"override {path!r}: cannot assign into a scalar")


def _list_index(node, part, path):
    try:
        idx = int(part)
    except ValueError:
        raise ConfigError(f"override {path!r}: {part!r} is not a list index") from None
    if not 0 <= idx < len(node):
        raise ConfigError(f"override {path!r}: index {idx} out of range")
    return idx
