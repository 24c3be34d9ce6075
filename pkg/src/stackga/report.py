"""Experiment reports: typed rows, canonical JSON, CSV and markdown views.

JSON is the lossless canonical form; `parse_report(render_report(r, "json"))`
reconstructs `r` exactly. Wall-clock timings are carried on the report but
excluded from rendering unless asked for, so rendered bytes are a pure
function of (config, seed).
"""

import json
from dataclasses import dataclass, field

from .errors import ConfigError

REPORT_VERSION = 1

#: compact benchmark-table vocabulary for the report rows
DISPLAY_NAMES = {
    "random_forest": "RF",
    "knn": "KNN",
    "mlp": "MLP",
    "adaboost": "Ada boost",
    "decision_tree": "D tree Classifier",
    "gaussian_nb": "NB",
    "gradient_boosting": "GBC",
    "svm": "SVM",
    "extra_trees": "Extra Tree",
    "logistic_regression": "LR",
    "bagging": "Bagging",
}

STACK_ROW_GA = "Suggest Method (ST-GA)"
STACK_ROW_PLAIN = "Suggest Method (ST)"


@dataclass(frozen=True)
class ModelRow:
    name: str
    accuracy: float = None
    sensitivity: float = None
    specificity: float = None
    fscore: float = None
    f1: float = None
    auc: float = None
    status: str = "ok"
    error: str = None


@dataclass(frozen=True)
class KfoldRow:
    name: str
    k: int
    mean_accuracy: float = None
    std: float = None
    fold_accuracies: tuple = ()
    status: str = "ok"
    error: str = None


@dataclass(frozen=True)
class FeatureRow:
    name: str
    single_feature_cv_accuracy: float
    ga_selection_frequency: float
    in_best_mask: bool


@dataclass(frozen=True)
class GaSummary:
    mask: tuple
    feature_names: tuple
    best_fitness: float
    generations: int
    evaluations: int


@dataclass(frozen=True)
class Report:
    kind: str  # "holdout" | "kfold"
    protocol: str
    master_seed: int
    rows: tuple = ()
    kfold_rows: tuple = ()
    ga: GaSummary = None
    feature_table: tuple = ()
    notes: tuple = ()
    config_echo: dict = field(default_factory=dict)
    timings: dict = None
    version: int = REPORT_VERSION


def _num(x):
    return None if x is None else float(x)


def report_to_dict(report: Report, include_timings: bool = False) -> dict:
    d = {
        "version": report.version,
        "kind": report.kind,
        "protocol": report.protocol,
        "master_seed": report.master_seed,
        "rows": [
            {
                "name": r.name,
                "accuracy": _num(r.accuracy),
                "sensitivity": _num(r.sensitivity),
                "specificity": _num(r.specificity),
                "fscore": _num(r.fscore),
                "f1": _num(r.f1),
                "auc": _num(r.auc),
                "status": r.status,
                "error": r.error,
            }
            for r in report.rows
        ],
        "kfold_rows": [
            {
                "name": r.name,
                "k": r.k,
                "mean_accuracy": _num(r.mean_accuracy),
                "std": _num(r.std),
                "fold_accuracies": [_num(a) for a in r.fold_accuracies],
                "status": r.status,
                "error": r.error,
            }
            for r in report.kfold_rows
        ],
        "ga": None
        if report.ga is None
        else {
            "mask": [int(b) for b in report.ga.mask],
            "feature_names": list(report.ga.feature_names),
            "best_fitness": _num(report.ga.best_fitness),
            "generations": report.ga.generations,
            "evaluations": report.ga.evaluations,
        },
        "feature_table": [
            {
                "name": r.name,
                "single_feature_cv_accuracy": _num(r.single_feature_cv_accuracy),
                "ga_selection_frequency": _num(r.ga_selection_frequency),
                "in_best_mask": bool(r.in_best_mask),
            }
            for r in report.feature_table
        ],
        "notes": list(report.notes),
        "config_echo": report.config_echo,
    }
    if include_timings and report.timings is not None:
        d["timings"] = {k: float(v) for k, v in report.timings.items()}
    return d


def report_from_dict(d: dict) -> Report:
    return Report(
        kind=d["kind"],
        protocol=d["protocol"],
        master_seed=d["master_seed"],
        rows=tuple(ModelRow(**r) for r in d["rows"]),
        kfold_rows=tuple(
            KfoldRow(**{**r, "fold_accuracies": tuple(r["fold_accuracies"])})
            for r in d["kfold_rows"]
        ),
        ga=None if d["ga"] is None else GaSummary(
            mask=tuple(d["ga"]["mask"]),
            feature_names=tuple(d["ga"]["feature_names"]),
            best_fitness=d["ga"]["best_fitness"],
            generations=d["ga"]["generations"],
            evaluations=d["ga"]["evaluations"],
        ),
        feature_table=tuple(FeatureRow(**r) for r in d["feature_table"]),
        notes=tuple(d["notes"]),
        config_echo=d["config_echo"],
        timings=d.get("timings"),
        version=d["version"],
    )


def _fmt(x, digits=4):
    return "n/a" if x is None else f"{x:.{digits}f}"


def _render_csv(report: Report) -> str:
    if report.kind == "kfold":
        lines = ["name,k,mean_accuracy,std,fold_accuracies,status"]
        for r in report.kfold_rows:
            folds = ";".join(_fmt(a, 6) for a in r.fold_accuracies)
            lines.append(
                f"{r.name},{r.k},{_fmt(r.mean_accuracy, 6)},{_fmt(r.std, 6)},{folds},{r.status}"
            )
    else:
        lines = ["name,accuracy,sensitivity,specificity,fscore,f1,auc,status"]
        for r in report.rows:
            lines.append(
                ",".join(
                    [
                        r.name,
                        _fmt(r.accuracy, 6),
                        _fmt(r.sensitivity, 6),
                        _fmt(r.specificity, 6),
                        _fmt(r.fscore, 6),
                        _fmt(r.f1, 6),
                        _fmt(r.auc, 6),
                        r.status,
                    ]
                )
            )
    return "\n".join(lines) + "\n"


def _render_markdown(report: Report) -> str:
    lines = [f"# {'K-fold cross-validation' if report.kind == 'kfold' else 'Holdout'} report",
             "", f"protocol: `{report.protocol}` | master seed: {report.master_seed}", ""]
    if report.kind == "kfold":
        ks = sorted({r.k for r in report.kfold_rows})
        names = []
        for r in report.kfold_rows:
            if r.name not in names:
                names.append(r.name)
        by = {(r.name, r.k): r for r in report.kfold_rows}
        lines.append("| Model | " + " | ".join(f"k={k}" for k in ks) + " |")
        lines.append("|" + "---|" * (len(ks) + 1))
        for name in names:
            cells = [_fmt(by[(name, k)].mean_accuracy) if (name, k) in by else "n/a" for k in ks]
            lines.append(f"| {name} | " + " | ".join(cells) + " |")
    else:
        lines.append("| Model | Accuracy | Sensitivity | Specificity | F-score | F1 | AUC |")
        lines.append("|---|---|---|---|---|---|---|")
        for r in report.rows:
            lines.append(
                f"| {r.name} | {_fmt(r.accuracy)} | {_fmt(r.sensitivity)} | "
                f"{_fmt(r.specificity)} | {_fmt(r.fscore)} | {_fmt(r.f1)} | {_fmt(r.auc)} |"
            )
    if report.ga is not None:
        lines += [
            "",
            f"Selected features ({len(report.ga.feature_names)}): "
            + ", ".join(report.ga.feature_names)
            + f" (wrapper CV accuracy {_fmt(report.ga.best_fitness)})",
        ]
    if report.feature_table:
        lines += ["", "| Feature | Single-feature CV acc | GA selection freq | In best mask |",
                  "|---|---|---|---|"]
        for r in report.feature_table:
            lines.append(
                f"| {r.name} | {_fmt(r.single_feature_cv_accuracy)} | "
                f"{_fmt(r.ga_selection_frequency)} | {'yes' if r.in_best_mask else 'no'} |"
            )
    if report.notes:
        lines += [""] + [f"> {note}" for note in report.notes]
    return "\n".join(lines) + "\n"


def render_report(report: Report, fmt: str, include_timings: bool = False) -> str:
    """Render to "json" (canonical), "csv" (flat table), or "markdown"."""
    if fmt == "json":
        return json.dumps(report_to_dict(report, include_timings), indent=2) + "\n"
    if fmt == "csv":
        return _render_csv(report)
    if fmt == "markdown":
        return _render_markdown(report)
    raise ConfigError(f"unknown report format {fmt!r}; use json, csv, or markdown")


def parse_report(text: str) -> Report:
    """Inverse of the JSON rendering."""
    return report_from_dict(json.loads(text))
