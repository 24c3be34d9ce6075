"""Two-level stacked generalization.

Level-0 learners produce a derived dataset whose columns are their outputs
(hard labels or positive-class probabilities); a level-1 meta-learner trains
on it. Two construction modes:

- "out_of_fold": each derived value comes from a model trained without the
  sample's fold. This is the leakage-free default.
- "naive": derived values come from models trained on the full training set.
  The meta-learner then sees resubstitution outputs, which overstates the
  base learners' reliability; kept as a first-class mode because it is the
  literal reading of the classic stacking pseudocode and explains how
  headline accuracies get inflated.
"""

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, Schema, make_folds
from .errors import ConfigError
from .learners import LearnerSpec, TrainedModel, predict, predict_proba, train
from .rng import derive_seed

LABEL = "label"
PROBABILITY = "probability"


@dataclass(frozen=True)
class StackSpec:
    base_specs: tuple
    meta_spec: LearnerSpec
    level1_mode: str = "out_of_fold"
    level1_folds: int = 5
    level1_feature_kind: str = PROBABILITY
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "base_specs", tuple(self.base_specs))
        if not self.base_specs:
            raise ConfigError("a stack needs at least one base learner")
        if self.level1_mode not in ("out_of_fold", "naive"):
            raise ConfigError(f"unknown level1_mode {self.level1_mode!r}")
        if self.level1_mode == "out_of_fold" and self.level1_folds < 2:
            raise ConfigError("out_of_fold stacking needs at least 2 folds")
        if self.level1_feature_kind not in (LABEL, PROBABILITY):
            raise ConfigError(f"unknown level1_feature_kind {self.level1_feature_kind!r}")


@dataclass(frozen=True)
class StackModel:
    base_models: tuple
    meta_model: TrainedModel
    spec: StackSpec


def _level1_schema(spec: StackSpec, ds: Dataset) -> Schema:
    names = tuple(
        f"z{t}_{s.algorithm}" for t, s in enumerate(spec.base_specs)
    ) + (ds.schema.column_names[ds.schema.label_column],)
    return Schema(column_names=names, label_column=len(names) - 1)


def _base_outputs(model: TrainedModel, X: np.ndarray, kind: str) -> np.ndarray:
    if kind == LABEL:
        return predict(model, X).astype(np.float64)
    return predict_proba(model, X)[:, 1]


def build_level1_dataset(spec: StackSpec, ds: Dataset, instrument: bool = False):
    """Derived dataset: one row per training sample, one column per base learner.

    With `instrument=True` also returns (fold assignments, per-fold training
    row ids) so callers can verify that no contributing model saw the row it
    predicted. In naive mode the assignments are -1 and every model saw all
    rows.
    """
    if len(np.unique(ds.labels)) < 2:
        raise ConfigError("stacking requires both classes in the training data")
    T = len(spec.base_specs)
    Z = np.empty((ds.n_samples, T))
    if spec.level1_mode == "naive":
        for t, base in enumerate(spec.base_specs):
            Z[:, t] = _base_outputs(train(base, ds), ds.features, spec.level1_feature_kind)
        assignments = np.full(ds.n_samples, -1)
        trained_on = {-1: ds.row_ids.copy()}
    else:
        plan = make_folds(ds, spec.level1_folds, stratified=True,
                          seed=derive_seed(spec.seed, "level1-folds"))
        trained_on = {}
        for fold in range(plan.k):
            fit_part = ds.take(plan.train_indices(fold))
            if len(np.unique(fit_part.labels)) < 2:
                raise ConfigError(
                    f"level-1 fold {fold}: training part has a single class"
                )
            held_idx = plan.test_indices(fold)
            held_X = ds.features[held_idx]
            for t, base in enumerate(spec.base_specs):
                model = train(base, fit_part)
                Z[held_idx, t] = _base_outputs(model, held_X, spec.level1_feature_kind)
            trained_on[fold] = fit_part.row_ids.copy()
        assignments = plan.assignments
    d_prime = Dataset(Z, ds.labels, _level1_schema(spec, ds), ds.row_ids)
    if instrument:
        return d_prime, assignments, trained_on
    return d_prime


def train_stack(spec: StackSpec, ds: Dataset) -> StackModel:
    """Fit the meta-learner on the derived dataset, then refit every base
    learner on the full training set for prediction time."""
    d_prime = build_level1_dataset(spec, ds)
    meta = train(spec.meta_spec, d_prime)
    bases = tuple(train(b, ds) for b in spec.base_specs)
    return StackModel(base_models=bases, meta_model=meta, spec=spec)


def _meta_features(model: StackModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    kind = model.spec.level1_feature_kind
    return np.column_stack([_base_outputs(b, X, kind) for b in model.base_models])


def predict_stack(model: StackModel, X) -> np.ndarray:
    """Meta prediction on the base models' outputs."""
    return predict(model.meta_model, _meta_features(model, X))


def predict_proba_stack(model: StackModel, X) -> np.ndarray:
    return predict_proba(model.meta_model, _meta_features(model, X))
