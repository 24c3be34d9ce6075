"""Tree ensembles: bootstrap forest, extremely-randomized trees, and a
generic bagging combiner. All three vote; reported probabilities are vote
shares, so argmax of the probabilities IS the majority vote.
"""

import numpy as np

from .tree import ClassificationTree

_SEED_BOUND = 2**63


def _vote_proba(members, X):
    votes1 = np.zeros(X.shape[0])
    for m in members:
        votes1 += (m.predict_proba(X)[:, 1] > 0.5).astype(np.float64)
    votes1 /= len(members)
    return np.column_stack([1.0 - votes1, votes1])


class RandomForest:
    def __init__(self, n_estimators=100, criterion="entropy", max_depth=10,
                 max_features="all"):
        self.n_estimators = n_estimators
        self.criterion = criterion
        self.max_depth = max_depth
        self.max_features = max_features

    def fit(self, X, y, rng=None):
        rng = rng or np.random.default_rng(0)
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        self.trees_ = []
        for _ in range(self.n_estimators):
            tree_rng = np.random.default_rng(rng.integers(_SEED_BOUND))
            idx = tree_rng.integers(0, n, n)
            tree = ClassificationTree(self.criterion, self.max_depth, self.max_features)
            tree.fit(X[idx], y[idx], rng=tree_rng)
            self.trees_.append(tree)
        return self

    def predict_proba(self, X):
        return _vote_proba(self.trees_, np.asarray(X, dtype=np.float64))


class ExtraTrees:
    """Like the forest but trained on the full sample with uniformly random
    split thresholds per candidate feature."""

    def __init__(self, n_estimators=50, criterion="gini", max_depth=3,
                 max_features="auto"):
        self.n_estimators = n_estimators
        self.criterion = criterion
        self.max_depth = max_depth
        self.max_features = max_features

    def fit(self, X, y, rng=None):
        rng = rng or np.random.default_rng(0)
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        self.trees_ = []
        for _ in range(self.n_estimators):
            tree_rng = np.random.default_rng(rng.integers(_SEED_BOUND))
            tree = ClassificationTree(
                self.criterion, self.max_depth, self.max_features, random_threshold=True
            )
            tree.fit(X, y, rng=tree_rng)
            self.trees_.append(tree)
        return self

    def predict_proba(self, X):
        return _vote_proba(self.trees_, np.asarray(X, dtype=np.float64))


class Bagging:
    """Majority vote over bootstrap replicates of any inner learner spec."""

    def __init__(self, base=None, n_estimators=10):
        self.base = base or {"algorithm": "decision_tree", "hyperparameters": {}}
        self.n_estimators = n_estimators

    def fit(self, X, y, rng=None):
        from . import make_impl  # deferred: registry imports this module

        rng = rng or np.random.default_rng(0)
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        both_classes = len(np.unique(y)) == 2
        self.members_ = []
        for _ in range(self.n_estimators):
            member_rng = np.random.default_rng(rng.integers(_SEED_BOUND))
            idx = member_rng.integers(0, n, n)
            if both_classes:
                # inner learners may require both classes; bounded redraw
                for _retry in range(100):
                    if len(np.unique(y[idx])) == 2:
                        break
                    idx = member_rng.integers(0, n, n)
            impl = make_impl(self.base["algorithm"], self.base.get("hyperparameters", {}))
            impl.fit(X[idx], y[idx], rng=member_rng)
            self.members_.append(impl)
        return self

    def predict_proba(self, X):
        return _vote_proba(self.members_, np.asarray(X, dtype=np.float64))
