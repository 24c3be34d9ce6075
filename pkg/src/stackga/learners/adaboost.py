"""Boosting with depth-1 stumps using real-valued class-probability updates.

Each round fits a weighted stump, turns its leaf class probabilities into
symmetric log-ratio scores, and reweights samples multiplicatively. Rounds
stop early when a stump's weighted error reaches 0 (accepted, then stop) or
0.5 or worse (rejected). With no accepted rounds, predictions fall back to
the training prior.
"""

import numpy as np

from .tree import ClassificationTree

_CLIP = 1e-12


class AdaBoost:
    def __init__(self, n_estimators=100, learning_rate=1.0, criterion="gini",
                 max_depth=1):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.criterion = criterion
        self.max_depth = max_depth

    def fit(self, X, y, rng=None):
        rng = rng or np.random.default_rng(0)
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n = len(y)
        self.prior1_ = float(y.mean())
        w = np.full(n, 1.0 / n)
        self.stumps_ = []
        y_sign = np.where(y == 1, 1.0, -1.0)
        for _ in range(self.n_estimators):
            stump = ClassificationTree(self.criterion, max_depth=self.max_depth).fit(
                X, y, sample_weight=w, rng=rng
            )
            proba = stump.predict_proba(X)
            hard = (proba[:, 1] > 0.5).astype(np.int64)
            err = float(w[hard != y].sum() / w.sum())
            if err >= 0.5:
                break
            self.stumps_.append(stump)
            if err == 0.0:
                break
            logratio = 0.5 * (
                np.log(np.clip(proba[:, 1], _CLIP, None))
                - np.log(np.clip(proba[:, 0], _CLIP, None))
            )
            w = w * np.exp(-self.learning_rate * y_sign * logratio)
            w /= w.sum()
        return self

    def _stump_scores(self, X):
        """Per-round symmetric score s with class scores (-s, +s)."""
        scores = np.empty((len(self.stumps_), X.shape[0]))
        for m, stump in enumerate(self.stumps_):
            p = stump.predict_proba(X)
            scores[m] = 0.5 * (
                np.log(np.clip(p[:, 1], _CLIP, None))
                - np.log(np.clip(p[:, 0], _CLIP, None))
            )
        return scores

    def staged_decision(self, X):
        """Cumulative aggregate score after each accepted round, shape (rounds, n)."""
        X = np.asarray(X, dtype=np.float64)
        return np.cumsum(self._stump_scores(X), axis=0)

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        if not self.stumps_:
            return np.tile([1.0 - self.prior1_, self.prior1_], (X.shape[0], 1))
        s = self._stump_scores(X).sum(axis=0)
        # softmax over the symmetric class scores (-s, +s)
        p1 = 1.0 / (1.0 + np.exp(-2.0 * np.clip(s, -250, 250)))
        return np.column_stack([1.0 - p1, p1])
