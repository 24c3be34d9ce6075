"""k-nearest neighbours by exhaustive Euclidean search.

Distance ties resolve to the lower training index, so predictions are
deterministic regardless of value ordering.
"""

import numpy as np


class KNeighbors:
    def __init__(self, n_neighbors=5):
        self.n_neighbors = n_neighbors

    def fit(self, X, y, rng=None):
        self.X_ = np.asarray(X, dtype=np.float64)
        self.y_ = np.asarray(y, dtype=np.int64)
        if self.n_neighbors > len(self.y_):
            raise ValueError(
                f"n_neighbors={self.n_neighbors} exceeds {len(self.y_)} training samples"
            )
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        d2 = (
            (X**2).sum(axis=1)[:, None]
            + (self.X_**2).sum(axis=1)[None, :]
            - 2.0 * X @ self.X_.T
        )
        # stable argsort on distance keeps the lower index first among ties
        nearest = np.argsort(d2, axis=1, kind="stable")[:, : self.n_neighbors]
        votes1 = self.y_[nearest].mean(axis=1)
        return np.column_stack([1.0 - votes1, votes1])
