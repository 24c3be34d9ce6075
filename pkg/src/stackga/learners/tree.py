"""CART-style binary trees: weighted classification and regression variants.

Split search is vectorized across all candidate features at once; candidate
thresholds are midpoints between consecutive distinct sorted values. Ties on
split quality resolve to the lowest feature index, then lowest threshold.
"""

import numpy as np

_INF = np.inf


def _entropy_sum(w1, w):
    """w * H(w1/w) elementwise, with 0 log 0 = 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(w > 0, w1 / np.where(w > 0, w, 1.0), 0.0)
        q = 1.0 - p
        plog = np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        qlog = np.where(q > 0, q * np.log2(np.where(q > 0, q, 1.0)), 0.0)
    return -w * (plog + qlog)


def _gini_sum(w1, w):
    """w * gini(w1/w) elementwise; binary gini is 2p(1-p)."""
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(w > 0, w1 / np.where(w > 0, w, 1.0), 0.0)
    return w * 2.0 * p * (1.0 - p)


_CRITERIA = {"entropy": _entropy_sum, "gini": _gini_sum}


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "value", "leaf_id")

    def __init__(self):
        self.feature = None
        self.threshold = None
        self.left = None
        self.right = None
        self.value = None
        self.leaf_id = None

    @property
    def is_leaf(self):
        return self.feature is None


def _resolve_max_features(mode, d):
    if mode in (None, "all"):
        return d
    if mode in ("sqrt", "auto"):
        return max(1, int(np.sqrt(d)))
    k = int(mode)
    if not 1 <= k <= d:
        raise ValueError(f"max_features {mode!r} out of range for {d} features")
    return k


def _candidate_features(rng, d, k):
    if k >= d:
        return np.arange(d)
    return np.sort(rng.choice(d, size=k, replace=False))


def _best_split_class(X, y, w, features, impurity_sum):
    """Best (feature, threshold, score) over midpoint candidates; None if no valid boundary."""
    Xc = X[:, features]
    order = np.argsort(Xc, axis=0, kind="stable")
    xs = np.take_along_axis(Xc, order, axis=0)
    ys = y[order]
    ws = w[order]
    cw = np.cumsum(ws, axis=0)
    cw1 = np.cumsum(ws * ys, axis=0)
    W = cw[-1, 0]
    W1 = cw1[-1, 0]
    wl, w1l = cw[:-1], cw1[:-1]
    wr, w1r = W - wl, W1 - w1l
    score = impurity_sum(w1l, wl) + impurity_sum(w1r, wr)
    valid = (xs[1:] > xs[:-1]) & (wl > 0) & (wr > 0)
    score = np.where(valid, score, _INF)
    per_feature_best = np.argmin(score, axis=0)  # first hit = lowest threshold
    per_feature_score = score[per_feature_best, np.arange(len(features))]
    j = int(np.argmin(per_feature_score))  # first hit = lowest feature index
    if not np.isfinite(per_feature_score[j]):
        return None
    i = int(per_feature_best[j])
    threshold = 0.5 * (xs[i, j] + xs[i + 1, j])
    return int(features[j]), float(threshold), float(per_feature_score[j])


def _best_split_reg(X, y, w, features):
    """Maximize the weighted two-sample mean-separation gain wl*wr/(wl+wr)*(ml-mr)^2."""
    Xc = X[:, features]
    order = np.argsort(Xc, axis=0, kind="stable")
    xs = np.take_along_axis(Xc, order, axis=0)
    ys = y[order]
    ws = w[order]
    cw = np.cumsum(ws, axis=0)
    cwy = np.cumsum(ws * ys, axis=0)
    W, S = cw[-1, 0], cwy[-1, 0]
    wl, sl = cw[:-1], cwy[:-1]
    wr, sr = W - wl, S - sl
    valid = (xs[1:] > xs[:-1]) & (wl > 0) & (wr > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        diff = np.where(valid, sl / np.where(wl > 0, wl, 1.0) - sr / np.where(wr > 0, wr, 1.0), 0.0)
        gain = np.where(valid, wl * wr / (wl + wr) * diff * diff, -_INF)
    per_feature_best = np.argmax(gain, axis=0)
    per_feature_gain = gain[per_feature_best, np.arange(len(features))]
    j = int(np.argmax(per_feature_gain))
    # zero gain means targets are constant across every boundary; don't split
    if not np.isfinite(per_feature_gain[j]) or per_feature_gain[j] <= 0.0:
        return None
    i = int(per_feature_best[j])
    threshold = 0.5 * (xs[i, j] + xs[i + 1, j])
    return int(features[j]), float(threshold), float(per_feature_gain[j])


class ClassificationTree:
    """Greedy binary tree for 0/1 labels with optional sample weights.

    criterion: "entropy" or "gini". max_features: None/"all", "sqrt"/"auto"
    (= sqrt), or an int; subsampled per split from the provided rng.
    """

    def __init__(self, criterion="entropy", max_depth=None, max_features=None,
                 random_threshold=False):
        if criterion not in _CRITERIA:
            raise ValueError(f"unknown criterion {criterion!r}")
        self.criterion = criterion
        self.max_depth = max_depth
        self.max_features = max_features
        self.random_threshold = random_threshold  # extremely-randomized variant
        self.root = None
        self.n_features_ = None

    def fit(self, X, y, sample_weight=None, rng=None):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        w = np.ones(len(y)) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
        rng = rng or np.random.default_rng(0)
        self.n_features_ = X.shape[1]
        self._k = _resolve_max_features(self.max_features, X.shape[1])
        self._impurity = _CRITERIA[self.criterion]
        self.root = self._grow(X, y, w, depth=0, rng=rng)
        return self

    def _leaf(self, y, w):
        node = _Node()
        w1 = float(np.sum(w * y))
        total = float(np.sum(w))
        p1 = w1 / total if total > 0 else 0.0
        node.value = np.array([1.0 - p1, p1])
        return node

    def _random_split(self, X, y, w, features, rng):
        """Extra-trees style: one uniform threshold per candidate feature, best kept."""
        best = None
        for f in features:
            col = X[:, f]
            lo, hi = col.min(), col.max()
            if lo == hi:
                continue
            thr = float(rng.uniform(lo, hi))
            left = col <= thr
            wl, wr = w[left], w[~left]
            if wl.size == 0 or wr.size == 0:
                continue
            score = float(
                self._impurity(np.sum(wl * y[left]), np.sum(wl))
                + self._impurity(np.sum(wr * y[~left]), np.sum(wr))
            )
            if best is None or score < best[2]:
                best = (int(f), thr, score)
        return best

    def _grow(self, X, y, w, depth, rng):
        if (self.max_depth is not None and depth >= self.max_depth) or np.all(y == y[0]):
            return self._leaf(y, w)
        features = _candidate_features(rng, X.shape[1], self._k)
        if self.random_threshold:
            split = self._random_split(X, y, w, features, rng)
        else:
            split = _best_split_class(X, y, w, features, self._impurity)
        if split is None:
            return self._leaf(y, w)
        feature, threshold, _ = split
        left = X[:, feature] <= threshold
        if not left.any() or left.all():  # midpoint collapsed onto a data value
            return self._leaf(y, w)
        node = _Node()
        node.feature = feature
        node.threshold = threshold
        node.left = self._grow(X[left], y[left], w[left], depth + 1, rng)
        node.right = self._grow(X[~left], y[~left], w[~left], depth + 1, rng)
        return node

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty((X.shape[0], 2))
        self._route(self.root, X, np.arange(X.shape[0]), out)
        return out

    def _route(self, node, X, idx, out):
        if node.is_leaf:
            out[idx] = node.value
            return
        go_left = X[idx, node.feature] <= node.threshold
        self._route(node.left, X, idx[go_left], out)
        self._route(node.right, X, idx[~go_left], out)

    def depth(self):
        def walk(node):
            if node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))

        return walk(self.root)


class RegressionTree:
    """Least-squares tree on real targets, split by weighted mean separation.

    `apply` routes samples to integer leaf ids so a booster can refit leaf
    values under its own loss.
    """

    def __init__(self, max_depth=3):
        self.max_depth = max_depth
        self.root = None
        self.n_leaves = 0

    def fit(self, X, y, sample_weight=None):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        w = np.ones(len(y)) if sample_weight is None else np.asarray(sample_weight, dtype=np.float64)
        self.n_leaves = 0
        self.root = self._grow(X, y, w, depth=0)
        return self

    def _leaf(self, y, w):
        node = _Node()
        total = float(np.sum(w))
        node.value = float(np.sum(w * y) / total) if total > 0 else 0.0
        node.leaf_id = self.n_leaves
        self.n_leaves += 1
        return node

    def _grow(self, X, y, w, depth):
        if (self.max_depth is not None and depth >= self.max_depth) or len(y) < 2:
            return self._leaf(y, w)
        split = _best_split_reg(X, y, w, np.arange(X.shape[1]))
        if split is None:
            return self._leaf(y, w)
        feature, threshold, _ = split
        left = X[:, feature] <= threshold
        if not left.any() or left.all():
            return self._leaf(y, w)
        node = _Node()
        node.feature = feature
        node.threshold = threshold
        node.left = self._grow(X[left], y[left], w[left], depth + 1)
        node.right = self._grow(X[~left], y[~left], w[~left], depth + 1)
        return node

    def apply(self, X):
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.int64)
        self._route(self.root, X, np.arange(X.shape[0]), out)
        return out

    def _route(self, node, X, idx, out):
        if node.is_leaf:
            out[idx] = node.leaf_id
            return
        go_left = X[idx, node.feature] <= node.threshold
        self._route(node.left, X, idx[go_left], out)
        self._route(node.right, X, idx[~go_left], out)

    def predict(self, X, leaf_values=None):
        ids = self.apply(X)
        if leaf_values is None:
            leaf_values = self.leaf_values()
        return leaf_values[ids]

    def leaf_values(self):
        values = np.zeros(self.n_leaves)

        def walk(node):
            if node.is_leaf:
                values[node.leaf_id] = node.value
            else:
                walk(node.left)
                walk(node.right)

        walk(self.root)
        return values
