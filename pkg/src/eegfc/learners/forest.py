import math

import numpy as np

from .._seeding import child_seeds
from ._common import encode


class DecisionTree:
    """CART classification tree with Gini impurity.

    Grows until nodes are pure, hold fewer than ``min_samples_split``
    samples, or reach ``max_depth``. At each node ``max_features`` candidate
    features are drawn without replacement; if none of them admits a split,
    further features are drawn until one does or all are exhausted.
    """

    def __init__(self, max_features=None, max_depth=None, min_samples_split=2, seed=0):
        self.max_features = max_features
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.seed = seed

    def fit(self, X, y, n_classes=None):
        """Fit on ``X`` and integer class indices ``y`` in ``[0, n_classes)``."""
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        n, d = X.shape
        K = int(n_classes if n_classes is not None else y.max() + 1)
        m = d if self.max_features is None else max(1, min(d, int(self.max_features)))
        rng = np.random.default_rng(self.seed)
        eye = np.eye(K, dtype=np.int64)

        feature, threshold, left, right, value = [], [], [], [], []

        def new_node(counts):
            feature.append(-1)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            value.append(int(np.argmax(counts)))
            return len(feature) - 1

        root_counts = np.bincount(y, minlength=K)
        stack = [(new_node(root_counts), np.arange(n), root_counts, 0)]
        while stack:
            node, idx, counts, depth = stack.pop()
            if (
                len(idx) < self.min_samples_split
                or np.count_nonzero(counts) <= 1
                or (self.max_depth is not None and depth >= self.max_depth)
            ):
                continue
            split = self._best_split(X, y, idx, counts, rng.permutation(d), m, eye)
            if split is None:
                continue
            f, thr = split
            go_left = X[idx, f] <= thr
            li, ri = idx[go_left], idx[~go_left]
            lc = np.bincount(y[li], minlength=K)
            rc = counts - lc
            feature[node] = f
            threshold[node] = thr
            left[node] = new_node(lc)
            right[node] = new_node(rc)
            stack.append((right[node], ri, rc, depth + 1))
            stack.append((left[node], li, lc, depth + 1))

        self.feature_ = np.array(feature)
        self.threshold_ = np.array(threshold)
        self.left_ = np.array(left)
        self.right_ = np.array(right)
        self.value_ = np.array(value)
        return self

    @staticmethod
    def _best_split(X, y, idx, counts, order, m, eye):
        n = len(idx)
        yn = y[idx]
        for start in range(0, len(order), m):
            feats = order[start:start + m]
            Xn = X[np.ix_(idx, feats)]
            srt = np.argsort(Xn, axis=0, kind="stable")
            xs = np.take_along_axis(Xn, srt, axis=0)
            valid = xs[:-1] < xs[1:]
            if not valid.any():
                continue
            left_counts = np.cumsum(eye[yn[srt]], axis=0)[:-1]
            right_counts = counts - left_counts
            nl = np.arange(1, n)[:, None]
            nr = n - nl
            # weighted Gini is minimized where this is maximized
            score = (left_counts**2).sum(axis=2) / nl + (right_counts**2).sum(axis=2) / nr
            score = np.where(valid, score, -np.inf)
            # column-major flat index: first candidate feature wins ties
            flat = int(np.argmax(score.T))
            j, i = divmod(flat, n - 1)
            lo, hi = xs[i, j], xs[i + 1, j]
            thr = lo + (hi - lo) / 2.0
            if not lo <= thr < hi:
                thr = lo
            return int(feats[j]), float(thr)
        return None

    def apply(self, X):
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(len(X), dtype=np.int64)
        rows = np.arange(len(X))
        while True:
            f = self.feature_[node]
            internal = f >= 0
            if not internal.any():
                return node
            r = rows[internal]
            nd = node[internal]
            go_left = X[r, f[internal]] <= self.threshold_[nd]
            node[internal] = np.where(go_left, self.left_[nd], self.right_[nd])

    def predict(self, X):
        return self.value_[self.apply(X)]


class RandomForest:
    """Bagged Gini trees with per-split feature subsampling.

    Parameters
    ----------
    n_trees : int
    max_features : int, "sqrt" or None
        Candidate features per split; "sqrt" means ``floor(sqrt(d))``.
    max_depth : int or None
    bootstrap : bool
        Draw a bootstrap sample of the training rows for every tree.
    seed : int
        Tree ``t`` uses the ``t``-th splitmix64 child seed for both its
        bootstrap draw and its feature subsampling.
    """

    def __init__(self, n_trees=100, max_features="sqrt", max_depth=None, bootstrap=True, seed=0):
        if n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        self.n_trees = n_trees
        self.max_features = max_features
        self.max_depth = max_depth
        self.bootstrap = bootstrap
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        self.classes_, y_idx = encode(y)
        n, d = X.shape
        K = len(self.classes_)
        if self.max_features == "sqrt":
            m = max(1, math.isqrt(d))
        else:
            m = self.max_features
        self.trees_ = []
        for tree_seed in child_seeds(self.seed, self.n_trees):
            rng = np.random.default_rng(tree_seed)
            rows = rng.integers(0, n, n) if self.bootstrap else np.arange(n)
            tree = DecisionTree(max_features=m, max_depth=self.max_depth, seed=rng.integers(2**63))
            tree.fit(X[rows], y_idx[rows], n_classes=K)
            self.trees_.append(tree)
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        K = len(self.classes_)
        votes = np.zeros((len(X), K), dtype=np.int64)
        rows = np.arange(len(X))
        for tree in self.trees_:
            np.add.at(votes, (rows, tree.predict(X)), 1)
        # argmax returns the first maximum: ties go to the smallest class index
        return self.classes_[np.argmax(votes, axis=1)]
