import numpy as np

from ._common import encode


class KNeighborsClassifier:
    """Uniform-vote k-nearest neighbors with Euclidean distance.

    Equidistant neighbors are taken in training-row order; tied votes go to
    the smallest class index.
    """

    def __init__(self, k=5):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k

    def fit(self, X, y):
        self.X_ = np.asarray(X, dtype=np.float64)
        self.classes_, self.y_ = encode(y)
        return self

    def predict(self, X):
        X = np.asarray(X, dtype=np.float64)
        k = min(self.k, len(self.X_))
        # direct differences, so exact duplicates are at distance exactly 0
        d2 = np.empty((len(X), len(self.X_)))
        for start in range(0, len(X), 64):
            diff = X[start:start + 64, None, :] - self.X_[None, :, :]
            d2[start:start + 64] = np.einsum("ijk,ijk->ij", diff, diff)
        # stable sort keeps training-row order among equal distances
        nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
        votes = np.zeros((len(X), len(self.classes_)), dtype=np.int64)
        for col in range(k):
            np.add.at(votes, (np.arange(len(X)), self.y_[nearest[:, col]]), 1)
        return self.classes_[np.argmax(votes, axis=1)]
