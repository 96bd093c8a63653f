import numpy as np

from ._common import encode, standardize_fit


class LinearSVM:
    """One-vs-rest linear SVM fit by stochastic sub-gradient descent.

    Each binary problem minimizes ``lam/2 ||w||^2 + mean(hinge)`` with
    ``lam = 1 / C``, using Pegasos steps ``1 / (lam t)``. Because the loss is
    a mean, duplicating every training row leaves the optimum unchanged.
    The intercept is a constant input column and is regularized with the
    weights. The returned weights average the iterates of the second half
    of training. Samples are visited in a seed-derived order each epoch.
    """

    def __init__(self, C=1.0, epochs=200, seed=0):
        if C <= 0:
            raise ValueError("C must be > 0")
        self.C = C
        self.epochs = epochs
        self.seed = seed

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        self.classes_, y_idx = encode(y)
        self.mean_, self.std_ = standardize_fit(X)
        Xs = np.hstack([(X - self.mean_) / self.std_, np.ones((len(X), 1))])
        n, d = Xs.shape
        K = len(self.classes_)
        Ypm = -np.ones((n, K))
        Ypm[np.arange(n), y_idx] = 1.0
        lam = 1.0 / self.C

        rng = np.random.default_rng(self.seed)
        W = np.zeros((K, d))
        W_sum = np.zeros((K, d))
        n_avg = 0
        avg_from = self.epochs // 2
        t = 0
        for epoch in range(self.epochs):
            for i in rng.permutation(n):
                t += 1
                eta = 1.0 / (lam * t)
                x = Xs[i]
                yi = Ypm[i]
                active = yi * (W @ x) < 1.0
                W *= 1.0 - 1.0 / t
                if active.any():
                    W[active] += eta * yi[active, None] * x
                if epoch >= avg_from:
                    W_sum += W
                    n_avg += 1
        self.coef_ = W_sum / n_avg
        return self

    def decision_function(self, X):
        Xs = (np.asarray(X, dtype=np.float64) - self.mean_) / self.std_
        return Xs @ self.coef_[:, :-1].T + self.coef_[:, -1]

    def predict(self, X):
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]
