import numpy as np

from ._common import encode, standardize_fit


def _softmax_loss(W, b, X, Y, alpha):
    """Summed cross-entropy plus ``alpha/2 * ||W||^2`` (bias not penalized)."""
    Z = X @ W + b
    Z = Z - Z.max(axis=1, keepdims=True)
    logsum = np.log(np.exp(Z).sum(axis=1))
    loss = np.sum(logsum - (Z * Y).sum(axis=1)) + 0.5 * alpha * np.sum(W * W)
    P = np.exp(Z - logsum[:, None])
    return loss, P


class LogisticRegression:
    """Multinomial logistic regression trained by full-batch gradient descent.

    Step sizes come from an Armijo backtracking line search, so the training
    loss never increases between iterations. Features are standardized with
    the training mean and standard deviation.

    Parameters
    ----------
    C : float
        Inverse L2 regularization strength.
    max_iter : int
    tol : float
        Stop once the gradient's infinity norm is at most ``tol``.
    """

    def __init__(self, C=1.0, max_iter=500, tol=1e-6):
        if C <= 0:
            raise ValueError("C must be > 0")
        self.C = C
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y):
        X = np.asarray(X, dtype=np.float64)
        self.classes_, y_idx = encode(y)
        self.mean_, self.std_ = standardize_fit(X)
        Xs = (X - self.mean_) / self.std_
        n, d = Xs.shape
        K = len(self.classes_)
        Y = np.zeros((n, K))
        Y[np.arange(n), y_idx] = 1.0
        alpha = 1.0 / self.C

        W = np.zeros((d, K))
        b = np.zeros(K)
        loss, P = _softmax_loss(W, b, Xs, Y, alpha)
        self.loss_history_ = [loss]
        step = 1.0 / max(n, 1)
        self.n_iter_ = 0
        for it in range(self.max_iter):
            R = P - Y
            gW = Xs.T @ R + alpha * W
            gb = R.sum(axis=0)
            gmax = max(np.abs(gW).max(), np.abs(gb).max())
            if gmax <= self.tol:
                break
            gnorm2 = np.sum(gW * gW) + np.sum(gb * gb)
            step *= 2.0
            while True:
                W_new = W - step * gW
                b_new = b - step * gb
                loss_new, P_new = _softmax_loss(W_new, b_new, Xs, Y, alpha)
                if loss_new <= loss - 1e-4 * step * gnorm2:
                    break
                step *= 0.5
                if step < 1e-20:
                    break
            if step < 1e-20:
                break
            W, b, loss, P = W_new, b_new, loss_new, P_new
            self.loss_history_.append(loss)
            self.n_iter_ = it + 1
        self.coef_, self.intercept_ = W, b
        return self

    def decision_function(self, X):
        Xs = (np.asarray(X, dtype=np.float64) - self.mean_) / self.std_
        return Xs @ self.coef_ + self.intercept_

    def predict(self, X):
        return self.classes_[np.argmax(self.decision_function(X), axis=1)]
