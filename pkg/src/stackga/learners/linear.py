"""L2-regularized logistic regression fit by damped Newton steps.

Features are standardized internally (train-time mean/std folded into the
fitted coefficients), which keeps the optimization well conditioned on raw
clinical scales without asking callers to preprocess.
"""

import numpy as np


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


class LogisticRegression:
    def __init__(self, reg_strength=1.0, max_iter=1000, tol=1e-6):
        self.reg_strength = reg_strength
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y, rng=None):
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        self.mean_ = X.mean(axis=0)
        self.scale_ = np.maximum(X.std(axis=0), 1e-12)
        Z = (X - self.mean_) / self.scale_
        n, d = Z.shape
        w = np.zeros(d)
        b = 0.0
        lam = self.reg_strength
        for _ in range(self.max_iter):
            p = _sigmoid(Z @ w + b)
            grad_w = Z.T @ (p - y) + lam * w
            grad_b = np.sum(p - y)
            if max(np.abs(grad_w).max(initial=0.0), abs(grad_b)) < self.tol * n:
                break
            r = np.maximum(p * (1.0 - p), 1e-10)
            H = (Z * r[:, None]).T @ Z
            H[np.diag_indices(d)] += lam
            hb = float(r.sum())
            hwb = Z.T @ r
            # full (d+1) Newton system including the intercept row
            A = np.empty((d + 1, d + 1))
            A[:d, :d] = H
            A[:d, d] = hwb
            A[d, :d] = hwb
            A[d, d] = hb
            g = np.append(grad_w, grad_b)
            step = np.linalg.solve(A + 1e-10 * np.eye(d + 1), g)
            w -= step[:d]
            b -= step[d]
        self.coef_ = w
        self.intercept_ = b
        return self

    def decision_function(self, X):
        X = np.asarray(X, dtype=np.float64)
        Z = (X - self.mean_) / self.scale_
        return Z @ self.coef_ + self.intercept_

    def predict_proba(self, X):
        p1 = _sigmoid(self.decision_function(X))
        return np.column_stack([1.0 - p1, p1])
