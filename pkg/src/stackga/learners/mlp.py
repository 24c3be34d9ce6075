"""Single-hidden-layer perceptron: relu units, softmax output, Adam updates.

The step size adapts by halving whenever two consecutive epochs fail to
reduce the full-set training loss. `loss_and_grads` is the exact analytic
gradient used by the optimizer, kept as a standalone method so it can be
checked against finite differences.
"""

import numpy as np


def _softmax(z):
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class MlpClassifier:
    def __init__(self, hidden_units=100, batch_size=100, max_epochs=100,
                 learning_rate=1e-3, adaptive=True):
        self.hidden_units = hidden_units
        self.batch_size = batch_size
        self.max_epochs = max_epochs
        self.learning_rate = learning_rate
        self.adaptive = adaptive

    def _init_params(self, d, rng):
        h = self.hidden_units
        lim1 = 1.0 / np.sqrt(d)
        lim2 = 1.0 / np.sqrt(h)
        return {
            "W1": rng.uniform(-lim1, lim1, size=(d, h)),
            "b1": np.zeros(h),
            "W2": rng.uniform(-lim2, lim2, size=(h, 2)),
            "b2": np.zeros(2),
        }

    @staticmethod
    def loss_and_grads(params, X, y):
        """Mean cross-entropy over the batch and its exact parameter gradients."""
        W1, b1, W2, b2 = params["W1"], params["b1"], params["W2"], params["b2"]
        n = X.shape[0]
        a = X @ W1 + b1
        h = np.maximum(a, 0.0)
        probs = _softmax(h @ W2 + b2)
        eps = 1e-12
        loss = -np.mean(np.log(probs[np.arange(n), y] + eps))
        dlogits = probs.copy()
        dlogits[np.arange(n), y] -= 1.0
        dlogits /= n
        grads = {
            "W2": h.T @ dlogits,
            "b2": dlogits.sum(axis=0),
        }
        dh = dlogits @ W2.T
        dh[a <= 0] = 0.0
        grads["W1"] = X.T @ dh
        grads["b1"] = dh.sum(axis=0)
        return loss, grads

    def fit(self, X, y, rng=None):
        rng = rng or np.random.default_rng(0)
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        self.mean_ = X.mean(axis=0)
        self.scale_ = np.maximum(X.std(axis=0), 1e-12)
        Z = (X - self.mean_) / self.scale_
        n = Z.shape[0]
        self.params_ = self._init_params(Z.shape[1], rng)
        m = {k: np.zeros_like(v) for k, v in self.params_.items()}
        v = {k: np.zeros_like(v) for k, v in self.params_.items()}
        beta1, beta2, eps = 0.9, 0.999, 1e-8
        lr = self.learning_rate
        step = 0
        prev_loss = np.inf
        bad_epochs = 0
        batch = min(self.batch_size, n)
        for _ in range(self.max_epochs):
            order = rng.permutation(n)
            for start in range(0, n, batch):
                idx = order[start:start + batch]
                _, grads = self.loss_and_grads(self.params_, Z[idx], y[idx])
                step += 1
                for k in self.params_:
                    m[k] = beta1 * m[k] + (1 - beta1) * grads[k]
                    v[k] = beta2 * v[k] + (1 - beta2) * grads[k] ** 2
                    mhat = m[k] / (1 - beta1**step)
                    vhat = v[k] / (1 - beta2**step)
                    self.params_[k] -= lr * mhat / (np.sqrt(vhat) + eps)
            epoch_loss, _ = self.loss_and_grads(self.params_, Z, y)
            if self.adaptive:
                if epoch_loss >= prev_loss:
                    bad_epochs += 1
                    if bad_epochs >= 2:
                        lr *= 0.5
                        bad_epochs = 0
                else:
                    bad_epochs = 0
            prev_loss = epoch_loss
        return self

    def predict_proba(self, X):
        X = np.asarray(X, dtype=np.float64)
        Z = (X - self.mean_) / self.scale_
        h = np.maximum(Z @ self.params_["W1"] + self.params_["b1"], 0.0)
        return _softmax(h @ self.params_["W2"] + self.params_["b2"])
