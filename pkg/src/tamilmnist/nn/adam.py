"""Adam optimizer with bias correction."""

from __future__ import annotations

import numpy as np


class Adam:
    """Standard Adam over a model's parameter list.

    m <- b1*m + (1-b1)*g ; v <- b2*v + (1-b2)*g^2
    with bias correction m_hat = m/(1-b1^t), v_hat = v/(1-b2^t), then
    theta <- theta - lr * m_hat / (sqrt(v_hat) + eps).
    """

    def __init__(self, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999,
                 epsilon: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.step_count = 0
        self._m: list[dict[str, np.ndarray]] | None = None
        self._v: list[dict[str, np.ndarray]] | None = None

    def step(self, params: list[dict[str, np.ndarray]],
             grads: list[dict[str, np.ndarray]]) -> None:
        """Apply one update in place. Moment arrays are allocated lazily to
        match the parameter shapes on the first call."""
        if self._m is None:
            self._m = [{k: np.zeros_like(t) for k, t in p.items()} for p in params]
            self._v = [{k: np.zeros_like(t) for k, t in p.items()} for p in params]
        self.step_count += 1
        t = self.step_count
        bc1 = 1.0 - self.beta1 ** t
        bc2 = 1.0 - self.beta2 ** t
        for p, g, m, v in zip(params, grads, self._m, self._v):
            for key in p:
                grad = g[key].astype(p[key].dtype, copy=False)
                m[key] = self.beta1 * m[key] + (1.0 - self.beta1) * grad
                v[key] = self.beta2 * v[key] + (1.0 - self.beta2) * grad * grad
                m_hat = m[key] / bc1
                v_hat = v[key] / bc2
                p[key] -= self.lr * m_hat / (np.sqrt(v_hat) + self.epsilon)
