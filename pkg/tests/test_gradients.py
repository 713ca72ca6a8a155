"""Central finite-difference checks of the analytic gradients.

Runs reduced-width versions of both architectures in float64; structure is
identical to the full models, only layer widths shrink so the element-wise
sweep stays tractable.
"""

import numpy as np

from oracles import finite_difference_grads, max_relative_error

from tamilmnist.nn import build_cnn_model, build_fc_model, init_params

H = 1e-4
TOL = 1e-4


def check_model(model, seed):
    rng = np.random.default_rng(seed)
    x = rng.random((2, 28, 28, 1))
    labels = rng.integers(0, model.n_classes, size=2)
    _, cache = model.forward(x, train_mode=True)
    _, analytic = model.backward(cache, labels)
    numeric = finite_difference_grads(model, x, labels, h=H)
    return max_relative_error(analytic, numeric)


class TestFiniteDifferences:
    def test_fc_reduced(self):
        model = init_params(build_fc_model(units=(32, 16), dtype=np.float64), seed=21)
        assert check_model(model, seed=100) < TOL

    def test_cnn_reduced(self):
        model = init_params(build_cnn_model(filters=(4, 8), dtype=np.float64), seed=22)
        assert check_model(model, seed=101) < TOL
