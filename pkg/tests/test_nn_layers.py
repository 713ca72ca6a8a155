import numpy as np
import pytest

from oracles import conv2d_loops, maxpool_loops

from tamilmnist.nn import layers as L


class TestConv2d:
    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            x = rng.standard_normal((3, 8, 8, 2))
            w = rng.standard_normal((3, 3, 2, 4))
            b = rng.standard_normal(4)
            got = L.conv2d_forward(x, w, b)
            assert np.abs(got - conv2d_loops(x, w, b)).max() < 1e-10

    def test_zero_input_zero_bias(self):
        x = np.zeros((2, 6, 6, 3))
        w = np.random.default_rng(1).standard_normal((3, 3, 3, 5))
        out = L.conv2d_forward(x, w, np.zeros(5))
        assert (out == 0).all()

    def test_backward_shapes_and_bias(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((2, 7, 7, 3))
        w = rng.standard_normal((3, 3, 3, 4))
        dy = rng.standard_normal((2, 5, 5, 4))
        dx, dw, db = L.conv2d_backward(dy, x, w)
        assert dx.shape == x.shape and dw.shape == w.shape and db.shape == (4,)
        assert np.allclose(db, dy.sum(axis=(0, 1, 2)))

    def test_backward_matches_dot_products(self):
        # <dy, conv(x)> must respond linearly: check dW via the definition
        # dW[d,e,c,f] = sum x[n,i+d,j+e,c] * dy[n,i,j,f]
        rng = np.random.default_rng(3)
        x = rng.standard_normal((1, 5, 5, 2))
        w = rng.standard_normal((3, 3, 2, 3))
        dy = rng.standard_normal((1, 3, 3, 3))
        _, dw, _ = L.conv2d_backward(dy, x, w)
        manual = np.zeros_like(w)
        for d in range(3):
            for e in range(3):
                for c in range(2):
                    for f in range(3):
                        acc = 0.0
                        for i in range(3):
                            for j in range(3):
                                acc += x[0, i + d, j + e, c] * dy[0, i, j, f]
                        manual[d, e, c, f] = acc
        assert np.abs(dw - manual).max() < 1e-12


class TestMaxPool:
    def test_four_by_four_hand_oracle(self):
        x = np.arange(16, dtype=np.float64).reshape(1, 4, 4, 1)
        y, _ = L.maxpool2d_forward(x)
        assert y[0, :, :, 0].tolist() == [[5.0, 7.0], [13.0, 15.0]]

    def test_matches_loop_oracle(self):
        rng = np.random.default_rng(4)
        for shape in [(2, 6, 6, 3), (1, 5, 5, 2), (3, 7, 4, 1), (2, 11, 11, 4)]:
            x = rng.standard_normal(shape)
            y, _ = L.maxpool2d_forward(x)
            assert np.array_equal(y, maxpool_loops(x))

    def test_odd_edge_floor(self):
        x = np.random.default_rng(5).standard_normal((1, 11, 11, 2))
        y, _ = L.maxpool2d_forward(x)
        assert y.shape == (1, 5, 5, 2)

    def test_backward_routes_to_first_argmax(self):
        # all-equal block: gradient must land on position (0, 0) only
        x = np.ones((1, 2, 2, 1))
        y, idx = L.maxpool2d_forward(x)
        dy = np.full((1, 1, 1, 1), 3.0)
        dx = L.maxpool2d_backward(dy, idx, x.shape)
        assert dx[0, :, :, 0].tolist() == [[3.0, 0.0], [0.0, 0.0]]

    def test_backward_row_major_tie_order(self):
        # tie between (0, 1) and (1, 0): row-major first-encounter is (0, 1)
        x = np.array([[0.0, 5.0], [5.0, 1.0]]).reshape(1, 2, 2, 1)
        _, idx = L.maxpool2d_forward(x)
        dx = L.maxpool2d_backward(np.ones((1, 1, 1, 1)), idx, x.shape)
        assert dx[0, :, :, 0].tolist() == [[0.0, 1.0], [0.0, 0.0]]

    def test_backward_scatters_each_gradient_once(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal((2, 6, 6, 3))
        _, idx = L.maxpool2d_forward(x)
        dy = rng.standard_normal((2, 3, 3, 3))
        dx = L.maxpool2d_backward(dy, idx, x.shape)
        assert np.isclose(dx.sum(), dy.sum())
        assert int((dx != 0).sum()) <= dy.size

    def test_backward_zero_pads_cropped_edges(self):
        x = np.random.default_rng(7).standard_normal((1, 5, 5, 1))
        _, idx = L.maxpool2d_forward(x)
        dx = L.maxpool2d_backward(np.ones((1, 2, 2, 1)), idx, x.shape)
        assert dx.shape == x.shape
        assert (dx[:, 4, :, :] == 0).all() and (dx[:, :, 4, :] == 0).all()


class TestPointwise:
    def test_relu(self):
        x = np.array([-2.0, 0.0, 3.0])
        assert L.relu_forward(x).tolist() == [0.0, 0.0, 3.0]
        assert L.relu_backward(np.ones(3), x).tolist() == [0.0, 0.0, 1.0]

    def test_dense_forward_backward(self):
        rng = np.random.default_rng(8)
        x = rng.standard_normal((4, 6))
        w = rng.standard_normal((6, 3))
        b = rng.standard_normal(3)
        y = L.dense_forward(x, w, b)
        assert np.allclose(y, x @ w + b)
        dy = rng.standard_normal((4, 3))
        dx, dw, db = L.dense_backward(dy, x, w)
        assert np.allclose(dx, dy @ w.T)
        assert np.allclose(dw, x.T @ dy)
        assert np.allclose(db, dy.sum(axis=0))


class TestSoftmax:
    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(9)
        probs, _ = L.softmax(rng.standard_normal((50, 13)) * 10)
        assert np.abs(probs.sum(axis=1) - 1.0).max() < 1e-6
        assert (probs > 0).all()

    def test_shift_invariance(self):
        rng = np.random.default_rng(10)
        logits = rng.standard_normal((20, 13))
        p1, _ = L.softmax(logits)
        p2, _ = L.softmax(logits + 123.456)
        assert np.abs(p1 - p2).max() < 1e-12

    def test_log_probs_consistent(self):
        logits = np.random.default_rng(11).standard_normal((5, 13))
        probs, log_probs = L.softmax(logits)
        assert np.allclose(np.exp(log_probs), probs)
