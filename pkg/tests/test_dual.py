"""Dual-number forward differentiation against closed forms and FD."""

import numpy as np
import pytest

from detmin.dual import (Dual, finite_difference_gradient,
                         finite_difference_hessian, gradient_of, hessian_of,
                         value)


def test_first_order_arithmetic():
    z = Dual(3.0, 1.0)
    w = (z * z + 2.0 * z + 1.0) / (z + 1.0)  # (z+1)^2 / (z+1) = z + 1
    assert w.val == pytest.approx(4.0)
    assert w.eps == pytest.approx(1.0)


def test_power_and_rdiv():
    z = Dual(2.0, 1.0)
    assert (z ** 3).val == 8.0
    assert (z ** 3).eps == 12.0
    w = 1.0 / z
    assert w.val == pytest.approx(0.5)
    assert w.eps == pytest.approx(-0.25)
    assert (z ** 0).eps == 0.0


def test_value_strips_nesting():
    nested = Dual(Dual(5.0, 1.0), Dual(2.0, 3.0))
    assert value(nested) == 5.0


def test_gradient_of_polynomial_map():
    def f(x):
        return np.array([x[0] * x[1], x[1] ** 2 + x[2]], dtype=object)

    x = np.array([1.5, -2.0, 0.5])
    jac = gradient_of(f, x)
    expected = np.array([[-2.0, 1.5, 0.0], [0.0, -4.0, 1.0]])
    assert jac.shape == (2, 3)
    assert np.allclose(jac, expected, atol=1e-14)


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    x = rng.normal(size=4)

    def f(v):
        m = np.empty((2, 2), dtype=object)
        m[0, 0], m[0, 1], m[1, 0], m[1, 1] = v[0], v[1], v[2], v[3]
        return np.array([np.dot(m, m)[0, 0], np.dot(m, m).trace()],
                        dtype=object)

    assert np.allclose(gradient_of(f, x), finite_difference_gradient(f, x),
                       atol=1e-7)


def test_hessian_of_cubic():
    def f(v):
        return v[0] ** 3 + v[0] * v[1] * v[2]

    x = np.array([2.0, 3.0, -1.0])
    h = hessian_of(f, x)
    expected = np.array([[12.0, -1.0, 3.0],
                         [-1.0, 0.0, 2.0],
                         [3.0, 2.0, 0.0]])
    assert np.allclose(h, expected, atol=1e-13)
    assert np.allclose(h, h.T)


def test_hessian_matches_finite_differences():
    rng = np.random.default_rng(1)
    x = rng.normal(size=5)

    def f(v):
        return (v[0] * v[1] - v[2] * v[3]) * v[4] + v[1] ** 2

    assert np.allclose(hessian_of(f, x), finite_difference_hessian(f, x),
                       atol=1e-6)
