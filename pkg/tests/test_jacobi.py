import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from theta_scope.core_eval import DomainError, eval_theta
from theta_scope.jacobi import eval_theta_star, identity_residual, product_tail, triple_product


def test_star_examples():
    assert eval_theta_star(0.5, 1).value == pytest.approx(2 * eval_theta(0.5, 1).value, abs=1e-14)
    assert abs(eval_theta_star(0.5, 1).value - 3.2832651) < 1e-7
    assert abs(eval_theta_star(0.3, -1).value) < 1e-15
    assert abs(eval_theta_star(-0.6, 2).value - triple_product(-0.6, 2, 1e-15).value) < 1e-10


def test_star_against_bilateral_sum():
    for q, x in [(0.5, 1.5 + 0.2j), (-0.7, 0.4 - 0.9j)]:
        assert abs(eval_theta_star(q, x).value - oracles.bilateral(q, x)) < 1e-12


def test_product_examples():
    r = triple_product(0, 5, 1e-12)
    assert r.value == pytest.approx(1.2) and r.factors_used == 1
    assert triple_product(0.5, -1, 1e-12).value == 0
    assert abs(triple_product(0.3, 2 + 1j, 1e-12).value - eval_theta_star(0.3, 2 + 1j).value) < 1e-10


def test_errors():
    with pytest.raises(DomainError):
        eval_theta_star(0.5, 0)
    with pytest.raises(DomainError):
        triple_product(0.5, 0, 1e-12)
    with pytest.raises(DomainError):
        triple_product(0.5, 2, 0)


def test_residual_examples():
    assert identity_residual(0.5, 2) < 1e-11
    assert identity_residual(-0.7, 0.5 + 0.5j) < 1e-10
    assert identity_residual(0.3, -1) < 1e-14


def test_tail_bound_controls_truncation():
    q, x = 0.8, 1.3 - 0.4j
    full = triple_product(q, x, 1e-15).value
    r = triple_product(q, x, 1e-6)
    assert r.tail_bound <= 1e-6
    assert abs(r.value / full - 1) <= r.tail_bound
    assert product_tail(0.8, 1.3, 1) == float("inf")


qs = st.floats(-0.9, 0.9)
xs = st.builds(lambda r, t: r * np.exp(1j * t), st.floats(0.2, 5), st.floats(0, 2 * np.pi))


@settings(max_examples=200, deadline=None)
@given(qs, xs)
def test_identity_property(q, x):
    star = eval_theta_star(q, x)
    prod = triple_product(q, x)
    res = identity_residual(q, x)
    budget = 10 * (star.error_bound + prod.tail_bound * abs(prod.value) + 1e-13 * (1 + abs(star.value)))
    assert res <= budget


@settings(max_examples=100, deadline=None)
@given(qs, xs)
def test_inversion_symmetry(q, x):
    a = eval_theta_star(q, x)
    b = eval_theta_star(q, 1 / x)
    assert abs(b.value - x * a.value) <= 10 * (b.error_bound + abs(x) * a.error_bound) + 1e-13 * (1 + abs(b.value))
