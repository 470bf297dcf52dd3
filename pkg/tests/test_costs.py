import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dppa.costs import (LogCoshCost, ProxConvergenceError, QuadraticCost, SquaredNormCost, ZeroCost,
                        power_iteration_max_eig, prox_generic, prox_quadratic, prox_residual,
                        smoothness_constant)
from oracles import central_difference_gradient


def random_quadratic(rng, m=3, d=2, scale=0.5):
    return QuadraticCost(rng.standard_normal((m, d)), rng.standard_normal(m), scale)


def test_isotropic_shrinkage():
    q = QuadraticCost(np.eye(3), np.zeros(3))
    v = np.array([2.0, -4.0, 1.0])
    np.testing.assert_allclose(prox_quadratic(q, v, 1.0), v / 2, atol=1e-15)


def test_vanishing_eta_returns_input(rng):
    q = random_quadratic(rng)
    v = rng.standard_normal(2)
    eta = 1e-12
    out = prox_quadratic(q, v, eta)
    # x+ = v - eta grad f(x+) so the displacement is O(eta)
    assert np.linalg.norm(out - v) <= 10 * eta * np.linalg.norm(q.gradient(v)) + 1e-15


def test_closed_form_matches_generic_on_small_instance(rng):
    q = random_quadratic(rng, 3, 2)
    v = rng.standard_normal(2)
    a = prox_quadratic(q, v, 0.7)
    b = prox_generic(q, v, 0.7, tol=1e-13)
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_prox_of_zero_is_identity():
    v = np.array([1.5, -2.0])
    np.testing.assert_array_equal(prox_generic(ZeroCost(2), v, 3.0), v)
    np.testing.assert_array_equal(ZeroCost(2).prox(v, 3.0), v)


@pytest.mark.parametrize("alpha,eta", [(1.0, 0.5), (4.0, 2.0), (0.1, 10.0)])
def test_prox_of_squared_norm_is_scalar_shrinkage(alpha, eta):
    v = np.array([3.0, -1.0, 0.5])
    out = prox_generic(SquaredNormCost(alpha, np.zeros(3)), v, eta, tol=1e-14)
    np.testing.assert_allclose(out, v / (1 + eta * alpha), rtol=1e-12)


def test_prox_generic_raises_when_cap_hit():
    class Lying(SquaredNormCost):
        @property
        def smoothness(self):
            return 0.0  # real constant is 100; the fixed step then overshoots

    with pytest.raises(ProxConvergenceError):
        prox_generic(Lying(100.0, np.zeros(2)), np.ones(2), 1.0, max_iter=1000)


def test_prox_rejects_nonpositive_eta():
    q = QuadraticCost(np.eye(2), np.zeros(2))
    with pytest.raises(ValueError):
        prox_quadratic(q, np.zeros(2), 0.0)
    with pytest.raises(ValueError):
        prox_generic(q, np.zeros(2), -1.0)


def test_smoothness_examples():
    assert smoothness_constant(QuadraticCost(np.eye(4), np.zeros(4))) == pytest.approx(1.0, rel=1e-10)
    assert smoothness_constant(QuadraticCost([[3.0]], [0.0])) == pytest.approx(9.0, rel=1e-10)
    assert smoothness_constant(QuadraticCost(np.eye(2), np.zeros(2), scale=1.0)) == pytest.approx(2.0)


def test_smoothness_matches_eigensolver(rng):
    for _ in range(20):
        a = rng.standard_normal((5, 10))
        q = QuadraticCost(a, rng.standard_normal(5))
        assert q.smoothness == pytest.approx(np.linalg.eigvalsh(a.T @ a)[-1], rel=1e-8)


def test_smoothness_magnitude_of_gaussian_5x10():
    rng = np.random.default_rng(0)
    vals = [smoothness_constant(QuadraticCost(rng.standard_normal((5, 10)), np.zeros(5)))
            for _ in range(300)]
    # largest eigenvalue of a 5x10 Gaussian Wishart is near (sqrt 5 + sqrt 10)^2 ~ 29.1
    assert 20 < np.mean(vals) < 35


def test_power_iteration_zero_matrix():
    assert power_iteration_max_eig(np.zeros((3, 3))) == 0.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    for f in (random_quadratic(rng, 4, 3, scale=rng.uniform(0.1, 2)),
              LogCoshCost(rng.standard_normal((4, 3)), rng.standard_normal(4))):
        x = rng.standard_normal(3)
        g = f.gradient(x)
        fd = central_difference_gradient(f.value, x)
        assert np.linalg.norm(g - fd) <= 1e-5 * max(1.0, np.linalg.norm(g))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), eta=st.floats(1e-3, 1e2))
def test_prox_optimality_and_nonexpansiveness(seed, eta):
    rng = np.random.default_rng(seed)
    q = random_quadratic(rng, 5, 4, scale=rng.uniform(0.1, 2))
    u, v = rng.standard_normal(4) * 3, rng.standard_normal(4) * 3
    pu, pv = prox_quadratic(q, u, eta), prox_quadratic(q, v, eta)
    assert prox_residual(q, pv, v, eta) <= 1e-9 * (1 + np.linalg.norm(v))
    assert np.linalg.norm(pu - pv) <= np.linalg.norm(u - v) * (1 + 1e-12)


def test_generic_prox_on_non_quadratic(rng):
    f = LogCoshCost(rng.standard_normal((6, 3)), rng.standard_normal(6))
    v = rng.standard_normal(3)
    out = f.prox(v, 0.8)
    assert prox_residual(f, out, v, 0.8) <= 1e-12 * (1 + np.linalg.norm(v))


def test_quadratic_validation():
    with pytest.raises(ValueError):
        QuadraticCost(np.eye(2), np.zeros(3))
    with pytest.raises(ValueError):
        QuadraticCost(np.eye(2), np.zeros(2), scale=-1.0)
    q = QuadraticCost.from_dict({"a": [[1.0, 2.0]], "y": [3.0], "scale": 0.25})
    assert q.to_dict() == {"a": [[1.0, 2.0]], "y": [3.0], "scale": 0.25}
    assert q.value([1.0, 1.0]) == pytest.approx(0.0)
