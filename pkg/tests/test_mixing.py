import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dppa.mixing import (MixingMatrix, build_weights, metropolis_hastings_weights,
                         metropolis_weights, mix, pattern_violations, spectral_gap_quantities,
                         validate_assumption2)
from dppa.netgraph import CommGraph, complete_graph, generate_random_graph, path_graph
from oracles import jacobi_eigenvalues


def test_two_node_weights():
    g = CommGraph(2, ((0, 1),))
    m = metropolis_hastings_weights(g)
    np.testing.assert_array_equal(m.w, [[0.5, 0.5], [0.5, 0.5]])
    assert m.rho_w == pytest.approx(0.0, abs=1e-15)
    assert m.lambda_min == pytest.approx(0.0, abs=1e-15)
    assert validate_assumption2(m) == []
    # 1/max(deg) puts all weight on the edge: a swap matrix with eigenvalue -1
    swap = metropolis_weights(g)
    np.testing.assert_array_equal(swap.w, [[0.0, 1.0], [1.0, 0.0]])
    assert swap.lambda_min == pytest.approx(-1.0)
    assert swap.rho_w == pytest.approx(1.0)
    assert validate_assumption2(swap) == ["zero diagonal at nodes [0, 1]"]


def test_path_of_three_has_zero_center_diagonal():
    m = metropolis_weights(path_graph(3))
    np.testing.assert_array_equal(m.w, [[0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]])
    assert validate_assumption2(m) == ["zero diagonal at nodes [1]"]


def test_k4_metropolis_rejected():
    m = metropolis_weights(complete_graph(4))
    expected = np.full((4, 4), 1 / 3)
    np.fill_diagonal(expected, 0.0)
    np.testing.assert_allclose(m.w, expected, atol=1e-16)
    assert validate_assumption2(m) == ["zero diagonal at nodes [0, 1, 2, 3]"]


def test_scaled_row_reports_row_sum():
    w = metropolis_hastings_weights(path_graph(3)).w.copy()
    w[1] *= 0.9
    out = validate_assumption2(w)
    assert any(v.startswith("row sum != 1") for v in out)


def test_metropolis_hastings_path_of_three():
    m = metropolis_hastings_weights(path_graph(3))
    third = 1 / 3
    np.testing.assert_allclose(m.w, [[1 - third, third, 0], [third, third, third],
                                     [0, third, 1 - third]], atol=1e-15)
    assert validate_assumption2(m) == []


def test_max_degree_node_always_has_zero_diagonal_under_metropolis():
    for seed in range(20):
        g = generate_random_graph(20, 0.4, seed)
        m = metropolis_weights(g)
        top = int(np.argmax(g.degrees))
        assert m.w[top, top] == pytest.approx(0.0, abs=1e-15)


def test_identity_spectra():
    rho, lam = spectral_gap_quantities(np.eye(5))
    assert rho == pytest.approx(1.0)
    assert lam == pytest.approx(1.0)


def test_spectral_quantities_reject_nonsymmetric():
    with pytest.raises(ValueError):
        spectral_gap_quantities([[0.5, 0.5], [0.2, 0.8]])


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("scheme", ["metropolis", "metropolis-hastings"])
def test_spectra_match_jacobi_oracle(seed, scheme):
    g = generate_random_graph(12, 0.4, seed)
    m = build_weights(g, scheme)
    ev = jacobi_eigenvalues(m.w)
    np.testing.assert_allclose(ev, np.linalg.eigvalsh(m.w), atol=1e-12)
    # the top eigenvalue 1 belongs to the consensus direction
    assert ev[-1] == pytest.approx(1.0, abs=1e-12)
    assert m.lambda_min == pytest.approx(ev[0], abs=1e-10)
    assert m.rho_w == pytest.approx(max(abs(ev[0]), abs(ev[-2])), abs=1e-10)
    assert m.rho_w < 1
    if m.lambda_min < 0:
        assert m.rho_w >= abs(m.lambda_min) - 1e-12


@settings(max_examples=40, deadline=None)
@given(n=st.integers(2, 15), p=st.floats(0.3, 1.0), seed=st.integers(0, 10**6))
def test_matrix_invariants(n, p, seed):
    g = generate_random_graph(n, p, seed)
    m = metropolis_hastings_weights(g)
    assert np.array_equal(m.w, m.w.T)
    assert (m.w >= 0).all()
    np.testing.assert_allclose(m.w.sum(axis=1), 1.0, atol=1e-12)
    assert (np.diag(m.w) > 0).all()
    assert pattern_violations(m, g) == []
    assert validate_assumption2(m) == []
    assert m.rho_w < 1


def test_mix_examples():
    m = MixingMatrix.from_weights([[0.5, 0.5], [0.5, 0.5]])
    np.testing.assert_array_equal(mix(m, [[1.0], [-1.0]]), [[0.0], [0.0]])
    g = generate_random_graph(8, 0.5, 1)
    m = metropolis_hastings_weights(g)
    v = np.arange(3.0)
    np.testing.assert_allclose(mix(m, np.tile(v, (8, 1))), np.tile(v, (8, 1)), atol=1e-15)
    with pytest.raises(ValueError):
        mix(m, np.zeros((7, 3)))


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 6))
def test_mix_preserves_means_and_contracts(seed, d):
    rng = np.random.default_rng(seed)
    g = generate_random_graph(10, 0.45, seed)
    m = metropolis_hastings_weights(g)
    x = rng.standard_normal((10, d)) * rng.uniform(0.1, 100)
    out = mix(m, x)
    np.testing.assert_allclose(out.mean(axis=0), x.mean(axis=0), atol=1e-12 * (1 + np.abs(x).max()))
    xbar = x.mean(axis=0)
    assert np.linalg.norm(out - xbar) <= (m.rho_w + 1e-10) * np.linalg.norm(x - xbar) + 1e-12


def test_serialization_round_trip():
    m = metropolis_hastings_weights(generate_random_graph(6, 0.6, 2))
    data = m.to_dict()
    assert set(data) == {"w", "rho_w", "lambda_min"}
    back = MixingMatrix.from_dict(data)
    np.testing.assert_array_equal(back.w, m.w)
    assert back.rho_w == m.rho_w
