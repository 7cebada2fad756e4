import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from svexpand.families import complete_bipartite, cycle, hypercube, random_eulerian
from svexpand.graph import Digraph, GraphError
from svexpand.spectra import (
    SpectralError,
    jacobi_eigh,
    normalized_adjacency,
    second_singular_pair,
    singular_values,
    stationary_distribution,
    symmetric_eigenvalues,
)

import _oracles as orc


def triangle():
    return Digraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], directed=False)


def test_normalized_adjacency_examples():
    assert normalized_adjacency(Digraph(1, {(0, 0): 3})).tolist() == [[1.0]]
    a = normalized_adjacency(cycle(3, directed=True))
    assert a.tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    t = normalized_adjacency(triangle())
    assert np.allclose(t, (np.ones((3, 3)) - np.eye(3)) / 2, atol=0)


def test_normalized_adjacency_errors():
    with pytest.raises(GraphError):
        normalized_adjacency(Digraph(2, {(0, 1): 1}))
    with pytest.raises(GraphError, match="zero degree"):
        normalized_adjacency(Digraph(2, {(0, 0): 1}))


def test_symmetric_eigenvalues_examples():
    assert symmetric_eigenvalues(np.eye(4)).tolist() == [1, 1, 1, 1]
    c4 = normalized_adjacency(cycle(4))
    assert np.allclose(symmetric_eigenvalues(c4), [1, 0, 0, -1], atol=1e-12)
    assert symmetric_eigenvalues(np.diag([2.0, -1.0])).tolist() == [2, -1]
    with pytest.raises(SpectralError):
        symmetric_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_jacobi_2x2_all_small_matrices():
    vals = (-1, -0.5, 0, 0.5, 1)
    for a, b, c in itertools.product(vals, repeat=3):
        m = np.array([[a, b], [b, c]])
        r = math.sqrt(((a - c) / 2) ** 2 + b * b)
        want = [(a + c) / 2 + r, (a + c) / 2 - r]
        assert np.max(np.abs(jacobi_eigh(m) - want)) <= 1e-10


def test_jacobi_3x3_all_small_matrices():
    vals = (-1, -0.5, 0, 0.5, 1)
    worst = 0.0
    for a, b, c, d, e, f in itertools.product(vals, repeat=6):
        m = np.array([[a, d, e], [d, b, f], [e, f, c]])
        worst = max(worst, np.max(np.abs(jacobi_eigh(m) - orc.sym3_eigenvalues(m))))
    assert worst <= 1e-10


@pytest.mark.parametrize("n", [1, 2, 5, 12, 30])
def test_jacobi_random_against_lapack(n):
    rng = np.random.default_rng(n)
    m = rng.normal(size=(n, n))
    m = m + m.T
    vals, vecs = jacobi_eigh(m, want_vectors=True)
    assert np.max(np.abs(vals - np.linalg.eigvalsh(m)[::-1])) <= 1e-10
    assert np.max(np.abs(vecs.T @ vecs - np.eye(n))) <= 1e-8
    assert np.max(np.abs(m @ vecs - vecs * vals)) <= 1e-9
    # sign convention
    for j in range(n):
        col = vecs[:, j]
        assert col[np.argmax(np.abs(col))] > 0


def test_jacobi_sweep_cap():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(8, 8))
    with pytest.raises(SpectralError, match="did not converge"):
        jacobi_eigh(m + m.T, max_sweeps=1)


def test_singular_values_examples():
    assert np.allclose(singular_values(cycle(3, directed=True)).sigmas, 1, atol=1e-12)
    sp = singular_values(triangle())
    assert np.allclose(sp.sigmas, [1, 0.5, 0.5], atol=1e-12)
    assert np.allclose(sp.mus, [1, -0.5, -0.5], atol=1e-12)
    assert abs(singular_values(complete_bipartite(3)).sigma(2) - 1) <= 1e-12
    with pytest.raises(SpectralError):
        sp_dir = singular_values(cycle(3, directed=True))
        sp_dir.mu(1)


@pytest.mark.parametrize("seed", range(1, 21))
def test_singular_values_match_ata_oracle(seed):
    g = random_eulerian(2 + seed % 9, 0.5, seed)
    sp = singular_values(g)
    assert np.max(np.abs(np.array(sp.sigmas) - orc.singular_values_ata(g))) <= 1e-7
    assert sp.sigmas[0] <= 1 + 1e-9 and sp.sigmas[-1] >= -1e-9
    assert list(sp.sigmas) == sorted(sp.sigmas, reverse=True)
    assert sp.residual <= 1e-8


@pytest.mark.parametrize("seed", range(5))
def test_top_singular_vector(seed):
    g = random_eulerian(6, 0.5, seed)
    a = normalized_adjacency(g)
    d = np.sqrt(np.array([float(x) for x in g.out_degrees]))
    d /= np.linalg.norm(d)
    assert np.linalg.norm(a @ d - d) <= 1e-8
    assert np.linalg.norm(a.T @ d - d) <= 1e-8


def _check_pair(g, pair):
    a = normalized_adjacency(g)
    d = np.sqrt(np.array([float(x) for x in g.out_degrees]))
    d /= np.linalg.norm(d)
    assert abs(np.linalg.norm(pair.left) - 1) <= 1e-12
    assert abs(np.linalg.norm(pair.right) - 1) <= 1e-12
    assert np.linalg.norm(a @ pair.right - pair.sigma2 * pair.left) <= 1e-7
    assert np.linalg.norm(a.T @ pair.left - pair.sigma2 * pair.right) <= 1e-7
    assert abs(d @ pair.left) <= 1e-7 and abs(d @ pair.right) <= 1e-7


def test_second_singular_pair_examples():
    p = second_singular_pair(cycle(4))
    assert abs(p.sigma2 - 1) <= 1e-12
    _check_pair(cycle(4), p)
    p = second_singular_pair(cycle(3, directed=True))
    assert abs(p.sigma2 - 1) <= 1e-12
    _check_pair(cycle(3, directed=True), p)
    q3 = hypercube(3, loops=1)
    p = second_singular_pair(q3)
    # oracle: LAPACK eigenvalues of the undirected normalized adjacency
    mu = np.linalg.eigvalsh(normalized_adjacency(q3))
    assert abs(p.sigma2 - max(mu[-2], abs(mu[0]))) <= 1e-10
    assert abs(p.sigma2 - 0.5) <= 1e-10
    _check_pair(q3, p)
    with pytest.raises(GraphError):
        second_singular_pair(Digraph(1, {(0, 0): 1}))


@pytest.mark.parametrize("seed", range(10))
def test_second_singular_pair_random(seed):
    g = random_eulerian(3 + seed % 6, 0.5, seed)
    _check_pair(g, second_singular_pair(g))


def test_second_singular_pair_rank_one():
    g = Digraph.from_edges(3, [(u, v) for u in range(3) for v in range(3)])
    p = second_singular_pair(g)
    assert abs(p.sigma2) <= 1e-8
    _check_pair(g, p)


def test_undirected_cross_check_holds():
    for g in (cycle(5), cycle(6), hypercube(3), complete_bipartite(2)):
        sp = singular_values(g)
        assert abs(sp.sigma(2) - max(sp.mu(2), abs(sp.mu(g.n)))) <= 1e-8
        assert np.allclose(sorted(abs(x) for x in sp.mus), sorted(sp.sigmas), atol=1e-8)


def test_stationary_distribution():
    g = random_eulerian(7, 0.5, 3)
    d = np.array([float(x) for x in g.out_degrees])
    assert np.allclose(stationary_distribution(g), d / d.sum(), atol=1e-12)
    h = Digraph.from_edges(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
    pi = stationary_distribution(h)
    assert np.allclose(pi, [0.4, 0.4, 0.2], atol=1e-12)
    w = h.matrix() / h.matrix().sum(axis=1, keepdims=True)
    assert np.max(np.abs(pi @ w - pi)) <= 1e-10
    assert stationary_distribution(Digraph(1, {(0, 0): 1})).tolist() == [1.0]
    with pytest.raises(GraphError):
        stationary_distribution(Digraph.from_edges(2, [(0, 0), (1, 1)]))


def test_spectrum_json():
    js = singular_values(triangle()).to_json()
    assert set(js) == {"sigmas", "mus", "residual"}
    assert singular_values(cycle(3, directed=True)).to_json()["mus"] is None


@given(st.lists(st.floats(-1, 1, allow_nan=False), min_size=10, max_size=10))
@settings(max_examples=50, deadline=None)
def test_jacobi_property_4x4(entries):
    m = np.zeros((4, 4))
    m[np.triu_indices(4)] = entries
    m = m + np.triu(m, 1).T
    vals = jacobi_eigh(m)
    assert np.max(np.abs(vals - np.linalg.eigvalsh(m)[::-1])) <= 1e-10
