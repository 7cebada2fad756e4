from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from svexpand.families import cycle, fig5_graph, random_eulerian
from svexpand.graph import (
    Digraph,
    GraphError,
    degree,
    edge_mass,
    eulerianize,
    exact_stationary,
    full_mask,
    is_eulerian,
    lift_embed,
    lift_project,
    symmetric_lift,
    to_mask,
    undirectify,
)

import _oracles as orc

X, Y, U, V = range(4)


def triangle():
    return Digraph.from_edges(3, [(0, 1), (1, 2), (0, 2)], directed=False)


def test_degree_examples():
    assert degree(fig5_graph(), U, "out") == 2
    assert degree(Digraph(1), 0, "out") == 0
    assert degree(cycle(3, directed=True), 1, "in") == 1
    with pytest.raises(GraphError):
        degree(fig5_graph(), 4)


def test_invariants_rejected():
    with pytest.raises(GraphError):
        Digraph(2, {(0, 1): -1})
    with pytest.raises(GraphError):
        Digraph(2, {(0, 1): 1}, directed=False)
    with pytest.raises(GraphError):
        Digraph(2, {(0, 1): float("inf")})
    g = Digraph(2, {(0, 1): 0, (1, 0): 2})
    assert g.num_edges == 1


def test_is_eulerian():
    assert is_eulerian(fig5_graph())
    assert not is_eulerian(Digraph(2, {(0, 1): 1}))
    assert is_eulerian(triangle())
    # within the relative tolerance but not exactly
    g = Digraph(2, {(0, 1): 1.0, (1, 0): 1.0 + 1e-12})
    assert is_eulerian(g)
    assert not is_eulerian(g, tol=0)


def test_eulerianize_cycle():
    h = eulerianize(cycle(3, directed=True))
    assert h.weights == {(0, 1): Fraction(1, 3), (1, 2): Fraction(1, 3), (2, 0): Fraction(1, 3)}


def test_eulerianize_three_vertex():
    # vertices 1, 2, 3 of the worked example are 0, 1, 2 here
    g = Digraph.from_edges(3, [(0, 1), (1, 0), (1, 2), (2, 0)])
    pi = exact_stationary(g)
    assert pi == [Fraction(2, 5), Fraction(2, 5), Fraction(1, 5)]
    h = eulerianize(g)
    assert h.weights == {(0, 1): Fraction(2, 5), (1, 0): Fraction(1, 5),
                         (1, 2): Fraction(1, 5), (2, 0): Fraction(1, 5)}
    assert is_eulerian(h, tol=0)
    # same random walk matrix
    wg = g.matrix() / g.matrix().sum(axis=1, keepdims=True)
    wh = h.matrix() / h.matrix().sum(axis=1, keepdims=True)
    assert np.max(np.abs(wg - wh)) <= 1e-9
    # oracle: numpy linear solve of pi W = pi
    a = wg.T - np.eye(3)
    a[-1] = 1
    assert np.allclose(np.linalg.solve(a, [0, 0, 1]), [0.4, 0.4, 0.2], atol=1e-12)


def test_eulerianize_errors():
    two = Digraph.from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    with pytest.raises(GraphError, match="strongly connected"):
        eulerianize(two)
    with pytest.raises(GraphError, match="out-degree"):
        eulerianize(Digraph(2, {(0, 1): 1}))


def test_eulerianize_idempotent_up_to_scale():
    g = random_eulerian(6, 0.5, seed=4)
    h = eulerianize(g)
    ratios = {h.weight(u, v) / q for u, v, q in g.edges()}
    assert len(ratios) == 1


def test_undirectify():
    tri = triangle()
    assert undirectify(tri) == tri
    two = undirectify(Digraph(2, {(0, 1): 1, (1, 0): 1}))
    assert two.weight(0, 1) == 1 and not two.directed
    u = undirectify(fig5_graph())
    assert u.weight(U, V) == u.weight(V, U) == 1
    assert u.weight(U, X) == Fraction(1, 2)
    g = random_eulerian(5, 0.6, seed=2)
    assert undirectify(g).out_degrees == g.out_degrees


def test_symmetric_lift_examples():
    loop = symmetric_lift(Digraph(1, {(0, 0): 1}))
    assert loop.weights == {(0, 1): 1, (1, 0): 1}
    lift = symmetric_lift(fig5_graph())
    assert lift.num_edges == 12  # six undirected edges, stored both ways
    assert lift.out_degrees[:4] == [1, 1, 2, 2]
    assert lift.out_degrees[:4] == fig5_graph().out_degrees


def _is_single_cycle(g):
    if any(len(g.out_neighbors(v)) != 2 for v in range(g.n)):
        return False
    seen, prev, cur = {0}, None, 0
    while True:
        nxt = [w for w in g.out_neighbors(cur) if w != prev]
        if not nxt or nxt[0] == 0:
            break
        prev, cur = cur, nxt[0]
        seen.add(cur)
    return len(seen) == g.n


def test_lift_of_triangle_is_hexagon():
    lift = symmetric_lift(triangle())
    assert lift.n == 6 and _is_single_cycle(lift)


def test_lift_of_directed_triangle_is_matching():
    # a permutation digraph lifts to a perfect matching
    lift = symmetric_lift(cycle(3, directed=True))
    assert lift.weights == {(0, 4): 1, (4, 0): 1, (1, 5): 1, (5, 1): 1, (2, 3): 1, (3, 2): 1}


def test_edge_mass_examples():
    g = fig5_graph()
    s, t = to_mask([X, U]), to_mask([X, V])
    assert edge_mass(g, s, full_mask(4) & ~t) == 0
    assert edge_mass(g, 0, full_mask(4)) == 0
    assert edge_mass(triangle(), 7, 7) == 6


def test_lift_project_examples():
    assert lift_project(0, 4) == (0, 0)
    assert lift_project(full_mask(8), 4) == (15, 15)
    g = fig5_graph()
    lift = symmetric_lift(g)
    x = lift_embed(to_mask([X, U]), to_mask([X, V]), 4)
    assert edge_mass(lift, x, full_mask(8) & ~x) == 0
    assert edge_mass(lift, full_mask(8), 0) == 0


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_lift_identities_exhaustive(seed):
    g = random_eulerian(2 + seed, 0.6, seed)
    n = g.n
    lift = symmetric_lift(g)
    full = full_mask(2 * n)
    for x in range(1 << (2 * n)):
        s, t = lift_project(x, n)
        assert lift_embed(s, t, n) == x
        assert lift.volume(x) == g.volume(s, "out") + g.volume(t, "in")
        cut = edge_mass(lift, x, full & ~x)
        assert cut == orc.mass(g, s, full_mask(n) & ~t) + orc.mass(g, full_mask(n) & ~s, t)


def test_lift_total_mass():
    g = random_eulerian(7, 0.4, seed=9)
    lift = symmetric_lift(g)
    # each undirected lift edge is stored in both directions
    assert lift.total_weight() == 2 * g.total_weight()


cycles = st.lists(
    st.tuples(
        st.lists(st.integers(0, 4), min_size=1, max_size=5, unique=True),
        st.fractions(min_value=Fraction(1, 6), max_value=5, max_denominator=6),
    ),
    min_size=1,
    max_size=5,
)


def _cycle_sum(spec):
    """Eulerian digraph on 5 vertices as a weighted sum of directed cycles."""
    w = {}
    for verts, q in spec:
        for i, u in enumerate(verts):
            v = verts[(i + 1) % len(verts)]
            w[(u, v)] = w.get((u, v), 0) + q
    return Digraph(5, w)


@given(cycles)
@settings(max_examples=60, deadline=None)
def test_conductance_direction_blind(spec):
    e = _cycle_sum(spec)
    assert is_eulerian(e, tol=0)
    u = undirectify(e)
    for s in range(1, 32):
        if e.volume(s) > 0:
            assert orc.phi(e, s) == orc.phi(u, s)


@given(cycles)
@settings(max_examples=40, deadline=None)
def test_lift_identities_property(spec):
    g = _cycle_sum(spec)
    lift = symmetric_lift(g)
    full = full_mask(10)
    for x in range(0, 1 << 10, 7):
        s, t = lift_project(x, 5)
        cut = edge_mass(lift, x, full & ~x)
        assert cut == orc.mass(g, s, 31 & ~t) + orc.mass(g, 31 & ~s, t)
