"""Weighted digraphs, vertex-set bitmasks, Eulerianization and the symmetric lift.

Vertices are the integers ``0..n-1``.  Vertex sets are plain ``int`` bitmasks
(bit ``v`` set iff ``v`` is a member); a subset of the symmetric lift on ``2n``
vertices is a ``2n``-bit mask whose low ``n`` bits are the left copies and whose
high ``n`` bits are the right copies.

Weights are held as :class:`fractions.Fraction` so every combinatorial quantity
can be evaluated exactly.  Floats passed in are converted without rounding.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from numbers import Rational, Real
from typing import Iterable, Iterator, Mapping

import numpy as np

__all__ = [
    "Digraph",
    "GraphError",
    "to_mask",
    "members",
    "full_mask",
    "popcount",
    "lift_project",
    "lift_embed",
    "degree",
    "is_eulerian",
    "is_strongly_connected",
    "eulerianize",
    "undirectify",
    "symmetric_lift",
    "edge_mass",
    "exact_stationary",
]

DEFAULT_EULER_TOL = 1e-9
# exact Gaussian elimination is used for stationary distributions up to this size
EXACT_STATIONARY_MAX_N = 64


class GraphError(ValueError):
    """Raised when a graph violates a documented precondition."""


def _as_fraction(w) -> Fraction:
    if isinstance(w, Fraction):
        return w
    if isinstance(w, (int, Rational)):
        return Fraction(w)
    if isinstance(w, Real):
        x = float(w)
        if not np.isfinite(x):
            raise GraphError(f"non-finite weight {w!r}")
        return Fraction(x)
    if isinstance(w, str):
        return Fraction(w)
    raise GraphError(f"unsupported weight type {type(w).__name__}")


# ---------------------------------------------------------------------------
# vertex sets


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << int(v)
    return m


def members(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def full_mask(n: int) -> int:
    return (1 << n) - 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lift_project(x: int, n: int) -> tuple[int, int]:
    """Split a lift subset into ``(left part, right part)`` as subsets of ``V``."""
    return x & full_mask(n), x >> n


def lift_embed(s: int, t: int, n: int) -> int:
    """Inverse of :func:`lift_project`."""
    if s >> n or t >> n:
        raise GraphError("vertex set outside 0..n-1")
    return s | (t << n)


# ---------------------------------------------------------------------------


class Digraph:
    """Immutable weighted digraph; self-loops allowed, parallel edges merged.

    ``weights`` maps ordered pairs ``(u, v)`` to non-negative weights.  For an
    undirected graph (``directed=False``) the map must be symmetric; use
    :meth:`from_edges` to list each undirected edge once.
    """

    __slots__ = ("_n", "_w", "_directed", "_out", "_in", "_dout", "_din", "_cache")

    def __init__(self, n: int, weights: Mapping[tuple[int, int], object] | None = None,
                 directed: bool = True):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        self._n = int(n)
        self._directed = bool(directed)
        w: dict[tuple[int, int], Fraction] = {}
        for (u, v), x in (weights or {}).items():
            u, v = int(u), int(v)
            self._check_vertex(u)
            self._check_vertex(v)
            q = _as_fraction(x)
            if q < 0:
                raise GraphError(f"negative weight on ({u},{v})")
            if q == 0:
                continue
            w[(u, v)] = w.get((u, v), Fraction(0)) + q
        if not self._directed:
            for (u, v), q in w.items():
                if w.get((v, u)) != q:
                    raise GraphError(f"undirected weight map not symmetric at ({u},{v})")
        self._w = dict(sorted(w.items()))
        self._out: list[dict[int, Fraction]] = [dict() for _ in range(self._n)]
        self._in: list[dict[int, Fraction]] = [dict() for _ in range(self._n)]
        for (u, v), q in self._w.items():
            self._out[u][v] = q
            self._in[v][u] = q
        self._dout = [sum(d.values(), Fraction(0)) for d in self._out]
        self._din = [sum(d.values(), Fraction(0)) for d in self._in]
        self._cache: dict = {}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple], directed: bool = True) -> "Digraph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; repeated edges add up.

        For undirected graphs each edge is listed once and mirrored; a loop
        ``(u, u, w)`` contributes ``w`` once to the degree of ``u``.
        """
        w: dict[tuple[int, int], Fraction] = {}
        for e in edges:
            u, v = int(e[0]), int(e[1])
            q = _as_fraction(e[2]) if len(e) > 2 else Fraction(1)
            w[(u, v)] = w.get((u, v), Fraction(0)) + q
            if not directed and u != v:
                w[(v, u)] = w.get((v, u), Fraction(0)) + q
        return cls(n, w, directed=directed)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self._n:
            raise GraphError(f"vertex {v} out of range 0..{self._n - 1}")

    # basic accessors -------------------------------------------------------

    @property
    def n(self) -> int:
        return self._n

    @property
    def directed(self) -> bool:
        return self._directed

    @property
    def weights(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._w)

    def weight(self, u: int, v: int) -> Fraction:
        return self._w.get((u, v), Fraction(0))

    def edges(self) -> Iterator[tuple[int, int, Fraction]]:
        """All stored ordered pairs with positive weight, sorted by ``(u, v)``."""
        for (u, v), q in self._w.items():
            yield u, v, q

    @property
    def num_edges(self) -> int:
        return len(self._w)

    def out_neighbors(self, v: int) -> dict[int, Fraction]:
        self._check_vertex(v)
        return dict(self._out[v])

    def in_neighbors(self, v: int) -> dict[int, Fraction]:
        self._check_vertex(v)
        return dict(self._in[v])

    def out_degree(self, v: int) -> Fraction:
        self._check_vertex(v)
        return self._dout[v]

    def in_degree(self, v: int) -> Fraction:
        self._check_vertex(v)
        return self._din[v]

    @property
    def out_degrees(self) -> list[Fraction]:
        return list(self._dout)

    @property
    def in_degrees(self) -> list[Fraction]:
        return list(self._din)

    def total_weight(self) -> Fraction:
        """Sum of all stored weights; equals ``vol(V)`` for Eulerian graphs."""
        return sum(self._w.values(), Fraction(0))

    def volume(self, mask: int, side: str = "out") -> Fraction:
        degs = self._dout if side == "out" else self._din
        return sum((degs[v] for v in members(mask)), Fraction(0))

    def is_regular(self) -> bool:
        """True iff every in- and out-degree equals a common positive value."""
        if self._n == 0:
            return False
        d = self._dout[0]
        return d > 0 and all(x == d for x in self._dout) and all(x == d for x in self._din)

    def support_out_masks(self) -> list[int]:
        return [to_mask(self._out[v]) for v in range(self._n)]

    def matrix(self) -> np.ndarray:
        """Dense float weighted adjacency matrix (cached, read-only)."""
        m = self._cache.get("matrix")
        if m is None:
            m = np.zeros((self._n, self._n))
            for (u, v), q in self._w.items():
                m[u, v] = float(q)
            m.setflags(write=False)
            self._cache["matrix"] = m
        return m

    # comparison ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return (self._n, self._directed, self._w) == (other._n, other._directed, other._w)

    def __hash__(self) -> int:
        return hash((self._n, self._directed, tuple(self._w.items())))

    def __repr__(self) -> str:
        kind = "directed" if self._directed else "undirected"
        return f"Digraph(n={self._n}, {kind}, edges={len(self._w)})"


# ---------------------------------------------------------------------------
# queries


def degree(g: Digraph, v: int, side: str = "out") -> Fraction:
    if side == "out":
        return g.out_degree(v)
    if side == "in":
        return g.in_degree(v)
    raise ValueError("side must be 'out' or 'in'")


def is_eulerian(g: Digraph, tol: float = DEFAULT_EULER_TOL) -> bool:
    """``|d+(v) - d-(v)| <= tol * max(1, d+(v) + d-(v))`` for every vertex.

    ``tol=0`` gives the exact test.
    """
    for a, b in zip(g.out_degrees, g.in_degrees):
        if tol == 0:
            if a != b:
                return False
        elif abs(float(a - b)) > tol * max(1.0, float(a + b)):
            return False
    return True


def _reach(adj: list[dict[int, Fraction]], start: int) -> set[int]:
    seen = {start}
    todo = deque([start])
    while todo:
        u = todo.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def is_strongly_connected(g: Digraph) -> bool:
    if g.n == 0:
        return False
    return len(_reach(g._out, 0)) == g.n and len(_reach(g._in, 0)) == g.n


def _check_walkable(g: Digraph) -> None:
    for v, d in enumerate(g.out_degrees):
        if d == 0:
            raise GraphError(f"vertex {v} has zero out-degree")
    if not is_strongly_connected(g):
        raise GraphError("graph is not strongly connected")


def exact_stationary(g: Digraph) -> list[Fraction]:
    """Stationary distribution of the random walk, by exact Gaussian elimination."""
    _check_walkable(g)
    n = g.n
    dout = g.out_degrees
    # rows: equations sum_i pi_i (W_ij - [i==j]) = 0 for j < n-1, and sum pi = 1
    a = [[Fraction(0)] * (n + 1) for _ in range(n)]
    for (i, j), q in g._w.items():
        if j < n - 1:
            a[j][i] += q / dout[i]
    for j in range(n - 1):
        a[j][j] -= 1
    a[n - 1] = [Fraction(1)] * n + [Fraction(1)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise GraphError("singular stationary system")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        row = [x / p for x in a[col]]
        a[col] = row
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], row)]
    return [a[i][n] for i in range(n)]


def eulerianize(g: Digraph) -> Digraph:
    """Reweight ``w(u,v) -> pi(u) w(u,v) / d+(u)``; same random walk, Eulerian.

    Exact for ``n <= 64``; larger graphs use the float stationary solver and
    are Eulerian to the default tolerance only.
    """
    _check_walkable(g)
    if g.n <= EXACT_STATIONARY_MAX_N:
        pi = exact_stationary(g)
    else:
        from .spectra import stationary_distribution

        pi = [Fraction(float(x)) for x in stationary_distribution(g)]
    dout = g.out_degrees
    w = {(u, v): pi[u] * q / dout[u] for (u, v), q in g._w.items()}
    return Digraph(g.n, w, directed=True)


def undirectify(g: Digraph) -> Digraph:
    w: dict[tuple[int, int], Fraction] = {}
    for (u, v), q in g._w.items():
        half = q / 2
        w[(u, v)] = w.get((u, v), Fraction(0)) + half
        w[(v, u)] = w.get((v, u), Fraction(0)) + half
    return Digraph(g.n, w, directed=False)


def symmetric_lift(g: Digraph) -> Digraph:
    """Bipartite double cover: left ``v`` is vertex ``v``, right ``u`` is ``n+u``."""
    n = g.n
    w = {}
    for (u, v), q in g._w.items():
        w[(u, n + v)] = q
        w[(n + v, u)] = q
    return Digraph(2 * n, w, directed=False)


def edge_mass(g: Digraph, a: int, b: int) -> Fraction:
    """``e(A, B) = sum of w(x, y) over x in A, y in B`` (ordered pairs)."""
    total = Fraction(0)
    for (u, v), q in g._w.items():
        if (a >> u) & 1 and (b >> v) & 1:
            total += q
    return total
