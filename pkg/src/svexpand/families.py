"""Deterministic graph generators: named examples and seeded random families.

Random families draw from :class:`SplitMix64`, a 64-bit generator defined by
three constants (golden-ratio increment ``0x9E3779B97F4A7C15`` and the mixing
multipliers ``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``), so a seed gives
the same graph on every platform and in every language.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .graph import Digraph, GraphError, eulerianize, is_strongly_connected

__all__ = [
    "SplitMix64",
    "GeneratorSpec",
    "hypercube",
    "cycle",
    "complete_bipartite",
    "fig5_graph",
    "fig6_graph",
    "fig6_unit",
    "fig6_half",
    "random_eulerian",
    "random_regular_digraph",
    "FAMILIES",
    "build",
    "default_corpus",
    "FIG5_LABELS",
    "FIG6_LABELS",
]

_MASK64 = (1 << 64) - 1
MAX_ATTEMPTS = 64


class SplitMix64:
    """SplitMix64 pseudo-random generator."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform float in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, k: int) -> int:
        """Uniform integer in ``range(k)`` by rejection (no modulo bias)."""
        if k <= 0:
            raise ValueError("k must be positive")
        limit = (1 << 64) - ((1 << 64) % k)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % k

    def permutation(self, n: int) -> list[int]:
        p = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.below(i + 1)
            p[i], p[j] = p[j], p[i]
        return p


# ---------------------------------------------------------------------------
# named families


def hypercube(d: int, loops: int = 0) -> Digraph:
    """Undirected hypercube ``Q_d`` with ``loops`` unit self-loops per vertex."""
    if d < 1 or loops < 0:
        raise ValueError("need d >= 1 and loops >= 0")
    n = 1 << d
    edges = [(v, v ^ (1 << b), 1) for v in range(n) for b in range(d) if v < v ^ (1 << b)]
    edges += [(v, v, loops) for v in range(n) if loops]
    return Digraph.from_edges(n, edges, directed=False)


def cycle(n: int, loops: int = 0, directed: bool = False) -> Digraph:
    """Cycle ``C_n`` (``i -> i+1`` when directed) with ``loops`` unit self-loops per vertex."""
    if loops < 0:
        raise ValueError("loops must be non-negative")
    if n < (2 if directed else 3):
        raise ValueError("cycle too short")
    edges = [(i, (i + 1) % n, 1) for i in range(n)]
    edges += [(v, v, loops) for v in range(n) if loops]
    return Digraph.from_edges(n, edges, directed=directed)


def complete_bipartite(half: int) -> Digraph:
    """Undirected ``K_{half,half}``; sides are ``0..half-1`` and ``half..2half-1``."""
    if half < 1:
        raise ValueError("half must be at least 1")
    edges = [(a, half + b, 1) for a in range(half) for b in range(half)]
    return Digraph.from_edges(2 * half, edges, directed=False)


FIG5_LABELS = ("x", "y", "u", "v")
FIG6_LABELS = ("x", "y", "u1", "u2", "v1", "v2")


def fig5_graph() -> Digraph:
    """Four-vertex Eulerian digraph with zero directed conductance.

    Vertices ``x, y, u, v`` are ``0, 1, 2, 3``.
    """
    x, y, u, v = range(4)
    edges = [(u, x), (u, v), (v, u), (v, y), (x, v), (y, u)]
    return Digraph.from_edges(4, [(a, b, 1) for a, b in edges])


def _fig6(weight) -> Digraph:
    x, y, u1, u2, v1, v2 = range(6)
    edges = []
    for u, v in ((u1, v1), (u2, v2)):
        edges += [(u, x), (u, v), (v, u), (v, y), (x, v), (y, u)]
    return Digraph.from_edges(6, [(a, b, weight) for a, b in edges])


def fig6_unit() -> Digraph:
    """The four-vertex example with ``u`` and ``v`` duplicated, every edge of weight 1."""
    return _fig6(1)


def fig6_half() -> Digraph:
    """Same edge set as :func:`fig6_unit` with every weight 1/2."""
    return _fig6(Fraction(1, 2))


def fig6_graph() -> Digraph:
    """The accepted six-vertex variant (:func:`fig6_unit`)."""
    return fig6_unit()


# ---------------------------------------------------------------------------
# random families


def random_eulerian(n: int, density: float = 0.5, seed: int = 0) -> Digraph:
    """Random strongly connected digraph with weights in 1..9, made Eulerian.

    Each ordered pair ``u != v`` carries an edge with probability ``density``.
    Draws are repeated up to 64 times until the digraph is strongly connected.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = SplitMix64(seed)
    for _ in range(MAX_ATTEMPTS):
        weights = {}
        for u in range(n):
            for v in range(n):
                if u != v and rng.random() < density:
                    weights[(u, v)] = 1 + rng.below(9)
        g = Digraph(n, weights)
        if is_strongly_connected(g):
            return eulerianize(g)
    raise GraphError(f"no strongly connected sample in {MAX_ATTEMPTS} attempts")


def random_regular_digraph(n: int, d: int, seed: int = 0) -> Digraph:
    """Sum of ``d`` random permutation matrices; parallel edges add up."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 1 <= d <= n:
        raise ValueError("need 1 <= d <= n")
    rng = SplitMix64(seed)
    weights: dict[tuple[int, int], int] = {}
    for _ in range(d):
        p = rng.permutation(n)
        for u in range(n):
            weights[(u, p[u])] = weights.get((u, p[u]), 0) + 1
    return Digraph(n, weights)


# ---------------------------------------------------------------------------
# generator specs


FAMILIES: dict[str, Callable[..., Digraph]] = {
    "hypercube": hypercube,
    "cycle": cycle,
    "complete_bipartite": complete_bipartite,
    "fig5": fig5_graph,
    "fig6": fig6_graph,
    "fig6_unit": fig6_unit,
    "fig6_half": fig6_half,
    "random_eulerian": random_eulerian,
    "random_regular": random_regular_digraph,
}

_RANDOM = {"random_eulerian", "random_regular"}


@dataclass(frozen=True)
class GeneratorSpec:
    """A family name with keyword parameters; equal specs build equal graphs."""

    family: str
    params: tuple[tuple[str, object], ...] = field(default=())
    seed: int | None = None

    @classmethod
    def of(cls, family: str, seed: int | None = None, **params) -> "GeneratorSpec":
        return cls(family, tuple(sorted(params.items())), seed)

    @property
    def graph_id(self) -> str:
        parts = [f"{k}={v}" for k, v in self.params]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return f"{self.family}({','.join(parts)})"

    def to_json(self) -> dict:
        out = {"family": self.family, "params": dict(self.params)}
        if self.seed is not None:
            out["seed"] = self.seed
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorSpec":
        return cls.of(obj["family"], obj.get("seed"), **obj.get("params", {}))


def build(spec: GeneratorSpec) -> Digraph:
    try:
        fn = FAMILIES[spec.family]
    except KeyError:
        raise ValueError(f"unknown family {spec.family!r}") from None
    kwargs = dict(spec.params)
    if spec.family in _RANDOM:
        kwargs["seed"] = spec.seed if spec.seed is not None else 0
    elif spec.seed is not None:
        raise ValueError(f"family {spec.family!r} takes no seed")
    return fn(**kwargs)


def default_corpus() -> list[GeneratorSpec]:
    """Every named family plus 50 seeded random graphs."""
    s = GeneratorSpec.of
    corpus = [
        s("fig5"),
        s("fig6_unit"),
        s("fig6_half"),
        s("cycle", n=3, loops=0, directed=True),
        s("cycle", n=5, loops=0, directed=True),
        s("cycle", n=4, loops=0, directed=False),
        s("cycle", n=5, loops=0, directed=False),
        s("cycle", n=6, loops=0, directed=False),
        s("cycle", n=7, loops=0, directed=False),
        s("cycle", n=6, loops=1, directed=False),
        s("cycle", n=8, loops=4, directed=False),
        s("hypercube", d=1, loops=0),
        s("hypercube", d=2, loops=0),
        s("hypercube", d=2, loops=1),
        s("hypercube", d=3, loops=0),
        s("hypercube", d=3, loops=1),
        s("complete_bipartite", half=1),
        s("complete_bipartite", half=2),
        s("complete_bipartite", half=3),
    ]
    for seed in range(1, 31):
        corpus.append(s("random_eulerian", seed=seed, n=3 + seed % 8, density=0.5))
    for seed in range(101, 121):
        corpus.append(s("random_regular", seed=seed, n=4 + seed % 7, d=2 + seed % 2))
    return corpus
