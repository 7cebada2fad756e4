"""Constructive cut certificates: lift sweep rounding, balancing and case splitting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .expansion import CutPair, phi, phi_dir
from .graph import Digraph, GraphError, is_eulerian, lift_project, members, popcount
from .spectra import lift_eigensystem, sigma2_cluster

__all__ = [
    "Certificate",
    "sweep_cut_pair",
    "balance_pair",
    "case_split",
    "case_split_value",
    "CERT_TOL",
]

CERT_TOL = 1e-9


@dataclass(frozen=True)
class Certificate:
    cut: CutPair
    sigma2: float
    bound: float
    satisfied: bool

    def to_json(self) -> dict:
        v = self.cut.value
        return {
            "S": members(self.cut.S),
            "T": members(self.cut.T),
            "value": f"{v.numerator}/{v.denominator}",
            "sigma2": self.sigma2,
            "bound": self.bound,
            "satisfied": self.satisfied,
        }


def _sweep_one(x: np.ndarray, adj: np.ndarray, deg: np.ndarray, limit: float):
    """Best prefix or suffix of ``x`` sorted descending, as ``(value, members)``."""
    order = np.argsort(-x, kind="stable")
    best = None
    for seq in (order, order[::-1]):
        inside = np.zeros(len(x), dtype=bool)
        cut = vol = 0.0
        for pos, v in enumerate(seq[:-1]):
            # moving v inside: its edges to the inside stop being cut, the rest start
            to_in = adj[v] @ inside
            cut += deg[v] - adj[v, v] - 2.0 * to_in
            vol += deg[v]
            inside[v] = True
            if vol > limit * (1 + 1e-12):
                break
            val = max(cut, 0.0) / vol
            if best is None or val < best[0]:
                best = (val, seq[:pos + 1].copy())
    return best


def sweep_cut_pair(g: Digraph) -> Certificate:
    """Sweep cut of the lift's second eigenvector(s), projected to a pair ``(S, T)``."""
    if g.n < 2:
        raise GraphError("sweep needs n >= 2")
    if not is_eulerian(g):
        raise GraphError("graph is not Eulerian")
    n = g.n
    vals, _ = lift_eigensystem(g)
    sigma2 = float((vals[1] - vals[-2]) / 2)
    bound = math.sqrt(max(0.0, 2.0 * (1.0 - sigma2)))
    m = g.matrix()
    adj = np.zeros((2 * n, 2 * n))
    adj[:n, n:] = m
    adj[n:, :n] = m.T
    deg = adj.sum(axis=1)
    total = deg.sum()
    limit = total / 2
    candidates = []
    for z in sigma2_cluster(g):
        x = z / np.sqrt(deg)
        hit = _sweep_one(x, adj, deg, limit)
        if hit is not None:
            candidates.append(hit)
    if not candidates:
        raise GraphError("sweep produced no feasible cut")
    wtotal = g.total_weight()
    best = None
    for _, mem in sorted(candidates, key=lambda c: c[0]):
        mask = 0
        for v in mem:
            mask |= 1 << int(v)
        s, t = lift_project(mask, n)
        cp = phi_dir(g, s, t)
        if cp.denominator > wtotal:
            continue
        if best is None or cp.value < best.value:
            best = cp
    if best is None:
        raise GraphError("no sweep cut satisfied the exact volume cap")
    ok = float(best.value) <= bound + CERT_TOL
    return Certificate(best, sigma2, bound, ok)


def balance_pair(g: Digraph, s: int, t: int) -> CutPair:
    """Equalise ``|S|`` and ``|T|`` by dropping highest-index vertices from the larger set."""
    if not g.is_regular():
        raise GraphError("balancing needs a regular graph")
    if s == 0 and t == 0:
        raise GraphError("both sets are empty")
    value = phi_dir(g, s, t).value
    if value >= 1:
        raise GraphError("directed conductance is 1; the balancing bound is degenerate")
    while popcount(s) != popcount(t):
        if popcount(s) > popcount(t):
            s &= ~(1 << (s.bit_length() - 1))
        else:
            t &= ~(1 << (t.bit_length() - 1))
    return phi_dir(g, s, t)


def case_split(g: Digraph, s: int, t: int) -> tuple[int, int, str]:
    """Replace ``(S, T)`` by ``(S∩T, S∩T)`` or ``(S\\T, T\\S)`` depending on the overlap volume."""
    if g.directed:
        raise GraphError("case split needs an undirected graph")
    total = g.volume(s) + g.volume(t)
    if total == 0:
        raise GraphError("both sets have zero volume")
    both = s & t
    if 3 * g.volume(both) >= total:
        return both, both, "equal"
    return s & ~t, t & ~s, "disjoint"


def case_split_value(g: Digraph, s: int, t: int, kind: str) -> Fraction | None:
    """Value of a case-split output, or ``None`` when the sets are empty."""
    if kind == "equal":
        return phi(g, s) if s else None
    if s == 0 and t == 0:
        return None
    return phi_dir(g, s, t).value

