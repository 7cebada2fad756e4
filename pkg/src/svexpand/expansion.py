"""Exact combinatorial expansion quantities and their brute-force minimizers.

Every minimizer enumerates subsets as increasing bitmasks.  Values are first
screened in float64 (vectorised with numpy); the near-minimal candidates are
then re-evaluated with :class:`~fractions.Fraction` arithmetic, so the returned
minimum and witness are exact.  The witness is the first exact minimizer in
enumeration order: smallest ``S``, then smallest ``T``.

Directed conductance uses ``vol+(S) + vol-(T)`` as its denominator.  On an
Eulerian graph that is the usual ``vol(S) + vol(T)``; using out/in volumes
keeps the correspondence with cuts of the symmetric lift exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .graph import Digraph, GraphError, full_mask, is_eulerian, members, popcount

__all__ = [
    "CapExceeded",
    "CutPair",
    "PartitionFamily",
    "ExpansionProfile",
    "PAIR_CAP",
    "SET_CAP",
    "KWAY_CAP",
    "phi",
    "phi_dir",
    "min_phi",
    "min_phi_dir",
    "min_phi_dir_balanced",
    "beta_sign",
    "min_beta",
    "min_beta_dir",
    "min_phi_k_dir",
    "rho_k",
    "min_rho_k_dir",
    "vertex_expansion",
    "magnifier_constant",
]

PAIR_CAP = 12
SET_CAP = 16
KWAY_CAP = 9
VERTEX_ENUM_CAP = 24
_CHUNK = 1 << 20


class CapExceeded(GraphError):
    """The requested enumeration is larger than the configured cap."""


def _check_cap(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise CapExceeded(f"{what}: n={n} exceeds enumeration cap {cap}")


def _require_eulerian(g: Digraph) -> None:
    if not is_eulerian(g):
        raise GraphError("graph is not Eulerian")


def _require_undirected(g: Digraph) -> None:
    if g.directed:
        raise GraphError("operation needs an undirected graph")


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class CutPair:
    """A pair ``(S, T)`` with its directed conductance ``numerator / denominator``."""

    S: int
    T: int
    numerator: Fraction
    denominator: Fraction

    @property
    def value(self) -> Fraction:
        return self.numerator / self.denominator

    def to_json(self) -> dict:
        return {
            "S": members(self.S),
            "T": members(self.T),
            "value": _frac_str(self.value),
            "approx": float(self.value),
        }


@dataclass(frozen=True)
class PartitionFamily:
    k: int
    S: tuple[int, ...]
    T: tuple[int, ...]
    values: tuple[Fraction, ...]

    @property
    def value(self) -> Fraction:
        return max(self.values)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "S": [members(s) for s in self.S],
            "T": [members(t) for t in self.T],
            "values": [_frac_str(v) for v in self.values],
            "value": _frac_str(self.value),
            "approx": float(self.value),
        }


# ---------------------------------------------------------------------------
# single evaluations


def phi(g: Digraph, s: int) -> Fraction:
    """Conductance ``e(S, S^c) / vol(S)`` of a non-empty set."""
    if s == 0:
        raise GraphError("conductance of the empty set is undefined")
    cut = Fraction(0)
    for u, v, q in g.edges():
        if (s >> u) & 1 and not (s >> v) & 1:
            cut += q
    vol = g.volume(s, "out")
    if vol == 0:
        raise GraphError("set has zero volume")
    return cut / vol


def phi_dir(g: Digraph, s: int, t: int) -> CutPair:
    """Directed conductance ``(e(S,T^c) + e(S^c,T)) / (vol(S) + vol(T))``."""
    num = Fraction(0)
    for u, v, q in g.edges():
        in_s = (s >> u) & 1
        in_t = (t >> v) & 1
        if in_s and not in_t:
            num += q
        elif in_t and not in_s:
            num += q
    den = g.volume(s, "out") + g.volume(t, "in")
    if den == 0:
        raise GraphError("both sets have zero volume")
    return CutPair(s, t, num, den)


# ---------------------------------------------------------------------------
# enumeration machinery


def _integer_scale(g: Digraph) -> int | None:
    """Common denominator ``L`` of the weights when ``L * vol(V) < 2^53``.

    All expansion quantities are ratios, so scaling by ``L`` changes nothing;
    with integer weights below ``2^53`` every float sum is exact.
    """
    key = "int_scale"
    if key not in g._cache:
        lcm = 1
        for _, _, q in g.edges():
            lcm = math.lcm(lcm, q.denominator)
        tot = g.total_weight() * lcm
        g._cache[key] = lcm if tot < (1 << 53) else None
    return g._cache[key]


class _Tables:
    """Float indicator/volume tables shared by the subset enumerations."""

    def __init__(self, g: Digraph):
        n = g.n
        self.g = g
        self.n = n
        self.N = 1 << n
        idx = np.arange(self.N, dtype=np.int64)
        self.X = ((idx[:, None] >> np.arange(n)) & 1).astype(float)
        lcm = _integer_scale(g)
        self.exact = lcm is not None
        self.scale = lcm if lcm is not None else 1
        if self.exact:
            m = np.zeros((n, n))
            for u, v, q in g.edges():
                m[u, v] = float(q * lcm)
            self.M = m
        else:
            self.M = g.matrix()
        self.dout = [x * self.scale for x in g.out_degrees]
        self.din = [x * self.scale for x in g.in_degrees]
        self.vout = self.X @ np.array([float(x) for x in self.dout])
        self.vin = self.X @ np.array([float(x) for x in self.din])
        self.size = np.bitwise_count(idx.astype(np.uint64)).astype(np.int64)
        self.W = g.total_weight() * self.scale
        self._vq: dict[str, list[Fraction]] = {}

    def exact_volumes(self, side: str) -> list[Fraction]:
        vq = self._vq.get(side)
        if vq is None:
            degs = self.dout if side == "out" else self.din
            vq = [Fraction(0)] * self.N
            for m in range(1, self.N):
                low = (m & -m).bit_length() - 1
                vq[m] = vq[m & (m - 1)] + degs[low]
            self._vq[side] = vq
        return vq

    def cap_mask(self, den: np.ndarray, limit: Fraction, rows, cols=None) -> np.ndarray:
        """Boolean mask ``den <= limit``, exact even when floats are not."""
        lim = float(limit)
        if self.exact:
            return den <= lim
        ok = den <= lim * (1 - 1e-12)
        amb = np.abs(den - lim) <= 1e-12 * max(lim, 1.0)
        if amb.any():
            vo = self.exact_volumes("out")
            vi = self.exact_volumes("in") if cols is not None else None
            for pos in zip(*np.nonzero(amb)):
                if cols is None:
                    d = vo[int(rows[pos[0]])]
                else:
                    d = vo[int(rows[pos[0]])] + vi[int(cols[pos[1]])]
                ok[pos] = d <= limit
        return ok


def _tables(g: Digraph) -> _Tables:
    t = g._cache.get("tables")
    if t is None:
        t = _Tables(g)
        g._cache["tables"] = t
    return t


def _exact_argmin(values: np.ndarray, exact_fn: Callable[[int], Fraction],
                  exact_floats: bool):
    """Exact minimum over the finite entries of ``values`` (first index wins ties)."""
    fmin = float(values.min()) if values.size else np.inf
    if not np.isfinite(fmin):
        return None
    if exact_floats:
        thr = fmin
    else:
        thr = fmin + 1e-9 * abs(fmin) + 1e-12
    best = None
    for i in np.flatnonzero(values <= thr):
        q = exact_fn(int(i))
        if best is None or q < best[0]:
            best = (q, int(i))
    return best


def _pair_values(g: Digraph, allowed) -> np.ndarray:
    """Flat float array of phi_dir over all ``(S, T)``; ``inf`` where not allowed.

    ``allowed(tab, rows, cols, den)`` returns the boolean feasibility mask for
    the block of rows ``S`` against every column ``T``.
    """
    tab = _tables(g)
    N = tab.N
    out = np.empty(N * N)
    cols = np.arange(N, dtype=np.int64)
    step = max(1, _CHUNK // N)
    XM = tab.X @ tab.M
    for s0 in range(0, N, step):
        rows = np.arange(s0, min(N, s0 + step), dtype=np.int64)
        e = XM[rows] @ tab.X.T
        den = tab.vout[rows, None] + tab.vin[None, :]
        ok = allowed(tab, rows, cols, den) & (den > 0)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = (den - 2.0 * e) / den
        out[s0 * N:(s0 + len(rows)) * N] = np.where(ok, val, np.inf).ravel()
    return out


def _pair_minimize(g: Digraph, allowed) -> CutPair | None:
    tab = _tables(g)
    vals = _pair_values(g, allowed)
    N = tab.N
    best = _exact_argmin(vals, lambda i: phi_dir(g, i // N, i % N).value, tab.exact)
    if best is None:
        return None
    i = best[1]
    return phi_dir(g, i // N, i % N)


# ---------------------------------------------------------------------------
# conductance


def min_phi(g: Digraph, cap: int = SET_CAP) -> tuple[Fraction, int]:
    """``phi(G)``: minimum of ``phi(S)`` over ``0 < vol(S) <= vol(V)/2``."""
    _require_eulerian(g)
    _check_cap(g.n, cap, "min_phi")
    tab = _tables(g)
    ess = np.einsum("ij,ij->i", tab.X @ tab.M, tab.X)
    vol = tab.vout
    rows = np.arange(tab.N)
    ok = (vol > 0) & tab.cap_mask(vol, tab.W / 2, rows)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(ok, (vol - ess) / vol, np.inf)
    best = _exact_argmin(vals, lambda i: phi(g, i), tab.exact)
    if best is None:
        raise GraphError("no set satisfies the volume constraint")
    return best


def _allow_capped(tab, rows, cols, den):
    return tab.cap_mask(den, tab.W, rows, cols)


def min_phi_dir(g: Digraph, cap: int = PAIR_CAP) -> tuple[Fraction, CutPair]:
    """``phi_dir(G)`` over all pairs with ``0 < vol(S) + vol(T) <= vol(V)``."""
    _require_eulerian(g)
    _check_cap(g.n, cap, "min_phi_dir")
    cp = _pair_minimize(g, _allow_capped)
    if cp is None:
        raise GraphError("no feasible pair")
    return cp.value, cp


def min_phi_dir_balanced(g: Digraph, cap: int = PAIR_CAP, require_regular: bool = True,
                         volume_cap: bool = True) -> tuple[Fraction, CutPair]:
    """Minimum of ``phi_dir(S, T)`` over pairs with ``|S| = |T|``.

    By default the pairs also satisfy the volume constraint of
    :func:`min_phi_dir`, so the balanced pairs form a sub-collection of the
    unbalanced ones.  With ``volume_cap=False`` only ``|S| = |T|`` is imposed
    and the pair ``(V, V)``, whose value is always 0, is left out.
    """
    _require_eulerian(g)
    _check_cap(g.n, cap, "min_phi_dir_balanced")
    if require_regular and not g.is_regular():
        raise GraphError("balanced directed conductance needs a regular graph")
    full = full_mask(g.n)

    def allowed(tab, rows, cols, den):
        ok = tab.size[rows][:, None] == tab.size[None, cols]
        if volume_cap:
            return ok & tab.cap_mask(den, tab.W, rows, cols)
        if rows[-1] == full:
            ok[-1, full] = False
        return ok

    cp = _pair_minimize(g, allowed)
    if cp is None:
        raise GraphError("no feasible balanced pair")
    return cp.value, cp


def min_beta_dir(g: Digraph, cap: int = PAIR_CAP) -> tuple[Fraction, CutPair]:
    """``beta_dir(G)``: ``phi_dir`` over disjoint pairs with the volume cap."""
    _require_eulerian(g)
    _check_cap(g.n, cap, "min_beta_dir")

    def allowed(tab, rows, cols, den):
        return ((rows[:, None] & cols[None, :]) == 0) & tab.cap_mask(den, tab.W, rows, cols)

    cp = _pair_minimize(g, allowed)
    if cp is None:
        raise GraphError("no feasible disjoint pair")
    return cp.value, cp


# ---------------------------------------------------------------------------
# bipartiteness ratio


def _sign_sets(y: Sequence[int]) -> tuple[int, int]:
    a = b = 0
    for v, x in enumerate(y):
        if x == 1:
            a |= 1 << v
        elif x == -1:
            b |= 1 << v
        elif x != 0:
            raise ValueError("sign vector entries must be -1, 0 or 1")
    return a, b


def beta_sign(g: Digraph, y: Sequence[int]) -> Fraction:
    """Bipartiteness ratio of a sign vector, computed two ways and cross-checked.

    ``sum w(u,v)|y_u + y_v| / (2 sum d_v |y_v|)`` must equal
    ``(e(A) + e(B) + e(S, S^c)) / vol(S)`` for ``A = {y=1}``, ``B = {y=-1}``.
    """
    _require_undirected(g)
    if len(y) != g.n:
        raise ValueError("sign vector length must equal n")
    a, b = _sign_sets(y)
    s = a | b
    if s == 0:
        raise GraphError("sign vector is all zero")
    num = sum((q * abs(y[u] + y[v]) for u, v, q in g.edges()), Fraction(0))
    den = 2 * sum((g.out_degree(v) * abs(y[v]) for v in range(g.n)), Fraction(0))
    direct = num / den
    mono = Fraction(0)
    for u, v, q in g.edges():
        iu, iv = (s >> u) & 1, (s >> v) & 1
        if ((a >> u) & 1 and (a >> v) & 1) or ((b >> u) & 1 and (b >> v) & 1):
            mono += q
        elif iu and not iv:
            mono += q
    via_sets = mono / g.volume(s)
    if direct != via_sets:
        raise AssertionError(f"bipartiteness formulas disagree: {direct} != {via_sets}")
    return direct


def _sign_vector(index: int, n: int) -> list[int]:
    digit = (0, 1, -1)
    y = []
    for _ in range(n):
        index, r = divmod(index, 3)
        y.append(digit[r])
    return y


def min_beta(g: Digraph, cap: int = SET_CAP) -> tuple[Fraction, list[int]]:
    """``beta(G)`` by enumerating all ``3^n - 1`` non-zero sign vectors.

    Vector ``i`` has base-3 digits ``(0, 1, 2) -> (0, +1, -1)``, vertex 0 least
    significant; the first exact minimizer is the witness.
    """
    _require_undirected(g)
    _check_cap(g.n, cap, "min_beta")
    n = g.n
    total = 3 ** n
    idx = np.arange(total, dtype=np.int64)
    digits = (idx[:, None] // (3 ** np.arange(n, dtype=np.int64))) % 3
    y = np.choose(digits, [0.0, 1.0, -1.0])
    lcm = _integer_scale(g)
    scale = lcm or 1
    us, vs, ws = zip(*[(u, v, float(q * scale)) for u, v, q in g.edges()]) if g.num_edges else ((), (), ())
    us = np.array(us, dtype=np.int64)
    vs = np.array(vs, dtype=np.int64)
    ws = np.array(ws)
    num = np.abs(y[:, us] + y[:, vs]) @ ws if len(ws) else np.zeros(total)
    d = np.array([float(x * scale) for x in g.out_degrees])
    den = 2.0 * (np.abs(y) @ d)
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = np.where(den > 0, num / den, np.inf)
    vals[0] = np.inf
    best = _exact_argmin(vals, lambda i: beta_sign(g, _sign_vector(i, n)), lcm is not None)
    if best is None:
        raise GraphError("no sign vector with positive volume")
    return best[0], _sign_vector(best[1], n)


# ---------------------------------------------------------------------------
# k-way quantities


def _all_pair_values(g: Digraph) -> list:
    """Exact ``phi_dir(S, T)`` for all pairs, flat index ``S * 2^n + T``."""
    hit = g._cache.get("pair_exact")
    if hit is not None:
        return hit
    tab = _tables(g)
    N = tab.N
    vo = tab.exact_volumes("out")
    vi = tab.exact_volumes("in")
    out: list = [None] * (N * N)
    if tab.exact:
        xi = tab.X.astype(np.int64)
        xm = xi @ tab.M.astype(np.int64)
        vo_i = np.array([int(x) for x in vo], dtype=np.int64)
        vi_i = np.array([int(x) for x in vi], dtype=np.int64)
        for s in range(N):
            den = vo_i[s] + vi_i
            num = den - 2 * (xm[s] @ xi.T)
            row = s * N
            for t in np.flatnonzero(den).tolist():
                out[row + t] = Fraction(int(num[t]), int(den[t]))
    else:
        n = g.n
        rowsum = []
        for v in range(n):
            nbr = g.out_neighbors(v)
            r = [Fraction(0)] * N
            for t in range(1, N):
                low = (t & -t).bit_length() - 1
                r[t] = r[t & (t - 1)] + nbr.get(low, 0)
            rowsum.append(r)
        e_prev: dict[int, list[Fraction]] = {0: [Fraction(0)] * N}
        for s in range(N):
            if s:
                low = (s & -s).bit_length() - 1
                base = e_prev[s & (s - 1)]
                rs = rowsum[low]
                e_prev[s] = [x + y for x, y in zip(base, rs)]
            e_row = e_prev[s]
            for t in range(N):
                den = vo[s] + vi[t]
                if den:
                    out[s * N + t] = (den - 2 * e_row[t]) / den
    g._cache["pair_exact"] = out
    return out


def _all_set_values(h: Digraph) -> list:
    """Exact ``phi(X)`` for every non-empty subset of ``h`` (``None`` for the empty set)."""
    hit = h._cache.get("set_exact")
    if hit is not None:
        return hit
    tab = _tables(h)
    N = tab.N
    vo = tab.exact_volumes("out")
    if tab.exact:
        xi = tab.X.astype(np.int64)
        ess = np.einsum("ij,ij->i", xi @ tab.M.astype(np.int64), xi)
        out = [None] + [Fraction(int(vo[x]) - int(ess[x]), int(vo[x])) if vo[x] else None
                        for x in range(1, N)]
    else:
        outs = [h.out_neighbors(v) for v in range(h.n)]
        ins = [h.in_neighbors(v) for v in range(h.n)]
        e = [Fraction(0)] * N
        out = [None] * N
        for x in range(1, N):
            low = (x & -x).bit_length() - 1
            rest = x & (x - 1)
            add = outs[low].get(low, Fraction(0))
            for u, q in outs[low].items():
                if (rest >> u) & 1:
                    add += q
            for u, q in ins[low].items():
                if (rest >> u) & 1:
                    add += q
            e[x] = e[rest] + add
            if vo[x]:
                out[x] = (vo[x] - e[x]) / vo[x]
    h._cache["set_exact"] = out
    return out


_NO_RANK = np.int64(1) << 40


def _rank_keys(values: list, bits: int) -> np.ndarray:
    """Map exact item values to int64 keys ``rank << bits | mask`` (invalid -> huge)."""
    distinct = sorted({v for v in values if v is not None})
    rank = {v: i for i, v in enumerate(distinct)}
    r = np.array([rank[v] if v is not None else _NO_RANK for v in values], dtype=np.int64)
    return (r << bits) | np.arange(len(values), dtype=np.int64), distinct


def _submasks(u: int) -> np.ndarray:
    bits = [b for b in range(u.bit_length()) if (u >> b) & 1]
    idx = np.arange(1 << len(bits), dtype=np.int64)
    out = np.zeros_like(idx)
    for j, b in enumerate(bits):
        out |= ((idx >> j) & 1) << b
    return out


def _min_max_disjoint(keys: np.ndarray, bits: int, k: int):
    """Minimise the largest rank over ``k`` pairwise-disjoint valid items.

    ``keys[x] = rank << bits | x`` for a valid item ``x`` (a ``bits``-bit mask).
    Returns ``(rank, items)`` or ``None`` when no such family exists.
    """
    size = 1 << bits
    lowmask = np.int64(size - 1)
    invalid = _NO_RANK << bits
    valid = keys < invalid
    # f1[U]: smallest key among valid items contained in U
    f1 = keys.copy()
    for b in range(bits):
        view = f1.reshape(-1, 2, 1 << b)
        np.minimum(view[:, 1, :], view[:, 0, :], out=view[:, 1, :])
    f1_rank = f1 >> bits
    full = size - 1

    def feasible(u: int, j: int, t: int):
        if j == 0:
            return []
        if j == 1:
            if f1_rank[u] <= t:
                return [int(f1[u] & lowmask)]
            return None
        subs = _submasks(u)
        cond = (keys[subs] >> bits) <= t
        if j == 2:
            cond &= f1_rank[u & ~subs] <= t
            hits = subs[cond]
            if hits.size == 0:
                return None
            y = int(hits[np.argmin(keys[hits])])
            return [y, int(f1[u & ~y] & lowmask)]
        cands = subs[cond]
        for y in cands[np.argsort(keys[cands], kind="stable")]:
            rest = feasible(u & ~int(y), j - 1, t)
            if rest is not None:
                return [int(y)] + rest
        return None

    order = np.flatnonzero(valid)
    order = order[np.argsort(keys[order], kind="stable")]
    if k == 1:
        if order.size == 0:
            return None
        x = int(order[0])
        return int(keys[x] >> bits), [x]
    if k == 2:
        comp = full & ~order
        ok = f1_rank[comp] <= (keys[order] >> bits)
        hits = order[ok]
        if hits.size == 0:
            return None
        x = int(hits[0])
        t = int(keys[x] >> bits)
        return t, [x, int(f1[full & ~x] & lowmask)]
    for x in order:
        x = int(x)
        t = int(keys[x] >> bits)
        rest = feasible(full & ~x, k - 1, t)
        if rest is not None:
            return t, [x] + rest
    return None


def _check_k(k: int, n: int) -> None:
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")


def _kway_pairs(g: Digraph, k: int, cap: int, item_ok) -> tuple[Fraction, PartitionFamily]:
    _require_eulerian(g)
    _check_cap(g.n, cap, "k-way enumeration")
    _check_k(k, g.n)
    n = g.n
    N = 1 << n
    pv = _all_pair_values(g)
    # item x = S | T << n, i.e. a subset of the lift
    items: list = [None] * (N * N)
    for t in range(1, N):
        for s in range(1, N):
            if item_ok(s, t):
                items[s | (t << n)] = pv[s * N + t]
    keys, distinct = _rank_keys(items, 2 * n)
    found = _min_max_disjoint(keys, 2 * n, k)
    if found is None:
        raise GraphError("no feasible family")
    _, xs = found
    xs = sorted(xs)
    S = tuple(x & (N - 1) for x in xs)
    T = tuple(x >> n for x in xs)
    vals = tuple(pv[s * N + t] for s, t in zip(S, T))
    fam = PartitionFamily(k, S, T, vals)
    return fam.value, fam


def min_phi_k_dir(g: Digraph, k: int, cap: int = KWAY_CAP) -> tuple[Fraction, PartitionFamily]:
    """k-way directed conductance: disjoint non-empty ``S_i`` and disjoint non-empty ``T_i``."""
    return _kway_pairs(g, k, cap, lambda s, t: True)


def min_rho_k_dir(g: Digraph, k: int, cap: int = KWAY_CAP) -> tuple[Fraction, PartitionFamily]:
    """As :func:`min_phi_k_dir` with each pair either equal or disjoint."""
    return _kway_pairs(g, k, cap, lambda s, t: s == t or not (s & t))


def rho_k(h: Digraph, k: int, cap: int = 2 * KWAY_CAP) -> tuple[Fraction, tuple[int, ...]]:
    """k-way expansion: ``k`` disjoint non-empty sets minimising the largest ``phi``."""
    _require_undirected(h)
    _check_cap(h.n, cap, "rho_k")
    _check_k(k, h.n)
    vals = _all_set_values(h)
    keys, _ = _rank_keys(vals, h.n)
    found = _min_max_disjoint(keys, h.n, k)
    if found is None:
        raise GraphError("no feasible family")
    xs = tuple(sorted(found[1]))
    return max(vals[x] for x in xs), xs


# ---------------------------------------------------------------------------
# vertex expansion


@dataclass(frozen=True)
class ExpansionProfile:
    """Exhaustive vertex-expansion data of a regular digraph's support.

    ``profile[s]`` is the minimum of ``|N+(S)| / |S|`` over ``0 < |S| <= s``;
    ``delta`` is ``profile[bound] - 1`` and ``magnifier`` the minimum of
    ``|N+(S) \\ S| / |S|`` over the same range.
    """

    bound: int
    profile: dict[int, Fraction]
    delta: Fraction
    delta_set: int | None
    magnifier: Fraction
    magnifier_set: int | None
    method: str = "enumeration"
    degree: Fraction = field(default=Fraction(0))

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "profile": {str(s): _frac_str(v) for s, v in sorted(self.profile.items())},
            "delta": _frac_str(self.delta),
            "delta_set": None if self.delta_set is None else members(self.delta_set),
            "magnifier": _frac_str(self.magnifier),
            "magnifier_set": None if self.magnifier_set is None else members(self.magnifier_set),
            "method": self.method,
            "degree": _frac_str(self.degree),
        }


def _enum_neighbourhoods(nb: list[int], n: int, bound: int):
    """Per-size minima of |N(S)| and |N(S) \\ S| plus first witnesses, by brute force."""
    N = 1 << n
    dtype = np.uint32 if n <= 32 else np.uint64
    nbr = np.zeros(N, dtype=dtype)
    for v in range(n):
        lo = 1 << v
        nbr[lo:2 * lo] = nbr[:lo] | dtype(nb[v])
    masks = np.arange(N, dtype=dtype)
    size = np.bitwise_count(masks)
    cnt_n = np.bitwise_count(nbr)
    cnt_new = np.bitwise_count(nbr & ~masks)
    res = {}
    for s in range(1, bound + 1):
        sel = np.flatnonzero(size == s)
        a = cnt_n[sel]
        b = cnt_new[sel]
        ia = int(np.argmin(a))
        ib = int(np.argmin(b))
        res[s] = (int(a[ia]), int(sel[ia]), int(b[ib]), int(sel[ib]))
    return res


def _cyclic_bandwidth(nb: list[int], n: int) -> int:
    b = 0
    for u in range(n):
        for v in members(nb[u]):
            d = abs(u - v)
            b = max(b, min(d, n - d))
    return b


def _band_neighbourhoods(nb: list[int], n: int, bound: int, b: int):
    """Exact per-size minima for graphs whose edges join vertices at cyclic distance <= b.

    Dynamic programme over the cyclic order: the first ``2b`` membership bits
    are fixed per run, a window of the last ``2b`` bits is the state.
    """
    w = 2 * b
    inf = 1 << 30
    # in-neighbour offsets: bit j set if vertex v - b + j has an edge into v
    inmask = []
    for v in range(n):
        m = 0
        for j in range(w + 1):
            u = (v - b + j) % n
            if (nb[u] >> v) & 1:
                m |= 1 << j
        inmask.append(m)

    def run(objective: str):
        best = [inf] * (n + 1)
        wit = [None] * (n + 1)
        nstates = 1 << w
        for guess in range(nstates):
            dp = np.full((nstates, n + 1), inf, dtype=np.int64)
            dp[guess, popcount(guess)] = 0
            parents = []
            for i in range(w, n):
                v = i - b
                new = np.full((nstates, n + 1), inf, dtype=np.int64)
                par = np.zeros((nstates, n + 1), dtype=np.int64)
                for st in range(nstates):
                    row = dp[st]
                    if row.min() >= inf:
                        continue
                    for x in (0, 1):
                        win = st | (x << w)
                        hit = bool(win & inmask[v])
                        if objective == "new":
                            hit = hit and not (win >> b) & 1
                        ns = win >> 1
                        shifted = np.full(n + 1, inf, dtype=np.int64)
                        if x:
                            shifted[1:] = row[:-1]
                        else:
                            shifted[:] = row
                        cand = shifted + (1 if hit else 0)
                        better = cand < new[ns]
                        new[ns] = np.where(better, cand, new[ns])
                        par[ns] = np.where(better, st, par[ns])
                dp = new
                parents.append(par)
            # wrap-around vertices n-b..n-1 and 0..b-1
            for st in range(nstates):
                row = dp[st]
                if row.min() >= inf:
                    continue

                def bit(u: int) -> int:
                    u %= n
                    if u < w:
                        return (guess >> u) & 1
                    return (st >> (u - (n - w))) & 1

                extra = 0
                for v in list(range(n - b, n)) + list(range(b)):
                    hit = any(bit(v - b + j) for j in range(w + 1) if (inmask[v] >> j) & 1)
                    if objective == "new":
                        hit = hit and not bit(v)
                    extra += hit
                for s in range(1, min(bound, n) + 1):
                    if row[s] >= inf:
                        continue
                    val = int(row[s]) + extra
                    if val < best[s]:
                        # rebuild the set from parent pointers
                        bits_ = [0] * n
                        cur, size = st, s
                        for i in range(n - 1, w - 1, -1):
                            x = (cur >> (w - 1)) & 1
                            bits_[i] = x
                            prev = int(parents[i - w][cur, size])
                            size -= x
                            cur = prev
                        for u in range(w):
                            bits_[u] = (guess >> u) & 1
                        mask = sum(1 << u for u in range(n) if bits_[u])
                        best[s] = val
                        wit[s] = mask
        return best, wit

    a, wa = run("nbr")
    c, wc = run("new")
    return {s: (a[s], wa[s], c[s], wc[s]) for s in range(1, bound + 1)}


def _neighbourhood_table(nb: list[int], n: int, bound: int, cap: int):
    if n <= cap:
        return _enum_neighbourhoods(nb, n, bound), "enumeration"
    b = _cyclic_bandwidth(nb, n)
    if b <= 3 and 4 * b <= n:
        return _band_neighbourhoods(nb, n, bound, b), "band-dp"
    raise CapExceeded(f"vertex expansion: n={n} exceeds cap {cap} and the graph is not banded")


def vertex_expansion(g: Digraph, bound: int | None = None,
                     cap: int = VERTEX_ENUM_CAP) -> ExpansionProfile:
    """Exact ``(bound, 1 + delta)`` vertex expansion and magnification of a regular graph."""
    if not g.is_regular():
        raise GraphError("vertex expansion needs a regular graph")
    n = g.n
    if bound is None:
        bound = n // 2
    if not 1 <= bound <= n:
        raise ValueError("bound must lie in 1..n")
    nb = g.support_out_masks()
    table, method = _neighbourhood_table(nb, n, bound, cap)
    profile: dict[int, Fraction] = {}
    best_ratio = best_mag = None
    dset = mset = None
    running = None
    for s in range(1, bound + 1):
        cn, wn, cm, wm = table[s]
        r = Fraction(cn, s)
        m = Fraction(cm, s)
        if running is None or r < running:
            running = r
        profile[s] = running
        if best_ratio is None or r < best_ratio or (r == best_ratio and wn < dset):
            best_ratio, dset = r, wn
        if best_mag is None or m < best_mag or (m == best_mag and wm < mset):
            best_mag, mset = m, wm
    return ExpansionProfile(bound, profile, best_ratio - 1, dset, best_mag, mset, method,
                            g.out_degree(0))


def magnifier_constant(g: Digraph, bound: int, cap: int = VERTEX_ENUM_CAP) -> tuple[Fraction, int]:
    """``min |N+(S) \\ S| / |S|`` over ``0 < |S| <= bound`` (support of ``g``)."""
    prof = vertex_expansion(g, bound, cap)
    return prof.magnifier, prof.magnifier_set
