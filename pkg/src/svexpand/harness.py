"""Inequality checks run against single graphs or whole corpora.

Each check produces a :class:`VerificationRecord` ``lhs <= mid <= rhs``.  A
side that involves a float (spectral) quantity is compared with tolerance
``1e-9``; purely combinatorial sides are compared exactly.  Float versus
:class:`~fractions.Fraction` comparisons convert the float exactly, so no
rounding enters a comparison.

Asymptotic statements with unspecified constants are reported through a
dimensionless ``ratio`` which must stay above :data:`OMEGA_FLOOR`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

from . import expansion as ex
from .families import GeneratorSpec, build
from .graph import Digraph, GraphError, is_eulerian, members, symmetric_lift
from .spectra import singular_values

__all__ = [
    "VerificationRecord",
    "SPECTRAL_TOL",
    "OMEGA_FLOOR",
    "CHECKS",
    "DEFAULT_CHECKS",
    "CorpusEntry",
    "check_cheeger",
    "check_di_cheeger",
    "check_bipartite_cheeger",
    "check_relating",
    "check_prop_3_7",
    "check_prop_4_7",
    "check_higher_order",
    "check_sv_higher_order",
    "check_thm_5_4",
    "check_vertex_spectral",
    "check_golden",
    "run_graph",
    "run_suite",
]

SPECTRAL_TOL = 1e-9
OMEGA_FLOOR = Fraction(1, 64)
WORKERS_ENV = "SVEXP_WORKERS"

Number = Union[Fraction, float, None]

# a pair often quoted as the zero-conductance witness of the 4-vertex example; it is not one
FIG5_STATED_PAIR = (0b1001, 0b0101)  # S = {x, v}, T = {x, u}


@dataclass
class VerificationRecord:
    theorem: str
    graph: str
    status: str
    lhs: Number = None
    mid: Number = None
    rhs: Number = None
    tolerance: float = 0.0
    slack: float | None = None
    ratio: float | None = None
    k: int | None = None
    reason: str = ""
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        def num(x):
            if isinstance(x, Fraction):
                return f"{x.numerator}/{x.denominator}"
            return x

        return {
            "theorem": self.theorem,
            "graph": self.graph,
            "status": self.status,
            "lhs": num(self.lhs),
            "mid": num(self.mid),
            "rhs": num(self.rhs),
            "tolerance": self.tolerance,
            "slack": self.slack,
            "ratio": self.ratio,
            "k": self.k,
            "reason": self.reason,
            "witnesses": self.witnesses,
        }


def _le(a, b, tol: float) -> bool:
    return Fraction(a) <= Fraction(b) + Fraction(tol)


def _chain(theorem: str, graph: str, lhs, mid, rhs, tol: float, **extra) -> VerificationRecord:
    """Record for ``lhs <= mid <= rhs``; ``rhs=None`` checks only the left side."""
    ok = _le(lhs, mid, tol) and (rhs is None or _le(mid, rhs, tol))
    gaps = [float(Fraction(mid) - Fraction(lhs))]
    if rhs is not None:
        gaps.append(float(Fraction(rhs) - Fraction(mid)))
    return VerificationRecord(theorem, graph, "pass" if ok else "fail", lhs, mid, rhs,
                              tol, min(gaps), **extra)


def _skip(theorem: str, graph: str, reason: str, **extra) -> VerificationRecord:
    return VerificationRecord(theorem, graph, "skip", reason=reason, **extra)


def _pair_json(cp: ex.CutPair) -> dict:
    return cp.to_json()


# ---------------------------------------------------------------------------
# individual checks


def check_cheeger(g: Digraph, graph_id: str = "", cap: int = ex.SET_CAP) -> VerificationRecord:
    name = "cheeger"
    if g.directed:
        return _skip(name, graph_id, "needs an undirected graph")
    if g.n < 2:
        return _skip(name, graph_id, "needs n >= 2")
    mu2 = singular_values(g).mu(2)
    val, s = ex.min_phi(g, cap)
    return _chain(name, graph_id, (1 - mu2) / 2, val, math.sqrt(max(0.0, 2 * (1 - mu2))),
                  SPECTRAL_TOL, witnesses={"S": members(s)})


def check_di_cheeger(g: Digraph, graph_id: str = "", cap: int = ex.PAIR_CAP) -> VerificationRecord:
    name = "di_cheeger"
    if g.n < 2:
        return _skip(name, graph_id, "needs n >= 2")
    s2 = singular_values(g).sigma(2)
    val, cp = ex.min_phi_dir(g, cap)
    return _chain(name, graph_id, (1 - s2) / 2, val, math.sqrt(max(0.0, 2 * (1 - s2))),
                  SPECTRAL_TOL, witnesses={"pair": _pair_json(cp)})


def check_bipartite_cheeger(g: Digraph, graph_id: str = "",
                            cap: int = ex.SET_CAP) -> VerificationRecord:
    name = "bipartite_cheeger"
    if g.directed:
        return _skip(name, graph_id, "needs an undirected graph")
    if not g.is_regular():
        return _skip(name, graph_id, "stated for regular graphs only")
    mun = singular_values(g).mu(g.n)
    val, y = ex.min_beta(g, cap)
    return _chain(name, graph_id, (1 + mun) / 2, val, math.sqrt(max(0.0, 2 * (1 + mun))),
                  SPECTRAL_TOL, witnesses={"y": y})


def check_relating(g: Digraph, graph_id: str = "", cap: int = ex.PAIR_CAP) -> VerificationRecord:
    """``phi_dir <= min(phi, beta_dir)`` and, when undirected, ``min(phi, beta) <= 3 phi_dir``."""
    name = "relating_4_6"
    pd, cp = ex.min_phi_dir(g, cap)
    ph, s = ex.min_phi(g, cap)
    bd, bcp = ex.min_beta_dir(g, cap)
    wit = {"phi_dir": _pair_json(cp), "phi_set": members(s), "beta_dir": _pair_json(bcp)}
    if g.directed:
        return _chain(name, graph_id, pd, min(ph, bd), None, 0.0, witnesses=wit,
                      reason="directed graph: upper inequality only")
    b, y = ex.min_beta(g, cap)
    wit["beta_y"] = y
    rec = _chain(name, graph_id, pd, min(ph, b), 3 * pd, 0.0, witnesses=wit)
    if b != bd:
        rec.status = "fail"
        rec.reason = f"beta {b} differs from beta_dir {bd}"
    elif not pd <= min(ph, bd):
        rec.status = "fail"
        rec.reason = "phi_dir exceeds min(phi, beta_dir)"
    return rec


def check_prop_3_7(g: Digraph, graph_id: str = "", cap: int = ex.PAIR_CAP) -> VerificationRecord:
    name = "prop_3_7"
    if not g.is_regular():
        return _skip(name, graph_id, "needs a regular graph")
    pd, cp = ex.min_phi_dir(g, cap)
    if pd >= 1:
        return _skip(name, graph_id, "phi_dir >= 1, bound undefined")
    bal, bcp = ex.min_phi_dir_balanced(g, cap)
    return _chain(name, graph_id, pd, bal, 2 * pd / (1 - pd), 0.0,
                  witnesses={"phi_dir": _pair_json(cp), "balanced": _pair_json(bcp)})


def check_prop_4_7(g: Digraph, graph_id: str = "", cap: int = ex.PAIR_CAP) -> VerificationRecord:
    """Separation example: ``phi_dir = 0`` while ``phi > 0``, ``beta_dir > 0`` and ``sigma2 = 1``."""
    name = "prop_4_7"
    if not graph_id.startswith("fig"):
        return _skip(name, graph_id, "applies to the two separation examples only")
    pd, cp = ex.min_phi_dir(g, cap)
    ph, s = ex.min_phi(g, cap)
    bd, bcp = ex.min_beta_dir(g, cap)
    s2 = singular_values(g).sigma(2)
    wit = {"phi_dir": _pair_json(cp), "phi_set": members(s), "beta_dir": _pair_json(bcp),
           "sigma2": s2}
    if graph_id.startswith("fig5"):
        stated = ex.phi_dir(g, *FIG5_STATED_PAIR)
        wit["stated_pair"] = _pair_json(stated)
    ok = pd == 0 and ph > 0 and bd > 0 and abs(s2 - 1) <= SPECTRAL_TOL
    mid = min(ph, bd)
    return VerificationRecord(name, graph_id, "pass" if ok else "fail", pd, mid, None,
                              SPECTRAL_TOL, float(mid - pd), witnesses=wit)


def _kway_pre(g: Digraph, k: int, max_n: int) -> str | None:
    if k > g.n:
        return f"k={k} exceeds n={g.n}"
    if g.n > max_n:
        return f"n={g.n} exceeds k-way limit {max_n}"
    return None


def _family_json(fam: ex.PartitionFamily) -> dict:
    return fam.to_json()


def check_higher_order(g: Digraph, k: int, graph_id: str = "",
                       max_n: int = ex.KWAY_CAP) -> VerificationRecord:
    """Lower side ``(1 - sigma_k)/2 <= phi_k_dir``; the O(k^2) upper side is reported as a ratio."""
    name = "higher_order_k"
    why = _kway_pre(g, k, max_n)
    if why:
        return _skip(name, graph_id, why, k=k)
    sk = singular_values(g).sigma(k)
    val, fam = ex.min_phi_k_dir(g, k, cap=max_n)
    rec = _chain(name, graph_id, (1 - sk) / 2, val, None, SPECTRAL_TOL, k=k,
                 witnesses={"family": _family_json(fam)})
    gap = 1 - sk
    if gap > SPECTRAL_TOL:
        rec.ratio = float(val) / (k * k * math.sqrt(gap))
    return rec


def check_sv_higher_order(g: Digraph, k: int, graph_id: str = "",
                          max_n: int = ex.KWAY_CAP) -> VerificationRecord:
    """``phi_k_dir(G)`` equals the k-way expansion of the lift, exactly."""
    name = "sv_higher_order_k"
    why = _kway_pre(g, k, max_n)
    if why:
        return _skip(name, graph_id, why, k=k)
    val, fam = ex.min_phi_k_dir(g, k, cap=max_n)
    lv, sets = ex.rho_k(symmetric_lift(g), k, cap=2 * max_n)
    status = "pass" if val == lv else "fail"
    return VerificationRecord(name, graph_id, status, val, lv, val, 0.0, float(lv - val), k=k,
                              witnesses={"family": _family_json(fam),
                                         "lift_sets": [members(x) for x in sets]})


def check_thm_5_4(g: Digraph, k: int, graph_id: str = "",
                  max_n: int = ex.KWAY_CAP) -> VerificationRecord:
    name = "thm_5_4"
    if g.directed:
        return _skip(name, graph_id, "needs an undirected graph", k=k)
    why = _kway_pre(g, k, max_n)
    if why:
        return _skip(name, graph_id, why, k=k)
    val, fam = ex.min_phi_k_dir(g, k, cap=max_n)
    rv, rfam = ex.min_rho_k_dir(g, k, cap=max_n)
    return _chain(name, graph_id, val, rv, 3 * val, 0.0, k=k,
                  witnesses={"phi_k_dir": _family_json(fam), "rho_k_dir": _family_json(rfam)})


def check_vertex_spectral(g: Digraph, graph_id: str = "",
                          cap: int = ex.VERTEX_ENUM_CAP) -> list[VerificationRecord]:
    """Vertex expansion against ``1 - sigma2``: four records.

    * ``spectral_implies_vertex``: every ``|S| <= n/2`` has
      ``|N+(S)| >= (2 - sigma2)|S|`` (tolerance 1e-9).
    * ``vertex_spectral_d2`` / ``vertex_spectral_d``: ratios
      ``(1 - sigma2) / (delta^2/d^2)`` and ``(1 - sigma2) / (delta^2/d)``,
      which must be at least :data:`OMEGA_FLOOR` (vacuous when ``delta = 0``).
    * ``magnifier_lemma``: the lift is an ``(n, delta/8)``-magnifier, exactly.
    """
    names = ("spectral_implies_vertex", "vertex_spectral_d2", "vertex_spectral_d",
             "magnifier_lemma")
    if not g.is_regular():
        return [_skip(nm, graph_id, "needs a regular graph") for nm in names]
    if g.n < 2:
        return [_skip(nm, graph_id, "needs n >= 2") for nm in names]
    try:
        prof = ex.vertex_expansion(g, g.n // 2, cap)
    except ex.CapExceeded as err:
        return [_skip(nm, graph_id, str(err)) for nm in names]
    s2 = singular_values(g).sigma(2)
    gap = 1 - s2
    d = prof.degree
    delta = prof.delta
    wit = {"delta_set": members(prof.delta_set), "degree": f"{d.numerator}/{d.denominator}",
           "method": prof.method}
    out = [_chain(names[0], graph_id, 1 + gap, prof.profile[prof.bound], None, SPECTRAL_TOL,
                  witnesses=dict(wit))]
    for nm, lhs in ((names[1], delta * delta / (d * d)), (names[2], delta * delta / d)):
        rec = VerificationRecord(nm, graph_id, "pass", lhs, gap, None, SPECTRAL_TOL,
                                 witnesses=dict(wit))
        if delta > 0:
            ratio = Fraction(gap) / lhs
            rec.ratio = float(ratio)
            rec.slack = float(ratio - OMEGA_FLOOR)
            if ratio < OMEGA_FLOOR:
                rec.status = "fail"
                rec.reason = f"ratio below floor {OMEGA_FLOOR}"
        else:
            rec.reason = "delta = 0: bound is vacuous"
        out.append(rec)
    try:
        mag, mset = ex.magnifier_constant(symmetric_lift(g), g.n, cap)
    except ex.CapExceeded as err:
        out.append(_skip(names[3], graph_id, str(err)))
        return out
    out.append(_chain(names[3], graph_id, delta / 8, mag, None, 0.0,
                      witnesses={"delta_set": members(prof.delta_set),
                                 "lift_set": members(mset)}))
    return out


def check_golden(g: Digraph, golden: dict, graph_id: str = "") -> VerificationRecord:
    """Compare stored reference values (currently ``sigma2``) with fresh computations."""
    name = "golden"
    if "sigma2" not in golden:
        return _skip(name, graph_id, "no supported golden field")
    want = float(golden["sigma2"])
    got = singular_values(g).sigma(2)
    ok = abs(got - want) <= SPECTRAL_TOL
    return VerificationRecord(name, graph_id, "pass" if ok else "fail", want, got, want,
                              SPECTRAL_TOL, -abs(got - want),
                              reason="" if ok else "sigma2 differs from golden value")


# ---------------------------------------------------------------------------
# suites


CHECKS = (
    "cheeger",
    "di_cheeger",
    "bipartite_cheeger",
    "relating_4_6",
    "prop_3_7",
    "prop_4_7",
    "higher_order_k",
    "sv_higher_order_k",
    "thm_5_4",
    "spectral_implies_vertex",
    "vertex_spectral_d2",
    "vertex_spectral_d",
    "magnifier_lemma",
)
DEFAULT_CHECKS = CHECKS
_VERTEX_IDS = {"vertex_spectral_d2", "vertex_spectral_d", "spectral_implies_vertex",
               "magnifier_lemma"}


@dataclass(frozen=True)
class CorpusEntry:
    """A corpus item: a generator spec or an explicit graph, plus optional golden values."""

    graph_id: str
    spec: GeneratorSpec | None = None
    graph: Digraph | None = None
    golden: tuple[tuple[str, object], ...] = ()

    def materialize(self) -> Digraph:
        if self.graph is not None:
            return self.graph
        return build(self.spec)

    @classmethod
    def from_spec(cls, spec: GeneratorSpec, golden: dict | None = None) -> "CorpusEntry":
        return cls(spec.graph_id, spec, None, tuple(sorted((golden or {}).items())))


@dataclass(frozen=True)
class SuiteOptions:
    ks: tuple[int, ...] = (2, 3)
    kway_max_n: int = 6
    pair_cap: int = ex.PAIR_CAP
    set_cap: int = ex.SET_CAP
    vertex_cap: int = ex.VERTEX_ENUM_CAP


def _guard(name: str, graph_id: str, fn: Callable[[], object], k: int | None = None) -> list:
    try:
        res = fn()
    except ex.CapExceeded as err:
        return [_skip(name, graph_id, str(err), k=k)]
    except (GraphError, ValueError) as err:
        return [_skip(name, graph_id, f"precondition: {err}", k=k)]
    return res if isinstance(res, list) else [res]


def run_graph(g: Digraph, graph_id: str, checks: Sequence[str] = DEFAULT_CHECKS,
              opts: SuiteOptions = SuiteOptions(), golden: dict | None = None
              ) -> list[VerificationRecord]:
    """Run the selected checks on one graph, in the order of :data:`CHECKS`."""
    unknown = set(checks) - set(CHECKS) - {"golden"}
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    wanted = set(checks)
    out: list[VerificationRecord] = []
    if not is_eulerian(g):
        return [_skip(c, graph_id, "graph is not Eulerian") for c in CHECKS if c in wanted]
    simple = {
        "cheeger": lambda: check_cheeger(g, graph_id, opts.set_cap),
        "di_cheeger": lambda: check_di_cheeger(g, graph_id, opts.pair_cap),
        "bipartite_cheeger": lambda: check_bipartite_cheeger(g, graph_id, opts.set_cap),
        "relating_4_6": lambda: check_relating(g, graph_id, min(opts.pair_cap, opts.set_cap)),
        "prop_3_7": lambda: check_prop_3_7(g, graph_id, opts.pair_cap),
        "prop_4_7": lambda: check_prop_4_7(g, graph_id, opts.pair_cap),
    }
    kway = {
        "higher_order_k": check_higher_order,
        "sv_higher_order_k": check_sv_higher_order,
        "thm_5_4": check_thm_5_4,
    }
    for name in CHECKS:
        if name not in wanted:
            continue
        if name in simple:
            out += _guard(name, graph_id, simple[name])
        elif name in kway:
            for k in opts.ks:
                fn = kway[name]
                out += _guard(name, graph_id,
                              lambda fn=fn, k=k: fn(g, k, graph_id, opts.kway_max_n), k)
    if wanted & _VERTEX_IDS:
        recs = _guard("vertex_spectral", graph_id,
                      lambda: check_vertex_spectral(g, graph_id, opts.vertex_cap))
        if len(recs) == 1 and recs[0].theorem == "vertex_spectral":
            recs = [VerificationRecord(n, graph_id, "skip", reason=recs[0].reason)
                    for n in ("spectral_implies_vertex", "vertex_spectral_d2",
                              "vertex_spectral_d", "magnifier_lemma")]
        out += [r for r in recs if r.theorem in wanted]
    if golden:
        out += _guard("golden", graph_id, lambda: check_golden(g, golden, graph_id))
    return out


def _run_entry(args) -> list[VerificationRecord]:
    entry, checks, opts = args
    try:
        g = entry.materialize()
    except (GraphError, ValueError) as err:
        return [VerificationRecord("build", entry.graph_id, "fail", reason=str(err))]
    return run_graph(g, entry.graph_id, checks, opts, dict(entry.golden))


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_suite(corpus: Iterable[CorpusEntry | GeneratorSpec],
              checks: Sequence[str] = DEFAULT_CHECKS,
              opts: SuiteOptions = SuiteOptions(),
              workers: int | None = None) -> list[VerificationRecord]:
    """Run checks over a corpus; records come back in corpus order.

    ``workers`` defaults to the ``SVEXP_WORKERS`` environment variable (1).
    """
    entries = [e if isinstance(e, CorpusEntry) else CorpusEntry.from_spec(e) for e in corpus]
    jobs = [(e, tuple(checks), opts) for e in entries]
    n_workers = workers if workers is not None else _workers()
    if n_workers <= 1 or len(jobs) <= 1:
        results = [_run_entry(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_run_entry, jobs))
    return [r for batch in results for r in batch]
