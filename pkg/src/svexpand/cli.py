"""Command-line entry point: ``svexpand gen|analyze|certify|verify``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import expansion as ex
from .certificates import sweep_cut_pair
from .families import FAMILIES, GeneratorSpec, build, default_corpus
from .formats import ParseError, dumps, parse_graph, serialize_graph
from .graph import Digraph, GraphError, eulerianize, is_eulerian, members
from .harness import CHECKS, CorpusEntry, SuiteOptions, run_suite
from .spectra import SpectralError, singular_values

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

# parameters each family accepts on the command line
_FAMILY_PARAMS = {
    "hypercube": ("d", "loops"),
    "cycle": ("n", "loops", "directed"),
    "complete_bipartite": ("half",),
    "fig5": (),
    "fig6": (),
    "fig6_unit": (),
    "fig6_half": (),
    "random_eulerian": ("n", "density"),
    "random_regular": ("n", "d"),
}


class UsageError(Exception):
    pass


def _read_graph(path: str) -> Digraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_graph(text)


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[tuple[str, str]]) -> None:
    width = max((len(k) for k, _ in rows), default=0)
    for k, v in rows:
        print(f"{k.ljust(width)}  {v}", file=sys.stderr)


# ---------------------------------------------------------------------------
# gen


def cmd_gen(args) -> int:
    family = args.family
    allowed = _FAMILY_PARAMS[family]
    params = {}
    for name in ("n", "d", "loops", "half", "density", "directed"):
        val = getattr(args, name)
        if val is None or val is False:
            continue
        if name not in allowed:
            raise UsageError(f"family {family!r} does not take --{name}")
        params[name] = val
    seed = args.seed
    if family.startswith("random"):
        if seed is None:
            seed = 0
    elif seed is not None:
        raise UsageError(f"family {family!r} does not take --seed")
    g = build(GeneratorSpec.of(family, seed, **params))
    _emit(serialize_graph(g), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _caps(max_n: int | None) -> tuple[int, int, int]:
    if max_n is None:
        return ex.PAIR_CAP, ex.SET_CAP, ex.KWAY_CAP
    return max_n, max_n, max_n


def analyze(g: Digraph, k: int | None = None, max_exact_n: int | None = None) -> dict:
    """Spectral and exact combinatorial summary of ``g``; skipped fields carry a reason."""
    pair_cap, set_cap, kway_cap = _caps(max_exact_n)
    report: dict = {
        "graph": {
            "n": g.n,
            "directed": g.directed,
            "edges": g.num_edges,
            "eulerian": is_eulerian(g),
            "regular": g.is_regular(),
            "total_weight": g.total_weight(),
        },
        "witnesses": {},
        "skipped": {},
    }
    wit = report["witnesses"]
    skipped = report["skipped"]

    def attempt(name: str, fn: Callable[[], object]) -> None:
        try:
            fn()
        except ex.CapExceeded as err:
            report[name] = None
            skipped[name] = f"cap exceeded: {err}"
        except (GraphError, SpectralError, ValueError) as err:
            report[name] = None
            skipped[name] = str(err)

    def spectrum():
        sp = singular_values(g)
        report["spectrum"] = sp.to_json()
        report["spectrum"]["tolerance"] = 1e-8

    def certificate():
        report["certificate"] = sweep_cut_pair(g).to_json()

    def mphi():
        val, s = ex.min_phi(g, set_cap)
        report["min_phi"] = val
        wit["min_phi"] = members(s)

    def mphidir():
        val, cp = ex.min_phi_dir(g, pair_cap)
        report["min_phi_dir"] = val
        wit["min_phi_dir"] = cp.to_json()

    def mbetadir():
        val, cp = ex.min_beta_dir(g, pair_cap)
        report["min_beta_dir"] = val
        wit["min_beta_dir"] = cp.to_json()

    def mbeta():
        val, y = ex.min_beta(g, set_cap)
        report["min_beta"] = val
        wit["min_beta"] = y

    def mbal():
        val, cp = ex.min_phi_dir_balanced(g, pair_cap)
        report["min_phi_dir_balanced"] = val
        wit["min_phi_dir_balanced"] = cp.to_json()

    def vexp():
        report["vertex_expansion"] = ex.vertex_expansion(g).to_json()

    def kway():
        val, fam = ex.min_phi_k_dir(g, k, kway_cap)
        report["phi_k_dir"] = val
        wit["phi_k_dir"] = fam.to_json()

    attempt("spectrum", spectrum)
    attempt("certificate", certificate)
    attempt("min_phi", mphi)
    attempt("min_phi_dir", mphidir)
    attempt("min_beta_dir", mbetadir)
    if not g.directed:
        attempt("min_beta", mbeta)
    attempt("min_phi_dir_balanced", mbal)
    attempt("vertex_expansion", vexp)
    if k is not None:
        attempt("phi_k_dir", kway)
    return report


def _human(report: dict) -> list[tuple[str, str]]:
    rows = []
    for key in sorted(report):
        if key in ("witnesses", "skipped", "graph"):
            continue
        val = report[key]
        if isinstance(val, Fraction):
            rows.append((key, f"{val} ~ {float(val):.6g}"))
        elif val is None:
            rows.append((key, f"- ({report['skipped'].get(key, '')})"))
        elif key == "spectrum":
            rows.append(("sigma2", f"{val['sigmas'][1]:.12g}" if len(val["sigmas"]) > 1 else "-"))
        elif key == "certificate":
            rows.append(("certificate", f"{val['value']} <= {val['bound']:.6g}: {val['satisfied']}"))
        elif key == "vertex_expansion":
            rows.append(("vertex delta", val["delta"]))
    return rows


def cmd_analyze(args) -> int:
    g = _read_graph(args.file)
    if args.eulerianize:
        g = eulerianize(g)
    report = analyze(g, args.k, args.max_exact_n)
    _emit(dumps(report) + "\n", args.output)
    _table(_human(report))
    return EXIT_OK


# ---------------------------------------------------------------------------
# certify


def cmd_certify(args) -> int:
    g = _read_graph(args.file)
    if args.eulerianize:
        g = eulerianize(g)
    cert = sweep_cut_pair(g)
    _emit(dumps(cert.to_json()) + "\n", args.output)
    _table([("value", str(cert.cut.value)), ("sigma2", f"{cert.sigma2:.12g}"),
            ("bound", f"{cert.bound:.12g}"), ("satisfied", str(cert.satisfied))])
    return EXIT_OK if cert.satisfied else EXIT_FAIL


# ---------------------------------------------------------------------------
# verify


def load_corpus(path: str) -> list[CorpusEntry]:
    """Read a JSON array of entries.

    An entry is ``{"family": ..., "params": {...}, "seed": ...}`` or
    ``{"path": "graph.tsv"}`` (relative to the corpus file), optionally with
    ``"id"`` and ``"golden": {"sigma2": x}``.
    """
    base = Path(path).parent
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as err:
        raise ParseError(f"corpus is not valid JSON: {err}") from None
    if not isinstance(data, list):
        raise ParseError("corpus must be a JSON array")
    entries = []
    for i, obj in enumerate(data):
        if not isinstance(obj, dict):
            raise ParseError(f"corpus entry {i} is not an object")
        golden = tuple(sorted(obj.get("golden", {}).items()))
        if "path" in obj:
            g = parse_graph((base / obj["path"]).read_text())
            entries.append(CorpusEntry(obj.get("id", obj["path"]), None, g, golden))
        elif "family" in obj:
            if obj["family"] not in FAMILIES:
                raise ParseError(f"corpus entry {i}: unknown family {obj['family']!r}")
            spec = GeneratorSpec.from_json(obj)
            entries.append(CorpusEntry(obj.get("id", spec.graph_id), spec, None, golden))
        else:
            raise ParseError(f"corpus entry {i} needs 'family' or 'path'")
    return entries


def cmd_verify(args) -> int:
    if args.default_corpus:
        corpus = [CorpusEntry.from_spec(s) for s in default_corpus()]
    else:
        corpus = load_corpus(args.corpus)
    if args.checks:
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        bad = [c for c in checks if c not in CHECKS]
        if bad:
            raise UsageError(f"unknown checks: {', '.join(bad)}")
    else:
        checks = list(CHECKS)
    pair_cap, set_cap, _ = _caps(args.max_exact_n)
    ks = tuple(int(x) for x in args.k.split(",")) if args.k else (2, 3)
    opts = SuiteOptions(ks=ks, kway_max_n=args.kway_max_n, pair_cap=pair_cap, set_cap=set_cap)
    records = run_suite(corpus, checks, opts)
    _emit("".join(dumps(r.to_json()) + "\n" for r in records), args.output)
    counts: dict[str, dict[str, int]] = {}
    for r in records:
        counts.setdefault(r.theorem, {"pass": 0, "fail": 0, "skip": 0})[r.status] += 1
    _table([(name, f"pass {c['pass']}  fail {c['fail']}  skip {c['skip']}")
            for name, c in counts.items()])
    failed = [r for r in records if r.status == "fail"]
    for r in failed:
        print(f"FAIL {r.theorem} on {r.graph}: {r.reason}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="svexpand",
                                description="Spectral and combinatorial expansion of Eulerian digraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a generated graph as TSV")
    gen.add_argument("family", choices=sorted(_FAMILY_PARAMS))
    gen.add_argument("--n", type=int)
    gen.add_argument("--d", type=int)
    gen.add_argument("--loops", type=int)
    gen.add_argument("--half", type=int)
    gen.add_argument("--density", type=float)
    gen.add_argument("--directed", action="store_true")
    gen.add_argument("--seed", type=int)
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_gen)

    an = sub.add_parser("analyze", help="JSON report of spectral and exact quantities")
    an.add_argument("file", help="graph TSV file, '-' for stdin")
    an.add_argument("--k", type=int, help="also compute the k-way directed conductance")
    an.add_argument("--max-exact-n", type=int,
                    help="override the enumeration caps (defaults 12 pairs, 16 sets, 9 k-way)")
    an.add_argument("--eulerianize", action="store_true",
                    help="reweight by the stationary distribution first")
    an.add_argument("-o", "--output")
    an.set_defaults(func=cmd_analyze)

    ce = sub.add_parser("certify", help="sweep-cut certificate; exit 1 if the bound fails")
    ce.add_argument("file")
    ce.add_argument("--eulerianize", action="store_true")
    ce.add_argument("-o", "--output")
    ce.set_defaults(func=cmd_certify)

    ve = sub.add_parser("verify", help="run inequality checks, JSON lines out")
    src = ve.add_mutually_exclusive_group(required=True)
    src.add_argument("--default-corpus", action="store_true")
    src.add_argument("--corpus", help="JSON corpus file")
    ve.add_argument("--checks", help="comma-separated check ids (default: all)")
    ve.add_argument("--k", help="comma-separated k values for k-way checks (default 2,3)")
    ve.add_argument("--kway-max-n", type=int, default=6,
                    help="largest n for k-way checks (default 6)")
    ve.add_argument("--max-exact-n", type=int)
    ve.add_argument("-o", "--output")
    ve.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ParseError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, SpectralError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
