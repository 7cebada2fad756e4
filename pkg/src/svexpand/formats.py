"""Graph TSV files and deterministic JSON output."""

from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from .graph import Digraph, GraphError

__all__ = ["ParseError", "parse_graph", "serialize_graph", "format_weight", "dumps"]


class ParseError(ValueError):
    """Malformed graph file."""


def format_weight(q: Fraction) -> str:
    """Exact decimal when ``q`` terminates, otherwise ``p/q``."""
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    if digits == 0:
        return str(q.numerator)
    scaled = q * 10 ** digits
    sign = "-" if scaled < 0 else ""
    body = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{body[:-digits]}.{body[-digits:]}"


def _parse_weight(tok: str, lineno: int) -> Fraction:
    try:
        q = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"line {lineno}: bad weight {tok!r}") from None
    if q < 0:
        raise ParseError(f"line {lineno}: negative weight {tok}")
    return q


def parse_graph(text: str) -> Digraph:
    """Parse ``n <count> <directed|undirected>`` followed by ``u v w`` lines.

    Blank lines and lines starting with ``#`` are ignored.  Undirected files
    list each edge once; a repeated (unordered, if undirected) pair is an error.
    """
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty graph file")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 3 or parts[0] != "n" or parts[2] not in ("directed", "undirected"):
        raise ParseError(f"line {lineno}: malformed header {header!r}")
    try:
        n = int(parts[1])
    except ValueError:
        raise ParseError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
    if n < 1:
        raise ParseError(f"line {lineno}: vertex count must be positive")
    directed = parts[2] == "directed"
    weights: dict[tuple[int, int], Fraction] = {}
    for lineno, ln in lines[1:]:
        toks = ln.split()
        if len(toks) != 3:
            raise ParseError(f"line {lineno}: expected 'u v w'")
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise ParseError(f"line {lineno}: bad vertex index") from None
        for x in (u, v):
            if not 0 <= x < n:
                raise ParseError(f"line {lineno}: vertex {x} out of range 0..{n - 1}")
        w = _parse_weight(toks[2], lineno)
        key = (u, v) if directed else (min(u, v), max(u, v))
        if key in weights:
            raise ParseError(f"line {lineno}: duplicate edge {key}")
        weights[key] = w
    if not directed:
        for (u, v), w in list(weights.items()):
            weights[(v, u)] = w
    try:
        return Digraph(n, weights, directed=directed)
    except GraphError as err:
        raise ParseError(str(err)) from None


def serialize_graph(g: Digraph) -> str:
    kind = "directed" if g.directed else "undirected"
    out = [f"n {g.n} {kind}"]
    for u, v, q in g.edges():
        if not g.directed and u > v:
            continue
        out.append(f"{u} {v} {format_weight(q)}")
    return "\n".join(out) + "\n"


def _encode(obj, out: list[str]) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(format(x, ".17g") if math.isfinite(x) else "null")
    elif isinstance(obj, Fraction):
        out.append(json.dumps(f"{obj.numerator}/{obj.denominator}"))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj, key=str)):
            if i:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _encode(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(", ")
            _encode(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON with sorted keys, 17-significant-digit floats and ``"p/q"`` fractions."""
    out: list[str] = []
    _encode(obj, out)
    return "".join(out)
