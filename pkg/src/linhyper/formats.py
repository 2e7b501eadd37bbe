"""Plain-text output formats of the command-line tools and their parsers.

Every writer has a matching reader so that an artifact written by one
command can be loaded and re-verified later.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .errors import ParseError
from .fractional import FarkasCertificate, FractionalMatching


def frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


def _lines(text: str):
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line.split()


def _int(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}") from None


# -- fractional matchings and certificates

def dump_pfm(result: FractionalMatching | FarkasCertificate) -> str:
    if isinstance(result, FractionalMatching):
        out = ["FEASIBLE"]
        out += [f"{e} {frac(w)}" for e, w in sorted(result.weights.items()) if w]
    else:
        out = ["INFEASIBLE"]
        if result.cap is not None:
            out.append(f"cap {frac(result.cap)}")
        out += [f"y {v} {frac(w)}" for v, w in sorted(result.y.items())]
        if result.cap is not None:
            out += [f"z {e} {frac(w)}" for e, w in sorted(result.z.items())]
    return "\n".join(out) + "\n"


def load_pfm(text: str) -> FractionalMatching | FarkasCertificate:
    rows = list(_lines(text))
    if not rows or rows[0] not in (["FEASIBLE"], ["INFEASIBLE"]):
        raise ParseError("expected FEASIBLE or INFEASIBLE on the first line")
    if rows[0] == ["FEASIBLE"]:
        weights = {}
        for r in rows[1:]:
            if len(r) != 2:
                raise ParseError(f"bad weight line {' '.join(r)!r}")
            weights[_int(r[0])] = parse_frac(r[1])
        return FractionalMatching(weights, True)
    y, z, cap = {}, {}, None
    for r in rows[1:]:
        if r[0] == "cap" and len(r) == 2:
            cap = parse_frac(r[1])
        elif r[0] == "y" and len(r) == 3:
            y[_int(r[1])] = parse_frac(r[2])
        elif r[0] == "z" and len(r) == 3:
            z[_int(r[1])] = parse_frac(r[2])
        else:
            raise ParseError(f"bad certificate line {' '.join(r)!r}")
    return FarkasCertificate(y, z, cap)


# -- matchings

def dump_matching(edge_ids: Iterable[int], covered: int, n: int) -> str:
    out = [str(e) for e in edge_ids]
    out.append(f"covered {covered} of {n}")
    return "\n".join(out) + "\n"


def load_matching(text: str) -> tuple[list[int], int, int]:
    edges, summary = [], None
    for r in _lines(text):
        if r[0] == "covered":
            if len(r) != 4 or r[2] != "of":
                raise ParseError(f"bad summary line {' '.join(r)!r}")
            summary = (_int(r[1]), _int(r[3]))
        elif len(r) == 1:
            edges.append(_int(r[0]))
        else:
            raise ParseError(f"bad matching line {' '.join(r)!r}")
    if summary is None:
        raise ParseError("missing 'covered <c> of <n>' line")
    return edges, summary[0], summary[1]


# -- tilings

def dump_tiling(copies, covered: int, n: int) -> str:
    out = []
    for c in copies:
        pairs = " ".join(f"{x}->{u}" for x, u in enumerate(c.vertex_map))
        out.append(f"copy {pairs} ; edges {' '.join(map(str, c.edge_map))}")
    out.append(f"covered {covered} of {n}")
    return "\n".join(out) + "\n"


def load_tiling(text: str):
    from .tiling import LabeledCopy

    copies, summary = [], None
    for r in _lines(text):
        if r[0] == "covered" and len(r) == 4:
            summary = (_int(r[1]), _int(r[3]))
            continue
        if r[0] != "copy" or ";" not in r:
            raise ParseError(f"bad tiling line {' '.join(r)!r}")
        cut = r.index(";")
        if r[cut + 1:cut + 2] != ["edges"]:
            raise ParseError("expected 'edges' after ';'")
        vmap = {}
        for tok in r[1:cut]:
            a, _, b = tok.partition("->")
            vmap[_int(a)] = _int(b)
        if sorted(vmap) != list(range(len(vmap))):
            raise ParseError("copy does not map every tree vertex")
        copies.append(LabeledCopy(tuple(vmap[x] for x in range(len(vmap))), tuple(_int(t) for t in r[cut + 2:])))
    if summary is None:
        raise ParseError("missing 'covered <c> of <n>' line")
    return copies, summary[0], summary[1]


# -- embeddings

def dump_embedding(vertex_map, edge_map) -> str:
    out = [f"map {x} {v}" for x, v in enumerate(vertex_map)]
    out += [f"edge {e} {h}" for e, h in enumerate(edge_map)]
    return "\n".join(out) + "\n"


def load_embedding(text: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    vmap, emap = {}, {}
    for r in _lines(text):
        if len(r) != 3 or r[0] not in ("map", "edge"):
            raise ParseError(f"bad embedding line {' '.join(r)!r}")
        (vmap if r[0] == "map" else emap)[_int(r[1])] = _int(r[2])
    if sorted(vmap) != list(range(len(vmap))) or sorted(emap) != list(range(len(emap))):
        raise ParseError("embedding must list every pattern vertex and edge")
    return tuple(vmap[x] for x in range(len(vmap))), tuple(emap[e] for e in range(len(emap)))
