"""Reading and writing the ``lhg v1`` text format.

::

    lhg 1 <k> <n> <m> [multi]
    <v_1> ... <v_k> [<multiplicity>]
    ...

Lines starting with ``#`` (and trailing ``# ...`` comments) are ignored.
Vertex ids within a line must be strictly ascending and lines may not repeat.
"""

from __future__ import annotations

from pathlib import Path
from typing import TextIO

from .errors import HypergraphError, ParseError
from .hypergraph import LinearKGraph, MultiKGraph


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def loads(text: str) -> LinearKGraph | MultiKGraph:
    lines = _content_lines(text)
    try:
        lineno, header = next(lines)
    except StopIteration:
        raise ParseError("empty input, expected an 'lhg' header") from None
    parts = header.split()
    if len(parts) not in (5, 6) or parts[0] != "lhg" or parts[1] != "1":
        raise ParseError(f"line {lineno}: bad header {header!r}")
    multi = len(parts) == 6
    if multi and parts[5] != "multi":
        raise ParseError(f"line {lineno}: unknown header flag {parts[5]!r}")
    try:
        k, n, m = (int(x) for x in parts[2:5])
    except ValueError:
        raise ParseError(f"line {lineno}: non-integer header field") from None
    width = k + 1 if multi else k
    edges, mult, seen = [], [], set()
    for lineno, line in lines:
        fields = line.split()
        if len(fields) != width:
            raise ParseError(f"line {lineno}: expected {width} fields, got {len(fields)}")
        try:
            vals = [int(x) for x in fields]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer field") from None
        e = tuple(vals[:k])
        if any(a >= b for a, b in zip(e, e[1:])):
            raise ParseError(f"line {lineno}: vertices not strictly ascending")
        if e in seen:
            raise ParseError(f"line {lineno}: duplicate edge {e}")
        seen.add(e)
        edges.append(e)
        if multi:
            mult.append(vals[k])
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    try:
        base = LinearKGraph(k, n, edges)
        return MultiKGraph(base, mult) if multi else base
    except HypergraphError as exc:
        raise ParseError(str(exc)) from exc


def dumps(H: LinearKGraph | MultiKGraph, comment: str | None = None) -> str:
    out = []
    if isinstance(H, MultiKGraph):
        out.append(f"lhg 1 {H.k} {H.n} {H.base.m} multi")
        if comment:
            out.append(f"# {comment}")
        out.extend(" ".join(map(str, e)) + f" {mu}" for e, mu in zip(H.edges, H.multiplicity))
    else:
        out.append(f"lhg 1 {H.k} {H.n} {H.m}")
        if comment:
            out.append(f"# {comment}")
        out.extend(" ".join(map(str, e)) for e in H.edges)
    return "\n".join(out) + "\n"


def load(path: str | Path | TextIO) -> LinearKGraph | MultiKGraph:
    if hasattr(path, "read"):
        return loads(path.read())
    return loads(Path(path).read_text())


def dump(H, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(dumps(H, comment))
