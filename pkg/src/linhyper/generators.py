"""Instance families: MOLS, complete k-partite linear graphs, the extremal
construction, Steiner triple systems, random linear graphs and patterns."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import BadLength, BadOrder, DeleteTooMany, TooMany
from .finite_field import field as gf
from .finite_field import prime_power
from .hypergraph import LinearKGraph, induced_remove


# -- Latin squares -----------------------------------------------------------

@dataclass(frozen=True)
class LatinSquare:
    q: int
    cells: tuple[tuple[int, ...], ...]

    def is_latin(self) -> bool:
        full = set(range(self.q))
        return all(set(row) == full for row in self.cells) and all(
            {row[c] for row in self.cells} == full for c in range(self.q)
        )

    def orthogonal_to(self, other: "LatinSquare") -> bool:
        pairs = {(a, b) for ra, rb in zip(self.cells, other.cells) for a, b in zip(ra, rb)}
        return len(pairs) == self.q * self.q


@dataclass(frozen=True)
class MOLSFamily:
    q: int
    squares: tuple[LatinSquare, ...]

    def is_mutually_orthogonal(self) -> bool:
        return all(s.is_latin() for s in self.squares) and all(
            a.orthogonal_to(b) for a, b in combinations(self.squares, 2)
        )


def mols(q: int, t: int) -> MOLSFamily:
    """``t`` mutually orthogonal Latin squares ``L_a(x, y) = a*x + y`` over GF(q)."""
    prime_power(q)
    if not 1 <= t <= q - 1:
        raise TooMany(f"GF({q}) yields at most {q - 1} MOLS, asked for {t}")
    F = gf(q)
    squares = tuple(
        LatinSquare(q, tuple(tuple(F.add[F.mul[a][x]][y] for y in range(q)) for x in range(q)))
        for a in range(1, t + 1)
    )
    return MOLSFamily(q, squares)


def format_mols(family: MOLSFamily) -> str:
    lines = [f"mols {family.q} {len(family.squares)}"]
    for sq in family.squares:
        lines.extend(" ".join(map(str, row)) for row in sq.cells)
    return "\n".join(lines) + "\n"


# -- complete k-partite and the extremal construction ------------------------

def complete_kpartite_linear(q: int, k: int) -> LinearKGraph:
    """The transversal design on ``k`` parts of size ``q``.

    Vertex ``part*q + i`` is element ``i`` of part ``part``.  Each of the
    ``q**2`` edges picks ``i`` in part 0, ``j`` in part 1 and ``L_s(i, j)``
    in part ``2+s``; every vertex ends up with degree ``q``.
    """
    prime_power(q)
    if not 2 <= k <= q + 1:
        raise TooMany(f"need 2 <= k <= q+1, got k={k}, q={q}")
    squares = mols(q, k - 2).squares if k > 2 else ()
    edges = []
    for i in range(q):
        for j in range(q):
            e = [i, q + j] + [(2 + s) * q + sq.cells[i][j] for s, sq in enumerate(squares)]
            edges.append(e)
    return LinearKGraph(k, k * q, edges)


def extremal_deletions(m: int, k: int) -> int:
    """ceil(k*m/(k-1)): how many vertices the extremal construction deletes."""
    return -(-k * m // (k - 1))


def extremal_construction(q: int, m: int, k: int) -> LinearKGraph:
    """Delete ``ceil(km/(k-1))`` vertices of the last part of the complete
    ``k``-partite linear ``k``-graph of order ``q``.

    No matching of the result covers more than ``n - k*m`` vertices since
    every edge meets the shrunken last part.
    """
    r = extremal_deletions(m, k)
    if m < 1 or r >= q:
        raise DeleteTooMany(f"deleting {r} of {q} vertices in a part (m={m}, k={k})")
    full = complete_kpartite_linear(q, k)
    last = range((k - 1) * q + q - r, k * q)
    return induced_remove(full, last).graph


# -- Steiner triple systems ----------------------------------------------------

def _bose(v: int) -> list[tuple[int, int, int]]:
    n = v // 3
    half = (n + 1) // 2

    def pt(x, i):
        return x + (i % 3) * n

    blocks = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(n)]
    for i in range(3):
        for x, y in combinations(range(n), 2):
            blocks.append((pt(x, i), pt(y, i), pt((x + y) * half % n, i + 1)))
    return blocks


def _skolem(v: int) -> list[tuple[int, int, int]]:
    t = (v - 1) // 6
    n = 2 * t
    inf = 3 * n

    def pt(x, i):
        return x + (i % 3) * n

    def op(x, y):
        s = (x + y) % n
        return s // 2 if s % 2 == 0 else t + s // 2

    blocks = [(pt(x, 0), pt(x, 1), pt(x, 2)) for x in range(t)]
    for x in range(t):
        for i in range(3):
            blocks.append((inf, pt(x + t, i), pt(x, i + 1)))
    for i in range(3):
        for x, y in combinations(range(n), 2):
            blocks.append((pt(x, i), pt(y, i), pt(op(x, y), i + 1)))
    return blocks


def steiner_triple(n: int) -> LinearKGraph:
    """A Steiner triple system on ``n`` points (Bose for n = 3 mod 6,
    Skolem for n = 1 mod 6)."""
    if n < 7 or n % 6 not in (1, 3):
        raise BadOrder(f"Steiner triple systems need n = 1 or 3 (mod 6) and n >= 7, got {n}")
    blocks = _bose(n) if n % 6 == 3 else _skolem(n)
    return LinearKGraph(3, n, blocks)


# -- random linear graphs ----------------------------------------------------------

def random_linear(n: int, k: int, rounds: int, seed: int) -> LinearKGraph:
    """Random greedy linear ``k``-graph.

    ``rounds`` times, draw a uniform ``k``-subset and keep it if it shares at
    most one vertex with every edge kept so far.
    """
    if n < k:
        raise ValueError(f"need n >= k, got n={n}, k={k}")
    rng = random.Random(seed)
    pairs: set[tuple[int, int]] = set()
    edges = []
    population = range(n)
    for _ in range(rounds):
        e = sorted(rng.sample(population, k))
        ps = list(combinations(e, 2))
        if any(p in pairs for p in ps):
            continue
        pairs.update(ps)
        edges.append(e)
    return LinearKGraph(k, n, edges)


# -- patterns --------------------------------------------------------------------

PATTERN_KINDS = ("path", "cycle", "star", "tree", "forest", "subdivision", "matching")


@dataclass(frozen=True)
class PatternGraph:
    """A pattern hypergraph with its designated vertices.

    ``ends`` holds the two end vertices of a path, ``centers`` the center
    vertices of a subdivision (or the star center), ``link_vertices`` the
    vertices x_1..x_{l+1} (path) or x_0..x_{l-1} (cycle) in order, and
    ``branches`` the edge-id sequence of each subdivided base edge.
    """

    graph: LinearKGraph
    kind: str
    ends: tuple[int, ...] = ()
    centers: tuple[int, ...] = ()
    link_vertices: tuple[int, ...] = ()
    branches: tuple[tuple[int, ...], ...] = ()
    base_edges: tuple[tuple[int, int], ...] = field(default=())

    @property
    def k(self) -> int:
        return self.graph.k

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def edges(self):
        return self.graph.edges


class _Builder:
    def __init__(self, k):
        self.k = k
        self.n = 0
        self.edges = []

    def new(self, count=1):
        start = self.n
        self.n += count
        return list(range(start, start + count))

    def chain(self, start, length, end=None):
        """Append a linear path of ``length`` edges from ``start``; returns
        the link vertices and edge ids."""
        links = [start]
        eids = []
        for i in range(length):
            privates = self.new(self.k - 2)
            nxt = end if (end is not None and i == length - 1) else self.new()[0]
            eids.append(len(self.edges))
            self.edges.append([links[-1], *privates, nxt])
            links.append(nxt)
        return links, eids

    def graph(self):
        return LinearKGraph(self.k, self.n, self.edges)


def path_pattern(length: int, k: int) -> PatternGraph:
    if length < 1:
        raise BadLength("a path needs at least one edge")
    b = _Builder(k)
    start = b.new()[0]
    links, eids = b.chain(start, length)
    return PatternGraph(b.graph(), "path", ends=(links[0], links[-1]), link_vertices=tuple(links),
                        branches=(tuple(eids),))


def cycle_pattern(length: int, k: int) -> PatternGraph:
    if length < 3:
        raise BadLength("a linear cycle needs at least 3 edges")
    b = _Builder(k)
    start = b.new()[0]
    links, eids = b.chain(start, length, end=start)
    return PatternGraph(b.graph(), "cycle", link_vertices=tuple(links[:-1]), branches=(tuple(eids),))


def star_pattern(length: int, k: int) -> PatternGraph:
    if length < 1:
        raise BadLength("a star needs at least one edge")
    b = _Builder(k)
    center = b.new()[0]
    for _ in range(length):
        b.edges.append([center, *b.new(k - 1)])
    return PatternGraph(b.graph(), "star", centers=(center,))


def matching_pattern(count: int, k: int) -> PatternGraph:
    if count < 0:
        raise BadLength("negative matching size")
    b = _Builder(k)
    for _ in range(count):
        b.edges.append(b.new(k))
    return PatternGraph(b.graph(), "matching")


def random_tree_pattern(edges: int, k: int, seed: int) -> PatternGraph:
    """Random linear hypertree: each new edge hangs ``k-1`` fresh vertices
    off a uniformly chosen existing vertex."""
    if edges < 1:
        raise BadLength("a tree pattern needs at least one edge")
    rng = random.Random(seed)
    b = _Builder(k)
    b.edges.append(b.new(k))
    for _ in range(edges - 1):
        anchor = rng.randrange(b.n)
        b.edges.append([anchor, *b.new(k - 1)])
    return PatternGraph(b.graph(), "tree")


def subdivision_pattern(base_edges: Sequence[tuple[int, int]], k: int, lengths,
                        base_vertices: int | None = None) -> PatternGraph:
    """k-uniform subdivision of a 2-graph: every base edge ``uv`` becomes a
    linear path of the given length (>= 2) between centers ``u`` and ``v``."""
    base_edges = [tuple(e) for e in base_edges]
    nv = base_vertices if base_vertices is not None else 1 + max((max(e) for e in base_edges), default=-1)
    if isinstance(lengths, int):
        lengths = [lengths] * len(base_edges)
    if len(lengths) != len(base_edges):
        raise BadLength("one path length per base edge is required")
    if any(L < 2 for L in lengths):
        raise BadLength("subdivision paths must have length at least two")
    if len({frozenset(e) for e in base_edges}) != len(base_edges) or any(u == v for u, v in base_edges):
        raise BadLength("the base graph must be simple")
    b = _Builder(k)
    centers = b.new(nv)
    branches = []
    for (u, v), L in zip(base_edges, lengths):
        _, eids = b.chain(centers[u], L, end=centers[v])
        branches.append(tuple(eids))
    return PatternGraph(b.graph(), "subdivision", centers=tuple(centers), branches=tuple(branches),
                        base_edges=tuple(base_edges))


def make_pattern(kind: str, k: int, **params) -> PatternGraph:
    """Dispatch to the pattern constructors by name.

    ``path``/``cycle``/``star`` take ``length``, ``matching`` takes ``count``,
    ``random_tree`` (or ``tree``) takes ``edges`` and ``seed``, and
    ``subdivision`` takes ``base`` (edge list), ``lengths`` and optionally
    ``base_vertices``.
    """
    if kind == "path":
        return path_pattern(params["length"], k)
    if kind == "cycle":
        return cycle_pattern(params["length"], k)
    if kind == "star":
        return star_pattern(params["length"], k)
    if kind == "matching":
        return matching_pattern(params["count"], k)
    if kind in ("random_tree", "tree"):
        return random_tree_pattern(params["edges"], k, params.get("seed", 0))
    if kind == "subdivision":
        return subdivision_pattern(params["base"], k, params.get("lengths", 2), params.get("base_vertices"))
    raise ValueError(f"unknown pattern kind {kind!r}")


def as_pattern(G: LinearKGraph | PatternGraph, kind: str = "forest") -> PatternGraph:
    return G if isinstance(G, PatternGraph) else PatternGraph(G, kind)
