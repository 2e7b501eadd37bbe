"""Linear k-uniform hypergraphs and multigraphs over them.

Vertices are dense integers ``0..n-1``; edges are sorted ``k``-tuples with
ids given by their position in :attr:`LinearKGraph.edges`.  Every unordered
vertex pair is stored in a pair index pointing at the unique edge that
contains it, which is what makes codegree and neighbourhood queries cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import BadEdge, BadVertex, LinearityViolation


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class LinearKGraph:
    """An immutable simple linear ``k``-graph.

    Use :func:`build_linear_graph` to construct one from untrusted input.
    """

    __slots__ = ("k", "n", "edges", "pair_index", "_incidence", "_neighbors")

    def __init__(self, k: int, n: int, edges: Sequence[Sequence[int]]):
        if k < 2:
            raise BadEdge(f"uniformity must be at least 2, got {k}")
        if n < 0:
            raise BadVertex(f"vertex count must be non-negative, got {n}")
        self.k = k
        self.n = n
        normalized = []
        seen = {}
        pair_index: dict[tuple[int, int], int] = {}
        incidence: list[list[int]] = [[] for _ in range(n)]
        for eid, raw in enumerate(edges):
            e = tuple(sorted(int(x) for x in raw))
            if len(e) != k:
                raise BadEdge(f"edge {eid} {tuple(raw)} has {len(e)} vertices, expected {k}")
            if len(set(e)) != k:
                raise BadEdge(f"edge {eid} {tuple(raw)} repeats a vertex")
            if e[0] < 0 or e[-1] >= n:
                raise BadEdge(f"edge {eid} {e} has a vertex outside [0, {n})")
            if e in seen:
                raise BadEdge(f"edge {eid} duplicates edge {seen[e]}: {e}")
            seen[e] = eid
            for p in combinations(e, 2):
                other = pair_index.get(p)
                if other is not None:
                    raise LinearityViolation(p, (other, eid))
                pair_index[p] = eid
            for v in e:
                incidence[v].append(eid)
            normalized.append(e)
        self.edges: tuple[tuple[int, ...], ...] = tuple(normalized)
        self.pair_index = pair_index
        self._incidence = tuple(tuple(x) for x in incidence)
        self._neighbors = None

    # -- basic queries -----------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"LinearKGraph(k={self.k}, n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearKGraph):
            return NotImplemented
        return (self.k, self.n, self.edges) == (other.k, other.n, other.edges)

    def __hash__(self) -> int:
        return hash((self.k, self.n, self.edges))

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise BadVertex(f"vertex {v} outside [0, {self.n})")

    def edges_of(self, v: int) -> tuple[int, ...]:
        """Ids of the edges containing ``v``."""
        self._check_vertex(v)
        return self._incidence[v]

    def degree(self, v: int) -> int:
        return len(self.edges_of(v))

    def degrees(self) -> list[int]:
        return [len(inc) for inc in self._incidence]

    def neighbors(self, v: int) -> frozenset[int]:
        """N_H(v): vertices sharing an edge with ``v``."""
        self._check_vertex(v)
        if self._neighbors is None:
            nbrs = []
            for inc_v, u in zip(self._incidence, range(self.n)):
                nbrs.append(frozenset(w for e in inc_v for w in self.edges[e] if w != u))
            self._neighbors = tuple(nbrs)
        return self._neighbors[v]

    def edge_of_pair(self, u: int, v: int) -> int | None:
        """The id of the unique edge containing both vertices, if any."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise BadVertex("a pair needs two distinct vertices")
        return self.pair_index.get(_pair(u, v))

    def codegree(self, u: int, v: int) -> int:
        return 0 if self.edge_of_pair(u, v) is None else 1

    def degree_into(self, v: int, X: Iterable[int]) -> int:
        """d_H(v; X): edges at ``v`` whose other vertices all lie in ``X``."""
        X = set(X)
        return sum(1 for e in self.edges_of(v) if all(w == v or w in X for w in self.edges[e]))

    def min_degree(self) -> int:
        return min((len(inc) for inc in self._incidence), default=0)

    def max_degree(self) -> int:
        return max((len(inc) for inc in self._incidence), default=0)

    def is_regular(self) -> bool:
        return self.n == 0 or self.min_degree() == self.max_degree()


def build_linear_graph(k: int, n: int, edges: Iterable[Iterable[int]]) -> LinearKGraph:
    """Validate ``edges`` and return the linear ``k``-graph they form.

    Raises :class:`BadEdge` for wrong arity, repeated or out-of-range
    vertices and duplicated edges, and :class:`LinearityViolation` when two
    edges share a pair of vertices.
    """
    return LinearKGraph(k, n, [tuple(e) for e in edges])


class MultiKGraph:
    """A multigraph whose simplification is ``base``.

    ``multiplicity[i]`` is the number of parallel copies of ``base.edges[i]``
    and is always positive.
    """

    __slots__ = ("base", "multiplicity", "_degrees")

    def __init__(self, base: LinearKGraph, multiplicity: Sequence[int] | Mapping[int, int] | None = None):
        if multiplicity is None:
            mult = [1] * base.m
        elif isinstance(multiplicity, Mapping):
            mult = [int(multiplicity.get(e, 0)) for e in range(base.m)]
        else:
            mult = [int(x) for x in multiplicity]
        if len(mult) != base.m:
            raise BadEdge(f"{len(mult)} multiplicities for {base.m} edges")
        for eid, mu in enumerate(mult):
            if mu < 1:
                raise BadEdge(f"edge {eid} has non-positive multiplicity {mu}")
        self.base = base
        self.multiplicity: tuple[int, ...] = tuple(mult)
        self._degrees = None

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def edges(self):
        return self.base.edges

    def __repr__(self) -> str:
        return f"MultiKGraph(k={self.k}, n={self.n}, m={self.base.m}, total={sum(self.multiplicity)})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiKGraph):
            return NotImplemented
        return self.base == other.base and self.multiplicity == other.multiplicity

    def __hash__(self) -> int:
        return hash((self.base, self.multiplicity))

    def edges_of(self, v: int) -> tuple[int, ...]:
        return self.base.edges_of(v)

    def degrees(self) -> list[int]:
        if self._degrees is None:
            deg = [0] * self.n
            for e, mu in zip(self.base.edges, self.multiplicity):
                for v in e:
                    deg[v] += mu
            self._degrees = deg
        return list(self._degrees)

    def degree(self, v: int) -> int:
        self.base._check_vertex(v)
        self.degrees()
        return self._degrees[v]

    def codegree(self, u: int, v: int) -> int:
        e = self.base.edge_of_pair(u, v)
        return 0 if e is None else self.multiplicity[e]

    def max_codegree(self) -> int:
        # linear base: each pair sits in at most one distinct edge
        return max(self.multiplicity, default=0)


def as_multigraph(H: LinearKGraph | MultiKGraph) -> MultiKGraph:
    return H if isinstance(H, MultiKGraph) else MultiKGraph(H)


@dataclass(frozen=True)
class DegreeProfile:
    per_vertex: tuple[int, ...]
    min: int
    max: int
    max_codegree: int


def degree_profile(H: LinearKGraph | MultiKGraph) -> DegreeProfile:
    """Degrees, δ, Δ and Δ₂ of a graph; multiplicities count for multigraphs."""
    if isinstance(H, MultiKGraph):
        degs = tuple(H.degrees())
        cod = H.max_codegree()
    else:
        degs = tuple(H.degrees())
        cod = 1 if H.m else 0
    return DegreeProfile(degs, min(degs, default=0), max(degs, default=0), cod)


def codegree(H: LinearKGraph | MultiKGraph, u: int, v: int) -> int:
    """Number of edges (with multiplicity) containing both ``u`` and ``v``."""
    return H.codegree(u, v)


@dataclass(frozen=True)
class InducedGraph:
    """Result of :func:`induced_remove`.

    ``old_to_new`` maps surviving original vertex ids to ids in ``graph``;
    ``new_to_old`` is its inverse and ``edge_to_old`` maps edge ids back.
    """

    graph: LinearKGraph
    old_to_new: Mapping[int, int]
    new_to_old: tuple[int, ...]
    edge_to_old: tuple[int, ...]


def induced_remove(H: LinearKGraph, X: Iterable[int]) -> InducedGraph:
    """H minus the vertex set ``X``, re-indexed densely in the original order."""
    X = set(X)
    for x in X:
        H._check_vertex(x)
    new_to_old = tuple(v for v in range(H.n) if v not in X)
    old_to_new = {v: i for i, v in enumerate(new_to_old)}
    kept, edge_to_old = [], []
    for eid, e in enumerate(H.edges):
        if not X.intersection(e):
            kept.append([old_to_new[v] for v in e])
            edge_to_old.append(eid)
    return InducedGraph(LinearKGraph(H.k, len(new_to_old), kept), old_to_new, new_to_old, tuple(edge_to_old))


def simplify(F: MultiKGraph) -> tuple[LinearKGraph, dict[int, int]]:
    """Split a multigraph into its simplification and multiplicity map."""
    return F.base, dict(enumerate(F.multiplicity))


def reassemble(base: LinearKGraph, multiplicity: Mapping[int, int]) -> MultiKGraph:
    return MultiKGraph(base, multiplicity)


@dataclass(frozen=True)
class PseudorandomReport:
    D: int
    tau: Fraction
    delta: Fraction
    passed: bool
    worst_vertex: int | None = None
    worst_pair: tuple[int, int] | None = None
    max_codegree: int = 0
    degree_range: tuple[int, int] = (0, 0)

    def __bool__(self) -> bool:
        return self.passed

    @property
    def pass_(self) -> bool:
        return self.passed


def check_pseudorandom(F: LinearKGraph | MultiKGraph, D: int, tau, delta) -> PseudorandomReport:
    """Check whether ``F`` is (D, tau, delta)-pseudorandom, exactly.

    Every degree has to lie in ``[(1-tau)D, (1+tau)D]`` and every pair
    codegree must be at most ``delta*D``.  On failure the report names the
    vertex whose degree is furthest from ``D`` and/or a pair of maximum
    codegree.
    """
    tau, delta = Fraction(tau), Fraction(delta)
    if D < 1 or tau < 0 or delta <= 0:
        raise ValueError("need D >= 1, tau >= 0, delta > 0")
    F = as_multigraph(F)
    degs = F.degrees()
    lo, hi = (1 - tau) * D, (1 + tau) * D
    worst_vertex = None
    if degs:
        worst = max(range(len(degs)), key=lambda v: (abs(degs[v] - D), -v))
        if not lo <= degs[worst] <= hi:
            worst_vertex = worst
    cod = F.max_codegree()
    worst_pair = None
    if cod > delta * D:
        e = F.multiplicity.index(cod)
        worst_pair = tuple(F.edges[e][:2])
    return PseudorandomReport(
        D, tau, delta, worst_vertex is None and worst_pair is None,
        worst_vertex, worst_pair, cod, (min(degs, default=0), max(degs, default=0)),
    )
