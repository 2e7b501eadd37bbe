"""Exhaustive ground truth for small instances.

Nothing here is clever: bitmask branch and bound for matchings, vertex-by-
vertex backtracking for pattern embeddings, and plain enumeration of
length-2 paths.  These results back the frozen values in the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .generators import PatternGraph, as_pattern
from .hypergraph import LinearKGraph, MultiKGraph
from .nibble import Matching


@dataclass(frozen=True)
class SearchBudget:
    nodes: int = 2_000_000
    seconds: float | None = None  # advisory only

    def __post_init__(self):
        if self.nodes < 1:
            raise ValueError("node limit must be at least 1")


class MatchingResult(NamedTuple):
    size: int
    witness: Matching
    exact: bool


def max_matching_exact(H: LinearKGraph | MultiKGraph, budget: SearchBudget | None = None) -> MatchingResult:
    """Maximum matching by branch and bound on the lowest undecided vertex.

    The vertex is either left uncovered or covered by one of its edges that
    fits.  A branch is cut when the current size plus the number of
    vertices still coverable divided by ``k`` cannot beat the incumbent.
    ``exact`` is false when the node budget ran out first.
    """
    budget = budget or SearchBudget()
    k, n = H.k, H.n
    masks = [sum(1 << v for v in e) for e in H.edges]
    through = [list(H.edges_of(v)) for v in range(n)]
    best: list[int] = []
    nodes = 0
    exhausted = False

    def coverable(avail):
        cov = 0
        a = avail
        while a:
            low = a & -a
            v = low.bit_length() - 1
            a ^= low
            if cov >> v & 1:
                continue
            for i in through[v]:
                if masks[i] & avail == masks[i]:
                    cov |= masks[i]
        return cov

    def search(avail, chosen):
        nonlocal best, nodes, exhausted
        nodes += 1
        if nodes > budget.nodes:
            exhausted = True
            return
        if len(chosen) > len(best):
            best = list(chosen)
        cov = coverable(avail)
        if len(chosen) + bin(cov).count("1") // k <= len(best):
            return
        # restrict to coverable vertices; the lowest one is branched on
        avail = cov
        low = avail & -avail
        v = low.bit_length() - 1
        for i in through[v]:
            if masks[i] & avail == masks[i]:
                chosen.append(i)
                search(avail & ~masks[i], chosen)
                chosen.pop()
                if exhausted:
                    return
        search(avail & ~low, chosen)

    if n and H.edges:
        search((1 << n) - 1, [])
    chosen = sorted(best)
    witness = Matching(tuple(chosen), tuple(H.edges[e] for e in chosen), n, {"nodes": nodes})
    return MatchingResult(len(chosen), witness, not exhausted)


class EmbeddingSearch(NamedTuple):
    status: str  # "found", "not-found" or "unknown"
    vertex_map: tuple[int, ...] | None
    edge_map: tuple[int, ...] | None
    nodes: int


def _search_order(F: LinearKGraph) -> list[int]:
    """Pattern vertices so that each one touches earlier ones when possible."""
    order, seen = [], set()
    for s in sorted(range(F.n), key=lambda v: -F.degree(v)):
        if s in seen:
            continue
        queue = [s]
        seen.add(s)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for e in F.edges_of(v):
                for w in F.edges[e]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
    return order


def find_embedding_exact(H: LinearKGraph, F: PatternGraph | LinearKGraph,
                         budget: SearchBudget | None = None) -> EmbeddingSearch:
    """Backtracking search for ``F`` as a (not necessarily induced) subgraph.

    Pattern vertices are mapped one at a time; a pattern edge whose vertices
    are all mapped must be a host edge, and the mapped part of any pattern
    edge must lie inside a single host edge (linearity makes it unique once
    two vertices are placed).
    """
    budget = budget or SearchBudget()
    P = as_pattern(F).graph
    if P.n > H.n or P.k != H.k:
        return EmbeddingSearch("not-found", None, None, 0)
    order = _search_order(P)
    img = [-1] * P.n
    used = [False] * H.n
    nodes = 0
    exhausted = False
    host_sets = [frozenset(e) for e in H.edges]

    def consistent(x):
        for e in P.edges_of(x):
            placed = [img[w] for w in P.edges[e] if img[w] >= 0]
            if len(placed) < 2:
                continue
            h = H.edge_of_pair(placed[0], placed[1])
            if h is None or not host_sets[h].issuperset(placed):
                return False
        return True

    def candidates(x):
        anchors = {img[w] for e in P.edges_of(x) for w in P.edges[e] if img[w] >= 0}
        if not anchors:
            return [v for v in range(H.n) if not used[v]]
        a = min(anchors)
        return sorted({w for h in H.edges_of(a) for w in H.edges[h] if not used[w]})

    def search(i):
        nonlocal nodes, exhausted
        if i == len(order):
            return True
        nodes += 1
        if nodes > budget.nodes:
            exhausted = True
            return False
        x = order[i]
        for v in candidates(x):
            img[x] = v
            used[v] = True
            if consistent(x) and search(i + 1):
                return True
            used[v] = False
            img[x] = -1
            if exhausted:
                return False
        return False

    if search(0):
        emap = tuple(H.edge_of_pair(img[e[0]], img[e[1]]) for e in P.edges)
        return EmbeddingSearch("found", tuple(img), emap, nodes)
    return EmbeddingSearch("unknown" if exhausted else "not-found", None, None, nodes)


class L2Paths(NamedTuple):
    total: int
    max_internally_disjoint: int
    exact: bool
    paths: tuple[tuple[int, int], ...]  # (e1, e2) host edge ids


def l2_paths(H: LinearKGraph, u: int, v: int) -> list[tuple[int, int, frozenset[int]]]:
    """All ``(e1, e2, internals)`` with ``u in e1 - e2``, ``v in e2 - e1`` and
    ``e1 & e2`` a single vertex other than ``u`` and ``v``."""
    H._check_vertex(u)
    H._check_vertex(v)
    if u == v:
        raise ValueError("the two end vertices must differ")
    out = []
    for e1 in H.edges_of(u):
        s1 = H.edges[e1]
        if v in s1:
            continue
        for c in s1:
            if c == u:
                continue
            e2 = H.edge_of_pair(c, v)
            if e2 is None or u in H.edges[e2]:
                continue
            inner = (set(s1) | set(H.edges[e2])) - {u, v}
            out.append((e1, e2, frozenset(inner)))
    return out


def _max_disjoint(sets: list[frozenset[int]], limit: int) -> tuple[int, bool]:
    best = 0
    nodes = 0
    order = sorted(range(len(sets)), key=lambda i: min(sets[i]))

    def go(idx, used, count):
        nonlocal best, nodes
        nodes += 1
        if nodes > limit:
            return False
        best = max(best, count)
        if count + (len(order) - idx) <= best:
            return True
        for j in range(idx, len(order)):
            s = sets[order[j]]
            if not (s & used):
                if not go(j + 1, used | s, count + 1):
                    return False
        return True

    finished = go(0, frozenset(), 0)
    return best, finished


def count_l2_paths(H: LinearKGraph, u: int, v: int, budget: SearchBudget | None = None) -> L2Paths:
    """Total number of length-2 ``u``--``v`` paths and the largest family with
    pairwise disjoint internal vertices (exact set packing within budget,
    otherwise a greedy lower bound with ``exact=False``)."""
    budget = budget or SearchBudget()
    paths = l2_paths(H, u, v)
    sets = [p[2] for p in paths]
    best, exact = _max_disjoint(sets, budget.nodes)
    if not exact:
        used: set[int] = set()
        greedy = 0
        for s in sets:
            if not used & s:
                used |= s
                greedy += 1
        best = max(best, greedy)
    return L2Paths(len(paths), best, exact, tuple((a, b) for a, b, _ in paths))
