"""Linear hyperforests: validation, search orders, leaf edges and the
decomposition into edge-disjoint semi-bare paths."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import BadLength, NotAForest, NotATree
from .generators import PatternGraph, as_pattern
from .hypergraph import LinearKGraph


def _graph(T) -> LinearKGraph:
    return T.graph if isinstance(T, PatternGraph) else T


def forest_components(T: PatternGraph | LinearKGraph) -> list[tuple[list[int], list[int]]]:
    """Split a linear hyperforest into ``(vertices, edge ids)`` per component.

    Raises :class:`NotAForest` when some component is not a hypertree, that
    is when ``|V| != e(k-1) + 1`` for a component with ``e`` edges.
    """
    G = _graph(T)
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        verts, eids = [s], set()
        stack = [s]
        while stack:
            v = stack.pop()
            for e in G.edges_of(v):
                if e in eids:
                    continue
                eids.add(e)
                for w in G.edges[e]:
                    if not seen[w]:
                        seen[w] = True
                        verts.append(w)
                        stack.append(w)
        if len(verts) != len(eids) * (G.k - 1) + 1:
            raise NotAForest(f"component of vertex {s} has a cycle")
        comps.append((sorted(verts), sorted(eids)))
    return comps


def is_forest(T) -> bool:
    try:
        forest_components(T)
    except NotAForest:
        return False
    return True


def check_tree(T) -> None:
    """Raise :class:`NotATree` unless ``T`` is a single linear hypertree."""
    G = _graph(T)
    try:
        comps = forest_components(G)
    except NotAForest as exc:
        raise NotATree(str(exc)) from exc
    if len(comps) != 1 or G.m == 0:
        raise NotATree(f"expected one component with edges, found {len(comps)} components")


def is_leaf_edge(G: LinearKGraph, e: int) -> bool:
    return sum(G.degree(v) > 1 for v in G.edges[e]) <= 1


def leaf_edge_count(T) -> int:
    """Number of edges in which all but at most one vertex has degree one."""
    G = _graph(T)
    forest_components(G)
    return sum(is_leaf_edge(G, e) for e in range(G.m))


@dataclass(frozen=True)
class TreePattern:
    """A hypertree with a breadth-first edge order from ``root``.

    ``attach[j]`` is the vertex that ``order[j]`` shares with the earlier
    edges (the root for the edges through it).
    """

    tree: PatternGraph
    root: int
    order: tuple[int, ...]
    attach: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.order)

    @property
    def t(self) -> int:
        return self.tree.n

    def is_valid_order(self) -> bool:
        G = self.tree.graph
        placed = {self.root}
        for e, a in zip(self.order, self.attach):
            if set(G.edges[e]) & placed != {a}:
                return False
            placed.update(G.edges[e])
        return len(self.order) == G.m and len(set(self.order)) == G.m


def bfs_edge_order(T: PatternGraph | LinearKGraph, root: int = 0) -> TreePattern:
    """Edges through ``root`` first, then breadth-first; ties by edge id."""
    T = as_pattern(T, "tree")
    G = T.graph
    check_tree(G)
    if not 0 <= root < G.n:
        raise NotATree(f"root {root} is not a vertex of the tree")
    order, attach = [], []
    placed = set()
    queue = deque([root])
    reached = {root}
    while queue:
        v = queue.popleft()
        for e in sorted(G.edges_of(v)):
            if e in placed:
                continue
            placed.add(e)
            order.append(e)
            attach.append(v)
            for w in G.edges[e]:
                if w not in reached:
                    reached.add(w)
                    queue.append(w)
    tp = TreePattern(T, root, tuple(order), tuple(attach))
    if not tp.is_valid_order():
        raise NotATree("search order does not extend one vertex at a time")
    return tp


@dataclass(frozen=True)
class SemiBareDecomposition:
    """Edge-disjoint semi-bare paths of length ``m + 1``.

    Each path is a tuple of edge ids in path order.  ``leaf_edges`` is the
    number of leaf edges of the forest and ``remainder_edges`` the number of
    edges outside every path.
    """

    paths: tuple[tuple[int, ...], ...]
    m: int
    leaf_edges: int
    total_edges: int

    @property
    def remainder_edges(self) -> int:
        return self.total_edges - sum(len(p) for p in self.paths)

    @property
    def bound(self) -> float:
        return 6 * self.m * self.leaf_edges + 2 * self.total_edges / (self.m + 1)

    def within_bound(self) -> bool:
        # exact comparison: remainder*(m+1) <= 6 m l (m+1) + 2 e
        return self.remainder_edges * (self.m + 1) <= 6 * self.m * self.leaf_edges * (self.m + 1) + 2 * self.total_edges


def path_links(G: LinearKGraph, path) -> list[int]:
    """Link vertices ``x_2..x_L`` shared by consecutive edges of ``path``."""
    links = []
    for e, f in zip(path, path[1:]):
        common = set(G.edges[e]) & set(G.edges[f])
        if len(common) != 1:
            raise ValueError(f"edges {e} and {f} do not share exactly one vertex")
        links.append(common.pop())
    return links


def is_linear_path(G: LinearKGraph, path) -> bool:
    sets = [set(G.edges[e]) for e in path]
    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            inter = len(sets[i] & sets[j])
            if inter != (1 if j == i + 1 else 0):
                return False
    return len(set(path)) == len(path)


def is_semi_bare(G: LinearKGraph, path) -> bool:
    """Every vertex outside the two end sets has all its edges in the path."""
    if not path or not is_linear_path(G, path):
        return False
    if len(path) == 1:
        return True
    links = path_links(G, path)
    first = set(G.edges[path[0]]) - {links[0]}
    last = set(G.edges[path[-1]]) - {links[-1]}
    inside = set(path)
    for e in path:
        for v in G.edges[e]:
            if v in first or v in last:
                continue
            if not set(G.edges_of(v)) <= inside:
                return False
    return True


def semi_bare_decomposition(T: PatternGraph | LinearKGraph, m: int) -> SemiBareDecomposition:
    """Greedily cut semi-bare paths of length ``m + 1`` out of a forest.

    A semi-bare path consists of two arbitrary end edges joined through
    degree-2 vertices by *chain edges*, edges whose vertices all have
    degree one except for exactly two of degree two.  Maximal runs of such
    edges are found once and cut into consecutive pieces, so every piece is
    semi-bare in the original forest and no run keeps ``m + 1`` consecutive
    unused edges.  Runs are processed in a fixed order, so the result
    is deterministic.
    """
    if m < 2:
        raise BadLength("m must be at least 2")
    G = _graph(T)
    forest_components(G)
    L = m + 1
    deg = G.degrees()

    def links(e):
        return [v for v in G.edges[e] if deg[v] == 2]

    def is_chain(e):
        ls = links(e)
        return len(ls) == 2 and all(deg[v] <= 2 for v in G.edges[e]) and sum(deg[v] == 1 for v in G.edges[e]) == G.k - 2

    def other_edge(v, e):
        a, b = G.edges_of(v)
        return b if a == e else a

    runs = []
    seen_runs = set()
    for start in range(G.m):
        if is_chain(start):
            continue
        for x in sorted(links(start)):
            run = [start]
            cur, via = other_edge(x, start), x
            while True:
                run.append(cur)
                if not is_chain(cur):
                    break
                nxt = next(v for v in links(cur) if v != via)
                cur, via = other_edge(nxt, cur), nxt
            key = min(tuple(run), tuple(reversed(run)))
            if key not in seen_runs:
                seen_runs.add(key)
                runs.append(key)
    runs.sort()
    # an end edge can close two runs, so windows skip edges already taken
    paths = []
    used: set[int] = set()
    for run in runs:
        window: list[int] = []
        for e in run:
            if e in used:
                window = []
                continue
            window.append(e)
            if len(window) == L:
                paths.append(tuple(window))
                used.update(window)
                window = []
    leaves = sum(is_leaf_edge(G, e) for e in range(G.m))
    return SemiBareDecomposition(tuple(paths), m, leaves, G.m)
