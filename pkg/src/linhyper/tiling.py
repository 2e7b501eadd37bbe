"""Almost-spanning tilings by vertex-disjoint copies of a hypertree.

The host is first turned into a regular multigraph through a capped perfect
fractional matching.  The auxiliary hypergraph whose edges are the copies of
``T`` is far too large to build, so the nibble runs on a sampler that grows
random copies edge by edge from a root.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from .errors import InfeasibleHost
from .fractional import FarkasCertificate, regularize as _regularize, solve_pfm
from .generators import PatternGraph, as_pattern
from .hypergraph import LinearKGraph, MultiKGraph, as_multigraph
from .nibble import NibbleParams, nibble_matching
from .trees import TreePattern, bfs_edge_order


@dataclass(frozen=True)
class LabeledCopy:
    """``vertex_map[x]`` is the host image of tree vertex ``x`` and
    ``edge_map[e]`` the host edge id carrying tree edge ``e``."""

    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertex_map))


def verify_copy(H: LinearKGraph | MultiKGraph, T: PatternGraph | LinearKGraph, c: LabeledCopy) -> bool:
    T = as_pattern(T)
    if len(c.vertex_map) != T.n or len(set(c.vertex_map)) != T.n:
        return False
    if len(c.edge_map) != T.graph.m or len(set(c.edge_map)) != T.graph.m:
        return False
    edges = H.edges
    for e, h in enumerate(c.edge_map):
        if not 0 <= h < len(edges):
            return False
        if sorted(c.vertex_map[x] for x in T.edges[e]) != list(edges[h]):
            return False
    return all(0 <= v < H.n for v in c.vertex_map)


def verify_tiling(H, T, copies: Sequence[LabeledCopy]) -> bool:
    """Every copy is valid and the copies are pairwise vertex-disjoint."""
    seen: set[int] = set()
    for c in copies:
        if not verify_copy(H, T, c):
            return False
        if seen & set(c.vertex_map):
            return False
        seen.update(c.vertex_map)
    return True


class _Incidence:
    """Per-vertex candidate lists: (edge id, other vertices, multiplicity)."""

    def __init__(self, F: MultiKGraph):
        self.F = F
        self.around = []
        for v in range(F.n):
            rows = []
            for e in F.edges_of(v):
                rows.append((e, tuple(w for w in F.edges[e] if w != v), F.multiplicity[e]))
            self.around.append(rows)

    def candidates(self, v, blocked):
        return [(e, rest, mu) for e, rest, mu in self.around[v] if not any(blocked[w] for w in rest)]


def _pick(rng, cands):
    total = sum(mu for _, _, mu in cands)
    r = rng.random() * total
    for c in cands:
        r -= c[2]
        if r < 0:
            return c, total
    return cands[-1], total


def _grow(inc: _Incidence, tp: TreePattern, root_image: int, forbidden, rng, count: bool = False):
    """Extend a copy along the search order; returns (copy or None, weight)."""
    G = tp.tree.graph
    k = G.k
    vmap = [-1] * G.n
    emap = [-1] * G.m
    vmap[tp.root] = root_image
    blocked = np.array(forbidden, dtype=bool, copy=True) if forbidden is not None else np.zeros(inc.F.n, dtype=bool)
    blocked[root_image] = True
    weight = 1
    for e, a in zip(tp.order, tp.attach):
        cands = inc.candidates(vmap[a], blocked)
        if not cands:
            return None, 0
        (h, rest, _), total = _pick(rng, cands)
        weight *= total * factorial(k - 1)
        fresh = [x for x in G.edges[e] if x != a]
        for x, w in zip(fresh, rng.permutation(list(rest))):
            vmap[x] = int(w)
            blocked[w] = True
        emap[e] = h
    return LabeledCopy(tuple(vmap), tuple(emap)), weight


def sample_tree_copy(F: LinearKGraph | MultiKGraph, tp: TreePattern, root_image: int,
                     forbidden: Sequence[bool] | set[int] | None = None, seed=0) -> LabeledCopy | None:
    """Random copy of ``tp.tree`` with the root on ``root_image``.

    Each step takes a multiplicity-weighted host edge through the image of
    the attachment vertex avoiding everything used or forbidden, and labels
    its new vertices in random order.  ``None`` means some step had no
    candidate.
    """
    F = as_multigraph(F)
    forbidden = _as_mask(F.n, forbidden)
    if forbidden[root_image]:
        raise ValueError(f"root image {root_image} is forbidden")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    copy, _ = _grow(_Incidence(F), tp, root_image, forbidden, rng)
    return copy


def _as_mask(n, forbidden):
    if forbidden is None:
        return np.zeros(n, dtype=bool)
    if isinstance(forbidden, (set, frozenset)):
        mask = np.zeros(n, dtype=bool)
        mask[list(forbidden)] = True
        return mask
    return np.asarray(forbidden, dtype=bool)


def estimate_copy_counts(F: LinearKGraph | MultiKGraph, tp: TreePattern, u: int, samples: int,
                         seed=0) -> tuple[Fraction, Fraction]:
    """Unbiased estimate of the number of labeled copies with the root on ``u``.

    Each sample multiplies, over the extension steps, the total candidate
    weight times ``(k-1)!``; failed samples contribute zero.  Returns the
    mean estimate and the fraction of samples that completed.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    F = as_multigraph(F)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    inc = _Incidence(F)
    total, ok = 0, 0
    for _ in range(samples):
        copy, w = _grow(inc, tp, u, None, rng)
        if copy is not None:
            total += w
            ok += 1
    return Fraction(total, samples), Fraction(ok, samples)


class TreeCopySampler:
    """The auxiliary copy hypergraph of ``tp`` in ``F``, seen through samples."""

    def __init__(self, F: LinearKGraph | MultiKGraph, tp: TreePattern):
        self.F = as_multigraph(F)
        self.tp = tp
        self.n = self.F.n
        self.size = tp.t
        self._inc = _Incidence(self.F)

    def sample(self, rng, forbidden, root=None):
        if root is None:
            free = np.flatnonzero(~np.asarray(forbidden, dtype=bool))
            if not len(free):
                return None
            root = int(rng.choice(free))
        copy, _ = _grow(self._inc, self.tp, root, forbidden, rng)
        return copy

    def degree_estimate(self, v, rng=None, samples=100):
        rng = rng if rng is not None else np.random.default_rng(0)
        est, _ = estimate_copy_counts(self.F, self.tp, v, samples, rng)
        return float(est)


@dataclass(frozen=True)
class TilingResult:
    copies: tuple[LabeledCopy, ...]
    n: int
    t: int
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def covered(self) -> int:
        return len(self.copies) * self.t


def tree_tiling(H: LinearKGraph, T: PatternGraph | LinearKGraph, epsilon=Fraction(1, 10), cap=None,
                params: NibbleParams | None = None, root: int = 0, regularize: bool = True,
                D_limit: int | None = None) -> TilingResult:
    """Vertex-disjoint copies of ``T`` covering most of ``H``.

    With ``regularize`` the host is replaced by the regular multigraph of a
    (capped) perfect fractional matching, and copies are drawn from its
    support with multiplicities as weights; otherwise the host is used
    with unit weights.  ``epsilon`` is only recorded: coverage is measured,
    never promised.  Raises :class:`InfeasibleHost` with the Farkas
    certificate when the fractional matching does not exist.
    """
    T = as_pattern(T, "tree")
    params = params or NibbleParams()
    tp = bfs_edge_order(T, root)
    diag: dict = {"epsilon": Fraction(epsilon), "cap": cap, "regularized": regularize}
    if H.m == 0:
        cert = solve_pfm(H, cap)
        raise InfeasibleHost(cert)
    if regularize:
        res = solve_pfm(H, cap)
        if isinstance(res, FarkasCertificate):
            raise InfeasibleHost(res)
        reg = _regularize(H, res, D_limit, cap)
        F, edge_map = reg.F, reg.edge_map
        diag["D"] = reg.D
    else:
        F, edge_map = as_multigraph(H), tuple(range(H.m))
    sampler = TreeCopySampler(F, tp)
    M = nibble_matching(sampler, params)
    copies = tuple(LabeledCopy(c.vertex_map, tuple(edge_map[h] for h in c.edge_map)) for c in M.edges)
    if not verify_tiling(H, T, copies):
        raise AssertionError("tiling failed its own verification")
    diag.update(M.stats)
    return TilingResult(copies, H.n, T.n, diag)
