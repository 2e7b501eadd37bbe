"""Almost-perfect matchings by the random nibble, plus a greedy baseline.

Two kinds of source are accepted:

* a materialized :class:`MultiKGraph`, where each round is vectorized over
  the edge array and multiplicities act as selection weights;
* an :class:`EdgeSampler`, an implicit hypergraph that can only hand out
  random edges avoiding a forbidden vertex set (used for tree copies).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Any, Protocol, Sequence, runtime_checkable

import numpy as np

from .hypergraph import LinearKGraph, MultiKGraph, as_multigraph


@dataclass(frozen=True)
class NibbleParams:
    bite: Fraction = Fraction(1, 4)
    max_rounds: int = 500
    min_degree_floor: Fraction = Fraction(1)
    greedy_finish: bool = True
    seed: int = 0
    # switching steps per vertex after the greedy sweep (0 disables it)
    polish: int = 20
    # sampler sources only: give up after this many rounds without progress
    patience: int = 3
    # sampler sources only: attempts per uncovered root in the greedy sweep
    finish_tries: int = 8

    def __post_init__(self):
        bite = Fraction(self.bite)
        if not 0 < bite < 1:
            raise ValueError(f"bite must lie in (0, 1), got {bite}")
        if self.max_rounds < 0 or self.polish < 0:
            raise ValueError("max_rounds and polish must be non-negative")
        object.__setattr__(self, "bite", bite)
        object.__setattr__(self, "min_degree_floor", Fraction(self.min_degree_floor))


def vertices_of(item) -> tuple[int, ...]:
    """Vertex set of a sampled edge: ``item.vertices`` or the item itself."""
    return tuple(getattr(item, "vertices", item))


@runtime_checkable
class EdgeSampler(Protocol):
    """An implicit hypergraph on vertices ``0..n-1``.

    ``sample`` returns a random edge (anything exposing ``vertices``) that
    avoids ``forbidden``, optionally forced through ``root``; ``None`` is a
    miss.  Each edge has ``size`` vertices.
    """

    n: int
    size: int

    def sample(self, rng: np.random.Generator, forbidden: Sequence[bool], root: int | None = None) -> Any: ...

    def degree_estimate(self, v: int, rng: np.random.Generator, samples: int = 100) -> float: ...


@dataclass(frozen=True)
class Matching:
    """Pairwise disjoint edges.  ``edges`` holds edge ids for materialized
    sources and the sampled objects for sampler sources."""

    edges: tuple
    vertex_sets: tuple[tuple[int, ...], ...]
    n: int
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def covered(self) -> frozenset[int]:
        return frozenset(v for s in self.vertex_sets for v in s)

    def __len__(self) -> int:
        return len(self.edges)

    def coverage(self) -> int:
        return sum(len(s) for s in self.vertex_sets)

    def is_disjoint(self) -> bool:
        return len(self.covered) == self.coverage()


def verify_matching(source: LinearKGraph | MultiKGraph, M: Matching, maximal: bool = False) -> bool:
    """Exact re-check against a materialized source."""
    edges = source.edges
    if len(M.edges) != len(M.vertex_sets):
        return False
    for e, s in zip(M.edges, M.vertex_sets):
        if not 0 <= e < len(edges) or tuple(edges[e]) != tuple(s):
            return False
    if not M.is_disjoint():
        return False
    if maximal:
        cov = M.covered
        return all(any(v in cov for v in e) for e in edges)
    return True


def _as_arrays(F: MultiKGraph):
    if F.base.m:
        E = np.asarray(F.edges, dtype=np.int64)
    else:
        E = np.zeros((0, F.k), dtype=np.int64)
    mu = np.asarray(F.multiplicity, dtype=np.float64)
    return E, mu


def _greedy_sweep(E, alive, free, order):
    chosen = []
    for e in order:
        if alive[e] and free[E[e]].all():
            free[E[e]] = False
            chosen.append(int(e))
    return chosen


def _polish(F: MultiKGraph, chosen: list[int], steps: int, rng) -> list[int]:
    """Switching local search that never shrinks the matching.

    A random uncovered vertex takes a random edge through it; the edge is
    added when its other vertices are free and swapped in when it collides
    with exactly one matched edge.  Swaps keep the size and move the hole
    around, which lets later additions find room.
    """
    owner = [-1] * F.n
    members: dict[int, tuple[int, ...]] = {}
    for e in chosen:
        members[e] = F.edges[e]
        for v in F.edges[e]:
            owner[v] = e
    free = [v for v in range(F.n) if owner[v] < 0 and F.edges_of(v)]
    pos = {v: i for i, v in enumerate(free)}

    def release(v):
        pos[v] = len(free)
        free.append(v)

    def claim(v):
        i = pos.pop(v)
        last = free.pop()
        if last != v:
            free[i] = last
            pos[last] = i

    for _ in range(steps):
        if not free:
            break
        x = free[int(rng.integers(len(free)))]
        through = F.edges_of(x)
        e = through[int(rng.integers(len(through)))]
        hit = {owner[v] for v in F.edges[e]} - {-1}
        if len(hit) > 1:
            continue
        if hit:
            f = hit.pop()
            del members[f]
            for v in F.edges[f]:
                owner[v] = -1
                release(v)
        members[e] = F.edges[e]
        for v in F.edges[e]:
            owner[v] = e
            if v in pos:
                claim(v)
    return list(members)


def greedy_matching(source: LinearKGraph | MultiKGraph | EdgeSampler, seed: int = 0) -> Matching:
    """Random-order greedy maximal matching (multiplicities ignored)."""
    if isinstance(source, EdgeSampler):
        return nibble_matching(source, NibbleParams(max_rounds=0, seed=seed))
    F = as_multigraph(source)
    E, _ = _as_arrays(F)
    rng = np.random.default_rng(seed)
    free = np.ones(F.n, dtype=bool)
    chosen = sorted(_greedy_sweep(E, np.ones(len(E), dtype=bool), free, rng.permutation(len(E))))
    return Matching(tuple(chosen), tuple(F.edges[e] for e in chosen), F.n, {"greedy_added": len(chosen)})


def nibble_matching(source: LinearKGraph | MultiKGraph | EdgeSampler, params: NibbleParams | None = None) -> Matching:
    """Random nibble followed (optionally) by a greedy sweep.

    Each round keeps every available edge with probability
    ``bite * mu(e) / maxdeg``, resolves collisions by a random priority
    order and removes the covered vertices.  The result is deterministic
    for a fixed seed.
    """
    params = params or NibbleParams()
    if isinstance(source, EdgeSampler):
        return _nibble_sampler(source, params)
    F = as_multigraph(source)
    rng = np.random.default_rng(params.seed)
    E, mu = _as_arrays(F)
    n = F.n
    free = np.ones(n, dtype=bool)
    alive = np.ones(len(E), dtype=bool)
    bite = float(params.bite)
    chosen: list[int] = []
    per_round: list[int] = []
    rounds = 0
    while rounds < params.max_rounds and alive.any():
        idx = np.flatnonzero(alive)
        deg = np.bincount(E[idx].ravel(), weights=np.repeat(mu[idx], F.k), minlength=n)
        maxdeg = deg.max()
        if maxdeg < params.min_degree_floor:
            break
        rounds += 1
        pick = idx[rng.random(len(idx)) < bite * mu[idx] / maxdeg]
        pick = pick[rng.permutation(len(pick))]
        got = _greedy_sweep(E, alive, free, pick)
        chosen.extend(got)
        per_round.append(len(got))
        alive &= free[E].all(axis=1)
    nibbled = len(chosen)
    polished = 0
    if params.greedy_finish:
        chosen.extend(_greedy_sweep(E, alive, free, rng.permutation(len(E))))
        before = len(chosen)
        if params.polish:
            chosen = _polish(F, chosen, params.polish * n, rng)
            free[:] = True
            free[E[chosen].ravel()] = False
            # swaps may open room for edges among freed vertices
            chosen.extend(_greedy_sweep(E, np.ones(len(E), dtype=bool), free, rng.permutation(len(E))))
        polished = len(chosen) - before
    chosen.sort()
    stats = {"rounds": rounds, "per_round": per_round, "nibbled": nibbled,
             "greedy_added": len(chosen) - nibbled - polished, "polished": polished}
    return Matching(tuple(chosen), tuple(F.edges[e] for e in chosen), n, stats)


def _nibble_sampler(S: EdgeSampler, params: NibbleParams) -> Matching:
    rng = np.random.default_rng(params.seed)
    n, t = S.n, S.size
    free = np.ones(n, dtype=bool)
    taken: list = []
    per_round: list[int] = []
    idle = rounds = 0
    bite = float(params.bite)
    while rounds < params.max_rounds and idle < params.patience:
        avail = np.flatnonzero(free)
        if len(avail) < t:
            break
        rounds += 1
        # the auxiliary graph is near-regular, so ~bite*avail/t selections
        # per round match keeping each edge with probability bite/degree
        draws = max(1, ceil(bite * len(avail) / t))
        blocked = ~free
        got = 0
        for root in rng.choice(avail, size=draws):
            item = S.sample(rng, blocked, int(root))
            if item is None:
                continue
            vs = np.fromiter(vertices_of(item), dtype=np.int64)
            if free[vs].all():
                free[vs] = False
                taken.append(item)
                got += 1
        per_round.append(got)
        idle = 0 if got else idle + 1
    nibbled = len(taken)
    if params.greedy_finish:
        for root in rng.permutation(n):
            if not free[root]:
                continue
            for _ in range(params.finish_tries):
                item = S.sample(rng, ~free, int(root))
                if item is not None:
                    free[np.fromiter(vertices_of(item), dtype=np.int64)] = False
                    taken.append(item)
                    break
    stats = {"rounds": rounds, "per_round": per_round, "nibbled": nibbled,
             "greedy_added": len(taken) - nibbled}
    return Matching(tuple(taken), tuple(vertices_of(x) for x in taken), n, stats)


class MultiGraphSampler:
    """Expose a materialized multigraph through the sampler interface."""

    def __init__(self, F: LinearKGraph | MultiKGraph):
        self.F = as_multigraph(F)
        self.n = self.F.n
        self.size = self.F.k

    def sample(self, rng, forbidden, root=None):
        F = self.F
        if root is None:
            cand = [e for e in range(F.base.m) if not any(forbidden[v] for v in F.edges[e])]
        else:
            cand = [e for e in F.edges_of(root) if not any(forbidden[v] for v in F.edges[e])]
        if not cand:
            return None
        w = np.asarray([F.multiplicity[e] for e in cand], dtype=np.float64)
        return F.edges[cand[rng.choice(len(cand), p=w / w.sum())]]

    def degree_estimate(self, v, rng=None, samples=100):
        return float(self.F.degree(v))
