"""Near-spanning embeddings of sparse patterns into dense linear hosts.

A pattern ``F`` is described by a :class:`PatternSpec`: a sequence of bare
length-2 paths whose removal leaves a hyperforest ``T``.  The pipeline

1. cuts long semi-bare paths out of ``T``; their middles ``Q_i`` are bare,
2. sets aside a random reservoir ``R`` used only for length-2 connections,
3. embeds the rest ``T'`` of the forest greedily outside ``R``,
4. tiles the untouched part of the host with short paths,
5. chains tiles into long paths through the reservoir,
6. splices a long path into every ``Q_i`` through the reservoir,
7. places isolated vertices and finally the bare length-2 paths.

Every stage either hands a verified object to the next one or raises
:class:`StageFailure` naming itself.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

from .errors import NoPath, RetriesExhausted, StageFailure, Stuck
from .fractional import Verdict
from .generators import PatternGraph, as_pattern, cycle_pattern, path_pattern
from .hypergraph import LinearKGraph, induced_remove
from .nibble import NibbleParams
from .tiling import tree_tiling
from .trees import forest_components, is_leaf_edge, path_links, semi_bare_decomposition


# ---------------------------------------------------------------- embeddings

@dataclass(frozen=True)
class Embedding:
    """``vertex_map[x]`` is the host image of pattern vertex ``x``;
    ``edge_map[e]`` the host edge id carrying pattern edge ``e``."""

    pattern: PatternGraph
    vertex_map: tuple[int, ...]
    edge_map: tuple[int, ...]
    diagnostics: dict = field(default_factory=dict, compare=False)


def verify_embedding(H: LinearKGraph, F: PatternGraph | LinearKGraph, vertex_map: Sequence[int],
                     edge_map: Sequence[int]) -> Verdict:
    """Injective vertex map, every pattern edge onto its host edge, and
    distinct pattern edges on distinct host edges."""
    P = as_pattern(F).graph
    if len(vertex_map) != P.n:
        return Verdict(False, None, f"vertex map has {len(vertex_map)} entries for {P.n} vertices")
    if len(edge_map) != P.m:
        return Verdict(False, None, f"edge map has {len(edge_map)} entries for {P.m} edges")
    for x, v in enumerate(vertex_map):
        if not 0 <= v < H.n:
            return Verdict(False, x, f"vertex {x} maps outside the host")
    if len(set(vertex_map)) != P.n:
        return Verdict(False, None, "vertex map is not injective")
    if len(set(edge_map)) != P.m:
        return Verdict(False, None, "two pattern edges share a host edge")
    for e, h in enumerate(edge_map):
        if not 0 <= h < H.m:
            return Verdict(False, e, f"edge {e} maps to unknown host edge {h}")
        if sorted(vertex_map[x] for x in P.edges[e]) != list(H.edges[h]):
            return Verdict(False, e, f"edge {e} does not land on host edge {h}")
    return Verdict(True)


def is_linear_cycle(H: LinearKGraph, edge_ids: Sequence[int]) -> bool:
    """Cyclically consecutive edges share exactly one vertex, all others
    are disjoint, and no vertex lies in three edges."""
    L = len(edge_ids)
    if L < 3 or len(set(edge_ids)) != L:
        return False
    sets = [set(H.edges[e]) for e in edge_ids]
    for i in range(L):
        for j in range(i + 1, L):
            adjacent = j == i + 1 or (i == 0 and j == L - 1)
            if len(sets[i] & sets[j]) != (1 if adjacent else 0):
                return False
    counts = Counter(v for s in sets for v in s)
    return max(counts.values()) <= 2


def verify_linear_cycle(H: LinearKGraph, emb: Embedding) -> Verdict:
    ok = verify_embedding(H, emb.pattern, emb.vertex_map, emb.edge_map)
    if not ok:
        return ok
    order = emb.pattern.branches[0] if emb.pattern.branches else tuple(range(emb.pattern.graph.m))
    if not is_linear_cycle(H, [emb.edge_map[e] for e in order]):
        return Verdict(False, None, "image edges do not form a linear cycle")
    return Verdict(True)


# ---------------------------------------------------------------- skeleton

def _components(G: LinearKGraph, edge_ids: Iterable[int], vertices: Iterable[int]):
    """Components of the subgraph with the given edges and vertices, as
    (root, [(edge, attachment), ...]) in breadth-first order."""
    edge_ids = sorted(edge_ids)
    allowed = set(edge_ids)
    verts = sorted(set(vertices) | {v for e in edge_ids for v in G.edges[e]})
    seen: set[int] = set()
    out = []
    for r in verts:
        if r in seen:
            continue
        seen.add(r)
        steps = []
        queue = [r]
        placed: set[int] = set()
        while queue:
            v = queue.pop(0)
            for e in sorted(G.edges_of(v)):
                if e not in allowed or e in placed:
                    continue
                placed.add(e)
                steps.append((e, v))
                for w in G.edges[e]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
        out.append((r, steps))
    return out


def _greedy_embed(H: LinearKGraph, G: LinearKGraph, comps, blocked: set[int], vmap: dict, emap: dict,
                  skip_isolated: bool) -> None:
    step = 0
    for root, steps in comps:
        if not steps and skip_isolated:
            continue
        ok = False
        for r_img in range(H.n):
            if r_img in blocked:
                continue
            trial_v = {root: r_img}
            trial_e = {}
            taken = {r_img}
            for i, (e, a) in enumerate(steps):
                base = trial_v[a]
                choice = None
                for h in sorted(H.edges_of(base)):
                    rest = [w for w in H.edges[h] if w != base]
                    if not any(w in blocked or w in taken for w in rest):
                        choice = (h, rest)
                        break
                if choice is None:
                    step = max(step, i)
                    break
                h, rest = choice
                fresh = [x for x in G.edges[e] if x != a]
                for x, w in zip(fresh, rest):
                    trial_v[x] = w
                    taken.add(w)
                trial_e[e] = h
            else:
                ok = True
            if ok:
                vmap.update(trial_v)
                emap.update(trial_e)
                blocked |= taken
                break
        if not ok:
            raise Stuck(step, f"no host vertex carries the component rooted at pattern vertex {root}")


def greedy_forest_embed(H: LinearKGraph, T: PatternGraph | LinearKGraph,
                        forbidden: Iterable[int] = ()) -> Embedding:
    """Embed a linear forest edge by edge avoiding ``forbidden``.

    Components are taken in order of their lowest vertex and grown
    breadth-first; every extension uses the lowest-id host edge through the
    current image whose other vertices are all unused.  A component's root
    goes to the lowest host vertex from which the whole component grows.
    Raises :class:`Stuck` when no root works.
    """
    T = as_pattern(T, "forest")
    G = T.graph
    forest_components(G)
    if G.n > H.n:
        raise Stuck(0, f"the forest has {G.n} vertices but the host only {H.n}")
    vmap: dict[int, int] = {}
    emap: dict[int, int] = {}
    blocked = set(forbidden)
    _greedy_embed(H, G, _components(G, range(G.m), range(G.n)), blocked, vmap, emap, False)
    return Embedding(T, tuple(vmap[x] for x in range(G.n)), tuple(emap[e] for e in range(G.m)))


# ---------------------------------------------------------------- reservoir

@dataclass(frozen=True)
class Reservoir:
    """A vertex set reserved for connections, with its verified conditions.

    ``flags`` maps ``"i"`` (``|V - R| >= (1 - delta') n``), ``"ii"`` (the
    host minus ``R`` keeps relative minimum degree ``1/k + epsilon/2``) and
    ``"iii"`` (every pair has at least ``delta * n`` internally disjoint
    length-2 paths through ``R``) to booleans; ``witness`` names a failing
    vertex or pair when a flag is false.
    """

    R: frozenset[int]
    p: Fraction
    delta: Fraction
    delta_prime: Fraction
    epsilon: Fraction
    flags: dict
    witness: dict = field(default_factory=dict)
    attempt: int = 0

    def __contains__(self, v) -> bool:
        return v in self.R

    def __len__(self) -> int:
        return len(self.R)


def _internal_edges(H: LinearKGraph, R: frozenset[int]) -> list[set[int]]:
    """For each vertex, the edges through it whose other vertices lie in R."""
    out = []
    for u in range(H.n):
        out.append({e for e in H.edges_of(u) if all(w == u or w in R for w in H.edges[e])})
    return out


def _pair_paths(H: LinearKGraph, inner: list[set[int]], u: int, v: int):
    for e1 in sorted(inner[u]):
        s1 = H.edges[e1]
        if v in s1:
            continue
        for c in s1:
            if c == u:
                continue
            e2 = H.edge_of_pair(c, v)
            if e2 is None or e2 not in inner[v] or u in H.edges[e2]:
                continue
            yield e1, e2, c


def reservoir_pair_count(H: LinearKGraph, R: Iterable[int], u: int, v: int, need: int | None = None) -> int:
    """Internally disjoint length-2 ``u``--``v`` paths with internals in R.

    Greedy first; when ``need`` is given and greedy falls short, the exact
    packing decides.
    """
    R = frozenset(R)
    inner = _internal_edges(H, R)
    return _pair_count(H, inner, u, v, need)


def _pair_count(H, inner, u, v, need):
    used: set[int] = set()
    sets = []
    greedy = 0
    for e1, e2, _ in _pair_paths(H, inner, u, v):
        s = (set(H.edges[e1]) | set(H.edges[e2])) - {u, v}
        sets.append(frozenset(s))
        if not used & s:
            used |= s
            greedy += 1
    if need is None or greedy >= need:
        return greedy
    from .oracle import _max_disjoint

    best, _ = _max_disjoint(sets, 200_000)
    return max(best, greedy)


def check_reservoir(H: LinearKGraph, R: Iterable[int], delta, delta_prime, epsilon) -> tuple[dict, dict]:
    R = frozenset(R)
    n, k = H.n, H.k
    flags, witness = {}, {}
    n_rest = n - len(R)
    flags["i"] = n_rest >= (1 - Fraction(delta_prime)) * n
    if not flags["i"]:
        witness["i"] = len(R)
    sub = induced_remove(H, R)
    target = (Fraction(1, k) + Fraction(epsilon) / 2) * n_rest
    low = min(range(sub.graph.n), key=sub.graph.degree, default=None)
    flags["ii"] = low is None or sub.graph.degree(low) >= target
    if not flags["ii"]:
        witness["ii"] = (sub.new_to_old[low], sub.graph.degree(low))
    need = Fraction(delta) * n
    need_int = int(need) if need == int(need) else int(need) + 1
    inner = _internal_edges(H, R)
    flags["iii"] = True
    for u in range(n):
        for v in range(u + 1, n):
            c = _pair_count(H, inner, u, v, need_int)
            if c < need:
                flags["iii"] = False
                witness["iii"] = (u, v, c)
                break
        if not flags["iii"]:
            break
    return flags, witness


def sample_reservoir(H: LinearKGraph, p, delta, epsilon, max_retries: int = 20, seed=0,
                     delta_prime=None, require: Sequence[str] = ("i", "ii", "iii")) -> Reservoir:
    """Sample ``R`` with each vertex kept independently with probability
    ``p`` and verify its conditions exactly, resampling on failure.

    ``delta_prime`` defaults to ``2p``.  Only the conditions listed in
    ``require`` must hold; the others are still checked and flagged.
    Raises :class:`RetriesExhausted` with the last failing condition.
    """
    p, delta, epsilon = Fraction(p), Fraction(delta), Fraction(epsilon)
    delta_prime = Fraction(delta_prime) if delta_prime is not None else 2 * p
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    if H.min_degree() < (Fraction(1, H.k) + epsilon) * H.n:
        raise ValueError(f"minimum degree {H.min_degree()} is below (1/k + epsilon) n")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    last = None
    for attempt in range(max(1, max_retries)):
        R = frozenset(int(v) for v in np.flatnonzero(rng.random(H.n) < float(p)))
        flags, witness = check_reservoir(H, R, delta, delta_prime, epsilon)
        last = (flags, witness)
        if all(flags[c] for c in require):
            return Reservoir(R, p, delta, delta_prime, epsilon, flags, witness, attempt)
    flags, witness = last
    failed = next(c for c in require if not flags[c])
    raise RetriesExhausted(failed, witness.get(failed))


def connect_pair(H: LinearKGraph, u: int, v: int, R: Reservoir | Iterable[int],
                 used: Iterable[int] = ()) -> tuple[int, int, int]:
    """Length-2 path ``(e1, e2, connector)`` from ``u`` to ``v`` whose
    internal vertices all lie in ``R`` and avoid ``used``.

    Candidates are scanned by increasing ``e1`` and connector id, so the
    lowest one is returned.  Raises :class:`NoPath`.
    """
    if u == v:
        raise ValueError("the two end vertices must differ")
    pool = R.R if isinstance(R, Reservoir) else frozenset(R)
    used = used if isinstance(used, (set, frozenset)) else set(used)
    if u in used or v in used:
        raise ValueError("end vertices may not be used already")

    def ok(w):
        return w in pool and w not in used

    for e1 in sorted(H.edges_of(u)):
        s1 = H.edges[e1]
        if v in s1 or not all(ok(w) for w in s1 if w != u):
            continue
        for c in sorted(s1):
            if c == u:
                continue
            e2 = H.edge_of_pair(c, v)
            if e2 is None or u in H.edges[e2]:
                continue
            if all(ok(w) for w in H.edges[e2] if w != v):
                return e1, e2, c
    raise NoPath(u, v)


# ---------------------------------------------------------------- pattern specs

@dataclass(frozen=True)
class BarePath:
    """Pattern path ``u - first - c - second - v`` of length two."""

    u: int
    first: int
    second: int
    v: int


@dataclass(frozen=True)
class PatternSpec:
    F: PatternGraph
    bare_paths: tuple[BarePath, ...] = ()

    def internals(self) -> set[int]:
        G = self.F.graph
        out: set[int] = set()
        for b in self.bare_paths:
            out |= (set(G.edges[b.first]) | set(G.edges[b.second])) - {b.u, b.v}
        return out

    def forest(self) -> tuple[list[int], list[int]]:
        """Vertices and edges of ``T``, the pattern minus all bare internals."""
        gone = self.internals()
        G = self.F.graph
        verts = [x for x in range(G.n) if x not in gone]
        edges = [e for e in range(G.m) if not gone & set(G.edges[e])]
        return verts, edges

    def validate(self) -> None:
        """Each path is bare once the earlier internals are gone and the rest
        is a forest.  Raises ``ValueError``."""
        G = self.F.graph
        gone: set[int] = set()
        for i, b in enumerate(self.bare_paths):
            e1, e2 = set(G.edges[b.first]), set(G.edges[b.second])
            if gone & (e1 | e2):
                raise ValueError(f"bare path {i} uses a vertex removed earlier")
            common = e1 & e2
            if len(common) != 1 or b.u not in e1 - e2 or b.v not in e2 - e1 or common & {b.u, b.v}:
                raise ValueError(f"bare path {i} is not a u-v path of length two")
            for w in (e1 | e2) - {b.u, b.v}:
                live = [e for e in G.edges_of(w) if not gone & set(G.edges[e])]
                if set(live) - {b.first, b.second}:
                    raise ValueError(f"bare path {i}: internal vertex {w} has other edges")
            gone |= (e1 | e2) - {b.u, b.v}
        verts, edges = self.forest()
        sub, remap = _subgraph(G, verts, edges)
        forest_components(sub)

    def leaf_edges(self) -> int:
        G = self.F.graph
        verts, edges = self.forest()
        sub, _ = _subgraph(G, verts, edges)
        return sum(is_leaf_edge(sub, e) for e in range(sub.m))


def _subgraph(G: LinearKGraph, verts, edges):
    remap = {x: i for i, x in enumerate(verts)}
    sub = LinearKGraph(G.k, len(verts), [[remap[x] for x in G.edges[e]] for e in edges])
    return sub, remap


def pattern_spec_for(F: PatternGraph) -> PatternSpec:
    """Default bare paths: none for trees and forests, the last two edges
    of a cycle, and the first two edges of every subdivided base edge."""
    G = F.graph
    if F.kind == "cycle":
        order = F.branches[0]
        links = F.link_vertices
        L = len(order)
        spec = PatternSpec(F, (BarePath(links[L - 2], order[L - 2], order[L - 1], links[0]),))
    elif F.kind == "subdivision":
        bare = []
        for (a, _), branch in zip(F.base_edges, F.branches):
            u = F.centers[a]
            c = (set(G.edges[branch[0]]) & set(G.edges[branch[1]])).pop()
            v = (set(G.edges[branch[1]]) & set(G.edges[branch[2]])).pop() if len(branch) > 2 else \
                next(w for w in G.edges[branch[1]] if w in F.centers and w != u)
            bare.append(BarePath(u, branch[0], branch[1], v))
            assert c not in (u, v)
        spec = PatternSpec(F, tuple(bare))
    else:
        spec = PatternSpec(F)
    spec.validate()
    return spec


# ---------------------------------------------------------------- pipeline

@dataclass(frozen=True)
class EmbedParams:
    """Configuration of the embedding pipeline.

    ``m`` is the tile path length and ``M`` the length of the bare middles
    ``Q_i``; ``M - 2`` must be divisible by ``m + 2``.  ``M = None`` picks the
    smallest valid value at least ``1/sqrt(mu)``.  ``p = None`` tries the
    reservoir probabilities in ``p_grid`` in order.  ``delta = None`` asks
    for one reservoir path per pair and ``epsilon = None`` uses the
    host's actual slack ``delta(H)/n - 1/k``.
    """

    m: int = 4
    M: int | None = None
    mu: Fraction = Fraction(1, 100)
    eta: Fraction = Fraction(1, 10)
    epsilon: Fraction | None = None
    p: Fraction | None = None
    p_grid: tuple = (Fraction(3, 10), Fraction(7, 20), Fraction(2, 5), Fraction(9, 20), Fraction(1, 2),
                     Fraction(3, 5))
    delta: Fraction | None = None
    reservoir_retries: int = 4
    # fresh reservoirs tried when a later stage fails
    attempts: int = 3
    require: tuple[str, ...] = ("i", "iii")
    strict_reservoir: bool = False
    seed: int = 0
    nibble: NibbleParams = field(default_factory=NibbleParams)
    max_leaf_edges: int | None = None

    def long_length(self) -> int:
        if self.M is not None:
            if self.M < 2 or (self.M - 2) % (self.m + 2):
                raise ValueError(f"M - 2 = {self.M - 2} is not a non-negative multiple of m + 2 = {self.m + 2}")
            return self.M
        target = Fraction(1) / Fraction(self.mu)
        lo = isqrt(int(target))
        while Fraction(lo * lo) < target:
            lo += 1
        M = max(lo, self.m + 4)
        while (M - 2) % (self.m + 2):
            M += 1
        return M


class _HostPath:
    """A linear path in the host as edge ids and link vertices
    ``z_0..z_r`` (``z_0`` and ``z_r`` are chosen end vertices)."""

    def __init__(self, edges, links):
        self.edges = list(edges)
        self.links = list(links)

    def reversed(self):
        return _HostPath(self.edges[::-1], self.links[::-1])

    def vertices(self, H):
        return {v for h in self.edges for v in H.edges[h]}


def _map_path(H: LinearKGraph, G: LinearKGraph, pattern_edges, pattern_links, host: _HostPath, vmap, emap):
    """Map a pattern path onto a host path of the same length, link onto link."""
    assert len(pattern_edges) == len(host.edges) and len(pattern_links) == len(host.links)
    for j, (e, h) in enumerate(zip(pattern_edges, host.edges)):
        a, b = pattern_links[j], pattern_links[j + 1]
        za, zb = host.links[j], host.links[j + 1]
        priv_p = sorted(x for x in G.edges[e] if x not in (a, b))
        priv_h = sorted(w for w in H.edges[h] if w not in (za, zb))
        for x, w in zip([a, b, *priv_p], [za, zb, *priv_h]):
            if vmap.get(x, w) != w:
                raise AssertionError(f"pattern vertex {x} mapped twice")
            vmap[x] = w
        emap[e] = h


def _fail(stage, **diag):
    return StageFailure(stage, diag)


def _end_choices(H, path: _HostPath, at_start: bool):
    """Variants of ``path`` with each admissible end vertex at that end."""
    if at_start:
        h, inner = path.edges[0], path.links[1]
        for w in H.edges[h]:
            if w != inner:
                yield _HostPath(path.edges, [w, *path.links[1:]])
    else:
        h, inner = path.edges[-1], path.links[-2]
        for w in H.edges[h]:
            if w != inner:
                yield _HostPath(path.edges, [*path.links[:-1], w])


def _join(H, R, r_used, a: _HostPath, b: _HostPath):
    """Connect the end of ``a`` to the start of ``b`` through ``R``; only
    reservoir vertices can collide since both paths live outside ``R``."""
    for a2 in _end_choices(H, a, False):
        for b2 in _end_choices(H, b, True):
            try:
                e1, e2, c = connect_pair(H, a2.links[-1], b2.links[0], R, r_used)
            except NoPath:
                continue
            return _HostPath(a2.edges + [e1, e2] + b2.edges, a2.links + [c] + b2.links)
    return None


def _splice(H, R, r_used, S1, S2, lp: _HostPath):
    """Connect ``S1`` to the start of ``lp`` and its end to ``S2``."""
    for a in _end_choices(H, lp, True):
        for b in _end_choices(H, a, False):
            try:
                e1, e2, c = connect_pair(H, S1, b.links[0], R, r_used)
                inner = (set(H.edges[e1]) | set(H.edges[e2])) - {S1, b.links[0]}
                f1, f2, d = connect_pair(H, b.links[-1], S2, R, r_used | inner)
            except NoPath:
                continue
            return _HostPath([e1, e2] + b.edges + [f1, f2], [S1, c] + b.links + [d, S2])
    return None


def embed_pattern(H: LinearKGraph, spec: PatternSpec | PatternGraph, params: EmbedParams | None = None) -> Embedding:
    """Run the full pipeline; the result passes :func:`verify_embedding`."""
    params = params or EmbedParams()
    if isinstance(spec, PatternGraph):
        spec = pattern_spec_for(spec)
    F = spec.F
    G = F.graph
    n, k = H.n, H.k
    diag: dict = {}

    # -- decompose
    if G.k != k:
        raise _fail("decompose", reason=f"pattern is {G.k}-uniform, host {k}-uniform")
    if G.n > (1 - Fraction(params.eta)) * n:
        raise _fail("decompose", reason=f"pattern has {G.n} vertices, more than (1 - eta) n")
    try:
        spec.validate()
    except ValueError as exc:
        raise _fail("decompose", reason=str(exc)) from exc
    try:
        M = params.long_length()
    except ValueError as exc:
        raise _fail("decompose", reason=str(exc)) from exc
    m = params.m
    g = (M - 2) // (m + 2)
    t_verts, t_edges = spec.forest()
    sub, remap = _subgraph(G, t_verts, t_edges)
    back_edge = list(t_edges)
    leaves = sum(is_leaf_edge(sub, e) for e in range(sub.m))
    if params.max_leaf_edges is not None and leaves > params.max_leaf_edges:
        raise _fail("decompose", reason=f"forest has {leaves} leaf edges")
    dec = semi_bare_decomposition(sub, M + 1)
    primes = [tuple(back_edge[e] for e in p) for p in dec.paths]
    qs = []  # (pattern edges of Q, pattern links q_0..q_M)
    for P in primes:
        links = path_links(G, P)
        qs.append((P[1:-1], links))
    q_inner = set()
    for q_edges, q_links in qs:
        for e in q_edges:
            q_inner.update(G.edges[e])
        q_inner -= {q_links[0], q_links[-1]}
    skel_edges = [e for e in t_edges if not any(e in q for q, _ in qs)]
    skel_verts = [x for x in t_verts if x not in q_inner]
    s = len(qs)
    diag.update(M=M, m=m, group=g, s=s, leaf_edges=leaves, skeleton_edges=len(skel_edges),
                remainder_edges=dec.remainder_edges)

    plan = _Plan(M, m, g, s, tuple(qs), tuple(skel_edges), tuple(skel_verts))
    rng = np.random.default_rng(params.seed)
    failure = None
    for attempt in range(max(1, params.attempts)):
        try:
            return _realize(H, spec, params, plan, rng, dict(diag, attempt=attempt))
        except StageFailure as exc:
            failure = exc
    raise failure


@dataclass(frozen=True)
class _Plan:
    M: int
    m: int
    g: int
    s: int
    qs: tuple  # (pattern edges of Q_i, pattern links q_0..q_M)
    skel_edges: tuple[int, ...]
    skel_verts: tuple[int, ...]


def _realize(H: LinearKGraph, spec: PatternSpec, params: EmbedParams, plan: _Plan, rng, diag: dict) -> Embedding:
    """Stages from the reservoir onwards; raises :class:`StageFailure`."""
    F, G = spec.F, spec.F.graph
    n, k = H.n, H.k
    m, g, s, qs = plan.m, plan.g, plan.s, plan.qs
    skel_edges, skel_verts = plan.skel_edges, plan.skel_verts

    # -- reservoir
    eps = Fraction(params.epsilon) if params.epsilon is not None else Fraction(H.min_degree(), n) - Fraction(1, k)
    if eps <= 0:
        raise _fail("reservoir", reason="minimum degree is not above n/k")
    delta = Fraction(params.delta) if params.delta is not None else Fraction(1, n)
    grid = [Fraction(params.p)] if params.p is not None else list(params.p_grid)
    res = None
    tried = []
    for p in grid:
        try:
            res = sample_reservoir(H, p, delta, eps, params.reservoir_retries, rng, require=params.require)
            break
        except RetriesExhausted as exc:
            tried.append((p, exc.condition, exc.witness))
    if res is None:
        if params.strict_reservoir:
            raise _fail("reservoir", reason="no sampled reservoir passed its checks", tried=tried)
        p = grid[-1]
        R = frozenset(int(v) for v in np.flatnonzero(rng.random(n) < float(p)))
        flags, witness = check_reservoir(H, R, delta, 2 * p, eps)
        res = Reservoir(R, p, delta, 2 * p, eps, flags, witness, -1)
    R = res.R
    diag.update(reservoir_size=len(R), reservoir_p=res.p, reservoir_flags=dict(res.flags), reservoir_tried=tried)

    # -- skeleton
    vmap: dict[int, int] = {}
    emap: dict[int, int] = {}
    used: set[int] = set(R)
    try:
        _greedy_embed(H, G, _components(G, skel_edges, skel_verts), used, vmap, emap, skip_isolated=True)
    except Stuck as exc:
        raise _fail("skeleton", reason=str(exc), step=exc.step) from exc
    # from here on every path end lies outside R and every connection
    # internal inside it, so only the used part of R can cause collisions
    used = set(vmap.values())
    r_used: set[int] = set()
    isolated = [x for x in skel_verts if x not in vmap]

    # -- tiling
    long_paths: list[_HostPath] = []
    if s:
        rest = induced_remove(H, R | used)
        need = s * g
        tiles = None
        bites = [params.nibble.bite, params.nibble.bite / 2]
        for attempt, bite in enumerate(bites):
            np_ = replace(params.nibble, bite=bite, seed=params.nibble.seed + params.seed + attempt)
            try:
                tiling = tree_tiling(rest.graph, path_pattern(m, k), cap=None, params=np_, regularize=False)
            except Exception as exc:  # an edgeless remainder cannot be tiled
                raise _fail("tiling", reason=str(exc)) from exc
            if len(tiling.copies) >= need:
                tiles = tiling
                break
        if tiles is None:
            raise _fail("tiling", reason=f"{len(tiling.copies)} tiles found, {need} needed", tiles=len(tiling.copies))
        pat = path_pattern(m, k)
        pool = []
        for c in tiles.copies:
            edges = [rest.edge_to_old[h] for h in c.edge_map]
            links = [rest.new_to_old[c.vertex_map[x]] for x in pat.link_vertices]
            pool.append(_HostPath(edges, links))
        diag.update(tiles=len(pool))

        # -- grouping
        for j in range(s):
            if not pool:
                raise _fail("grouping", reason=f"ran out of tiles after {j} long paths")
            cur = pool.pop(0)
            for _ in range(g - 1):
                joined = None
                for idx, cand in enumerate(pool):
                    for variant in (cand, cand.reversed()):
                        joined = _join(H, R, r_used, cur, variant)
                        if joined is not None:
                            break
                    if joined is not None:
                        pool.pop(idx)
                        break
                if joined is None:
                    raise _fail("grouping", reason=f"could not extend long path {j}")
                r_used |= joined.vertices(H) & R
                cur = joined
            long_paths.append(cur)
            used |= cur.vertices(H)
        diag.update(long_paths=len(long_paths), discarded_tiles=len(pool))

        # -- connect
        free = list(range(len(long_paths)))
        for i, (q_edges, q_links) in enumerate(qs):
            S1, S2 = vmap[q_links[0]], vmap[q_links[-1]]
            done = None
            for j in free:
                for lp in (long_paths[j], long_paths[j].reversed()):
                    hp = _splice(H, R, r_used, S1, S2, lp)
                    if hp is not None:
                        done = (j, hp)
                        break
                if done:
                    break
            if done is None:
                raise _fail("connect", reason=f"no reservoir connection for bare middle {i}", q=i)
            j, hp = done
            free.remove(j)
            _map_path(H, G, q_edges, q_links, hp, vmap, emap)
            r_used |= hp.vertices(H) & R
            used |= hp.vertices(H)

    # -- isolated vertices
    spare = (v for v in range(n) if v not in R and v not in used)
    for x in isolated:
        w = next(spare, None)
        if w is None:
            raise _fail("connect", reason="no host vertex left for an isolated vertex")
        vmap[x] = w
        used.add(w)

    # -- bare paths
    for i, b in enumerate(spec.bare_paths):
        u_img, v_img = vmap[b.u], vmap[b.v]
        try:
            e1, e2, c = connect_pair(H, u_img, v_img, R, r_used)
        except NoPath as exc:
            raise _fail("bare-paths", reason=str(exc), path=i) from exc
        c_pat = (set(G.edges[b.first]) & set(G.edges[b.second])).pop()
        hp = _HostPath([e1, e2], [u_img, c, v_img])
        _map_path(H, G, [b.first, b.second], [b.u, c_pat, b.v], hp, vmap, emap)
        r_used |= hp.vertices(H) & R
        used |= hp.vertices(H)

    vertex_map = tuple(vmap[x] for x in range(G.n))
    edge_map = tuple(emap[e] for e in range(G.m))
    check = verify_embedding(H, F, vertex_map, edge_map)
    if not check:
        raise AssertionError(f"pipeline produced an invalid embedding: {check.detail}")
    diag["reservoir_used"] = len(r_used)
    return Embedding(F, vertex_map, edge_map, diag)



def embed_linear_cycle(H: LinearKGraph, length: int, params: EmbedParams | None = None) -> Embedding:
    """Embed a linear cycle with ``length`` edges and verify it as a cycle."""
    params = params or EmbedParams()
    if length < 3:
        raise ValueError("a linear cycle needs at least 3 edges")
    if length * (H.k - 1) > (1 - Fraction(params.eta)) * H.n:
        raise ValueError(f"a cycle of length {length} exceeds (1 - eta) n vertices")
    emb = embed_pattern(H, pattern_spec_for(cycle_pattern(length, H.k)), params)
    check = verify_linear_cycle(H, emb)
    if not check:
        raise AssertionError(check.detail)
    return emb
