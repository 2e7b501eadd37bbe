"""Perfect fractional matchings, Farkas certificates and regularization.

In a linear hypergraph every vertex pair lies in at most one edge, so
bounding the weight of every pair by ``cap`` is the same as bounding every
edge weight by ``cap``.  A capped perfect fractional matching is therefore
a single LP: ``A psi = 1, 0 <= psi <= cap``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping, NamedTuple

from .errors import DenominatorOverflow
from .hypergraph import LinearKGraph, MultiKGraph
from .simplex import phase1


@dataclass(frozen=True)
class FractionalMatching:
    """Edge weights keyed by edge id; edges left out have weight zero."""

    weights: Mapping[int, Fraction]
    perfect: bool = False

    def weight(self, e: int) -> Fraction:
        return self.weights.get(e, Fraction(0))

    def support(self) -> list[int]:
        return sorted(e for e, w in self.weights.items() if w)

    def max_weight(self) -> Fraction:
        return max(self.weights.values(), default=Fraction(0))


@dataclass(frozen=True)
class FarkasCertificate:
    """Dual witness that ``A psi = 1, 0 <= psi (<= cap)`` has no solution.

    Uncapped: ``sum_{v in e} y_v >= 0`` for every edge and ``sum_v y_v < 0``.
    Capped: ``sum_{v in e} y_v + z_e >= 0``, ``z >= 0`` and
    ``sum_v y_v + cap * sum_e z_e < 0``.
    """

    y: Mapping[int, Fraction]
    z: Mapping[int, Fraction] = field(default_factory=dict)
    cap: Fraction | None = None

    def value(self) -> Fraction:
        total = sum(self.y.values(), Fraction(0))
        if self.cap is not None:
            total += self.cap * sum(self.z.values(), Fraction(0))
        return total


class Verdict(NamedTuple):
    ok: bool
    witness: object = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def verify_fm(H: LinearKGraph, psi: FractionalMatching | Mapping[int, Fraction],
              require_perfect: bool = True, cap=None) -> Verdict:
    """Check a fractional matching exactly.

    On failure the witness is the offending edge id (weight out of range) or
    ``(vertex, load)`` for a vertex whose incident weight is wrong.
    """
    weights = psi.weights if isinstance(psi, FractionalMatching) else psi
    cap = None if cap is None else _frac(cap)
    top = Fraction(1) if cap is None else min(Fraction(1), cap)
    load = [Fraction(0)] * H.n
    for e, w in sorted(weights.items()):
        if not 0 <= e < H.m:
            return Verdict(False, e, "weight on an unknown edge id")
        w = _frac(w)
        if not 0 <= w <= top:
            return Verdict(False, e, f"edge weight {w} outside [0, {top}]")
        for v in H.edges[e]:
            load[v] += w
    for v, s in enumerate(load):
        if s > 1 or (require_perfect and s != 1):
            return Verdict(False, (v, s), f"vertex {v} carries weight {s}")
    return Verdict(True)


def verify_certificate(H: LinearKGraph, cert: FarkasCertificate) -> Verdict:
    """Check the Farkas conditions exactly; witness is a violating edge id
    or the non-negative total."""
    y = [_frac(cert.y.get(v, 0)) for v in range(H.n)]
    if set(cert.y) - set(range(H.n)):
        return Verdict(False, None, "y keyed by unknown vertices")
    z = {}
    if cert.cap is not None:
        z = {e: _frac(w) for e, w in cert.z.items()}
        if any(not 0 <= e < H.m for e in z):
            return Verdict(False, None, "z keyed by unknown edges")
        for e, w in sorted(z.items()):
            if w < 0:
                return Verdict(False, e, f"z[{e}] = {w} is negative")
    elif any(cert.z.values()):
        return Verdict(False, None, "uncapped certificate carries a nonzero z")
    for e, verts in enumerate(H.edges):
        s = sum((y[v] for v in verts), Fraction(0)) + z.get(e, 0)
        if s < 0:
            return Verdict(False, e, f"edge {e} has dual sum {s} < 0")
    total = sum(y, Fraction(0))
    if cert.cap is not None:
        total += _frac(cert.cap) * sum(z.values(), Fraction(0))
    if total >= 0:
        return Verdict(False, total, f"objective {total} is not negative")
    return Verdict(True)


def _primitive(values: list[Fraction]) -> Fraction:
    """Positive scale turning ``values`` into coprime integers."""
    nz = [v for v in values if v]
    if not nz:
        return Fraction(1)
    d = lcm(*(v.denominator for v in nz))
    from math import gcd
    g = gcd(*(int(v * d) for v in nz))
    return Fraction(d, g)


def solve_pfm(H: LinearKGraph, cap=None, max_pivots: int = 200_000,
              uniform_if_regular: bool = True) -> FractionalMatching | FarkasCertificate:
    """Find a perfect fractional matching of ``H`` or certify that none exists.

    With ``cap`` every edge weight is additionally bounded by ``cap`` (which
    in a linear graph bounds every pair weight).  All arithmetic is exact.
    A ``d``-regular host returns the uniform matching ``1/d`` directly when
    the cap allows it; otherwise the answer is a basic solution of the
    phase-1 simplex.  Raises :class:`~linhyper.errors.LPTimeout` when the
    pivot budget runs out.
    """
    if cap is not None:
        cap = _frac(cap)
        if not 0 < cap <= 1:
            raise ValueError(f"cap must lie in (0, 1], got {cap}")
    n = H.n
    if n == 0:
        return FractionalMatching({}, True)
    degs = H.degrees()
    isolated = [v for v in range(n) if degs[v] == 0]
    if isolated:
        bad = set(isolated)
        y = {v: Fraction(-1 if v in bad else 0) for v in range(n)}
        return FarkasCertificate(y, {e: Fraction(0) for e in range(H.m)} if cap is not None else {}, cap)
    if uniform_if_regular and H.is_regular():
        w = Fraction(1, degs[0])
        if cap is None or w <= cap:
            return FractionalMatching({e: w for e in range(H.m)}, True)

    columns = [{v: 1 for v in e} for e in H.edges]
    if cap is None:
        res = phase1(n, columns, [1] * n, max_pivots=max_pivots)
        scale = 1
    else:
        p, q = cap.numerator, cap.denominator
        res = phase1(n, columns, [q] * n, [p] * H.m, max_pivots=max_pivots)
        scale = q
    if res.feasible:
        weights = {e: x / scale for e, x in enumerate(res.x) if x}
        return FractionalMatching(weights, True)

    pi = res.dual
    ys = [-p for p in pi]
    if cap is None:
        zs = []
    else:
        # z_e = max(0, -(A'y)_e) closes every edge constraint
        zs = [max(Fraction(0), -sum((ys[v] for v in e), Fraction(0))) for e in H.edges]
    t = _primitive(ys + zs)
    y = {v: ys[v] * t for v in range(n)}
    z = {e: zs[e] * t for e in range(H.m)} if cap is not None else {}
    return FarkasCertificate(y, z, cap)


@dataclass(frozen=True)
class RegularizedGraph:
    """``D``-regular multigraph built from a perfect fractional matching.

    ``F.base`` holds the support edges; ``edge_map[i]`` is the id in the
    original host of ``F.base.edges[i]``.
    """

    F: MultiKGraph
    D: int
    cap: Fraction | None
    cap_bound: Fraction | None  # cap * D, the largest multiplicity allowed
    edge_map: tuple[int, ...]

    def verify(self) -> Verdict:
        degs = self.F.degrees()
        for v, d in enumerate(degs):
            if d != self.D:
                return Verdict(False, (v, d), f"vertex {v} has degree {d} != {self.D}")
        if self.cap_bound is not None:
            for e, mu in enumerate(self.F.multiplicity):
                if mu > self.cap_bound:
                    return Verdict(False, e, f"edge {e} multiplicity {mu} exceeds {self.cap_bound}")
        return Verdict(True)


def regularize(H: LinearKGraph, psi: FractionalMatching, D_limit: int | None = None,
               cap=None) -> RegularizedGraph:
    """Turn a perfect fractional matching into a ``D``-regular multigraph.

    ``D`` is the lcm of the weight denominators and edge ``e`` gets
    multiplicity ``D * psi(e)``; zero-weight edges are dropped.
    """
    cap = None if cap is None else _frac(cap)
    check = verify_fm(H, psi, require_perfect=True, cap=cap)
    if not check:
        raise ValueError(f"not a perfect fractional matching within the cap: {check.detail}")
    support = psi.support()
    D = lcm(*(psi.weight(e).denominator for e in support)) if support else 1
    if D_limit is not None and D > D_limit:
        raise DenominatorOverflow(D, D_limit)
    base = LinearKGraph(H.k, H.n, [H.edges[e] for e in support])
    mult = [int(psi.weight(e) * D) for e in support]
    reg = RegularizedGraph(MultiKGraph(base, mult), D, cap, None if cap is None else cap * D, tuple(support))
    assert reg.verify(), "regularized graph failed its own invariants"
    return reg
