"""Exact phase-1 simplex for ``A x = b, 0 <= x <= u`` over the integers.

Revised form: only the basis inverse (the block under the artificial
columns), the right-hand side and the objective row restricted to those
columns are stored.  Entries are fraction-free: each row is a list of
Python ints with its own positive denominator, reduced by the row gcd after
every update.  Columns of ``A`` are priced on demand from their sparse
representation.

Upper bounds are handled by complementing a variable (``x -> u - x``) when
it reaches its bound, so every nonbasic variable sits at zero in the
working representation.

Pivot rule: largest reduced cost (lowest index on ties); after
``stall_limit`` consecutive degenerate pivots it falls back to Bland's rule
until the objective moves again, which rules out cycling.  Ratio-test ties
always go to the lowest variable index.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .errors import LPTimeout


@dataclass
class Phase1Result:
    feasible: bool
    x: list[Fraction] | None  # structural values when feasible
    dual: list[Fraction] | None  # phase-1 row duals when infeasible
    objective: Fraction
    pivots: int


def _normalize(row: list[int], den: int) -> tuple[list[int], int]:
    g = gcd(den, *row)
    if g > 1:
        row = [x // g for x in row]
        den //= g
    return row, den


def phase1(
    n_rows: int,
    columns: Sequence[Mapping[int, int]],
    b: Sequence[int],
    upper: Sequence[int | None] | None = None,
    max_pivots: int = 200_000,
    stall_limit: int = 50,
) -> Phase1Result:
    """Decide feasibility of ``A x = b, 0 <= x <= upper`` exactly.

    ``columns[j]`` maps row index to the integer coefficient of ``x_j`` and
    ``b`` must be non-negative.  When the system is infeasible, ``dual`` is
    an optimal dual of ``min 1'a  s.t.  A x + a = b``: it is at most 1
    everywhere, ``(A' dual)_j <= 0`` for columns at their lower bound and
    ``>= 0`` for columns at their upper bound, and its objective
    ``b' dual - sum_j u_j max(0, (A' dual)_j)`` is positive.
    """
    m = n_rows
    n_cols = len(columns)
    if len(b) != m:
        raise ValueError("right-hand side length does not match the row count")
    if any(x < 0 for x in b):
        raise ValueError("phase1 needs a non-negative right-hand side")
    cols = [[(int(i), int(a)) for i, a in sorted(col.items()) if a] for col in columns]
    upper = list(upper) if upper is not None else [None] * n_cols
    if len(upper) != n_cols:
        raise ValueError("one upper bound per column is required")
    upper += [None] * m
    rhs = m

    # rows[i] = [Binv[i][0..m-1], x_B[i]]
    rows = []
    for i in range(m):
        r = [0] * (m + 1)
        r[i] = 1
        r[rhs] = int(b[i])
        rows.append(r)
    den = [1] * m
    obj = [0] * (m + 1)  # (pi - 1) under artificial columns, objective value
    obj[rhs] = sum(int(x) for x in b)
    oden = 1
    basis = [n_cols + i for i in range(m)]
    is_basic = [False] * n_cols + [True] * m
    sign = [1] * n_cols

    def column(j):
        """Numerators (over each row's denominator) of tableau column ``j``."""
        if j >= n_cols:
            l = j - n_cols
            return [r[l] for r in rows], obj[l]
        c = cols[j]
        sg = sign[j]
        col = [sg * sum(r[i] * a for i, a in c) for r in rows]
        oj = sg * sum((obj[i] + oden) * a for i, a in c)
        return col, oj

    def complement(j):
        nonlocal obj
        u = upper[j]
        col, oj = column(j)
        for r, a in zip(rows, col):
            if a:
                r[rhs] -= u * a
        obj[rhs] -= u * oj
        sign[j] = -sign[j]

    pivots = 0
    stall = 0
    while True:
        shifted = [o + oden for o in obj[:m]]
        best_j, top = None, 0
        bland = stall >= stall_limit
        for j in range(n_cols):
            if is_basic[j]:
                continue
            val = sign[j] * sum(shifted[i] * a for i, a in cols[j])
            if val > top:
                best_j, top = j, val
                if bland:
                    break
        if best_j is None or not bland:
            for l in range(m):
                if obj[l] > top and not is_basic[n_cols + l]:
                    best_j, top = n_cols + l, obj[l]
                    if bland:
                        break
        s = best_j
        if s is None:
            break
        pivots += 1
        if pivots > max_pivots:
            raise LPTimeout(pivots - 1)

        col, oj = column(s)
        best = None  # (step num, step den, var index, row or None, leaves at upper)
        if upper[s] is not None:
            best = (upper[s], 1, s, None, False)
        for i in range(m):
            a = col[i]
            if a > 0:
                cand = (rows[i][rhs], a, basis[i], i, False)
            elif a < 0 and upper[basis[i]] is not None:
                cand = (upper[basis[i]] * den[i] - rows[i][rhs], -a, basis[i], i, True)
            else:
                continue
            if best is None:
                best = cand
            else:
                lhs, rhs_ = cand[0] * best[1], best[0] * cand[1]
                if lhs < rhs_ or (lhs == rhs_ and cand[2] < best[2]):
                    best = cand
        if best is None:
            raise AssertionError("phase-1 objective is bounded below; ratio test cannot be empty")
        step, _, _, r, to_upper = best
        stall = stall + 1 if step == 0 else 0
        if r is None:
            complement(s)
            continue

        piv = col[r]
        prow = rows[r]
        if piv < 0:
            prow = [-x for x in prow]
            piv = -piv
        g = gcd(piv, *prow)
        if g > 1:
            prow = [x // g for x in prow]
            piv //= g
        rows[r], den[r] = prow, piv
        for i in range(m):
            a = col[i]
            if i == r or not a:
                continue
            new = [x * piv - a * y for x, y in zip(rows[i], prow)]
            rows[i], den[i] = _normalize(new, den[i] * piv)
        if oj:
            new = [x * piv - oj * y for x, y in zip(obj, prow)]
            obj, oden = _normalize(new, oden * piv)
        leaving = basis[r]
        basis[r] = s
        is_basic[s] = True
        is_basic[leaving] = False
        if to_upper:
            complement(leaving)

    objective = Fraction(obj[rhs], oden)
    if objective == 0:
        vals = [Fraction(0)] * n_cols
        for i in range(m):
            if basis[i] < n_cols:
                vals[basis[i]] = Fraction(rows[i][rhs], den[i])
        x = [upper[j] - v if sign[j] < 0 else v for j, v in enumerate(vals)]
        return Phase1Result(True, x, None, objective, pivots)
    dual = [1 + Fraction(obj[l], oden) for l in range(m)]
    return Phase1Result(False, None, dual, objective, pivots)
