"""Table-driven arithmetic in GF(q) for prime powers q.

Elements are the integers ``0..q-1``; element ``x`` stands for the
polynomial whose base-``p`` digits are the coefficients of ``x``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from .errors import NotPrimePower


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``q == p**e`` or raise :class:`NotPrimePower`."""
    if q < 2:
        raise NotPrimePower(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, e


def _polymulmod(a, b, mod, p):
    # a, b: coefficient lists (low degree first) of length e; mod: monic, length e+1
    e = len(mod) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            for j in range(e + 1):
                prod[d - e + j] = (prod[d - e + j] - c * mod[j]) % p
    return prod[:e]


def _irreducible(p: int, e: int) -> list[int]:
    """Smallest monic irreducible polynomial of degree ``e`` over GF(p)."""
    if e == 1:
        return [0, 1]
    for low in product(range(p), repeat=e):
        poly = list(reversed(low)) + [1]
        if poly[0] == 0:
            continue
        # no roots and no factor of degree 2..e//2: brute force over monic divisors
        if not any(_divides(list(rev) + [1], poly, p) for d in range(1, e // 2 + 1)
                   for rev in product(range(p), repeat=d)):
            return poly
    raise AssertionError("unreachable: irreducible polynomials exist for every degree")


def _divides(d, f, p):
    f = f[:]
    dd = len(d) - 1
    for i in range(len(f) - 1, dd - 1, -1):
        c = f[i]
        if c:
            for j in range(dd + 1):
                f[i - dd + j] = (f[i - dd + j] - c * d[j]) % p
    return not any(f[:dd])


class GF:
    """The finite field with ``q`` elements."""

    def __init__(self, q: int):
        p, e = prime_power(q)
        self.q, self.p, self.e = q, p, e
        digits = [[(x // p**i) % p for i in range(e)] for x in range(q)]

        def encode(coeffs):
            return sum(c * p**i for i, c in enumerate(coeffs))

        self.add = tuple(
            tuple(encode([(a + b) % p for a, b in zip(digits[x], digits[y])]) for y in range(q))
            for x in range(q)
        )
        if e == 1:
            self.mul = tuple(tuple((x * y) % p for y in range(q)) for x in range(q))
        else:
            mod = _irreducible(p, e)
            self.mul = tuple(
                tuple(encode(_polymulmod(digits[x], digits[y], mod, p)) for y in range(q))
                for x in range(q)
            )

    def __repr__(self) -> str:
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)
