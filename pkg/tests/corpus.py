"""The standard instance corpus shared by the test modules."""

from __future__ import annotations

from functools import lru_cache

from linhyper import complete_kpartite_linear, extremal_construction, random_linear, steiner_triple

STS_ORDERS = (7, 9, 13, 15, 21, 27)
KPARTITE = tuple((q, k) for q in (3, 4, 5, 7, 8, 9) for k in (3, 4) if k <= q + 1)
EXTREMAL = tuple((q, m) for q in (5, 7, 9) for m in (1, 2))


def random_params(i: int) -> tuple[int, int, int, int]:
    """(n, k, rounds, seed) of the i-th random corpus instance."""
    k = 3 + i % 2
    n = 12 + (i * 7) % 49
    rounds = 40 + (i * 53) % 400
    return n, k, rounds, i


@lru_cache(maxsize=None)
def standard_corpus() -> tuple[tuple[str, object], ...]:
    out = [(f"sts({n})", steiner_triple(n)) for n in STS_ORDERS]
    out += [(f"kpartite({q},{k})", complete_kpartite_linear(q, k)) for q, k in KPARTITE]
    out += [(f"extremal({q},{m})", extremal_construction(q, m, 3)) for q, m in EXTREMAL]
    for i in range(200):
        n, k, rounds, seed = random_params(i)
        out.append((f"random({n},{k},{rounds},{seed})", random_linear(n, k, rounds, seed)))
    return tuple(out)
