"""Batch sweeps over generated instances, written as CSV.

Config grammar: one ``key = value`` per line, ``#`` starts a comment.
List values are comma separated and integer ranges may be written
``a..b`` (inclusive)::

    family = sts            # sts | kpartite | extremal | random
    n = 63, 99              # sts and random
    q = 5, 7                # kpartite and extremal
    m = 1, 2                # extremal
    k = 3
    rounds = 4000           # random
    algorithm = nibble      # nibble | greedy | exact | fracmatch (comma list allowed)
    seeds = 0..19
    bite = 1/4
    cap = 1/2               # fracmatch only
    nodes = 2000000         # exact only
    timing = off            # on writes wall-clock runtime_ms (breaks byte-identity)
    workers = 1
    output = sweep.csv      # omit for stdout
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from pathlib import Path

from .errors import HypergraphError, LPTimeout, ParseError
from .fractional import FractionalMatching, solve_pfm
from .generators import complete_kpartite_linear, extremal_construction, random_linear, steiner_triple
from .nibble import NibbleParams, greedy_matching, nibble_matching
from .oracle import SearchBudget, max_matching_exact

COLUMNS = ("family", "n", "k", "delta_min", "algorithm", "seed", "matched_edges", "covered", "runtime_ms", "status")
FAMILIES = ("sts", "kpartite", "extremal", "random")
ALGORITHMS = ("nibble", "greedy", "exact", "fracmatch")
KEYS = {"family", "n", "q", "m", "k", "rounds", "algorithm", "seeds", "bite", "cap", "nodes", "timing",
        "workers", "output"}


@dataclass(frozen=True)
class ExperimentConfig:
    family: str
    sizes: tuple[dict, ...]  # generator keyword sets, one per instance
    algorithms: tuple[str, ...]
    seeds: tuple[int, ...]
    bite: Fraction = Fraction(1, 4)
    cap: Fraction | None = None
    nodes: int = 2_000_000
    timing: bool = False
    workers: int = 1
    output: str | None = None


def _ints(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def parse_config(text: str) -> ExperimentConfig:
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in KEYS:
            raise ParseError(f"line {lineno}: expected 'key = value' with a known key, got {line!r}")
        raw[key] = value
    try:
        family = raw.get("family", "")
        if family not in FAMILIES:
            raise ParseError(f"family must be one of {', '.join(FAMILIES)}")
        k = _ints(raw.get("k", "3"))
        if family == "sts":
            sizes = [{"n": n} for n in _ints(raw.get("n", ""))]
        elif family == "random":
            rounds = int(raw.get("rounds", "2000"))
            sizes = [{"n": n, "k": kk, "rounds": rounds} for n, kk in product(_ints(raw.get("n", "")), k)]
        elif family == "kpartite":
            sizes = [{"q": q, "k": kk} for q, kk in product(_ints(raw.get("q", "")), k)]
        else:
            sizes = [{"q": q, "m": mm, "k": kk} for q, mm, kk in product(_ints(raw.get("q", "")),
                                                                     _ints(raw.get("m", "")), k)]
        algorithms = tuple(a.strip() for a in raw.get("algorithm", "nibble").split(",") if a.strip())
        seeds = tuple(_ints(raw.get("seeds", "")))
        cfg = ExperimentConfig(
            family=family,
            sizes=tuple(sizes),
            algorithms=algorithms,
            seeds=seeds,
            bite=Fraction(raw.get("bite", "1/4")),
            cap=Fraction(raw["cap"]) if "cap" in raw else None,
            nodes=int(raw.get("nodes", "2000000")),
            timing=raw.get("timing", "off") == "on",
            workers=int(raw.get("workers", "1")),
            output=raw.get("output"),
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if not cfg.sizes:
        raise ValueError("the instance range is empty")
    if not cfg.seeds:
        raise ValueError("the seed list is empty")
    if bad := [a for a in cfg.algorithms if a not in ALGORITHMS]:
        raise ValueError(f"unknown algorithm {bad[0]!r}")
    if cfg.workers < 1:
        raise ValueError("workers must be at least 1")
    return cfg


def _instance(family: str, size: dict, seed: int):
    if family == "sts":
        return steiner_triple(size["n"])
    if family == "kpartite":
        return complete_kpartite_linear(size["q"], size["k"])
    if family == "extremal":
        return extremal_construction(size["q"], size["m"], size["k"])
    return random_linear(size["n"], size["k"], size["rounds"], seed)


def _cell(args) -> dict:
    cfg, size, algorithm, seed = args
    H = _instance(cfg.family, size, seed)
    row = {"family": cfg.family, "n": H.n, "k": H.k, "delta_min": H.min_degree(), "algorithm": algorithm,
           "seed": seed}
    start = time.perf_counter()
    try:
        if algorithm == "nibble":
            M = nibble_matching(H, NibbleParams(bite=cfg.bite, seed=seed))
            row.update(matched_edges=len(M), covered=M.coverage(), status="ok")
        elif algorithm == "greedy":
            M = greedy_matching(H, seed)
            row.update(matched_edges=len(M), covered=M.coverage(), status="ok")
        elif algorithm == "exact":
            r = max_matching_exact(H, SearchBudget(cfg.nodes))
            row.update(matched_edges=r.size, covered=r.size * H.k, status="exact" if r.exact else "inexact")
        else:
            res = solve_pfm(H, cfg.cap)
            if isinstance(res, FractionalMatching):
                row.update(matched_edges=len(res.support()), covered=H.n, status="feasible")
            else:
                row.update(matched_edges=0, covered=0, status="infeasible")
    except LPTimeout:
        row.update(matched_edges=0, covered=0, status="timeout")
    except HypergraphError as exc:
        row.update(matched_edges=0, covered=0, status=f"error:{type(exc).__name__}")
    elapsed = (time.perf_counter() - start) * 1000
    row["runtime_ms"] = round(elapsed) if cfg.timing else 0
    return row


def cells(cfg: ExperimentConfig):
    """Canonical row order: instance, then algorithm, then seed."""
    for size in cfg.sizes:
        for algorithm in cfg.algorithms:
            for seed in cfg.seeds:
                yield cfg, size, algorithm, seed


def run_experiment(cfg: ExperimentConfig, out=None) -> list[dict]:
    """Run every cell and write CSV rows to ``out`` as they complete in
    canonical order.  Rows are identical for any worker count."""
    writer = csv.DictWriter(out, COLUMNS, lineterminator="\n") if out is not None else None
    if writer:
        writer.writeheader()
    rows = []
    jobs = list(cells(cfg))
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = pool.map(_cell, jobs)
            for row in results:
                rows.append(row)
                if writer:
                    writer.writerow(row)
                    out.flush()
    else:
        for job in jobs:
            row = _cell(job)
            rows.append(row)
            if writer:
                writer.writerow(row)
                out.flush()
    return rows


def run_config_file(path: str | Path) -> tuple[str, list[dict]]:
    cfg = parse_config(Path(path).read_text())
    buf = io.StringIO()
    rows = run_experiment(cfg, buf)
    return buf.getvalue(), rows
