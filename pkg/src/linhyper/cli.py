"""Command-line entry point.

Machine-readable output goes to stdout, diagnostics to stderr.  Exit codes:
0 success, 1 usage, 2 infeasible or not found, 3 timeout or resource
limit, 4 embedding stage failure, 5 I/O or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import lhg
from .embedding import BarePath, EmbedParams, PatternSpec, embed_linear_cycle, embed_pattern, pattern_spec_for
from .errors import (DenominatorOverflow, InfeasibleHost, LPTimeout, ParseError, StageFailure)
from .experiment import parse_config, run_experiment
from .formats import dump_embedding, dump_matching, dump_pfm, dump_tiling, frac
from .fractional import FarkasCertificate, regularize, solve_pfm
from .generators import (as_pattern, complete_kpartite_linear, extremal_construction, format_mols, make_pattern,
                         mols, random_linear, steiner_triple)
from .hypergraph import LinearKGraph, MultiKGraph
from .nibble import NibbleParams, greedy_matching, nibble_matching
from .oracle import SearchBudget, count_l2_paths, find_embedding_exact, max_matching_exact
from .tiling import tree_tiling

OK, USAGE, INFEASIBLE, TIMEOUT, STAGE, IOERR = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _simple(path: str) -> LinearKGraph:
    H = lhg.load(path)
    if isinstance(H, MultiKGraph):
        raise ParseError(f"{path}: expected a simple linear hypergraph, got a multigraph")
    return H


def _err(*parts) -> None:
    print(*parts, file=sys.stderr)


# ---------------------------------------------------------------- subcommands

def cmd_gen(a) -> int:
    if a.family == "mols":
        _write(format_mols(mols(a.q, a.t)), a.output)
        return OK
    if a.family == "sts":
        H = steiner_triple(a.n)
    elif a.family == "kpartite":
        H = complete_kpartite_linear(a.q, a.k)
    elif a.family == "extremal":
        H = extremal_construction(a.q, a.m, a.k)
    elif a.family == "random":
        H = random_linear(a.n, a.k, a.rounds, a.seed)
    else:
        params = {"length": a.length, "count": a.count, "edges": a.edges, "seed": a.seed}
        if a.kind == "subdivision":
            if not a.base:
                raise UsageError("subdivision needs --base, e.g. 0-1,1-2,2-0")
            try:
                params["base"] = [tuple(int(x) for x in pair.split("-")) for pair in a.base.split(",")]
            except ValueError:
                raise UsageError(f"bad --base {a.base!r}") from None
            params["lengths"] = a.lengths
        P = make_pattern(a.kind, a.k, **params)
        _write(lhg.dumps(P.graph, f"pattern {a.kind}"), a.output)
        if a.spec_out:
            spec = pattern_spec_for(P)
            Path(a.spec_out).write_text(json.dumps([vars(b) for b in spec.bare_paths]) + "\n")
        return OK
    _write(lhg.dumps(H), a.output)
    return OK


def cmd_fracmatch(a) -> int:
    H = _simple(a.input)
    res = solve_pfm(H, a.cap, max_pivots=a.pivots)
    sys.stdout.write(dump_pfm(res))
    if isinstance(res, FarkasCertificate):
        return INFEASIBLE
    if a.dlimit is not None:
        reg = regularize(H, res, a.dlimit, a.cap)
        _err(f"D {reg.D}")
    return OK


def cmd_regularize(a) -> int:
    H = _simple(a.input)
    res = solve_pfm(H, a.cap, max_pivots=a.pivots)
    if isinstance(res, FarkasCertificate):
        sys.stdout.write(dump_pfm(res))
        return INFEASIBLE
    reg = regularize(H, res, a.dlimit, a.cap)
    _write(lhg.dumps(reg.F, f"D {reg.D}"), a.output)
    _err(f"D {reg.D}")
    return OK


def cmd_nibble(a) -> int:
    F = lhg.load(a.input)
    if a.greedy:
        M = greedy_matching(F, a.seed)
    else:
        params = NibbleParams(bite=a.bite, seed=a.seed, greedy_finish=not a.no_finish,
                              polish=0 if a.no_finish else a.polish)
        M = nibble_matching(F, params)
    sys.stdout.write(dump_matching(M.edges, M.coverage(), F.n))
    return OK


def cmd_tile(a) -> int:
    H = _simple(a.input)
    T = as_pattern(_simple(a.tree), "tree")
    params = NibbleParams(bite=a.bite, seed=a.seed)
    try:
        res = tree_tiling(H, T, a.epsilon, a.cap, params, a.root, not a.no_regularize, a.dlimit)
    except InfeasibleHost as exc:
        sys.stdout.write(dump_pfm(exc.certificate))
        return INFEASIBLE
    sys.stdout.write(dump_tiling(res.copies, res.covered, H.n))
    return OK


def _embed_params(a) -> EmbedParams:
    return EmbedParams(m=a.m, M=a.M, eta=a.eta, seed=a.seed, attempts=a.attempts)


def _load_spec(F: LinearKGraph, path: str | None) -> PatternSpec:
    P = as_pattern(F, "forest")
    if path is None:
        return PatternSpec(P)
    try:
        raw = json.loads(Path(path).read_text())
        bare = []
        for item in raw:
            if isinstance(item, dict):
                bare.append(BarePath(int(item["u"]), int(item["first"]), int(item["second"]), int(item["v"])))
            else:
                u, e1, e2, v = (int(x) for x in item)
                bare.append(BarePath(u, e1, e2, v))
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"{path}: bad bare-path list ({exc})") from exc
    return PatternSpec(P, tuple(bare))


def _report_embedding(emb) -> int:
    sys.stdout.write(dump_embedding(emb.vertex_map, emb.edge_map))
    _err(f"embedded on attempt {emb.diagnostics.get('attempt', 0)}")
    return OK


def cmd_embed(a) -> int:
    H = _simple(a.input)
    spec = _load_spec(_simple(a.pattern), a.bare_paths)
    return _report_embedding(embed_pattern(H, spec, _embed_params(a)))


def cmd_embed_cycle(a) -> int:
    H = _simple(a.input)
    try:
        emb = embed_linear_cycle(H, a.length, _embed_params(a))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return _report_embedding(emb)


def cmd_maxmatch(a) -> int:
    H = lhg.load(a.input)
    if a.exact:
        r = max_matching_exact(H, SearchBudget(a.nodes))
        print(f"size {r.size} {'exact' if r.exact else 'inexact'}")
        for e in r.witness.edges:
            print(f"edge {e}")
        return OK if r.exact else TIMEOUT
    M = greedy_matching(H, a.seed)
    print(f"size {len(M)} heuristic")
    for e in M.edges:
        print(f"edge {e}")
    return OK


def cmd_oracle_embed(a) -> int:
    H = _simple(a.input)
    F = _simple(a.pattern)
    r = find_embedding_exact(H, F, SearchBudget(a.nodes))
    print(r.status)
    if r.status == "found":
        sys.stdout.write(dump_embedding(r.vertex_map, r.edge_map))
        return OK
    return INFEASIBLE if r.status == "not-found" else TIMEOUT


def cmd_l2paths(a) -> int:
    H = _simple(a.input)
    try:
        r = count_l2_paths(H, a.u, a.v, SearchBudget(a.nodes))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"total {r.total}")
    print(f"disjoint {r.max_internally_disjoint} {'exact' if r.exact else 'lower-bound'}")
    for e1, e2 in r.paths:
        print(f"path {e1} {e2}")
    return OK if r.exact else TIMEOUT


def cmd_experiment(a) -> int:
    cfg = parse_config(Path(a.config).read_text())
    out_path = a.output or cfg.output
    handle = open(out_path, "w") if out_path and out_path != "-" else sys.stdout
    try:
        rows = run_experiment(cfg, handle)
    finally:
        if handle is not sys.stdout:
            handle.close()
    statuses = {r["status"] for r in rows}
    if "timeout" in statuses:
        return TIMEOUT
    if any(s.startswith("error") for s in statuses):
        return STAGE
    return OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="linhyper", description="Matchings, tilings and embeddings in linear k-uniform hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate an instance or pattern")
    fam = g.add_subparsers(dest="family", required=True, parser_class=_Parser)
    s = fam.add_parser("sts", help="Steiner triple system")
    s.add_argument("--n", type=int, required=True)
    s = fam.add_parser("kpartite", help="complete k-partite linear k-graph")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--k", type=int, default=3)
    s = fam.add_parser("extremal", help="extremal construction")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, default=3)
    s = fam.add_parser("random", help="random greedy linear k-graph")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--rounds", type=int, default=2000)
    s.add_argument("--seed", type=int, default=0)
    s = fam.add_parser("mols", help="mutually orthogonal Latin squares")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s = fam.add_parser("pattern", help="path, cycle, star, matching, tree or subdivision pattern")
    s.add_argument("--kind", required=True,
                   choices=["path", "cycle", "star", "matching", "tree", "subdivision"])
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--length", type=int, default=2)
    s.add_argument("--count", type=int, default=2)
    s.add_argument("--edges", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--base", help="subdivision base edges as a-b,c-d,...")
    s.add_argument("--lengths", type=int, default=2)
    s.add_argument("--spec-out", help="write the default bare paths as JSON")
    for name in ("sts", "kpartite", "extremal", "random", "mols", "pattern"):
        fam.choices[name].add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("fracmatch", help="perfect fractional matching or certificate")
    s.add_argument("--input", required=True)
    s.add_argument("--cap", type=_fraction)
    s.add_argument("--dlimit", type=int)
    s.add_argument("--pivots", type=int, default=200_000)
    s.set_defaults(func=cmd_fracmatch)

    s = sub.add_parser("regularize", help="regular multigraph from a fractional matching")
    s.add_argument("--input", required=True)
    s.add_argument("--cap", type=_fraction)
    s.add_argument("--dlimit", type=int)
    s.add_argument("--pivots", type=int, default=200_000)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_regularize)

    s = sub.add_parser("nibble", help="almost-perfect matching")
    s.add_argument("--input", required=True)
    s.add_argument("--bite", type=_fraction, default=Fraction(1, 4))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--polish", type=int, default=NibbleParams().polish)
    s.add_argument("--no-finish", action="store_true")
    s.add_argument("--greedy", action="store_true", help="plain random greedy instead")
    s.set_defaults(func=cmd_nibble)

    s = sub.add_parser("tile", help="almost-spanning tree tiling")
    s.add_argument("--input", required=True)
    s.add_argument("--tree", required=True)
    s.add_argument("--epsilon", type=_fraction, default=Fraction(1, 10))
    s.add_argument("--cap", type=_fraction)
    s.add_argument("--dlimit", type=int)
    s.add_argument("--bite", type=_fraction, default=Fraction(1, 4))
    s.add_argument("--root", type=int, default=0)
    s.add_argument("--no-regularize", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_tile)

    for name, func in (("embed", cmd_embed), ("embed-cycle", cmd_embed_cycle)):
        s = sub.add_parser(name, help="near-spanning pattern embedding" if name == "embed" else "long linear cycle")
        s.add_argument("--input", required=True)
        if name == "embed":
            s.add_argument("--pattern", required=True)
            s.add_argument("--bare-paths")
        else:
            s.add_argument("--length", type=int, required=True)
        s.add_argument("--m", type=int, default=EmbedParams.m)
        s.add_argument("--M", type=int)
        s.add_argument("--eta", type=_fraction, default=EmbedParams.eta)
        s.add_argument("--attempts", type=int, default=EmbedParams.attempts)
        s.add_argument("--seed", type=int, default=0)
        s.set_defaults(func=func)

    s = sub.add_parser("maxmatch", help="maximum matching (exact or greedy)")
    s.add_argument("--input", required=True)
    s.add_argument("--exact", action="store_true")
    s.add_argument("--nodes", type=int, default=SearchBudget.nodes)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_maxmatch)

    s = sub.add_parser("oracle-embed", help="exhaustive pattern search")
    s.add_argument("--input", required=True)
    s.add_argument("--pattern", required=True)
    s.add_argument("--nodes", type=int, default=SearchBudget.nodes)
    s.set_defaults(func=cmd_oracle_embed)

    s = sub.add_parser("l2paths", help="length-2 paths between two vertices")
    s.add_argument("--input", required=True)
    s.add_argument("--u", type=int, required=True)
    s.add_argument("--v", type=int, required=True)
    s.add_argument("--nodes", type=int, default=SearchBudget.nodes)
    s.set_defaults(func=cmd_l2paths)

    s = sub.add_parser("experiment", help="CSV sweep from a key = value config")
    s.add_argument("--config", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_experiment)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _err(exc)
        return USAGE
    except SystemExit as exc:  # --help
        return USAGE if exc.code else OK
    except StageFailure as exc:
        _err(f"stage {exc.stage}")
        _err(str(exc))
        return STAGE
    except (LPTimeout, DenominatorOverflow) as exc:
        _err(str(exc))
        return TIMEOUT
    except ParseError as exc:
        _err(f"parse error: {exc}")
        return IOERR
    except OSError as exc:
        _err(f"I/O error: {exc}")
        return IOERR
    except ValueError as exc:
        _err(f"usage error: {exc}")
        return USAGE


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
