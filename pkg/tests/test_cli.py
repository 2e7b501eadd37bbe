from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from linhyper import lhg
from linhyper.cli import main
from linhyper.embedding import verify_embedding, verify_linear_cycle, Embedding
from linhyper.errors import ParseError
from linhyper.experiment import COLUMNS, parse_config, run_experiment
from linhyper.formats import (dump_matching, dump_pfm, load_embedding, load_matching, load_pfm, load_tiling)
from linhyper.fractional import FarkasCertificate, FractionalMatching, verify_certificate, verify_fm
from linhyper.generators import cycle_pattern, steiner_triple
from linhyper.nibble import Matching, verify_matching
from linhyper.tiling import verify_tiling


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path, capsys):
    paths = {}
    for name, n in (("fano", 7), ("sts9", 9), ("sts63", 63), ("sts99", 99)):
        p = tmp_path / f"{name}.lhg"
        assert run(capsys, "gen", "sts", "--n", n, "-o", p)[0] == 0
        paths[name] = p
    p = tmp_path / "ext.lhg"
    run(capsys, "gen", "extremal", "--q", 5, "--m", 1, "-o", p)
    paths["ext"] = p
    p = tmp_path / "p2.lhg"
    run(capsys, "gen", "pattern", "--kind", "path", "--length", 2, "-o", p)
    paths["p2"] = p
    return paths


class TestGen:
    def test_sts9_header(self, files):
        assert files["sts9"].read_text().splitlines()[0] == "lhg 1 3 9 12"

    @pytest.mark.parametrize("argv,header", [
        (("kpartite", "--q", 4, "--k", 3), "lhg 1 3 12 16"),
        (("extremal", "--q", 7, "--m", 2), "lhg 1 3 18 28"),
        (("random", "--n", 20, "--rounds", 0), "lhg 1 3 20 0"),
        (("pattern", "--kind", "cycle", "--length", 5), "lhg 1 3 10 5"),
        (("pattern", "--kind", "subdivision", "--base", "0-1,1-2", "--lengths", 2), "lhg 1 3 9 4"),
        (("mols", "--q", 5, "--t", 2), "mols 5 2"),
    ])
    def test_headers(self, capsys, argv, header):
        code, out, _ = run(capsys, "gen", *argv)
        assert code == 0 and out.splitlines()[0] == header

    def test_bad_order_is_usage(self, capsys):
        assert run(capsys, "gen", "sts", "--n", 8)[0] == 1

    def test_spec_out(self, capsys, tmp_path):
        spec = tmp_path / "c.json"
        run(capsys, "gen", "pattern", "--kind", "cycle", "--length", 6, "--spec-out", spec)
        assert json.loads(spec.read_text()) == [{"u": 8, "first": 4, "second": 5, "v": 0}]


class TestFracmatch:
    def test_sts9_quarters(self, capsys, files):
        code, out, _ = run(capsys, "fracmatch", "--input", files["sts9"])
        lines = out.splitlines()
        assert code == 0 and lines[0] == "FEASIBLE"
        assert lines[1:] == [f"{e} 1/4" for e in range(12)]
        fm = load_pfm(out)
        assert isinstance(fm, FractionalMatching) and verify_fm(lhg.load(files["sts9"]), fm)

    def test_infeasible_roundtrip(self, capsys, files):
        code, out, _ = run(capsys, "fracmatch", "--input", files["fano"], "--cap", "1/5")
        assert code == 2 and out.startswith("INFEASIBLE")
        cert = load_pfm(out)
        assert isinstance(cert, FarkasCertificate) and cert.cap == Fraction(1, 5)
        assert verify_certificate(lhg.load(files["fano"]), cert)

    def test_uncapped_certificate(self, capsys, files):
        code, out, _ = run(capsys, "fracmatch", "--input", files["ext"])
        assert code == 2 and "z " not in out
        assert verify_certificate(lhg.load(files["ext"]), load_pfm(out))

    def test_dlimit(self, capsys, files):
        assert run(capsys, "fracmatch", "--input", files["fano"], "--dlimit", 2)[0] == 3
        code, _, err = run(capsys, "fracmatch", "--input", files["fano"], "--dlimit", 3)
        assert code == 0 and "D 3" in err

    def test_regularize(self, capsys, files, tmp_path):
        out_path = tmp_path / "reg.lhg"
        assert run(capsys, "regularize", "--input", files["sts9"], "-o", out_path)[0] == 0
        F = lhg.load(out_path)
        assert set(F.degrees()) == {4}


class TestNibbleTile:
    def test_nibble_roundtrip(self, capsys, files):
        code, out, _ = run(capsys, "nibble", "--input", files["sts63"], "--seed", 3)
        edges, covered, n = load_matching(out)
        H = lhg.load(files["sts63"])
        M = Matching(tuple(edges), tuple(H.edges[e] for e in edges), n)
        assert code == 0 and n == 63 and covered == M.coverage()
        assert verify_matching(H, M, maximal=True)

    def test_no_finish(self, capsys, files):
        code, out, _ = run(capsys, "nibble", "--input", files["sts63"], "--no-finish", "--bite", "1/10")
        assert code == 0 and out.splitlines()[-1].startswith("covered")

    def test_tile_roundtrip(self, capsys, files):
        code, out, _ = run(capsys, "tile", "--input", files["sts99"], "--tree", files["p2"], "--seed", 1)
        copies, covered, n = load_tiling(out)
        H = lhg.load(files["sts99"])
        assert code == 0 and covered == 5 * len(copies) and n == 99
        assert verify_tiling(H, lhg.load(files["p2"]), copies)

    def test_tile_infeasible(self, capsys, files):
        code, out, _ = run(capsys, "tile", "--input", files["ext"], "--tree", files["p2"])
        assert code == 2 and out.startswith("INFEASIBLE")


class TestEmbed:
    def test_embed_cycle_roundtrip(self, capsys, files):
        code, out, _ = run(capsys, "embed-cycle", "--input", files["sts63"], "--length", 10, "--seed", 1)
        vmap, emap = load_embedding(out)
        H = lhg.load(files["sts63"])
        assert code == 0
        assert verify_linear_cycle(H, Embedding(cycle_pattern(10, 3), vmap, emap))

    def test_embed_with_bare_paths(self, capsys, files, tmp_path):
        pat, spec = tmp_path / "c.lhg", tmp_path / "c.json"
        run(capsys, "gen", "pattern", "--kind", "cycle", "--length", 8, "-o", pat, "--spec-out", spec)
        code, out, _ = run(capsys, "embed", "--input", files["sts63"], "--pattern", pat, "--bare-paths", spec)
        vmap, emap = load_embedding(out)
        assert code == 0 and verify_embedding(lhg.load(files["sts63"]), lhg.load(pat), vmap, emap)

    def test_stage_failure(self, capsys, files, tmp_path):
        pat = tmp_path / "c.lhg"
        run(capsys, "gen", "pattern", "--kind", "cycle", "--length", 5, "-o", pat)
        code, out, err = run(capsys, "embed", "--input", files["sts63"], "--pattern", pat)
        assert code == 4 and out == "" and "stage decompose" in err

    def test_cycle_too_long_is_usage(self, capsys, files):
        assert run(capsys, "embed-cycle", "--input", files["sts9"], "--length", 20)[0] == 1


class TestOracleCommands:
    def test_maxmatch_fano(self, capsys, files):
        code, out, _ = run(capsys, "maxmatch", "--input", files["fano"], "--exact")
        assert code == 0 and out.splitlines()[0] == "size 1 exact"

    def test_maxmatch_budget(self, capsys, files):
        code, out, _ = run(capsys, "maxmatch", "--input", files["sts63"], "--exact", "--nodes", 3)
        assert code == 3 and "inexact" in out.splitlines()[0]

    def test_oracle_embed(self, capsys, files):
        code, out, _ = run(capsys, "oracle-embed", "--input", files["fano"], "--pattern", files["p2"])
        assert code == 0 and out.splitlines()[0] == "found"
        vmap, emap = load_embedding("\n".join(out.splitlines()[1:]))
        assert verify_embedding(lhg.load(files["fano"]), lhg.load(files["p2"]), vmap, emap)

    def test_oracle_not_found(self, capsys, files, tmp_path):
        pat = tmp_path / "m.lhg"
        run(capsys, "gen", "pattern", "--kind", "matching", "--count", 2, "-o", pat)
        code, out, _ = run(capsys, "oracle-embed", "--input", files["fano"], "--pattern", pat)
        assert code == 2 and out.strip() == "not-found"

    def test_l2paths(self, capsys, files):
        code, out, _ = run(capsys, "l2paths", "--input", files["fano"], "--u", 0, "--v", 1)
        assert code == 0 and out.splitlines()[:2] == ["total 4", "disjoint 1 exact"]


class TestErrors:
    def test_missing_subcommand(self, capsys):
        assert run(capsys)[0] == 1

    def test_unknown_option(self, capsys):
        assert run(capsys, "nibble", "--frobnicate")[0] == 1

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "fracmatch", "--input", tmp_path / "nope.lhg")[0] == 5

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.lhg"
        bad.write_text("lhg 1 3 4 2\n0 1 2\n")
        assert run(capsys, "fracmatch", "--input", bad)[0] == 5

    def test_help(self, capsys):
        assert run(capsys, "--help")[0] == 0

    def test_module_entry(self, tmp_path):
        out = subprocess.run([sys.executable, "-m", "linhyper", "gen", "sts", "--n", "7"], capture_output=True,
                             text=True, check=True).stdout
        assert out.splitlines()[0] == "lhg 1 3 7 7"


class TestFormats:
    def test_pfm_rejects_garbage(self):
        with pytest.raises(ParseError):
            load_pfm("MAYBE\n")
        with pytest.raises(ParseError):
            load_pfm("FEASIBLE\n1 2 3\n")

    def test_matching_needs_summary(self):
        with pytest.raises(ParseError):
            load_matching("1\n2\n")
        assert load_matching(dump_matching([4, 2], 6, 9)) == ([4, 2], 6, 9)

    def test_embedding_needs_all_entries(self):
        with pytest.raises(ParseError):
            load_embedding("map 0 3\nmap 2 4\n")

    def test_pfm_writer_prints_fractions(self):
        text = dump_pfm(FractionalMatching({0: Fraction(1), 1: Fraction(0)}, True))
        assert text == "FEASIBLE\n0 1/1\n"


class TestExperiment:
    CFG = "family = extremal\nq = 5, 7\nm = 1..2\nalgorithm = exact, greedy\nseeds = 0, 1\n"

    def test_rows(self):
        cfg = parse_config(self.CFG)
        buf = io.StringIO()
        rows = run_experiment(cfg, buf)
        assert len(rows) == 4 * 2 * 2
        parsed = list(csv.DictReader(io.StringIO(buf.getvalue())))
        assert tuple(parsed[0]) == COLUMNS
        for r in parsed:
            n, m = int(r["n"]), (1 if int(r["n"]) in (13, 19) else 2)
            assert int(r["covered"]) <= n - 3 * m
            assert r["runtime_ms"] == "0"

    def test_workers_do_not_change_rows(self):
        one = run_experiment(parse_config(self.CFG))
        two = run_experiment(parse_config(self.CFG + "workers = 2\n"))
        assert one == two

    @pytest.mark.parametrize("text", ["family = sts\nn = 63\nseeds =\n", "family = sts\nn =\nseeds = 1\n",
                                      "family = sts\nn = 63\nseeds = 1\nalgorithm = magic\n"])
    def test_usage_errors(self, text):
        with pytest.raises(ValueError):
            parse_config(text)

    @pytest.mark.parametrize("text", ["family = blob\n", "bogus = 3\n", "just words\n", "family = sts\nn = x\n"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_config(text)

    def test_cli_exit_codes(self, capsys, tmp_path):
        empty = tmp_path / "empty.cfg"
        empty.write_text("family = sts\nn = 63\nseeds =\n")
        assert run(capsys, "experiment", "--config", empty)[0] == 1
        good = tmp_path / "good.cfg"
        out = tmp_path / "rows.csv"
        good.write_text(f"family = sts\nn = 63\nseeds = 0..2\noutput = {out}\n")
        assert run(capsys, "experiment", "--config", good)[0] == 0
        assert len(out.read_text().splitlines()) == 4

    def test_fracmatch_and_timing(self):
        cfg = parse_config("family = kpartite\nq = 3\nk = 3\nalgorithm = fracmatch\ncap = 1/2\nseeds = 0\n"
                           "timing = on\n")
        (row,) = run_experiment(cfg)
        assert row["status"] == "feasible" and row["covered"] == 9
