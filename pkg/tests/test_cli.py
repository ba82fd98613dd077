"""Command-line front end: round trips, formats, exit codes, determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from polytree.cli import main
from polytree.io import read_sample_csv
from polytree.models import TreeKind, TreeModel, sample
from polytree.seeding import SeedPolicy


def _write_linear_pair_csv(path, n=2000, seed=70):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(n)
    b = (a + rng.standard_normal(n)) / np.sqrt(2)
    lines = ["cause,effect"]
    lines += [f"{float(a[i])!r},{float(b[i])!r}" for i in range(n)]
    path.write_text("\n".join(lines) + "\n")


class TestEstimate:
    def test_two_column_linear_pair(self, tmp_path, capsys):
        src = tmp_path / "pair.csv"
        _write_linear_pair_csv(src)
        out = tmp_path / "tree.dot"
        assert main(["estimate", str(src), "-o", str(out)]) == 0
        text = out.read_text()
        assert text.startswith("digraph")
        assert text.count("->") == 1
        report = json.loads((tmp_path / "tree.dot.report.json").read_text())
        assert report["p"] == 2
        assert len(report["edges"]) == 1
        assert "conflict_count" in report and "xi_summary" in report

    def test_json_format_is_single_file(self, tmp_path):
        src = tmp_path / "pair.csv"
        _write_linear_pair_csv(src, n=300)
        out = tmp_path / "tree.json"
        assert main(["estimate", str(src), "-o", str(out), "--format", "json"]) == 0
        report = json.loads(out.read_text())
        assert {"edges", "conflict_count", "xi_summary", "seed"} <= report.keys()
        assert not (tmp_path / "tree.json.report.json").exists()

    def test_edgelist_format(self, tmp_path):
        src = tmp_path / "pair.csv"
        _write_linear_pair_csv(src, n=300)
        out = tmp_path / "tree.txt"
        assert main(["estimate", str(src), "-o", str(out), "--format", "edgelist"]) == 0
        body = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert len(body) == 1
        fields = body[0].split()
        assert len(fields) == 4  # source target provenance weight

    def test_single_row_rejected(self, tmp_path, capsys):
        src = tmp_path / "one.csv"
        src.write_text("1.0,2.0\n")
        assert main(["estimate", str(src), "-o", str(tmp_path / "x.dot")]) == 2
        assert "2 data rows" in capsys.readouterr().err

    def test_string_column_requires_flag(self, tmp_path, capsys):
        src = tmp_path / "s.csv"
        src.write_text("a,b\nred,1.0\nblue,2.0\ngreen,3.0\n")
        assert main(["estimate", str(src), "-o", str(tmp_path / "x.dot")]) == 2
        err = capsys.readouterr().err
        assert "column 'a'" in err and "ordinal-encode" in err

    def test_ordinal_encoding_first_appearance_order(self, tmp_path):
        src = tmp_path / "s.csv"
        rows = ["state,score"]
        states = ["tx", "ca", "tx", "ny", "ca", "tx"] * 20
        rng = np.random.default_rng(71)
        for i, s in enumerate(states):
            rows.append(f"{s},{float(rng.standard_normal())!r}")
        src.write_text("\n".join(rows) + "\n")
        parsed = read_sample_csv(src, ordinal_encode=True)
        # tx first-appears first -> 1, ca -> 2, ny -> 3
        assert parsed.values[0, 0] == 1.0
        assert parsed.values[1, 0] == 2.0
        assert parsed.values[3, 0] == 3.0
        out = tmp_path / "t.dot"
        assert main(["estimate", str(src), "-o", str(out), "--ordinal-encode"]) == 0

    def test_missing_value_names_location(self, tmp_path, capsys):
        src = tmp_path / "m.csv"
        src.write_text("a,b\n1.0,2.0\n3.0,\n5.0,6.0\n")
        assert main(["estimate", str(src), "-o", str(tmp_path / "x.dot")]) == 2
        assert "row 3, column 'b'" in capsys.readouterr().err

    def test_unreadable_file(self, tmp_path, capsys):
        assert main(["estimate", str(tmp_path / "nope.csv"), "-o", str(tmp_path / "x.dot")]) == 2


class TestSimulate:
    def test_star_roundtrip(self, tmp_path):
        out = tmp_path / "sample.csv"
        assert main([
            "simulate", "--model", "star", "--p", "4", "--n", "5",
            "-o", str(out), "--seed", "9",
        ]) == 0
        truth = (tmp_path / "sample.csv.truth.csv").read_text().splitlines()
        assert truth[0] == "source,target"
        assert truth[1:] == ["X1,X2", "X1,X3", "X1,X4"]
        parsed = read_sample_csv(out)
        assert (parsed.n, parsed.p) == (5, 4)
        # round trip preserves the sampled values exactly
        direct = sample(TreeModel(TreeKind.STAR, 4), 5, SeedPolicy(9))
        np.testing.assert_array_equal(parsed.values, direct.values)

    def test_reverse_binary_truth_edges(self, tmp_path):
        out = tmp_path / "rb.csv"
        assert main([
            "simulate", "--model", "reverse_binary", "--p", "7", "--n", "3",
            "-o", str(out), "--truth-out", str(tmp_path / "truth.csv"),
        ]) == 0
        got = (tmp_path / "truth.csv").read_text().splitlines()[1:]
        assert got == ["X2,X1", "X3,X1", "X4,X2", "X5,X2", "X6,X3", "X7,X3"]

    def test_identical_reruns(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        args = ["simulate", "--model", "binary", "--p", "7", "--n", "20", "--seed", "4"]
        assert main(args + ["-o", str(a)]) == 0
        assert main(args + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_p_is_usage_error(self, tmp_path, capsys):
        assert main([
            "simulate", "--model", "binary", "--p", "14", "--n", "10",
            "-o", str(tmp_path / "x.csv"),
        ]) == 1
        assert "2^k" in capsys.readouterr().err


class TestBench:
    def test_small_grid_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        assert main([
            "bench", "--models", "linear,star", "--p", "5", "--n", "40,80",
            "--reps", "2", "-o", str(out), "--seed", "3",
        ]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "model,p,n,reps,skeleton_mean,skeleton_se,directed_mean,directed_se"
        assert len(lines) == 1 + 4  # 2 models x 1 p x 2 n
        stdout = capsys.readouterr().out
        assert "skeleton accuracy" in stdout and "directed accuracy" in stdout

    def test_rerun_is_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["bench", "--models", "linear", "--p", "4", "--n", "30",
                "--reps", "1", "--seed", "5"]
        assert main(args + ["-o", str(a)]) == 0
        assert main(args + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_invalid_binary_p_is_usage_error(self, tmp_path, capsys):
        assert main([
            "bench", "--models", "binary", "--p", "14", "--n", "50", "-o",
            str(tmp_path / "x.csv"),
        ]) == 1

    def test_unknown_model_is_usage_error(self, capsys):
        assert main(["bench", "--models", "ring", "--p", "4", "--n", "50"]) == 1

    def test_bad_flag_is_usage_error(self, capsys):
        assert main(["bench", "--models", "linear", "--p", "x", "--n", "50"]) == 1


class TestSubprocess:
    def test_module_entry_point_and_env_seed(self, tmp_path):
        out = tmp_path / "s.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "polytree", "simulate", "--model", "linear",
             "--p", "3", "--n", "4", "-o", str(out)],
            capture_output=True, text=True,
            env={"PATH": "/usr/bin:/bin", "POLYTREE_SEED": "123"},
        )
        assert proc.returncode == 0, proc.stderr
        direct = sample(TreeModel(TreeKind.LINEAR, 3), 4, SeedPolicy(123))
        parsed = read_sample_csv(out)
        np.testing.assert_array_equal(parsed.values, direct.values)
