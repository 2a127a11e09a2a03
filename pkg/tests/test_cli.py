# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
import pandas as pd
import pytest
from typer.testing import CliRunner

from locallab import __version__
from locallab_cli import app

runner = CliRunner()


def invoke(*args):
    return runner.invoke(app, [str(a) for a in args])


@pytest.fixture
def lb13_file(tmp_path):
    path = tmp_path / "lb13.txt"
    result = invoke("gen", "lb-graph", "--k", 2, "--lengths", "2,3", "--out", path)
    assert result.exit_code == 0, result.output
    return path


def test_version():
    result = invoke("--version")
    assert result.exit_code == 0
    assert __version__ in result.output


@pytest.mark.parametrize(
    "args, n",
    [
        (["lb-graph", "--k", 2, "--lengths", "2,3"], 13),
        (["caterpillar2", "--p", 3, "--q", 2], 9),
        (["path", "--n", 1], 1),
        (["threelevel", "--ell", 1, "--ell-prime", 1, "--i", 1], 13),
        (["random", "--n", 40, "--seed", 3, "--ids", "random", "--c", 2], 40),
    ],
)
def test_gen(args, n):
    result = invoke("gen", *args)
    assert result.exit_code == 0, result.output
    assert result.output.startswith(f"tree {n}\n")
    assert result.output.count("\nedge ") == n - 1


@pytest.mark.parametrize(
    "args",
    [["caterpillar2", "--p", 3], ["hypercube", "--n", 8], ["lb-graph", "--k", 2, "--lengths", "3"]],
)
def test_gen_rejects_bad_input(args):
    assert invoke("gen", *args).exit_code == 2


def test_run_and_verify_halfcol(lb13_file, tmp_path):
    labels = tmp_path / "labels.txt"
    trace = tmp_path / "trace.csv"
    result = invoke("run", "halfcol-known-n", lb13_file, "--k", 2, "--labels", labels, "--trace", trace)
    assert result.exit_code == 0, result.output
    assert "True" in result.output
    frame = pd.read_csv(trace)
    assert list(frame.columns) == ["node", "id", "level", "decision_round", "output"]
    assert len(frame) == 14

    result = invoke("verify", "halfcol", lb13_file, labels)
    assert result.exit_code == 0, result.output
    assert "ok halfcol" in result.output

    mutated = tmp_path / "mutated.txt"
    lines = labels.read_text().splitlines()
    lines[0] = "out 0 D"
    mutated.write_text("\n".join(lines) + "\n")
    result = invoke("verify", "halfcol", lb13_file, mutated)
    assert result.exit_code == 3
    assert "violation top-decline [0]" in result.output


def test_run_and_verify_decomposition(tmp_path):
    instance = tmp_path / "random.txt"
    assert invoke("gen", "random", "--n", 120, "--seed", 5, "--out", instance).exit_code == 0
    labels = tmp_path / "rc.txt"
    result = invoke("run", "rc-log", instance, "--labels", labels)
    assert result.exit_code == 0, result.output
    assert invoke("verify", "decomposition", instance, labels).exit_code == 0
    assert invoke("verify", "rc-lcl", instance, labels).exit_code == 0


def test_run_rejects_small_upper_bound(tmp_path):
    instance = tmp_path / "path.txt"
    assert invoke("gen", "path", "--n", 10, "--out", instance).exit_code == 0
    result = invoke("run", "rc-poly-n", instance, "--N", 5, "--c", 2)
    assert result.exit_code == 2
    assert invoke("run", "rc-poly-n", instance, "--N", 50, "--c", 2).exit_code == 0


def test_run_rejects_unknown_algorithm(lb13_file):
    assert invoke("run", "rc-fast", lb13_file).exit_code == 2
    assert invoke("run", "rc-log", lb13_file, "--known-n", "--promise").exit_code == 2


def test_verify_rejects_unknown_problem(lb13_file):
    assert invoke("verify", "coloring", lb13_file, lb13_file).exit_code == 2


def test_verify_rejects_malformed_labeling(lb13_file, tmp_path):
    labels = tmp_path / "labels.txt"
    labels.write_text("out 0 Q\n")
    assert invoke("verify", "halfcol", lb13_file, labels).exit_code == 2


def test_solve_alpha():
    result = invoke("solve-alpha", "--k", 3, "--c", 3)
    assert result.exit_code == 0, result.output
    assert "0.2456" in result.output
    assert "i0 = 1" in result.output
    assert "ok alpha" in result.output


def test_solve_alpha_table(tmp_path):
    out = tmp_path / "alpha.csv"
    result = invoke("solve-alpha", "--table", "--ks", "2,3", "--cs", "1,3", "--out", out)
    assert result.exit_code == 0, result.output
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["k", "c", "alpha1", "exponent", "i0"]
    assert len(frame) == 4


def test_solve_alpha_domain():
    assert invoke("solve-alpha", "--k", 1).exit_code == 2


def test_bench_and_fit(tmp_path):
    experiment = tmp_path / "sweep.txt"
    experiment.write_text("algo=rc-known-n\nfamily=path\nn=100,400,1600\nseeds=0,1\n")
    results = tmp_path / "results.csv"
    result = invoke("bench", experiment, "--out", results, "--threads", 2)
    assert result.exit_code == 0, result.output
    assert len(pd.read_csv(results)) == 6

    result = invoke("fit", results)
    assert result.exit_code == 0, result.output
    assert result.output.startswith("slope=")
    assert "points=3" in result.output


def test_bench_rejects_bad_experiment(tmp_path):
    experiment = tmp_path / "sweep.txt"
    experiment.write_text("algo=rc-known-n\nfamily=path\nn=100\nspeed=fast\n")
    assert invoke("bench", experiment).exit_code == 2


def test_fit_needs_three_sizes(tmp_path):
    results = tmp_path / "results.csv"
    results.write_text("n,rounds_max\n10,3\n20,4\n")
    assert invoke("fit", results).exit_code == 2


def test_halflog_table():
    result = invoke("halflog", "--points", 5, "--x-max", 100)
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "x,f(x),h(x)"
    assert len(lines) == 6


def test_halflog_small_base():
    assert invoke("halflog", "--base", 1.2).exit_code == 2
