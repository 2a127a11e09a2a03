# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
import math

import pandas as pd
import pytest

from locallab.bench import COLUMNS
from locallab.bench import fit_csv
from locallab.bench import fit_power_law
from locallab.bench import make_knowledge
from locallab.bench import parse_experiment
from locallab.bench import run_algorithm
from locallab.bench import run_bench
from locallab.bench import run_id
from locallab.bench import RunParams
from locallab.bench import write_results
from locallab.errors import ConfigError
from locallab.errors import InsufficientData
from locallab.utils import thread_count
from tests.conftest import path_tree


def sweep(text: str) -> pd.DataFrame:
    return run_bench(parse_experiment(text), threads=2)


def test_power_law_exact():
    ns = [10, 100, 1000, 10000]
    fit = fit_power_law(pd.DataFrame({"n": ns, "rounds_max": [n**0.5 for n in ns]}))
    assert fit.slope == pytest.approx(0.5, abs=1e-12)
    assert fit.intercept == pytest.approx(0, abs=1e-10)
    assert fit.r2 == pytest.approx(1)
    assert fit.points == 4


def test_power_law_with_factor():
    ns = [8, 64, 512, 4096, 32768]
    fit = fit_power_law(pd.DataFrame({"n": ns, "rounds_max": [7 * n ** (2 / 3) for n in ns]}))
    assert fit.slope == pytest.approx(2 / 3, abs=1e-12)
    assert fit.intercept == pytest.approx(math.log(7), abs=1e-10)


def test_power_law_uses_medians():
    frame = pd.DataFrame(
        {
            "n": [10, 10, 10, 100, 100, 100, 1000, 1000, 1000],
            "rounds_max": [1, 10, 1000, 100, 2, 5000, 1000, 1, 10**6],
        }
    )
    fit = fit_power_law(frame)
    assert fit.slope == pytest.approx(1.0, abs=1e-9)


def test_power_law_needs_three_sizes():
    with pytest.raises(InsufficientData):
        fit_power_law(pd.DataFrame({"n": [10, 10, 100], "rounds_max": [1, 2, 3]}))
    with pytest.raises(InsufficientData):
        fit_power_law(pd.DataFrame({"n": [1, 2, 3]}))


def test_fit_csv(tmp_path):
    path = tmp_path / "missing.csv"
    with pytest.raises(InsufficientData):
        fit_csv(path)
    frame = pd.DataFrame({"n": [4, 16, 64], "rounds_max": [2, 4, 8]})
    frame.to_csv(path, index=False)
    assert fit_csv(path).slope == pytest.approx(0.5)


def test_sweep_rows_are_ordered_and_verified():
    frame = sweep("algo=rc-known-n\nfamily=path\nk=2\nn=200,50,100\nseeds=2,1\n")
    assert list(frame.columns) == COLUMNS
    assert list(frame.n) == [50, 50, 100, 100, 200, 200]
    assert list(frame.seed) == [1, 2] * 3
    assert frame.verified.all()
    assert (frame.N == frame.n).all()


@pytest.mark.parametrize(
    "text",
    [
        "algo=rc-log\nfamily=random\nn=100,300\nseeds=0,1",
        "algo=rc-poly-n\nfamily=path\nc=2\nn=64,100\nseeds=0",
        "algo=rc-knuth-io\nfamily=path\nN=n\nn=30,60\nseeds=0",
        "algo=halfcol-known-n\nfamily=lb-uniform\nk=3\nn=30,60\nseeds=0",
        "algo=halfcol-id\nfamily=lb-uniform\nc=2\nn=50,100\nseeds=0",
        "algo=halfcol-rand-k2\nfamily=caterpillar2\nn=30,40\nseeds=0,1",
        "algo=halfcol-rand-k3\nfamily=threelevel\nk=3\nn=30\nseeds=0,1,2",
    ],
)
def test_sweeps_verify(text):
    frame = sweep(text)
    assert len(frame) > 0
    assert frame.verified.all()
    assert (frame.rounds_max >= frame.rounds_avg).all()


def test_upper_bound_recorded():
    frame = sweep("algo=rc-poly-n\nfamily=path\nc=2\nn=64\nseeds=0")
    assert frame.N.iloc[0] == 64**2


def test_sweeps_are_deterministic():
    text = "algo=halfcol-rand-k2\nfamily=random\nn=80\nseeds=0,1,2,3"
    pd.testing.assert_frame_equal(sweep(text), sweep(text))


def test_run_id():
    cfg = parse_experiment("algo=rc-log\nfamily=path\nn=10\nseeds=1")
    assert run_id(cfg, 10, 1) == run_id(cfg.model_copy(update={"threads": 8}), 10, 1)
    assert run_id(cfg, 10, 1) != run_id(cfg, 10, 2)
    assert len(run_id(cfg, 10, 1)) == 12


def test_no_seeds_gives_header_only(tmp_path):
    frame = sweep("algo=rc-log\nfamily=path\nn=10\n")
    assert frame.empty
    out = tmp_path / "out.csv"
    write_results(frame, out)
    assert out.read_text() == ",".join(COLUMNS) + "\n"


def test_result_floats_are_compact(tmp_path):
    frame = sweep("algo=rc-log\nfamily=path\nn=3\nseeds=0")
    frame.loc[0, "rounds_avg"] = 1 / 3
    out = tmp_path / "out.csv"
    write_results(frame, out)
    assert "0.333333333333," in out.read_text()


@pytest.mark.parametrize(
    "text",
    [
        "algo=rc-log\nalgo=rc-log\nfamily=path",
        "algo=rc-log\nfamily path",
        "algo=rc-log\nfamily=path\ncolor=blue",
        "algo=rc-log\nfamily=path\nn=10,-3",
        "algo=rc-fast\nfamily=path",
        "algo=halfcol-rand-k3\nfamily=path\nknowledge=exact",
        "algo=rc-log\nfamily=path\nc=0.5",
    ],
)
def test_bad_experiments(text):
    with pytest.raises(ConfigError):
        parse_experiment(text)


def test_experiment_comments_and_defaults():
    cfg = parse_experiment("# sweep\nalgo=rc-log  # fastest\n\nfamily=path\nn=1 2  3\n")
    assert cfg.n == [1, 2, 3]
    assert cfg.seeds == []
    assert cfg.k == 2
    assert cfg.N == "n^c"


def test_unknown_names():
    with pytest.raises(ConfigError):
        run_algorithm("rc-fast", path_tree(3), RunParams(), make_knowledge("none", 3)[0])
    with pytest.raises(ConfigError):
        make_knowledge("oracle", 3)


def test_thread_count(monkeypatch):
    assert thread_count(3) == 3
    monkeypatch.setenv("LOCALLAB_THREADS", "7")
    assert thread_count() == 7
    monkeypatch.setenv("LOCALLAB_THREADS", "many")
    assert thread_count() >= 1
