#!/usr/bin/env python
# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
from collections.abc import Iterator
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import Optional

import typer
from rich.console import Console
from rich.table import Table

from locallab import __version__
from locallab.alpha import alpha_table
from locallab.alpha import solve_schedule
from locallab.alpha import verify_schedule
from locallab.bench import DEFAULT_KNOWLEDGE
from locallab.bench import fit_csv
from locallab.bench import load_experiment
from locallab.bench import make_knowledge
from locallab.bench import run_algorithm
from locallab.bench import run_bench
from locallab.bench import RunParams
from locallab.errors import LocalLabError
from locallab.formats import dump_tree
from locallab.formats import load_decomposition
from locallab.formats import load_halfcol
from locallab.formats import load_tree
from locallab.formats import read_text
from locallab.formats import write_text
from locallab.generators import assign_ids
from locallab.generators import gen_caterpillar2
from locallab.generators import gen_complete_tree
from locallab.generators import gen_lb_graph
from locallab.generators import gen_path
from locallab.generators import gen_random_tree
from locallab.generators import gen_spine_comb
from locallab.generators import gen_threelevel
from locallab.generators import Instance
from locallab.generators import MonotoneAlongPaths
from locallab.generators import RandomPermutation
from locallab.halfcol import build_halflog
from locallab.halfcol import verify_halfcol
from locallab.rc import verify_decomposition
from locallab.rc import verify_rc_lcl
from locallab.report import Report
from locallab.tree import compute_levels
from locallab.utils import config
from locallab.utils import configure_logging

app = typer.Typer(no_args_is_help=True)
console = Console()
err_console = Console(stderr=True)

__app_name__ = "locallab"

VERIFY_FAILED = 3


class Problem(str, Enum):
    halfcol = "halfcol"
    decomposition = "decomposition"
    rc_lcl = "rc-lcl"


class IdChoice(str, Enum):
    sequential = "sequential"
    random = "random"
    monotone = "monotone"


def _version_callback(value: bool) -> None:
    if value:
        print(__version__)
        raise typer.Exit()


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Turn library errors into their process exit codes."""
    try:
        yield
    except LocalLabError as e:
        err_console.print(f"[red]{type(e).__name__}[/red]: {e}")
        raise typer.Exit(code=e.exit_code) from e
    except ValueError as e:
        err_console.print(f"[red]bad parameters[/red]: {e}")
        raise typer.Exit(code=2) from e


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=False)
    else:
        write_text(out, text)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as e:
        raise typer.BadParameter(f"expected a comma separated list of integers, got {text!r}") from e


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError as e:
        raise typer.BadParameter(f"expected a comma separated list of numbers, got {text!r}") from e


def _need(value: Optional[int], name: str, family: str) -> int:
    if value is None:
        raise typer.BadParameter(f"family {family} needs --{name}")
    return value


def _finish(report: Report) -> None:
    for line in report.lines():
        console.print(line, highlight=False)
    if not report.ok:
        raise typer.Exit(code=VERIFY_FAILED)


@app.callback()
def common(
    version: Optional[bool] = typer.Option(
        None,
        "--version",
        help="Show the application's version and exit.",
        callback=_version_callback,
        is_eager=True,
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at DEBUG level."),
) -> None:
    """Round complexity experiments on bounded-degree trees in the LOCAL model."""
    configure_logging("DEBUG" if verbose else config.LOG_LEVEL)


@app.command("solve-alpha")
def solve_alpha(
    k: int = typer.Option(3, "--k", help="Number of levels."),
    c: float = typer.Option(3.0, "--c", help="Exponent of the size bound N <= n^c."),
    table: bool = typer.Option(False, "--table", help="Sweep a (k, c) grid to CSV instead."),
    ks: str = typer.Option("2,3,4,5,6", "--ks", help="k values of the sweep."),
    cs: str = typer.Option("1,2,3,4,5", "--cs", help="c values of the sweep."),
    out: Optional[Path] = typer.Option(None, "--out", "-o"),
) -> None:
    """Print the phase exponents for (k, c)."""
    with _exit_codes():
        if table:
            frame = alpha_table(_ints(ks), _floats(cs))
            _emit(frame.to_csv(index=False, float_format=config.CSV_FLOAT_FORMAT), out)
            return
        schedule = solve_schedule(k, c)
        grid = Table("i", "alpha_i", "A_i")
        for i, (a, prefix) in enumerate(zip(schedule.alpha, schedule.prefix), start=1):
            grid.add_row(str(i), f"{a:.12g}", f"{prefix:.12g}")
        console.print(grid)
        console.print(f"i0 = {schedule.i0}, exponent c*alpha1 = {schedule.exponent:.12g}")
        report = verify_schedule(schedule)
        for line in report.lines():
            console.print(line, highlight=False)


@app.command()
def gen(
    family: str = typer.Argument(..., help="path, caterpillar2, lb-graph, threelevel, spine-comb, random, complete"),
    n: Optional[int] = typer.Option(None, "--n"),
    k: int = typer.Option(2, "--k"),
    lengths: str = typer.Option("", "--lengths", help="Path lengths l_1..l_k of a lower bound graph."),
    p: Optional[int] = typer.Option(None, "--p"),
    q: Optional[int] = typer.Option(None, "--q"),
    ell: Optional[int] = typer.Option(None, "--ell"),
    ell_prime: Optional[int] = typer.Option(None, "--ell-prime"),
    i: Optional[int] = typer.Option(None, "--i"),
    j: Optional[int] = typer.Option(None, "--j"),
    branching: int = typer.Option(2, "--branching"),
    seed: int = typer.Option(0, "--seed"),
    ids: IdChoice = typer.Option(IdChoice.sequential, "--ids"),
    c: float = typer.Option(1.0, "--c", help="Id range exponent for --ids random."),
    out: Optional[Path] = typer.Option(None, "--out", "-o"),
) -> None:
    """Generate an instance in the tree text format, with its levels."""
    with _exit_codes():
        instance: Instance
        if family == "path":
            instance = gen_path(_need(n, "n", family))
        elif family == "caterpillar2":
            instance = gen_caterpillar2(_need(p, "p", family), _need(q, "q", family))
        elif family == "lb-graph":
            instance = gen_lb_graph(k, _ints(lengths))
        elif family == "threelevel":
            instance = gen_threelevel(
                _need(ell, "ell", family),
                _need(ell_prime, "ell-prime", family),
                _need(i, "i", family),
            )
        elif family == "spine-comb":
            instance = gen_spine_comb(_need(j, "j", family), _need(i, "i", family))
        elif family == "random":
            instance = gen_random_tree(_need(n, "n", family), seed)
        elif family == "complete":
            instance = gen_complete_tree(_need(n, "n", family), branching)
        else:
            raise typer.BadParameter(f"unknown family {family!r}")
        tree = instance.tree
        if ids == IdChoice.random:
            tree = assign_ids(tree, RandomPermutation(c, seed))
        elif ids == IdChoice.monotone:
            tree = assign_ids(tree, MonotoneAlongPaths(seed), instance.paths or None)
        levels = instance.levels or compute_levels(tree, k)
        _emit(dump_tree(tree, levels), out)


@app.command()
def run(
    algo: str = typer.Argument(..., help="Algorithm name, for instance rc-poly-n or halfcol-id."),
    instance: Path = typer.Argument(..., exists=True, dir_okay=False),
    k: int = typer.Option(2, "--k"),
    c: float = typer.Option(1.0, "--c"),
    ell: int = typer.Option(config.DEFAULT_ELL, "--ell"),
    seed: int = typer.Option(0, "--seed"),
    known_n: bool = typer.Option(False, "--known-n", help="Hand every node the exact n."),
    upper_bound: Optional[int] = typer.Option(
        None, "--upper-bound", "--N", help="Hand every node N with n <= N <= n^c."
    ),
    promise: bool = typer.Option(False, "--promise", help="Promise ids at most n^c."),
    no_knowledge: bool = typer.Option(False, "--no-knowledge"),
    trace: Optional[Path] = typer.Option(None, "--trace", help="Write the per-node trace CSV here."),
    labels: Optional[Path] = typer.Option(None, "--labels", help="Write the labeling here."),
) -> None:
    """Run one algorithm on an instance file and verify its output."""
    chosen = [
        name
        for name, flag in (
            ("exact", known_n),
            ("upper-bound", upper_bound is not None),
            ("promise", promise),
            ("none", no_knowledge),
        )
        if flag
    ]
    if len(chosen) > 1:
        raise typer.BadParameter("pick at most one knowledge flag")
    with _exit_codes():
        tree = load_tree(read_text(instance)).tree
        if algo not in DEFAULT_KNOWLEDGE:
            raise typer.BadParameter(f"unknown algorithm {algo!r}; choose from {', '.join(DEFAULT_KNOWLEDGE)}")
        name = chosen[0] if chosen else DEFAULT_KNOWLEDGE[algo]
        if algo.startswith("halfcol-rand"):
            name = "random"
        knowledge, _ = make_knowledge(name, tree.node_count, c, upper_bound)
        outcome = run_algorithm(algo, tree, RunParams(k, c, ell), knowledge, seed)
        if trace is not None:
            frame = outcome.trace.frame(tree, outcome.levels)
            frame.to_csv(trace, index=False)
        if labels is not None:
            write_text(labels, outcome.text)
        summary = Table("algo", "n", "knowledge", "seed", "rounds_max", "rounds_avg", "verified")
        summary.add_row(
            algo,
            str(tree.node_count),
            knowledge.label,
            str(seed),
            str(outcome.trace.rounds_max),
            config.CSV_FLOAT_FORMAT % outcome.trace.rounds_avg,
            str(outcome.verified),
        )
        console.print(summary)
        if not outcome.verified:
            raise typer.Exit(code=VERIFY_FAILED)


@app.command()
def verify(
    problem: Problem = typer.Argument(...),
    instance: Path = typer.Argument(..., exists=True, dir_okay=False),
    labeling: Path = typer.Argument(..., exists=True, dir_okay=False),
    k: Optional[int] = typer.Option(None, "--k", help="Number of levels (halfcol) or label bound (rc-lcl)."),
) -> None:
    """Check a labeling; exit 0 iff it is valid."""
    with _exit_codes():
        parsed = load_tree(read_text(instance))
        tree = parsed.tree
        text = read_text(labeling)
        if problem == Problem.halfcol:
            levels_k = k or (parsed.levels.k if parsed.levels is not None else 2)
            report = verify_halfcol(tree, levels_k, load_halfcol(text, tree.node_count))
        elif problem == Problem.decomposition:
            report = verify_decomposition(tree, load_decomposition(text, tree.node_count).labeling)
        else:
            report = verify_rc_lcl(tree, load_decomposition(text, tree.node_count).as_lcl(), k)
    _finish(report)


@app.command()
def bench(
    experiment: Path = typer.Argument(..., exists=True, dir_okay=False, help="key=value experiment file."),
    out: Optional[Path] = typer.Option(None, "--out", "-o"),
    threads: Optional[int] = typer.Option(None, "--threads", help="Worker cap (default LOCALLAB_THREADS)."),
) -> None:
    """Sweep an experiment grid; one CSV row per (n, seed)."""
    with _exit_codes():
        cfg = load_experiment(experiment)
        frame = run_bench(cfg, threads)
        _emit(frame.to_csv(index=False, float_format=config.CSV_FLOAT_FORMAT), out or cfg.output)
        if not frame["verified"].all():
            err_console.print(f"{int((~frame['verified'].astype(bool)).sum())} rows failed verification")
            raise typer.Exit(code=VERIFY_FAILED)


@app.command()
def fit(
    results: Path = typer.Argument(..., exists=True, dir_okay=False),
    x: str = typer.Option("n", "--x"),
    y: str = typer.Option("rounds_max", "--y"),
) -> None:
    """Fit ln y = slope * ln x + intercept on per-x medians."""
    with _exit_codes():
        result = fit_csv(results, x, y)
        console.print(
            f"slope={result.slope:.12g} intercept={result.intercept:.12g} r2={result.r2:.12g} points={result.points}",
            highlight=False,
        )


@app.command()
def halflog(
    base: float = typer.Option(config.HALFLOG_BASE, "--base"),
    x_max: float = typer.Option(config.HALFLOG_X_MAX, "--x-max"),
    points: int = typer.Option(1000, "--points"),
    out: Optional[Path] = typer.Option(None, "--out", "-o"),
) -> None:
    """Tabulate a half-logarithm and its half-exponential."""
    with _exit_codes():
        table = build_halflog(base, x_max).table(points, x_max)
        _emit(table.to_csv(index=False, float_format=config.CSV_FLOAT_FORMAT), out)


def main() -> None:
    app(prog_name=__app_name__)


if __name__ == "__main__":
    main()
