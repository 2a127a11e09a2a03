# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Benchmark sweeps and scaling fits.

An experiment file names one algorithm, one instance family, an n grid and a
seed list. Every (n, seed) pair becomes one :class:`ResultRow`; rows come out
ordered by n, then seed, whatever order the workers finish in.
"""
from __future__ import annotations

import hashlib
import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import ValidationError

from locallab.alpha import solve_schedule
from locallab.errors import ConfigError
from locallab.errors import InsufficientData
from locallab.formats import dump_decomposition
from locallab.formats import dump_halfcol
from locallab.formats import read_text
from locallab.generators import assign_ids
from locallab.generators import gen_caterpillar2
from locallab.generators import gen_complete_tree
from locallab.generators import gen_lb_graph
from locallab.generators import gen_path
from locallab.generators import gen_random_tree
from locallab.generators import gen_spine_comb
from locallab.generators import gen_threelevel
from locallab.generators import IdStrategy
from locallab.generators import Instance
from locallab.generators import MonotoneAlongPaths
from locallab.generators import RandomPermutation
from locallab.generators import Sequential
from locallab.halfcol import algo_id_promise
from locallab.halfcol import algo_known_n
from locallab.halfcol import algo_rand_k2
from locallab.halfcol import algo_rand_k3
from locallab.halfcol import HalfColResult
from locallab.halfcol import verify_halfcol
from locallab.rc import DecompResult
from locallab.rc import decompose_knuth_io
from locallab.rc import decompose_known_n
from locallab.rc import decompose_log
from locallab.rc import decompose_poly_n
from locallab.rc import to_rc_lcl
from locallab.rc import verify_decomposition
from locallab.rc import verify_rc_lcl
from locallab.schemas import ExperimentConfig
from locallab.schemas import FitResult
from locallab.schemas import ResultRow
from locallab.sim import KnowledgeModel
from locallab.sim import power_floor
from locallab.sim import SimTrace
from locallab.tree import LevelAssignment
from locallab.tree import Tree
from locallab.utils import config
from locallab.utils import thread_count

logger = logging.getLogger(__name__)

COLUMNS = list(ResultRow.model_fields)


#
# Instance families
#


def _log_n(n: int) -> float:
    return math.log(max(n, 3))


def _lb_poly(n: int, cfg: ExperimentConfig, seed: int) -> Instance:
    if cfg.k == 1:
        return gen_lb_graph(1, [n])
    schedule = solve_schedule(cfg.k, cfg.c)
    lengths = [math.ceil(n**a) for a in schedule.alpha] + [math.ceil(n**schedule.exponent)]
    return gen_lb_graph(cfg.k, lengths)


def _threelevel(n: int, cfg: ExperimentConfig, seed: int) -> Instance:
    side = max(1, math.ceil(n ** (1 / 3)))
    return gen_threelevel(side, side, side)


def _spine_comb(n: int, cfg: ExperimentConfig, seed: int) -> Instance:
    i = max(1, math.isqrt(n))
    return gen_spine_comb(max(1, round(n / (6 * (i + 1)))), i)


FAMILIES: dict[str, Callable[[int, ExperimentConfig, int], Instance]] = {
    "path": lambda n, cfg, seed: gen_path(n),
    "caterpillar2": lambda n, cfg, seed: gen_caterpillar2(math.ceil(n / _log_n(n)), math.ceil(5 * _log_n(n))),
    "lb-poly": _lb_poly,
    "lb-uniform": lambda n, cfg, seed: gen_lb_graph(cfg.k, [max(1, math.ceil(n ** (1 / cfg.k)))] * cfg.k),
    "threelevel": _threelevel,
    "spine-comb": _spine_comb,
    "random": lambda n, cfg, seed: gen_random_tree(n, seed),
    "complete": lambda n, cfg, seed: gen_complete_tree(n),
}


def id_strategy(cfg: ExperimentConfig, seed: int) -> IdStrategy:
    if cfg.ids == "random":
        return RandomPermutation(cfg.c, seed)
    if cfg.ids == "monotone":
        return MonotoneAlongPaths(seed)
    return Sequential()


def build_instance(cfg: ExperimentConfig, n: int, seed: int) -> Instance:
    instance = FAMILIES[cfg.family](n, cfg, seed)
    if cfg.ids != "sequential":
        paths = instance.paths or None
        instance = Instance(
            assign_ids(instance.tree, id_strategy(cfg, seed), paths),
            instance.levels,
            instance.paths,
            instance.family,
            instance.params,
        )
    return instance


#
# Knowledge
#

DEFAULT_KNOWLEDGE = {
    "rc-known-n": "exact",
    "rc-log": "none",
    "rc-poly-n": "upper-bound",
    "rc-knuth-io": "upper-bound",
    "halfcol-known-n": "exact",
    "halfcol-id": "promise",
    "halfcol-rand-k2": "random",
    "halfcol-rand-k3": "random",
}


def resolve_N(cfg: ExperimentConfig, n: int) -> int:
    if cfg.N == "n":
        return n
    if cfg.N == "n^c":
        return power_floor(n, cfg.c)
    return int(cfg.N)


def make_knowledge(name: str, n: int, c: float = 1.0, N: int | None = None) -> tuple[KnowledgeModel, int]:
    """The knowledge model called ``name`` for an n-node instance, and the N recorded for it."""
    if name == "exact":
        return KnowledgeModel.exact(n), n
    if name == "upper-bound":
        N = power_floor(n, c) if N is None else N
        return KnowledgeModel.upper_bound(N, c), N
    if name == "promise":
        return KnowledgeModel.promise(c), power_floor(n, c)
    if name in ("none", "random"):
        return KnowledgeModel.nothing(randomized=name == "random"), 0
    raise ConfigError(f"unknown knowledge model {name!r}")


def knowledge_for(cfg: ExperimentConfig, tree: Tree) -> tuple[KnowledgeModel, int]:
    n = tree.node_count
    return make_knowledge(cfg.knowledge or DEFAULT_KNOWLEDGE[cfg.algo], n, cfg.c, resolve_N(cfg, n))


#
# Algorithms
#


@dataclass(frozen=True)
class RunParams:
    k: int = 2
    c: float = 1.0
    ell: int = config.DEFAULT_ELL


@dataclass(frozen=True)
class Outcome:
    """A finished run: its trace, whether its output checks out, and that output as text."""

    trace: SimTrace
    verified: bool
    text: str
    levels: LevelAssignment | None = None


Runner = Callable[[Tree, RunParams, KnowledgeModel, int], Outcome]


def _rc(run: Callable[[Tree, RunParams, KnowledgeModel], DecompResult], layered: bool = True) -> Runner:
    """``layered`` runs produce at most k rake layers; the others are checked against their own L."""

    def go(tree: Tree, params: RunParams, knowledge: KnowledgeModel, seed: int) -> Outcome:
        result = run(tree, params, knowledge)
        labeling = result.labeling
        lcl = to_rc_lcl(tree, labeling)
        k = params.k if layered else labeling.L
        ok = verify_decomposition(tree, labeling).ok and verify_rc_lcl(tree, lcl, k).ok
        return Outcome(result.trace, ok, dump_decomposition(labeling, lcl))

    return go


def _halfcol(k_of: Callable[[RunParams], int], run: Callable[..., HalfColResult]) -> Runner:
    def go(tree: Tree, params: RunParams, knowledge: KnowledgeModel, seed: int) -> Outcome:
        result = run(tree, params, knowledge, seed)
        ok = verify_halfcol(tree, k_of(params), result.output, result.levels).ok
        return Outcome(result.trace, ok, dump_halfcol(result.output), result.levels)

    return go


ALGORITHMS: dict[str, Runner] = {
    "rc-known-n": _rc(lambda tree, p, kn: decompose_known_n(tree, p.k, p.ell, kn)),
    "rc-log": _rc(lambda tree, p, kn: decompose_log(tree, ell=p.ell), layered=False),
    "rc-poly-n": _rc(lambda tree, p, kn: decompose_poly_n(tree, p.k, kn, ell=p.ell)),
    "rc-knuth-io": _rc(lambda tree, p, kn: decompose_knuth_io(tree, p.k, kn, p.ell)),
    "halfcol-known-n": _halfcol(lambda p: p.k, lambda tree, p, kn, seed: algo_known_n(tree, p.k, kn)),
    "halfcol-id": _halfcol(lambda p: p.k, lambda tree, p, kn, seed: algo_id_promise(tree, p.k, kn)),
    "halfcol-rand-k2": _halfcol(lambda p: 2, lambda tree, p, kn, seed: algo_rand_k2(tree, seed, kn)),
    "halfcol-rand-k3": _halfcol(lambda p: 3, lambda tree, p, kn, seed: algo_rand_k3(tree, seed, knowledge=kn)),
}


def run_algorithm(algo: str, tree: Tree, params: RunParams, knowledge: KnowledgeModel, seed: int = 0) -> Outcome:
    try:
        runner = ALGORITHMS[algo]
    except KeyError:
        raise ConfigError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}") from None
    return runner(tree, params, knowledge, seed)


#
# Experiments
#


def parse_experiment(text: str) -> ExperimentConfig:
    """Flat ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ConfigError(f"line {number}: {key} given twice")
        values[key] = value
    try:
        return ExperimentConfig.model_validate(values)
    except ValidationError as e:
        raise ConfigError(str(e)) from e


def load_experiment(path: Path) -> ExperimentConfig:
    return parse_experiment(read_text(path))


def run_id(cfg: ExperimentConfig, n: int, seed: int) -> str:
    blob = cfg.model_dump_json(exclude={"output", "threads", "timing"}) + f"|{n}|{seed}"
    return hashlib.sha1(blob.encode()).hexdigest()[:12]


def run_point(cfg: ExperimentConfig, n: int, seed: int) -> ResultRow:
    instance = build_instance(cfg, n, seed)
    tree = instance.tree
    knowledge, N = knowledge_for(cfg, tree)
    started = time.perf_counter()
    outcome = run_algorithm(cfg.algo, tree, RunParams(cfg.k, cfg.c, cfg.ell), knowledge, seed)
    elapsed = (time.perf_counter() - started) * 1000 if cfg.timing else 0.0
    if not outcome.verified:
        logger.error("%s on %s n=%d seed=%d produced an invalid output", cfg.algo, cfg.family, tree.node_count, seed)
    return ResultRow(
        run_id=run_id(cfg, n, seed),
        algo=cfg.algo,
        family=cfg.family,
        n=tree.node_count,
        k=cfg.k,
        c=cfg.c,
        N=N,
        seed=seed,
        rounds_max=outcome.trace.rounds_max,
        rounds_avg=outcome.trace.rounds_avg,
        verified=outcome.verified,
        wall_ms=elapsed,
    )


def run_bench(cfg: ExperimentConfig, threads: int | None = None) -> pd.DataFrame:
    grid = [(n, seed) for n in cfg.n for seed in cfg.seeds]
    workers = thread_count(threads or cfg.threads)
    logger.info("bench %s on %s: %d points, %d workers", cfg.algo, cfg.family, len(grid), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda point: run_point(cfg, *point), grid))
    rows.sort(key=lambda row: (row.n, row.seed))
    return pd.DataFrame([row.model_dump() for row in rows], columns=COLUMNS)


def write_results(frame: pd.DataFrame, path: Path) -> None:
    frame.to_csv(path, index=False, float_format=config.CSV_FLOAT_FORMAT)


#
# Fits
#


def fit_power_law(frame: pd.DataFrame, x: str = "n", y: str = "rounds_max") -> FitResult:
    """Least squares on (ln x, ln median y per x)."""
    for column in (x, y):
        if column not in frame.columns:
            raise InsufficientData(f"no column {column!r}")
    medians = frame.groupby(x)[y].median()
    medians = medians[(medians.index > 0) & (medians > 0)]
    if len(medians) < 3:
        raise InsufficientData(f"{len(medians)} distinct positive {x} values, need at least 3")
    lx = np.log(medians.index.to_numpy(dtype=float))
    ly = np.log(medians.to_numpy(dtype=float))
    slope, intercept = np.polyfit(lx, ly, 1)
    residual = ly - (slope * lx + intercept)
    total = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 if total == 0 else 1.0 - float(np.sum(residual**2)) / total
    return FitResult(slope=float(slope), intercept=float(intercept), r2=r2, points=len(medians), x=x, y=y)


def fit_csv(path: Path, x: str = "n", y: str = "rounds_max") -> FitResult:
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise InsufficientData(f"cannot read {path}: {e}") from e
    return fit_power_law(frame, x, y)
