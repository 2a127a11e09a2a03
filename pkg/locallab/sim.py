# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Round-synchronous LOCAL simulation.

Two runners live here. :func:`run_sync` evaluates a :class:`NodeProgram` at
every undecided node, once per round, on the node's radius-t view.
:func:`run_metered` executes a globally described procedure that charges the
declared round cost of each primitive to a :class:`RoundMeter`.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from typing import Any
from typing import Protocol
from typing import Union

import numpy as np
import pandas as pd

from locallab.errors import KnowledgeViolation
from locallab.errors import NonTermination
from locallab.errors import PromiseViolation
from locallab.tree import Ball
from locallab.tree import LevelAssignment
from locallab.tree import Tree
from locallab.utils import config

logger = logging.getLogger(__name__)


def power_floor(n: int, c: float) -> int:
    """⌊n^c⌋, exact when c is integral."""
    if float(c).is_integer():
        return n ** int(c)
    return math.floor(n**c)


def root_ceil(m: int, e: int) -> int:
    """Least r >= 1 with r**e >= m."""
    r = max(1, int(round(m ** (1.0 / e))))
    while r**e < m:
        r += 1
    while r > 1 and (r - 1) ** e >= m:
        r -= 1
    return r


@dataclass(frozen=True)
class ExactN:
    n: int


@dataclass(frozen=True)
class UpperBound:
    N: int
    c: float


@dataclass(frozen=True)
class IdRangePromise:
    c: float


@dataclass(frozen=True)
class NoKnowledge:
    pass


Knowledge = Union[ExactN, UpperBound, IdRangePromise, NoKnowledge]


@dataclass(frozen=True)
class KnowledgeModel:
    """What every node is handed at round 0."""

    variant: Knowledge = field(default_factory=NoKnowledge)
    randomized: bool = False

    @classmethod
    def exact(cls, n: int) -> KnowledgeModel:
        return cls(ExactN(n))

    @classmethod
    def upper_bound(cls, N: int, c: float) -> KnowledgeModel:
        return cls(UpperBound(N, c))

    @classmethod
    def promise(cls, c: float) -> KnowledgeModel:
        return cls(IdRangePromise(c))

    @classmethod
    def nothing(cls, randomized: bool = False) -> KnowledgeModel:
        return cls(NoKnowledge(), randomized)

    @property
    def ids_visible(self) -> bool:
        return not (self.randomized and isinstance(self.variant, NoKnowledge))

    @property
    def label(self) -> str:
        v = self.variant
        if isinstance(v, ExactN):
            text = f"exact-n(n={v.n})"
        elif isinstance(v, UpperBound):
            text = f"upper-bound(N={v.N},c={v.c:g})"
        elif isinstance(v, IdRangePromise):
            text = f"id-promise(c={v.c:g})"
        else:
            text = "none"
        return text + ("+random" if self.randomized else "")

    def check(self, tree: Tree) -> None:
        """Raise when the instance breaks what the nodes were told."""
        n = tree.node_count
        v = self.variant
        if isinstance(v, ExactN) and v.n != n:
            raise KnowledgeViolation(f"nodes were told n={v.n}, instance has {n}")
        if isinstance(v, UpperBound):
            if v.c < 1:
                raise KnowledgeViolation(f"c={v.c} must be at least 1")
            if not n <= v.N <= power_floor(n, v.c):
                raise KnowledgeViolation(f"N={v.N} outside [n, n^c] for n={n}, c={v.c:g}")
        if isinstance(v, IdRangePromise):
            if v.c < 1:
                raise PromiseViolation(f"c={v.c} must be at least 1")
            if tree.max_id > power_floor(n, v.c):
                raise PromiseViolation(f"max id {tree.max_id} exceeds n^c for n={n}, c={v.c:g}")


class RandomTape:
    """Lazy bit stream, a deterministic function of (seed, node id)."""

    chunk = 256

    def __init__(self, seed: int, node_id: int) -> None:
        self._rng = np.random.default_rng([seed, node_id])
        self._bits = np.empty(0, dtype=np.uint8)

    def _extend(self, upto: int) -> None:
        while self._bits.size <= upto:
            fresh = self._rng.integers(0, 2, size=self.chunk, dtype=np.uint8)
            self._bits = np.concatenate([self._bits, fresh])

    def bit(self, i: int) -> int:
        self._extend(i)
        return int(self._bits[i])

    def prefix(self, count: int) -> list[int]:
        if count > 0:
            self._extend(count - 1)
        return [int(b) for b in self._bits[:count]]

    def value(self, start: int, count: int) -> int:
        """Bits start..start+count-1 read as a big-endian integer."""
        self._extend(start + count - 1)
        out = 0
        for b in self._bits[start : start + count]:
            out = (out << 1) | int(b)
        return out


class ForcedTape(RandomTape):
    """A tape with a fixed prefix, padded with ``fill``."""

    def __init__(self, prefix: Sequence[int], fill: int = 0) -> None:
        self._bits = np.array(list(prefix), dtype=np.uint8)
        self._fill = fill

    def _extend(self, upto: int) -> None:
        if self._bits.size <= upto:
            pad = np.full(upto + 1 - self._bits.size, self._fill, dtype=np.uint8)
            self._bits = np.concatenate([self._bits, pad])


def random_tape(seed: int, node_id: int) -> RandomTape:
    return RandomTape(seed, node_id)


class TapeSource:
    """Per-node tapes of one run, keyed internally by node id."""

    def __init__(self, tree: Tree, seed: int) -> None:
        self._ids = tree.ids
        self._seed = seed
        self._tapes: dict[int, RandomTape] = {}

    def __call__(self, u: int) -> RandomTape:
        if u not in self._tapes:
            self._tapes[u] = random_tape(self._seed, self._ids[u])
        return self._tapes[u]


@dataclass(frozen=True)
class Decided:
    output: Any
    state: Any = None


class NodeProgram(Protocol):
    """Per-node decision rule.

    ``decide`` sees the round number, the radius-t ball, the knowledge inputs
    and a private memo that may only cache functions of earlier views. It
    returns :class:`Decided` or None.
    """

    def decide(self, t: int, ball: Ball, knowledge: Knowledge, memory: dict) -> Decided | None:
        ...


@dataclass(frozen=True)
class SimTrace:
    decision_rounds: tuple[int, ...]
    outputs: tuple[Any, ...]
    seed: int = 0
    knowledge: str = "none"

    @property
    def rounds_max(self) -> int:
        return max(self.decision_rounds, default=0)

    @property
    def rounds_avg(self) -> float:
        if not self.decision_rounds:
            return 0.0
        return float(np.mean(self.decision_rounds))

    def frame(self, tree: Tree, levels: LevelAssignment | None = None) -> pd.DataFrame:
        """One row per node, then a summary row carrying rounds_max and rounds_avg."""
        rows = [
            {
                "node": str(u),
                "id": str(tree.ids[u]),
                "level": "" if levels is None else str(levels[u]),
                "decision_round": str(r),
                "output": _label_text(self.outputs[u]),
            }
            for u, r in enumerate(self.decision_rounds)
        ]
        rows.append(
            {
                "node": "summary",
                "id": self.knowledge,
                "level": str(self.seed),
                "decision_round": str(self.rounds_max),
                "output": config.CSV_FLOAT_FORMAT % self.rounds_avg,
            }
        )
        return pd.DataFrame(rows, columns=["node", "id", "level", "decision_round", "output"])


def _label_text(label: Any) -> str:
    if isinstance(label, tuple):
        return " ".join(str(x) for x in label)
    return "" if label is None else str(label)


def _grow(tree: Tree, distance: dict[int, int], frontier: list[int], t: int) -> list[int]:
    nxt = []
    for u in frontier:
        for w in tree.adjacency[u]:
            if w not in distance:
                distance[w] = t
                nxt.append(w)
    return nxt


def run_sync(
    tree: Tree,
    program: NodeProgram,
    knowledge: KnowledgeModel,
    seed: int = 0,
    *,
    levels: LevelAssignment | None = None,
    round_cap: int | None = None,
    tapes: Callable[[int], RandomTape] | None = None,
) -> SimTrace:
    """Run ``program`` at every node until all have decided.

    Decisions taken in round t become visible to a node at distance d from
    round t + d on. Views grow by one hop per round, so a node's ball is built
    once and never re-extracted.
    """
    knowledge.check(tree)
    n = tree.node_count
    cap = round_cap if round_cap is not None else config.ROUND_CAP_FACTOR * n + config.ROUND_CAP_SLACK
    rounds = [-1] * n
    outputs: list[Any] = [None] * n
    states: list[Any] = [None] * n
    memory: list[dict] = [{} for _ in range(n)]
    distances = [{v: 0} for v in range(n)]
    frontiers = [[v] for v in range(n)]

    tape_of: Callable[[int], RandomTape] | None = None
    if tapes is not None:
        tape_of = tapes
    elif knowledge.randomized:
        tape_of = TapeSource(tree, seed)

    logger.debug("run_sync %s on n=%d, %s", type(program).__name__, n, knowledge.label)
    undecided = list(range(n))
    t = 0
    while undecided:
        if t > cap:
            raise NonTermination(f"{len(undecided)} nodes undecided after {cap} rounds")
        decisions = []
        for v in undecided:
            if t > 0 and frontiers[v]:
                frontiers[v] = _grow(tree, distances[v], frontiers[v], t)
            ball = Ball(
                tree,
                v,
                t,
                distances[v],
                levels=levels,
                ids_visible=knowledge.ids_visible,
                rounds=rounds,
                outputs=outputs,
                states=states,
                tape_of=tape_of,
                frontier=frontiers[v],
            )
            result = program.decide(t, ball, knowledge.variant, memory[v])
            if result is not None:
                decisions.append((v, result))
        for v, result in decisions:
            rounds[v] = t
            outputs[v] = result.output
            states[v] = result.state
        undecided = [v for v in undecided if rounds[v] < 0]
        t += 1

    trace = SimTrace(tuple(rounds), tuple(outputs), seed, knowledge.label)
    logger.info("%s: n=%d rounds_max=%d", type(program).__name__, n, trace.rounds_max)
    return trace


class RoundMeter:
    """Clock for globally described procedures."""

    def __init__(self, n: int) -> None:
        self.round = 0
        self.fixed = [-1] * n
        self.labels: list[Any] = [None] * n

    def charge(self, cost: int) -> None:
        if cost < 0:
            raise ValueError("round cost must be non-negative")
        self.round += cost

    def fix(self, nodes: Sequence[int], labels: Sequence[Any] | Any) -> None:
        """Fix the label of ``nodes`` at the current round."""
        many = isinstance(labels, list)
        for idx, u in enumerate(nodes):
            if self.fixed[u] >= 0:
                raise ValueError(f"node {u} fixed twice")
            self.fixed[u] = self.round
            self.labels[u] = labels[idx] if many else labels

    @property
    def unfixed(self) -> list[int]:
        return [u for u, r in enumerate(self.fixed) if r < 0]


def run_metered(
    tree: Tree,
    procedure: Callable[[Tree, RoundMeter], Any],
    knowledge: KnowledgeModel | None = None,
    seed: int = 0,
) -> SimTrace:
    knowledge = knowledge or KnowledgeModel.nothing()
    knowledge.check(tree)
    meter = RoundMeter(tree.node_count)
    procedure(tree, meter)
    if meter.unfixed:
        raise NonTermination(f"{len(meter.unfixed)} nodes left without a label")
    trace = SimTrace(tuple(meter.fixed), tuple(meter.labels), seed, knowledge.label)
    logger.info("metered run: n=%d rounds_max=%d", tree.node_count, trace.rounds_max)
    return trace
