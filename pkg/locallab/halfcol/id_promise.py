# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""2½-coloring when nodes only know that every id is at most n^c.

Nodes cannot tell how long their path is allowed to be, so they measure it
against what they do know. A level-1 node keeps exploring while its path is
open and gives up once the round number beats (largest id in view)^{α₁}. At
level j the path declines once |P_v|^{A_j/α_j} exceeds the summed sizes of
the declines hanging below it. Declines spread along the path, each node
inheriting the size of the decline it joined, and a closed path waits long
enough for any decline on it to arrive before it 2-colors.
"""
from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

from locallab.alpha import AlphaSchedule
from locallab.alpha import solve_schedule
from locallab.errors import KnowledgeViolation
from locallab.halfcol.known_n import check_commitments
from locallab.halfcol.known_n import lower_status
from locallab.halfcol.paths import canonical_color
from locallab.halfcol.paths import COLORS
from locallab.halfcol.paths import copy_parity
from locallab.halfcol.paths import DECLINE
from locallab.halfcol.paths import EXEMPT
from locallab.halfcol.paths import lower_neighbors
from locallab.halfcol.paths import Segment
from locallab.halfcol.paths import Verdict
from locallab.halfcol.paths import resume_walk
from locallab.halfcol.run import HalfColResult
from locallab.halfcol.run import run_halfcol
from locallab.sim import Decided
from locallab.sim import IdRangePromise
from locallab.sim import Knowledge
from locallab.sim import KnowledgeModel
from locallab.tree import Ball
from locallab.tree import Tree
from locallab.utils import config

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeclineState:
    """What a declining node publishes next to its D."""

    level: int
    size: int


def _active(ball: Ball, v: int, level: int) -> Callable[[int], Verdict]:
    def classify(u: int) -> Verdict:
        if u != v and ball.decided(u):
            return "stop"
        if level == 1:
            return "in"
        status = lower_status(ball, u, level)
        if status is None:
            return "unknown"
        return "stop" if status == EXEMPT else "in"

    return classify


def _lower_size(ball: Ball, u: int, level: int) -> int | None:
    """n_u^{(level-1)}: the largest decline size among u's level-(level-1) neighbours."""
    lower = lower_neighbors(ball, u, level)
    if lower is None:
        return None
    sizes = [0]
    for w in lower:
        if ball.level(w) != level - 1:
            continue
        state = ball.state(w)
        if not isinstance(state, DeclineState):
            return None
        sizes.append(state.size)
    return max(sizes)


def largest_id(ball: Ball, memory: dict) -> int:
    """Largest id in the view, folding in only the nodes the last hop added."""
    seen = memory.get("top")
    if seen is not None and seen[0] == ball.radius - 1:
        fresh = ball.frontier
    else:
        fresh = tuple(ball)
    top = max((ball.id(u) or 1 for u in fresh), default=1)
    if seen is not None and seen[0] < ball.radius:
        top = max(top, seen[1])
    memory["top"] = (ball.radius, top)
    return top


class IdPromise:
    def __init__(self, k: int, schedule: AlphaSchedule | None = None) -> None:
        if k < 1:
            raise ValueError("k must be at least 1")
        if k >= 2 and (schedule is None or schedule.k != k):
            raise ValueError(f"a schedule for k={k} is required")
        self.k = k
        self.schedule = schedule

    def decide(self, t: int, ball: Ball, knowledge: Knowledge, memory: dict) -> Decided | None:
        if not isinstance(knowledge, IdRangePromise):
            raise KnowledgeViolation("the id-promise algorithm needs the id range promise")
        v = ball.center
        level = ball.level(v)
        if level is None:
            return None
        if level > self.k:
            return Decided(DECLINE)
        if level > 1:
            status = lower_status(ball, v, level)
            if status is None:
                return None
            if status == EXEMPT:
                return Decided(EXEMPT)

        segment = resume_walk(memory, ball, level, _active(ball, v, level), ball.decided)
        if segment is None:
            return None
        outs = {b: ball.output(b) for b in segment.blockers}
        declined = [b for b, o in outs.items() if o == DECLINE]
        if declined:
            joined = ball.state(declined[0])
            return Decided(DECLINE, DeclineState(level, joined.size))
        if any(o in COLORS for o in outs.values()):
            return Decided(copy_parity(ball, segment, v))

        if not segment.closed:
            memory.pop("closed", None)
            if level < self.k:
                return self._conditions(t, ball, segment, level, memory)
            return None
        if level == self.k:
            check_commitments(ball, segment, ball.id)
            return Decided(canonical_color(segment.nodes, v, ball.id))
        since = memory.get("closed")
        if since is None or since[0] != segment.nodes:
            memory["closed"] = (segment.nodes, t)
            return None
        if t - since[1] >= config.WAIT_FACTOR * len(segment):
            return Decided(canonical_color(segment.nodes, v, ball.id))
        return None

    def _conditions(self, t: int, ball: Ball, segment: Segment, level: int, memory: dict) -> Decided | None:
        assert self.schedule is not None
        v = ball.center
        if level == 1:
            top = largest_id(ball, memory)
            if t > top**self.schedule.alpha1:
                logger.debug("node %d: round %d beats max id %d", v, t, top)
                return Decided(DECLINE, DeclineState(1, t))
            return None
        sizes = memory.setdefault("below", {})
        for u in segment.nodes:
            if u not in sizes:
                size = _lower_size(ball, u, level)
                if size is None:
                    return None
                sizes[u] = size
        total = sum(sizes[u] for u in segment.nodes)
        if len(segment) ** self.schedule.condition_exponent(level) > total:
            logger.debug("node %d: level %d path of %d outgrows %d", v, level, len(segment), total)
            return Decided(DECLINE, DeclineState(level, total))
        return None


def algo_id_promise(
    tree: Tree,
    k: int,
    knowledge: KnowledgeModel,
    schedule: AlphaSchedule | None = None,
) -> HalfColResult:
    variant = knowledge.variant
    if not isinstance(variant, IdRangePromise):
        raise KnowledgeViolation("the id-promise algorithm needs the id range promise")
    if schedule is None and k >= 2:
        schedule = solve_schedule(k, variant.c)
    return run_halfcol(tree, k, IdPromise(k, schedule), knowledge)
