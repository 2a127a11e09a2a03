# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Randomized 2½-coloring for k = 2 and k = 3, without ids or knowledge of n.

Every level-1 node marks itself when bit 0 of its tape is 1. A level-1 path
declines as soon as one of its nodes is marked and 2-colors otherwise, so a
path of l nodes declines with probability 1 - 2^{-l}. A higher node is
interesting when all its lower neighbours declined. Uninteresting nodes are
exempt; interesting segments 2-color, except that for k = 3 a level-2 segment
declines when it contains a friendly subpath.
"""
from __future__ import annotations

import logging
from collections.abc import Callable

from locallab.errors import KnowledgeViolation
from locallab.halfcol.friendly import q_in_ball
from locallab.halfcol.halflog import build_halflog
from locallab.halfcol.halflog import HalfLog
from locallab.halfcol.known_n import check_commitments
from locallab.halfcol.known_n import interesting
from locallab.halfcol.known_n import lower_status
from locallab.halfcol.paths import canonical_color
from locallab.halfcol.paths import DECLINE
from locallab.halfcol.paths import EXEMPT
from locallab.halfcol.paths import Segment
from locallab.halfcol.paths import Verdict
from locallab.halfcol.paths import resume_walk
from locallab.halfcol.run import HalfColResult
from locallab.halfcol.run import run_halfcol
from locallab.sim import Decided
from locallab.sim import Knowledge
from locallab.sim import KnowledgeModel
from locallab.sim import RandomTape
from locallab.tree import Ball
from locallab.tree import Tree

logger = logging.getLogger(__name__)


def marked(ball: Ball, u: int) -> bool:
    return ball.tape(u).bit(0) == 1


def tape_key(ball: Ball) -> Callable[[int], tuple[int, int, int]]:
    """Endpoint order for the canonical coloring: 128 tape bits, then the handle."""

    def key(u: int) -> tuple[int, int, int]:
        tape = ball.tape(u)
        return (tape.value(1, 64), tape.value(65, 64), u)

    return key


def decide_level1(ball: Ball, memory: dict) -> Decided | None:
    v = ball.center
    if marked(ball, v):
        return Decided(DECLINE)

    def classify(u: int) -> Verdict:
        return "stop" if marked(ball, u) else "in"

    segment = resume_walk(memory, ball, 1, classify)
    if segment is None:
        return None
    if segment.blockers:
        return Decided(DECLINE)
    if segment.closed:
        return Decided(canonical_color(segment.nodes, v, tape_key(ball)))
    return None


def color_segment(ball: Ball, level: int, memory: dict) -> Decided | None:
    """2-color the closed interesting segment around the centre."""
    segment = resume_walk(memory, ball, level, interesting(ball, level))
    if segment is None or not segment.closed:
        return None
    key = tape_key(ball)
    check_commitments(ball, segment, key)
    return Decided(canonical_color(segment.nodes, ball.center, key))


class RandK2:
    k = 2

    def decide(self, t: int, ball: Ball, knowledge: Knowledge, memory: dict) -> Decided | None:
        v = ball.center
        level = ball.level(v)
        if level is None:
            return None
        if level > self.k:
            return Decided(DECLINE)
        if level == 1:
            return decide_level1(ball, memory)
        status = lower_status(ball, v, level)
        if status is None:
            return None
        if status == EXEMPT:
            return Decided(EXEMPT)
        return color_segment(ball, level, memory)


class RandK3:
    """Level 2 declines on any friendly window of its interesting segment."""

    k = 3

    def __init__(self, threshold: Callable[[float], float]) -> None:
        self.threshold = threshold

    def decide(self, t: int, ball: Ball, knowledge: Knowledge, memory: dict) -> Decided | None:
        v = ball.center
        level = ball.level(v)
        if level is None:
            return None
        if level > self.k:
            return Decided(DECLINE)
        if level == 1:
            return decide_level1(ball, memory)
        status = lower_status(ball, v, level)
        if status is None:
            return None
        if status == EXEMPT:
            return Decided(EXEMPT)
        if level == 3:
            return color_segment(ball, level, memory)

        segment = resume_walk(memory, ball, level, interesting(ball, level))
        if segment is None:
            return None
        verdict = self._scan(ball, segment, memory.setdefault("windows", {}))
        if verdict:
            return Decided(DECLINE)
        if verdict is False and segment.closed:
            key = tape_key(ball)
            check_commitments(ball, segment, key)
            return Decided(canonical_color(segment.nodes, v, key))
        return None

    def _scan(self, ball: Ball, segment: Segment, seen: dict) -> bool | None:
        """True on a friendly window, False when every window is settled and none is.

        Windows are keyed by their two end nodes, which fix the window on a path.
        """
        nodes = segment.nodes
        m = len(nodes)
        settled = True
        for i in range(1, m + 1):
            limit = i * self.threshold(i)
            for start in range(m - i + 1):
                ends = (nodes[start], nodes[start + i - 1])
                if ends not in seen:
                    union: set[int] = set()
                    for u in nodes[start : start + i]:
                        reach = q_in_ball(ball, u, i)
                        if reach is None:
                            break
                        union |= reach
                    else:
                        seen[ends] = len(union) < limit
                if ends not in seen:
                    settled = False
                elif seen[ends]:
                    return True
        return False if settled else None


def _randomized(knowledge: KnowledgeModel | None, tapes: Callable[[int], RandomTape] | None) -> KnowledgeModel:
    knowledge = knowledge or KnowledgeModel.nothing(randomized=True)
    if not knowledge.randomized and tapes is None:
        raise KnowledgeViolation("randomized algorithms need random tapes")
    return knowledge


def algo_rand_k2(
    tree: Tree,
    seed: int = 0,
    knowledge: KnowledgeModel | None = None,
    tapes: Callable[[int], RandomTape] | None = None,
) -> HalfColResult:
    return run_halfcol(tree, 2, RandK2(), _randomized(knowledge, tapes), seed, tapes)


def algo_rand_k3(
    tree: Tree,
    seed: int = 0,
    halflog: HalfLog | None = None,
    knowledge: KnowledgeModel | None = None,
    tapes: Callable[[int], RandomTape] | None = None,
) -> HalfColResult:
    halflog = halflog or build_halflog()
    return run_halfcol(tree, 3, RandK3(halflog.threshold), _randomized(knowledge, tapes), seed, tapes)
