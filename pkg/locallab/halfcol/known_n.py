# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""2½-coloring when every node knows n.

Each node explores its own level path up to B = ⌈n^{1/k}⌉ nodes. A segment
that fits is 2-colored, a longer one declines, except at level k where
everything colors. Above level 1 a node first waits for its lower neighbours:
one colored or exempt lower neighbour makes it exempt, and the exempt nodes
cut the level into the segments that are then explored.
"""
from __future__ import annotations

import logging
from collections.abc import Callable
from collections.abc import Hashable

from locallab.errors import KnowledgeViolation
from locallab.errors import UnsolvableWitness
from locallab.halfcol.paths import canonical_color
from locallab.halfcol.paths import COLORS
from locallab.halfcol.paths import DECLINE
from locallab.halfcol.paths import EXEMPT
from locallab.halfcol.paths import lower_neighbors
from locallab.halfcol.paths import Segment
from locallab.halfcol.paths import Verdict
from locallab.halfcol.paths import resume_walk
from locallab.halfcol.run import HalfColResult
from locallab.halfcol.run import run_halfcol
from locallab.sim import Decided
from locallab.sim import ExactN
from locallab.sim import Knowledge
from locallab.sim import KnowledgeModel
from locallab.sim import root_ceil
from locallab.tree import Ball
from locallab.tree import Tree

logger = logging.getLogger(__name__)


def lower_status(ball: Ball, u: int, level: int) -> str | None:
    """"D" when every lower neighbour of u visibly declined, "E" when one is B, W or E.

    None while the view cannot settle it.
    """
    lower = lower_neighbors(ball, u, level)
    if lower is None:
        return None
    outs = [ball.output(w) for w in lower]
    if any(o in COLORS or o == EXEMPT for o in outs):
        return EXEMPT
    if all(ball.decided(w) for w in lower):
        return DECLINE
    return None


def interesting(ball: Ball, level: int) -> Callable[[int], Verdict]:
    def classify(u: int) -> Verdict:
        if level == 1:
            return "in"
        status = lower_status(ball, u, level)
        if status is None:
            return "unknown"
        return "stop" if status == EXEMPT else "in"

    return classify


def check_commitments(ball: Ball, segment: Segment, key: Callable[[int], Hashable]) -> None:
    """Raise if a node of the segment already published something else."""
    nodes = segment.nodes
    for u in nodes:
        out = ball.output(u)
        if out is not None and out != canonical_color(nodes, u, key):
            raise UnsolvableWitness(f"node {u} committed to {out} on a segment that must be 2-colored")


class KnownN:
    def __init__(self, k: int) -> None:
        if k < 1:
            raise ValueError("k must be at least 1")
        self.k = k

    def decide(self, t: int, ball: Ball, knowledge: Knowledge, memory: dict) -> Decided | None:
        if not isinstance(knowledge, ExactN):
            raise KnowledgeViolation("the known-n algorithm needs the exact node count")
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

        bound = memory.setdefault("bound", root_ceil(knowledge.n, self.k))
        segment = resume_walk(memory, ball, level, interesting(ball, level))
        if segment is None:
            return None
        if len(segment) > bound and level < self.k:
            return Decided(DECLINE)
        if segment.closed:
            check_commitments(ball, segment, ball.id)
            return Decided(canonical_color(segment.nodes, v, ball.id))
        return None


def algo_known_n(tree: Tree, k: int, knowledge: KnowledgeModel | None = None) -> HalfColResult:
    knowledge = knowledge or KnowledgeModel.exact(tree.node_count)
    return run_halfcol(tree, k, KnownN(k), knowledge)
