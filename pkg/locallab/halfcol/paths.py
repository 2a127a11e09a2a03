# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Walking a node's own level path inside its view."""
from __future__ import annotations

from collections.abc import Callable
from collections.abc import Hashable
from dataclasses import dataclass
from typing import Literal

from locallab.tree import Ball

BLACK, WHITE, EXEMPT, DECLINE = "B", "W", "E", "D"
COLORS = (BLACK, WHITE)
LABELS = (BLACK, WHITE, EXEMPT, DECLINE)

OPEN, END, STOP = "open", "end", "stop"

Verdict = Literal["in", "stop", "unknown"]


@dataclass(frozen=True)
class Side:
    nodes: tuple[int, ...]
    end: str
    blocker: int | None = None


@dataclass(frozen=True)
class Segment:
    """The part of a level path around ``center`` that a view can vouch for."""

    center: int
    left: Side
    right: Side

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(reversed(self.left.nodes)) + (self.center,) + self.right.nodes

    @property
    def closed(self) -> bool:
        return self.left.end != OPEN and self.right.end != OPEN

    @property
    def blockers(self) -> list[int]:
        return [s.blocker for s in (self.left, self.right) if s.blocker is not None]

    def __len__(self) -> int:
        return len(self.left.nodes) + 1 + len(self.right.nodes)


def same_level_neighbors(ball: Ball, u: int, level: int) -> list[int] | None:
    """Neighbours of u at ``level``; None while the view cannot list them all."""
    if ball.is_incomplete(u):
        return None
    out = []
    for w in ball.neighbors(u):
        same = ball.has_level(w, level)
        if same is None:
            return None
        if same:
            out.append(w)
    return out


def lower_neighbors(ball: Ball, u: int, level: int) -> list[int] | None:
    """Neighbours of u below ``level``; None while the view cannot list them all."""
    if ball.is_incomplete(u):
        return None
    out = []
    for w in ball.neighbors(u):
        lvl = ball.level(w)
        if lvl is None:
            if any(ball.has_level(w, i) is None for i in range(1, level)):
                return None
            continue
        if lvl < level:
            out.append(w)
    return out


class _SideWalk:
    """One direction of a walk; resumes where the last view ran out."""

    def __init__(self, v: int, start: int) -> None:
        self.prev = v
        self.cur = start
        self.nodes: list[int] = []
        self.end = OPEN
        self.blocker: int | None = None
        self.expand = False

    def recheck(self, stops: Callable[[int], bool]) -> None:
        for i, u in enumerate(self.nodes):
            if stops(u):
                self.nodes = self.nodes[:i]
                self.end, self.blocker, self.expand = STOP, u, False
                return

    def advance(self, ball: Ball, level: int, classify: Callable[[int], Verdict]) -> Side:
        while self.end == OPEN:
            if not self.expand:
                verdict = classify(self.cur)
                if verdict == "unknown":
                    break
                if verdict == "stop":
                    self.end, self.blocker = STOP, self.cur
                    break
                self.nodes.append(self.cur)
                self.expand = True
            nxt = same_level_neighbors(ball, self.cur, level)
            if nxt is None:
                break
            self.expand = False
            rest = [w for w in nxt if w != self.prev]
            if not rest:
                self.end = END
                break
            self.prev, self.cur = self.cur, rest[0]
        return Side(tuple(self.nodes), self.end, self.blocker)


class SegmentWalk:
    """Incremental :func:`walk_segment` for a node whose view grows by one hop per round.

    Settled sides are kept as they are and open sides continue from their
    last node. ``classify`` must never take back an "in" or a "stop"; a
    classification that can still turn an "in" into "stop" goes to
    ``recheck``, which cuts the walked nodes at the first one it flags.
    """

    def __init__(self, v: int, level: int) -> None:
        self.v = v
        self.level = level
        self._sides: list[_SideWalk] | None = None

    def advance(
        self,
        ball: Ball,
        classify: Callable[[int], Verdict],
        recheck: Callable[[int], bool] | None = None,
    ) -> Segment | None:
        if self._sides is None:
            first = same_level_neighbors(ball, self.v, self.level)
            if first is None:
                return None
            self._sides = [_SideWalk(self.v, w) for w in first]
        sides = []
        for walk in self._sides:
            if recheck is not None:
                walk.recheck(recheck)
            sides.append(walk.advance(ball, self.level, classify))
        while len(sides) < 2:
            sides.append(Side((), END))
        return Segment(self.v, sides[0], sides[1])


def walk_segment(
    ball: Ball,
    v: int,
    level: int,
    classify: Callable[[int], Verdict] = lambda u: "in",
) -> Segment | None:
    """Extend from v along its level path while ``classify`` says "in".

    A side ends at a path end (END), at the first node classified "stop"
    (STOP, kept as blocker) or where the view runs out (OPEN).
    """
    return SegmentWalk(v, level).advance(ball, classify)


def resume_walk(
    memory: dict,
    ball: Ball,
    level: int,
    classify: Callable[[int], Verdict],
    recheck: Callable[[int], bool] | None = None,
) -> Segment | None:
    """:meth:`SegmentWalk.advance` on the walk kept in a node's memory."""
    walk = memory.get("walk")
    if walk is None:
        walk = memory["walk"] = SegmentWalk(ball.center, level)
    return walk.advance(ball, classify, recheck)


def canonical_color(nodes: tuple[int, ...], v: int, key: Callable[[int], Hashable]) -> str:
    """2-coloring of ``nodes`` that gives B to the endpoint with the smaller key."""
    anchor = 0 if key(nodes[0]) <= key(nodes[-1]) else len(nodes) - 1
    return BLACK if abs(nodes.index(v) - anchor) % 2 == 0 else WHITE


def flip(color: str) -> str:
    return WHITE if color == BLACK else BLACK


def copy_parity(ball: Ball, segment: Segment, v: int) -> str | None:
    """Color for v matching an already colored node that blocks its segment."""
    for side in (segment.left, segment.right):
        if side.blocker is None:
            continue
        out = ball.output(side.blocker)
        if out in COLORS:
            steps = len(side.nodes) + 1
            return out if steps % 2 == 0 else flip(out)
    return None
