# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Friendly level-2 paths.

Q_i(v) holds the level-1 nodes reachable from a level-2 node v by a path of
length at most i whose nodes, v aside, all sit at level 1. A path P of i
level-2 nodes is f-friendly when |⋃_{v∈P} Q_i(v)| < i·f(i).
"""
from __future__ import annotations

from collections import Counter
from collections.abc import Callable
from collections.abc import Sequence

from locallab.errors import WrongLevel
from locallab.tree import Ball
from locallab.tree import LevelAssignment
from locallab.tree import Tree


def q_set(tree: Tree, levels: LevelAssignment, v: int, i: int) -> set[int]:
    if levels[v] != 2:
        raise WrongLevel(f"node {v} sits at level {levels[v]}, not 2")
    reached: set[int] = set()
    frontier = [v]
    for _ in range(i):
        nxt = []
        for u in frontier:
            for w in tree.adjacency[u]:
                if levels[w] == 1 and w not in reached:
                    reached.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return reached


def is_friendly(
    tree: Tree,
    levels: LevelAssignment,
    path: Sequence[int],
    f: Callable[[float], float],
) -> bool:
    i = len(path)
    if i == 0:
        return False
    union: set[int] = set()
    for v in path:
        union |= q_set(tree, levels, v, i)
    return len(union) < i * f(i)


def friendly_windows(
    tree: Tree,
    levels: LevelAssignment,
    path: Sequence[int],
    f: Callable[[float], float],
) -> list[tuple[int, int]]:
    """(start, length) of every f-friendly contiguous window of ``path``.

    For each window length the union size is kept up to date with a counter
    of how many window members reach each level-1 node.
    """
    out = []
    m = len(path)
    for i in range(1, m + 1):
        reach = [q_set(tree, levels, v, i) for v in path]
        counts: Counter[int] = Counter()
        for v in range(i):
            counts.update(reach[v])
        limit = i * f(i)
        for start in range(m - i + 1):
            if start:
                counts.subtract(reach[start - 1])
                counts.update(reach[start + i - 1])
                counts += Counter()
            if len(counts) < limit:
                out.append((start, i))
    return out


def has_friendly_subpath(
    tree: Tree,
    levels: LevelAssignment,
    path: Sequence[int],
    f: Callable[[float], float],
) -> bool:
    return bool(friendly_windows(tree, levels, path, f))


def q_in_ball(ball: Ball, v: int, i: int) -> set[int] | None:
    """Q_i(v) as seen from inside a view; None while part of it lies outside."""
    reached: set[int] = set()
    frontier = [v]
    for _ in range(i):
        nxt = []
        for u in frontier:
            if ball.is_incomplete(u):
                return None
            for w in ball.neighbors(u):
                one = ball.has_level(w, 1)
                if one is None:
                    return None
                if one and w not in reached:
                    reached.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return reached
