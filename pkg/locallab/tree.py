# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Bounded-degree trees, level peeling and radius-t views.

Adjacency lists are ordered by neighbour id, so every traversal in the
package is reproducible bit for bit.
"""
from __future__ import annotations

from collections.abc import Callable
from collections.abc import Iterable
from collections.abc import Iterator
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from locallab.errors import DegreeExceeded
from locallab.errors import DuplicateId
from locallab.errors import MalformedLevel
from locallab.errors import NotATree
from locallab.utils import config


@dataclass(frozen=True)
class Tree:
    adjacency: tuple[tuple[int, ...], ...]
    ids: tuple[int, ...]
    max_degree: int

    @property
    def node_count(self) -> int:
        return len(self.adjacency)

    def __len__(self) -> int:
        return len(self.adjacency)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nbrs in enumerate(self.adjacency):
            for v in nbrs:
                if u < v:
                    yield u, v

    @property
    def max_id(self) -> int:
        return max(self.ids)

    def with_ids(self, ids: Sequence[int]) -> Tree:
        """Same shape, new identifiers (adjacency re-sorted by the new ids)."""
        return build_tree(list(self.edges()), ids, max_degree=self.max_degree)


def build_tree(
    edges: Iterable[tuple[int, int]],
    ids: Sequence[int] | None = None,
    max_degree: int | None = None,
    node_count: int | None = None,
) -> Tree:
    """Validate an edge list and freeze it into a Tree.

    The node count is taken from ``node_count``, else from ``ids``, else from
    the largest index mentioned. When ``max_degree`` is None the observed
    maximum degree becomes the tree's Δ, capped by the configured default.
    """
    edge_list = [(int(u), int(v)) for u, v in edges]
    if node_count is not None:
        n = node_count
    elif ids is not None:
        n = len(ids)
    else:
        n = 1 + max((max(e) for e in edge_list), default=0)
    if n < 1:
        raise NotATree("a tree needs at least one node")
    if ids is None:
        ids = list(range(1, n + 1))
    if len(ids) != n:
        raise NotATree(f"{len(ids)} ids given for {n} nodes")

    for u, v in edge_list:
        if not (0 <= u < n and 0 <= v < n):
            raise NotATree(f"edge ({u}, {v}) out of range for {n} nodes")
        if u == v:
            raise NotATree(f"self-loop at node {u}")
    if len(edge_list) != n - 1:
        raise NotATree(f"{len(edge_list)} edges for {n} nodes")
    if n > 1:
        rows = np.array([e[0] for e in edge_list] + [e[1] for e in edge_list])
        cols = np.array([e[1] for e in edge_list] + [e[0] for e in edge_list])
        graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        components, _ = connected_components(graph, directed=False)
        if components != 1:
            raise NotATree(f"graph has {components} components")

    id_list = [int(i) for i in ids]
    if len(set(id_list)) != n:
        raise DuplicateId("identifiers are not pairwise distinct")
    if min(id_list) < 1:
        raise DuplicateId("identifiers must be positive")

    neighbours: list[list[int]] = [[] for _ in range(n)]
    for u, v in edge_list:
        neighbours[u].append(v)
        neighbours[v].append(u)
    observed = max(len(a) for a in neighbours)
    cap = config.DEFAULT_MAX_DEGREE if max_degree is None else max_degree
    if observed > cap:
        worst = max(range(n), key=lambda u: len(neighbours[u]))
        raise DegreeExceeded(f"node {worst} has degree {observed} > {cap}")
    adjacency = tuple(tuple(sorted(a, key=id_list.__getitem__)) for a in neighbours)
    return Tree(adjacency, tuple(id_list), observed if max_degree is None else max_degree)


@dataclass(frozen=True)
class LevelAssignment:
    """Peeling levels 1..k per node; the value k+1 marks the remainder."""

    levels: tuple[int, ...]
    k: int

    def __getitem__(self, u: int) -> int:
        return self.levels[u]

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def remainder(self) -> int:
        return self.k + 1

    def is_remainder(self, u: int) -> bool:
        return self.levels[u] == self.k + 1

    def nodes_at(self, i: int) -> list[int]:
        return [u for u, lvl in enumerate(self.levels) if lvl == i]


def compute_levels(tree: Tree, k: int) -> LevelAssignment:
    """Peel nodes of degree at most 2, k times; what is left is the remainder."""
    if k < 1:
        raise ValueError("k must be at least 1")
    n = tree.node_count
    degree = [tree.degree(u) for u in range(n)]
    levels = [k + 1] * n
    alive = [u for u in range(n)]
    for i in range(1, k + 1):
        peeled = [u for u in alive if degree[u] <= 2]
        for u in peeled:
            levels[u] = i
        for u in peeled:
            for w in tree.adjacency[u]:
                degree[w] -= 1
        alive = [u for u in alive if levels[u] > i]
        if not alive:
            break
    return LevelAssignment(tuple(levels), k)


def level_paths(tree: Tree, levels: LevelAssignment, i: int) -> list[list[int]]:
    """Connected components of level i, each as a node sequence.

    A path is walked from its lower-id endpoint; lone nodes are 1-node paths.
    """
    try:
        return induced_paths(tree, levels.nodes_at(i))
    except ValueError as e:
        raise MalformedLevel(f"level {i}: {e}") from e


def induced_paths(tree: Tree, nodes: Iterable[int]) -> list[list[int]]:
    """Components of the subgraph induced by ``nodes``, walked end to end.

    Raises ValueError when a component branches.
    """
    members = set(nodes)
    seen: set[int] = set()
    paths: list[list[int]] = []
    for start in sorted(members, key=tree.ids.__getitem__):
        if start in seen:
            continue
        component = [start]
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for w in tree.adjacency[u]:
                if w in members and w not in seen:
                    seen.add(w)
                    component.append(w)
                    stack.append(w)
        inner = {u: [w for w in tree.adjacency[u] if w in members] for u in component}
        if any(len(nbrs) > 2 for nbrs in inner.values()):
            raise ValueError(f"component at node {start} is not a path")
        ends = [u for u in component if len(inner[u]) <= 1]
        head = min(ends, key=tree.ids.__getitem__)
        ordered = [head]
        previous = -1
        while len(ordered) < len(component):
            step = [w for w in inner[ordered[-1]] if w != previous]
            previous = ordered[-1]
            ordered.append(step[0])
        paths.append(ordered)
    paths.sort(key=lambda p: tree.ids[p[0]])
    return paths


class Ball:
    """The radius-t view of a node.

    Holds exactly the nodes within distance ``radius`` of ``center``. Levels,
    published outputs and tapes are only handed out where the node at the
    centre could actually know them after ``radius`` rounds.
    """

    def __init__(
        self,
        tree: Tree,
        center: int,
        radius: int,
        distance: dict[int, int],
        *,
        levels: LevelAssignment | None = None,
        ids_visible: bool = True,
        rounds: Sequence[int] | None = None,
        outputs: Sequence[Any] | None = None,
        states: Sequence[Any] | None = None,
        tape_of: Callable[[int], Any] | None = None,
        frontier: Sequence[int] | None = None,
    ) -> None:
        self._tree = tree
        self.center = center
        self.radius = radius
        self._distance = distance
        self._levels = levels
        self._ids_visible = ids_visible
        self._rounds = rounds
        self._outputs = outputs
        self._states = states
        self._tape_of = tape_of
        self._nodes: tuple[int, ...] | None = None
        self._frontier = None if frontier is None else tuple(frontier)

    def __contains__(self, u: int) -> bool:
        return u in self._distance

    def __len__(self) -> int:
        return len(self._distance)

    def __iter__(self) -> Iterator[int]:
        return iter(self._distance)

    @property
    def frontier(self) -> tuple[int, ...]:
        """Nodes at distance exactly ``radius``, the ones the last round added."""
        if self._frontier is None:
            self._frontier = tuple(u for u, d in self._distance.items() if d == self.radius)
        return self._frontier

    @property
    def nodes(self) -> tuple[int, ...]:
        if self._nodes is None:
            self._nodes = tuple(sorted(self._distance, key=self._tree.ids.__getitem__))
        return self._nodes

    def _require(self, u: int) -> None:
        if u not in self._distance:
            raise KeyError(f"node {u} lies outside the radius-{self.radius} view of {self.center}")

    def distance(self, u: int) -> int:
        return self._distance[u]

    def id(self, u: int) -> int | None:
        self._require(u)
        return self._tree.ids[u] if self._ids_visible else None

    def degree(self, u: int) -> int:
        self._require(u)
        return self._tree.degree(u)

    def neighbors(self, u: int) -> tuple[int, ...]:
        """Neighbours of u inside the ball, in id order."""
        self._require(u)
        return tuple(w for w in self._tree.adjacency[u] if w in self._distance)

    def is_incomplete(self, u: int) -> bool:
        return self.degree(u) > len(self.neighbors(u))

    def level(self, u: int) -> int | None:
        if self._levels is None or u not in self._distance:
            return None
        lvl = self._levels[u]
        if self._distance[u] + min(lvl, self._levels.k) - 1 <= self.radius:
            return lvl
        return None

    def has_level(self, u: int, j: int) -> bool | None:
        """Whether u sits at level j, or None while the view cannot tell yet."""
        if self._levels is None or u not in self._distance:
            return None
        if self._distance[u] + min(j, self._levels.k) - 1 <= self.radius:
            return self._levels[u] == j
        return None

    def decided(self, u: int) -> bool:
        if self._rounds is None or u not in self._distance:
            return False
        r = self._rounds[u]
        return r >= 0 and r + self._distance[u] <= self.radius

    def output(self, u: int) -> Any:
        return self._outputs[u] if self._outputs is not None and self.decided(u) else None

    def state(self, u: int) -> Any:
        return self._states[u] if self._states is not None and self.decided(u) else None

    def tape(self, u: int) -> Any:
        self._require(u)
        if self._tape_of is None:
            raise LookupError("no random tapes in this view")
        return self._tape_of(u)


def bfs_distances(tree: Tree, v: int, t: int) -> dict[int, int]:
    distance = {v: 0}
    frontier = [v]
    for d in range(1, t + 1):
        nxt = []
        for u in frontier:
            for w in tree.adjacency[u]:
                if w not in distance:
                    distance[w] = d
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return distance


def extract_ball(tree: Tree, v: int, t: int, **annotations: Any) -> Ball:
    if t < 0:
        raise ValueError("radius must be non-negative")
    return Ball(tree, v, t, bfs_distances(tree, v, t), **annotations)
