# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Instance families and identifier strategies.

Path lengths are node counts throughout.
"""
from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from typing import Any
from typing import Union

import numpy as np

from locallab.errors import RangeTooSmall
from locallab.errors import SizeOverflow
from locallab.sim import power_floor
from locallab.tree import build_tree
from locallab.tree import compute_levels
from locallab.tree import level_paths
from locallab.tree import LevelAssignment
from locallab.tree import Tree
from locallab.utils import config

logger = logging.getLogger(__name__)

INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class Instance:
    """A generated tree with the generator's level tags and designated paths."""

    tree: Tree
    levels: LevelAssignment | None
    paths: tuple[tuple[int, ...], ...]
    family: str
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.tree.node_count

    def with_ids(self, strategy: IdStrategy) -> Instance:
        return replace(self, tree=assign_ids(self.tree, strategy, self.paths))


def _check_cap(n: int) -> None:
    if n > config.NODE_CAP:
        raise SizeOverflow(f"{n} nodes exceed the cap of {config.NODE_CAP}")


def lb_graph_size(lengths: Sequence[int]) -> int:
    """Σ pᵢℓᵢ with p_k = 1 and pᵢ = (ℓᵢ₊₁ + 2)·pᵢ₊₁."""
    k = len(lengths)
    total = 0
    p = 1
    for i in range(k - 1, -1, -1):
        total += p * lengths[i]
        p *= lengths[i] + 2
    return total


def gen_lb_graph(k: int, lengths: Sequence[int]) -> Instance:
    """k-hierarchical lower bound graph.

    A level-(i+1) path node with d neighbours inside its own path receives
    3 - d level-i paths, each hooked on by one endpoint.
    """
    if k < 1 or len(lengths) != k or any(length < 1 for length in lengths):
        raise ValueError(f"need k >= 1 and k positive lengths, got k={k}, {list(lengths)}")
    _check_cap(lb_graph_size(lengths))

    edges: list[tuple[int, int]] = []
    tags: list[int] = []

    def new_path(length: int, level: int) -> list[int]:
        start = len(tags)
        tags.extend([level] * length)
        nodes = list(range(start, start + length))
        edges.extend(zip(nodes, nodes[1:]))
        return nodes

    current = [new_path(lengths[k - 1], k)]
    for i in range(k - 1, 0, -1):
        attached = []
        for path in current:
            m = len(path)
            for idx, u in enumerate(path):
                inside = (idx > 0) + (idx < m - 1)
                for _ in range(3 - inside):
                    leg = new_path(lengths[i - 1], i)
                    edges.append((u, leg[0]))
                    attached.append(leg)
        current = attached

    tree = build_tree(edges, node_count=len(tags))
    logger.debug("lb graph k=%d lengths=%s: n=%d", k, list(lengths), tree.node_count)
    return Instance(
        tree,
        LevelAssignment(tuple(tags), k),
        tuple(tuple(p) for p in current),
        "lb-graph",
        {"k": k, "lengths": list(lengths)},
    )


def gen_path(n: int) -> Instance:
    if n < 1:
        raise ValueError("a path needs at least one node")
    _check_cap(n)
    tree = build_tree([(u, u + 1) for u in range(n - 1)], node_count=n)
    return Instance(tree, LevelAssignment((1,) * n, 1), (tuple(range(n)),), "path", {"n": n})


def gen_caterpillar2(p: int, q: int, family: str = "caterpillar2") -> Instance:
    """Spine of p nodes, one q-node leg hooked on by its first node at each spine node."""
    if p < 1 or q < 1:
        raise ValueError("spine and leg must have at least one node")
    _check_cap(p * (q + 1))
    edges = [(u, u + 1) for u in range(p - 1)]
    legs = []
    nxt = p
    for s in range(p):
        leg = list(range(nxt, nxt + q))
        nxt += q
        edges.append((s, leg[0]))
        edges.extend(zip(leg, leg[1:]))
        legs.append(tuple(leg))
    tree = build_tree(edges, node_count=nxt)
    return Instance(tree, compute_levels(tree, 2), tuple(legs), family, {"p": p, "q": q})


def gen_threelevel(ell: int, ell_prime: int, i: int) -> Instance:
    """Three-level instance: spine of ℓ, ℓ′-paths on it, i-paths on those."""
    base = gen_lb_graph(3, (i, ell_prime, ell))
    return replace(base, family="threelevel", params={"ell": ell, "ell_prime": ell_prime, "i": i})


def gen_spine_comb(j: int, i: int) -> Instance:
    """Spine of 6j nodes with an i-node path at every spine node."""
    if j < 1:
        raise ValueError("j must be at least 1")
    base = gen_caterpillar2(6 * j, i, family="spine-comb")
    return replace(base, params={"j": j, "i": i})


def gen_random_tree(n: int, seed: int, max_degree: int | None = None) -> Instance:
    """Uniform attachment to a node that still has room under the degree cap."""
    if n < 1:
        raise ValueError("a tree needs at least one node")
    _check_cap(n)
    cap = config.DEFAULT_MAX_DEGREE if max_degree is None else max_degree
    if cap < 2 and n > 2:
        raise ValueError("degree cap below 2 only admits trees of at most 2 nodes")
    rng = np.random.default_rng(seed)
    degree = [0] * n
    open_nodes = [0]
    edges = []
    for v in range(1, n):
        slot = int(rng.integers(len(open_nodes)))
        u = open_nodes[slot]
        edges.append((u, v))
        degree[u] += 1
        degree[v] = 1
        if degree[u] >= cap:
            open_nodes[slot] = open_nodes[-1]
            open_nodes.pop()
        if cap > 1:
            open_nodes.append(v)
    tree = build_tree(edges, node_count=n, max_degree=cap)
    return Instance(tree, None, (), "random", {"n": n, "seed": seed, "max_degree": cap})


def gen_complete_tree(n: int, branching: int = 2) -> Instance:
    """First n nodes of the complete ``branching``-ary tree in breadth-first order."""
    if n < 1:
        raise ValueError("a tree needs at least one node")
    if not 1 <= branching <= config.DEFAULT_MAX_DEGREE - 1:
        raise ValueError(f"branching must lie in [1, {config.DEFAULT_MAX_DEGREE - 1}]")
    _check_cap(n)
    tree = build_tree([((v - 1) // branching, v) for v in range(1, n)], node_count=n)
    return Instance(tree, None, (), "complete", {"n": n, "branching": branching})


@dataclass(frozen=True)
class Sequential:
    pass


@dataclass(frozen=True)
class RandomPermutation:
    c: float = 1.0
    seed: int = 0


@dataclass(frozen=True)
class MonotoneAlongPaths:
    seed: int = 0


IdStrategy = Union[Sequential, RandomPermutation, MonotoneAlongPaths]


def _distinct_draws(n: int, high: int, rng: np.random.Generator) -> list[int]:
    if high <= 4 * n:
        return [int(x) + 1 for x in rng.permutation(high)[:n]]
    seen: dict[int, None] = {}
    while len(seen) < n:
        batch = rng.integers(1, high, size=n - len(seen) + 16, endpoint=True)
        for x in batch:
            seen.setdefault(int(x))
            if len(seen) == n:
                break
    return list(seen)


def assign_ids(
    tree: Tree,
    strategy: IdStrategy,
    paths: Sequence[Sequence[int]] | None = None,
) -> Tree:
    """Return a copy of ``tree`` with identifiers drawn per ``strategy``.

    MonotoneAlongPaths orders ids outward from the centre of each path in
    ``paths`` (default: the level-1 paths of the tree).
    """
    n = tree.node_count
    if isinstance(strategy, Sequential):
        ids = list(range(1, n + 1))
    elif isinstance(strategy, RandomPermutation):
        high = power_floor(n, strategy.c)
        if high < n:
            raise RangeTooSmall(f"n^c = {high} < n = {n}")
        if high > INT64_MAX:
            raise SizeOverflow(f"id range n^c = {high} is not representable")
        ids = _distinct_draws(n, high, np.random.default_rng(strategy.seed))
    else:
        rng = np.random.default_rng(strategy.seed)
        ids = [int(x) + 1 for x in rng.permutation(n)]
        if paths is None:
            paths = level_paths(tree, compute_levels(tree, 1), 1)
        for path in paths:
            m = len(path)
            center = (m - 1) // 2
            pool = sorted(ids[u] for u in path)
            order = sorted(range(m), key=lambda idx: (abs(idx - center), idx))
            for rank, idx in enumerate(order):
                ids[path[idx]] = pool[rank]
    return tree.with_ids(ids)
