# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Rake, compress and the colorings compress relies on."""
from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import sympy

from locallab.sim import root_ceil
from locallab.tree import induced_paths
from locallab.tree import Tree

RAKE = "R"
COMPRESS = "C"

BLOCK = 1 << 15


@dataclass(frozen=True)
class Layer:
    """Rake layer i, sublayer j (kind R) or compress layer i (kind C)."""

    kind: str
    index: int
    sub: int = 0

    @classmethod
    def rake(cls, i: int, j: int) -> Layer:
        return cls(RAKE, i, j)

    @classmethod
    def compress(cls, i: int) -> Layer:
        return cls(COMPRESS, i, 0)

    @property
    def is_rake(self) -> bool:
        return self.kind == RAKE

    @property
    def key(self) -> tuple[int, int, int]:
        """Total order R(i,1) < … < R(i,γ) < C(i) < R(i+1,1)."""
        if self.kind == RAKE:
            return (self.index, 0, self.sub)
        return (self.index, 1, 0)

    def __str__(self) -> str:
        if self.kind == RAKE:
            return f"R {self.index} {self.sub}"
        return f"C {self.index}"


class Residual:
    """The graph induced by nodes that have no layer yet."""

    def __init__(self, tree: Tree) -> None:
        n = tree.node_count
        self.tree = tree
        self.alive = [True] * n
        self.degree = [tree.degree(u) for u in range(n)]
        self.layers: list[Layer | None] = [None] * n
        self.count = n
        self._low = {u for u in range(n) if self.degree[u] <= 1}

    def __len__(self) -> int:
        return self.count

    @property
    def empty(self) -> bool:
        return self.count == 0

    def alive_nodes(self) -> list[int]:
        return [u for u, a in enumerate(self.alive) if a]

    def low_degree(self) -> list[int]:
        return sorted(self._low, key=self.tree.ids.__getitem__)

    def alive_neighbors(self, u: int) -> list[int]:
        return [w for w in self.tree.adjacency[u] if self.alive[w]]

    def remove(self, nodes: Iterable[int], layer: Layer) -> None:
        batch = list(nodes)
        for u in batch:
            self.alive[u] = False
            self.layers[u] = layer
            self._low.discard(u)
        self.count -= len(batch)
        for u in batch:
            for w in self.tree.adjacency[u]:
                if self.alive[w]:
                    self.degree[w] -= 1
                    if self.degree[w] <= 1:
                        self._low.add(w)


def rake(residual: Residual, layer: int, sublayer: int) -> list[int]:
    """Move every node of residual degree at most 1 into rake layer ``layer``, sublayer ``sublayer``.

    Of two adjacent degree-1 nodes only the one with the lower id goes.
    """
    ids = residual.tree.ids
    chosen = []
    for u in residual.low_degree():
        if residual.degree[u] == 1:
            (w,) = residual.alive_neighbors(u)
            if residual.degree[w] == 1 and ids[w] < ids[u]:
                continue
        chosen.append(u)
    residual.remove(chosen, Layer.rake(layer, sublayer))
    return chosen


@dataclass(frozen=True)
class Coloring:
    colors: dict[int, int]
    palette: int
    iterations: int

    def __getitem__(self, u: int) -> int:
        return self.colors[u]


def _next_prime(x: int) -> int:
    """Smallest prime at least ``x``."""
    return int(sympy.nextprime(max(1, x - 1)))


def linial_steps(palette: int, conflicts: int) -> list[tuple[int, int]]:
    """(d, q) of every polynomial color-reduction step starting from ``palette`` colors.

    A step maps a color to a·q + p(a), p the degree-d polynomial over GF(q)
    spelled by the color's base-q digits. It needs q > conflicts·d and
    q^(d+1) >= palette and leaves q² colors; the q minimising q² is taken and
    the reduction stops once it no longer shrinks the palette.
    """
    steps = []
    while palette > 1:
        best: tuple[int, int] | None = None
        for d in range(63, 0, -1):
            floor = max(conflicts * d + 1, root_ceil(palette, d + 1))
            if best is not None and floor > best[1]:
                continue
            q = _next_prime(floor)
            if best is None or q <= best[1]:
                best = (d, q)
        assert best is not None
        d, q = best
        if q * q >= palette:
            break
        steps.append((d, q))
        palette = q * q
    return steps


def palette_bound(ell: int) -> int:
    """Fixed point of the reduction on the ℓ-th power of a path."""
    steps = linial_steps(2**64, 2 * ell)
    return steps[-1][1] ** 2 if steps else 2**64


def _reduce(colors: np.ndarray, path_of: np.ndarray, ell: int, d: int, q: int) -> np.ndarray:
    n = colors.size
    out = np.empty(n, dtype=np.uint64)
    a = np.arange(q, dtype=np.int64)
    uq = np.uint64(q)
    for start in range(0, n, BLOCK):
        lo, hi = max(0, start - ell), min(n, start + BLOCK + ell)
        x = colors[lo:hi].copy()
        digits = []
        for _ in range(d + 1):
            digits.append((x % uq).astype(np.int64))
            x //= uq
        values = np.zeros((hi - lo, q), dtype=np.int64)
        for digit in reversed(digits):
            values = (values * a + digit[:, None]) % q
        owner = path_of[lo:hi]
        clash = np.zeros(values.shape, dtype=bool)
        for delta in range(1, ell + 1):
            if delta >= hi - lo:
                break
            same = (owner[delta:] == owner[:-delta])[:, None]
            hit = (values[delta:] == values[:-delta]) & same
            clash[delta:] |= hit
            clash[:-delta] |= hit
        rows = slice(start - lo, start - lo + min(BLOCK, n - start))
        choice = np.argmin(clash[rows], axis=1)
        picked = values[rows][np.arange(choice.size), choice]
        out[start : start + choice.size] = (choice * q + picked).astype(np.uint64)
    return out


def linial_distance_coloring(tree: Tree, paths: Sequence[Sequence[int]], ell: int) -> Coloring:
    """Proper coloring of the ℓ-th power of every path, starting from id - 1."""
    order = [u for p in paths for u in p]
    if not order:
        return Coloring({}, 0, 0)
    path_of = np.repeat(np.arange(len(paths)), [len(p) for p in paths])
    colors = np.array([tree.ids[u] - 1 for u in order], dtype=np.uint64)
    palette = tree.max_id
    steps = linial_steps(palette, 2 * ell)
    for d, q in steps:
        colors = _reduce(colors, path_of, ell, d, q)
        palette = q * q
    return Coloring(dict(zip(order, (int(c) for c in colors))), palette, len(steps))


def ruling_set_on_path(
    path: Sequence[int],
    ell: int,
    coloring: Coloring,
    anchored: bool = False,
) -> list[int]:
    """Maximal set of path nodes pairwise more than ℓ apart, built color class by color class.

    Anchored sets contain both endpoints. Consecutive members are then between
    ℓ + 1 and 2ℓ + 1 positions apart.
    """
    m = len(path)
    if m == 0:
        return []
    blocked = [False] * m
    chosen: list[int] = []

    def take(pos: int) -> None:
        chosen.append(pos)
        for p in range(max(0, pos - ell), min(m, pos + ell + 1)):
            blocked[p] = True

    lo, hi = 0, m - 1
    if anchored:
        take(0)
        if m > 1:
            take(m - 1)
        lo, hi = ell + 1, m - 2 - ell
    classes: dict[int, list[int]] = defaultdict(list)
    for pos in range(lo, hi + 1):
        classes[coloring[path[pos]]].append(pos)
    for color in sorted(classes):
        for pos in classes[color]:
            if not blocked[pos]:
                take(pos)
    return [path[p] for p in sorted(chosen)]


def compress_paths(residual: Residual, ell: int) -> list[list[int]]:
    """Maximal residual paths of degree-2 nodes with at least ℓ + 2 nodes."""
    twos = [u for u in residual.alive_nodes() if residual.degree[u] == 2]
    return [p for p in induced_paths(residual.tree, twos) if len(p) >= ell + 2]


@dataclass(frozen=True)
class CompressStep:
    ruling: list[int]
    compressed: list[int]
    coloring: Coloring | None


def compress(residual: Residual, ell: int, j: int, coloring: Coloring | None = None) -> CompressStep:
    """Assign every qualifying degree-2 path.

    Ruling nodes go to the first rake sublayer of layer j + 1, the rest to
    compress layer j.
    """
    paths = compress_paths(residual, ell)
    if not paths:
        return CompressStep([], [], coloring)
    if coloring is None or any(u not in coloring.colors for p in paths for u in p):
        coloring = linial_distance_coloring(residual.tree, paths, ell)
    ruling: list[int] = []
    compressed: list[int] = []
    for path in paths:
        picked = set(ruling_set_on_path(path, ell, coloring, anchored=True))
        ruling.extend(u for u in path if u in picked)
        compressed.extend(u for u in path if u not in picked)
    residual.remove(ruling, Layer.rake(j + 1, 1))
    residual.remove(compressed, Layer.compress(j))
    return CompressStep(ruling, compressed, coloring)
