# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Line-oriented text formats for trees and labelings.

Every line is a keyword followed by whitespace-separated integers or labels::

    tree <n>
    edge <u> <v>            n - 1 lines, 0-based node indices
    id <u> <value>          optional, default index + 1
    k <k>                   optional, precedes the level lines
    levels <u> <value>      optional sidecar written by ``gen``

    params <gamma> <ell> <L>
    label <u> <R|C> <i> [<j>]
    orient <u> <v>          u -> v

    out <u> <B|W|E|D>
"""
from __future__ import annotations

from collections.abc import Iterable
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

from locallab.errors import FormatError
from locallab.halfcol.paths import LABELS
from locallab.rc.decompose import DecompLabeling
from locallab.rc.primitives import COMPRESS
from locallab.rc.primitives import Layer
from locallab.rc.primitives import RAKE
from locallab.rc.verify import RcLclOutput
from locallab.tree import build_tree
from locallab.tree import LevelAssignment
from locallab.tree import Tree


def _records(text: str) -> Iterable[tuple[int, list[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        fields = raw.split()
        if fields and not fields[0].startswith("#"):
            yield number, fields


def _ints(number: int, fields: Sequence[str], count: int) -> list[int]:
    if len(fields) != count:
        raise FormatError(f"line {number}: expected {count} values after {fields[0]!r}")
    try:
        return [int(x) for x in fields[1:]]
    except ValueError as e:
        raise FormatError(f"line {number}: {e}") from e


def _index(number: int, u: int, n: int) -> int:
    if not 0 <= u < n:
        raise FormatError(f"line {number}: node {u} out of range for {n} nodes")
    return u


@dataclass(frozen=True)
class TreeFile:
    tree: Tree
    levels: LevelAssignment | None = None


def dump_tree(tree: Tree, levels: LevelAssignment | None = None) -> str:
    lines = [f"tree {tree.node_count}"]
    lines += [f"edge {u} {v}" for u, v in tree.edges()]
    lines += [f"id {u} {i}" for u, i in enumerate(tree.ids)]
    if levels is not None:
        lines.append(f"k {levels.k}")
        lines += [f"levels {u} {lvl}" for u, lvl in enumerate(levels.levels)]
    return "\n".join(lines) + "\n"


def load_tree(text: str, max_degree: int | None = None) -> TreeFile:
    records = list(_records(text))
    if not records or records[0][1][0] != "tree":
        raise FormatError("a tree file starts with 'tree <n>'")
    number, fields = records[0]
    (n,) = _ints(number, fields, 2)
    if n < 1:
        raise FormatError(f"line {number}: a tree needs at least one node")
    edges: list[tuple[int, int]] = []
    ids = list(range(1, n + 1))
    levels: dict[int, int] = {}
    k: int | None = None
    for number, fields in records[1:]:
        key = fields[0]
        if key == "edge":
            u, v = _ints(number, fields, 3)
            edges.append((_index(number, u, n), _index(number, v, n)))
        elif key == "id":
            u, value = _ints(number, fields, 3)
            ids[_index(number, u, n)] = value
        elif key == "k":
            (k,) = _ints(number, fields, 2)
        elif key == "levels":
            u, value = _ints(number, fields, 3)
            levels[_index(number, u, n)] = value
        else:
            raise FormatError(f"line {number}: unknown keyword {key!r}")
    tree = build_tree(edges, ids, max_degree=max_degree, node_count=n)
    assignment = None
    if levels:
        if len(levels) != n:
            raise FormatError(f"{len(levels)} level lines for {n} nodes")
        values = tuple(levels[u] for u in range(n))
        k = k if k is not None else max(values)
        if min(values) < 1 or max(values) > k + 1:
            raise FormatError(f"levels must lie in 1..{k + 1}")
        assignment = LevelAssignment(values, k)
    return TreeFile(tree, assignment)


def dump_halfcol(output: Sequence[str]) -> str:
    return "".join(f"out {u} {label}\n" for u, label in enumerate(output))


def load_halfcol(text: str, n: int) -> tuple[str, ...]:
    out: list[str | None] = [None] * n
    for number, fields in _records(text):
        if fields[0] != "out" or len(fields) != 3:
            raise FormatError(f"line {number}: expected 'out <u> <label>'")
        try:
            u = int(fields[1])
        except ValueError as e:
            raise FormatError(f"line {number}: {e}") from e
        if fields[2] not in LABELS:
            raise FormatError(f"line {number}: label {fields[2]!r} is not one of {', '.join(LABELS)}")
        out[_index(number, u, n)] = fields[2]
    missing = [u for u, label in enumerate(out) if label is None]
    if missing:
        raise FormatError(f"no label for nodes {missing[:10]}")
    return tuple(label for label in out if label is not None)


def dump_decomposition(labeling: DecompLabeling, lcl: RcLclOutput | None = None) -> str:
    lines = [f"params {labeling.gamma} {labeling.ell} {labeling.L}"]
    for u, layer in enumerate(labeling.layers):
        if layer.is_rake:
            lines.append(f"label {u} {RAKE} {layer.index} {layer.sub}")
        else:
            lines.append(f"label {u} {COMPRESS} {layer.index}")
    if lcl is not None:
        lines += [f"orient {u} {v}" for u, v in sorted(lcl.orientation)]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DecompositionFile:
    labeling: DecompLabeling
    orientation: frozenset[tuple[int, int]]

    def as_lcl(self) -> RcLclOutput:
        return RcLclOutput(tuple((lay.kind, lay.index) for lay in self.labeling.layers), self.orientation)


def load_decomposition(text: str, n: int) -> DecompositionFile:
    params: list[int] | None = None
    layers: list[Layer | None] = [None] * n
    arcs: set[tuple[int, int]] = set()
    for number, fields in _records(text):
        key = fields[0]
        if key == "params":
            params = _ints(number, fields, 4)
        elif key == "label":
            if len(fields) not in (4, 5) or fields[2] not in (RAKE, COMPRESS):
                raise FormatError(f"line {number}: expected 'label <u> <R|C> <i> [<j>]'")
            try:
                u, i = int(fields[1]), int(fields[3])
                j = int(fields[4]) if len(fields) == 5 else 0
            except ValueError as e:
                raise FormatError(f"line {number}: {e}") from e
            layers[_index(number, u, n)] = Layer.rake(i, j) if fields[2] == RAKE else Layer.compress(i)
        elif key == "orient":
            u, v = _ints(number, fields, 3)
            arcs.add((_index(number, u, n), _index(number, v, n)))
        else:
            raise FormatError(f"line {number}: unknown keyword {key!r}")
    if params is None:
        raise FormatError("missing 'params <gamma> <ell> <L>' line")
    missing = [u for u, layer in enumerate(layers) if layer is None]
    if missing:
        raise FormatError(f"no label for nodes {missing[:10]}")
    gamma, ell, L = params
    labeling = DecompLabeling(tuple(lay for lay in layers if lay is not None), gamma, ell, L)
    return DecompositionFile(labeling, frozenset(arcs))


def read_text(path: Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e.strerror}") from e


def write_text(path: Path, text: str) -> None:
    Path(path).write_text(text)
