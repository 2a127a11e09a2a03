# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
from __future__ import annotations

from collections.abc import Sequence

from locallab.halfcol.paths import BLACK
from locallab.halfcol.paths import COLORS
from locallab.halfcol.paths import DECLINE
from locallab.halfcol.paths import EXEMPT
from locallab.halfcol.paths import LABELS
from locallab.halfcol.paths import WHITE
from locallab.report import Report
from locallab.tree import compute_levels
from locallab.tree import LevelAssignment
from locallab.tree import Tree

CLASHES = {(WHITE, WHITE), (BLACK, BLACK), (WHITE, DECLINE), (DECLINE, WHITE), (BLACK, DECLINE), (DECLINE, BLACK)}


def verify_halfcol(
    tree: Tree,
    k: int,
    output: Sequence[str],
    levels: LevelAssignment | None = None,
) -> Report:
    """Check a k-hierarchical 2½-coloring.

    The remainder declines, level k never declines, level 1 is never exempt,
    same-level neighbours never clash and every exemption is backed by a
    lower neighbour labeled B, W or E.
    """
    report = Report("halfcol")
    n = tree.node_count
    if len(output) != n:
        report.add("shape", [], f"{len(output)} labels for {n} nodes")
        return report
    levels = levels or compute_levels(tree, k)
    bad = [u for u in range(n) if output[u] not in LABELS]
    if bad:
        report.add("label", bad, "labels must be one of B, W, E, D")
        return report

    for u in range(n):
        lvl, out = levels[u], output[u]
        if levels.is_remainder(u):
            if out != DECLINE:
                report.add("remainder", [u], f"remainder node outputs {out}")
            continue
        if lvl == k and out == DECLINE:
            report.add("top-decline", [u], f"level {k} node declines")
        if lvl == 1 and out == EXEMPT:
            report.add("bottom-exempt", [u], "level 1 node is exempt")
        if out == EXEMPT:
            backing = [w for w in tree.adjacency[u] if levels[w] < lvl and output[w] in COLORS + (EXEMPT,)]
            if not backing:
                report.add("exempt", [u], "no lower neighbour labeled B, W or E")

    for u, v in tree.edges():
        if levels[u] != levels[v] or levels.is_remainder(u):
            continue
        if (output[u], output[v]) in CLASHES:
            report.add("adjacency", [u, v], f"level {levels[u]} neighbours labeled {output[u]} and {output[v]}")
    return report
