# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
"""Checkers for decompositions and for the k-rake-and-compress LCL.

Neither checker raises on a bad labeling; problems are collected in a
:class:`~locallab.report.Report` with the offending nodes as witnesses.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from locallab.rc.decompose import DecompLabeling
from locallab.rc.primitives import COMPRESS
from locallab.rc.primitives import Layer
from locallab.rc.primitives import RAKE
from locallab.report import Report
from locallab.tree import induced_paths
from locallab.tree import Tree


def verify_decomposition(tree: Tree, labeling: DecompLabeling | Sequence[Layer | None]) -> Report:
    report = Report("decomposition")
    layers = labeling.layers if isinstance(labeling, DecompLabeling) else tuple(labeling)
    ell = labeling.ell if isinstance(labeling, DecompLabeling) else None
    gamma = labeling.gamma if isinstance(labeling, DecompLabeling) and labeling.gamma > 0 else None
    top = labeling.L if isinstance(labeling, DecompLabeling) and labeling.L > 0 else None
    n = tree.node_count
    if len(layers) != n:
        report.add("unlabeled", [], f"{len(layers)} labels for {n} nodes")
        return report
    missing = [u for u in range(n) if layers[u] is None]
    if missing:
        report.add("unlabeled", missing, "nodes without a layer")
        return report

    for u, layer in enumerate(layers):
        if layer.index < 1 or (layer.is_rake and layer.sub < 1):
            report.add("layer-range", [u], f"layer {layer} has a zero index")
        elif layer.is_rake and top is not None and layer.index > top:
            report.add("layer-range", [u], f"rake layer {layer.index} above L={top}")
        elif layer.is_rake and gamma is not None and layer.sub > gamma:
            report.add("layer-range", [u], f"rake sublayer {layer.sub} above gamma={gamma}")
        elif not layer.is_rake and top is not None and layer.index > top - 1:
            report.add("layer-range", [u], f"compress layer {layer.index} above L-1={top - 1}")

    def higher(u: int) -> list[int]:
        key = layers[u].key
        return [w for w in tree.adjacency[u] if layers[w].key > key]

    by_compress: dict[int, list[int]] = {}
    for u, layer in enumerate(layers):
        if layer.kind == COMPRESS:
            by_compress.setdefault(layer.index, []).append(u)
            continue
        same = [w for w in tree.adjacency[u] if layers[w] == layer]
        if same:
            report.add("rake-isolation", [u] + same, f"adjacent nodes share rake sublayer {layer}")
        up = higher(u)
        if len(up) > 1:
            report.add("rake-higher", [u] + up, f"rake node has {len(up)} higher neighbours")

    for index, members in sorted(by_compress.items()):
        try:
            components = induced_paths(tree, members)
        except ValueError:
            branching = [u for u in members if sum(layers[w] == layers[u] for w in tree.adjacency[u]) > 2]
            report.add("compress-shape", branching, f"compress layer {index} is not a union of paths")
            continue
        for comp in components:
            if ell is not None and not ell <= len(comp) <= 2 * ell:
                report.add(
                    "compress-length",
                    comp,
                    f"compress path of {len(comp)} nodes outside [{ell}, {2 * ell}]",
                )
            ends = {comp[0], comp[-1]}
            for u in comp:
                up = higher(u)
                if u in ends and len(comp) > 1 and len(up) != 1:
                    report.add("compress-endpoint", [u] + up, f"endpoint has {len(up)} higher neighbours")
                elif u in ends and len(comp) == 1 and len(up) != 2:
                    report.add("compress-endpoint", [u] + up, f"lone compress node has {len(up)} higher neighbours")
                elif u not in ends and up:
                    report.add("compress-interior", [u] + up, "interior compress node has a higher neighbour")
    return report


def label_rank(label: tuple[str, int]) -> int:
    """Position in R₁ < C₁ < R₂ < … < C_{k-1} < R_k."""
    kind, i = label
    return 2 * (i - 1) if kind == RAKE else 2 * i - 1


@dataclass(frozen=True)
class RcLclOutput:
    """Labels (kind, index) per node and the set of oriented edges u→v."""

    labels: tuple[tuple[str, int], ...]
    orientation: frozenset[tuple[int, int]]


def to_rc_lcl(tree: Tree, labeling: DecompLabeling | Sequence[Layer]) -> RcLclOutput:
    """Collapse sublayers and orient every edge with a rake endpoint upward.

    Edges go from the lower to the higher layer; equal layers, which a valid
    decomposition never puts side by side, point toward the higher id.
    """
    layers = labeling.layers if isinstance(labeling, DecompLabeling) else tuple(labeling)
    labels = tuple((lay.kind, lay.index) for lay in layers)
    arcs = set()
    for u, v in tree.edges():
        if not (layers[u].is_rake or layers[v].is_rake):
            continue
        ku, kv = layers[u].key, layers[v].key
        if ku < kv or (ku == kv and tree.ids[u] < tree.ids[v]):
            arcs.add((u, v))
        else:
            arcs.add((v, u))
    return RcLclOutput(labels, frozenset(arcs))


def verify_rc_lcl(tree: Tree, output: RcLclOutput, k: int | None = None) -> Report:
    report = Report("rc-lcl")
    labels = output.labels
    n = tree.node_count
    if len(labels) != n:
        report.add("shape", [], f"{len(labels)} labels for {n} nodes")
        return report
    for u, (kind, i) in enumerate(labels):
        top = None if k is None else (k if kind == RAKE else k - 1)
        if kind not in (RAKE, COMPRESS) or i < 1 or (top is not None and i > top):
            report.add("label-range", [u], f"label {kind}{i} not allowed")

    arcs = output.orientation
    outgoing = [0] * n
    for u, v in arcs:
        if v not in tree.adjacency[u]:
            report.add("orientation", [u, v], "oriented pair is not an edge")
            continue
        outgoing[u] += 1
        if (v, u) in arcs:
            report.add("rule1", [u, v], "edge oriented both ways")
        if label_rank(labels[v]) < label_rank(labels[u]):
            report.add("rule3", [u, v], "edge points to a smaller label")

    for u, v in tree.edges():
        oriented = (u, v) in arcs or (v, u) in arcs
        touches_rake = labels[u][0] == RAKE or labels[v][0] == RAKE
        if touches_rake and not oriented:
            report.add("rule1", [u, v], "edge at a rake node is not oriented")
        if not touches_rake and oriented:
            report.add("rule1", [u, v], "edge between compress nodes is oriented")

    for u in range(n):
        compress_nbrs = [w for w in tree.adjacency[u] if labels[w][0] == COMPRESS]
        if labels[u][0] == COMPRESS and len(compress_nbrs) >= 2:
            if outgoing[u]:
                report.add("rule2", [u], "compress node between two compress neighbours has an outgoing edge")
        elif outgoing[u] > 1:
            report.add("rule2", [u], f"{outgoing[u]} outgoing edges")

    compress_labels = {lab for lab in labels if lab[0] == COMPRESS}
    for lab in sorted(compress_labels):
        members = [u for u in range(n) if labels[u] == lab]
        try:
            induced_paths(tree, members)
        except ValueError:
            branching = [u for u in members if sum(labels[w] == lab for w in tree.adjacency[u]) > 2]
            report.add("rule4", branching, f"nodes labeled C{lab[1]} do not form paths")

    for u, v in tree.edges():
        lu, lv = labels[u], labels[v]
        if lu[0] == COMPRESS and lv[0] == COMPRESS and lu != lv:
            report.add("rule5", [u, v], f"C{lu[1]} next to C{lv[1]}")
    return report
