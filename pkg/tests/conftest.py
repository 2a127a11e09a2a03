# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import HealthCheck
from hypothesis import settings
from hypothesis import strategies as st

from locallab.generators import gen_lb_graph
from locallab.tree import build_tree
from locallab.tree import Tree

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


@st.composite
def trees(draw: st.DrawFn, min_nodes: int = 1, max_nodes: int = 40, max_degree: int = 4) -> Tree:
    """Random trees grown by attaching each new node to one with room left."""
    n = draw(st.integers(min_value=min_nodes, max_value=max_nodes))
    degree = [0] * n
    edges = []
    for v in range(1, n):
        room = [u for u in range(v) if degree[u] < max_degree]
        u = room[draw(st.integers(min_value=0, max_value=len(room) - 1))]
        edges.append((u, v))
        degree[u] += 1
        degree[v] += 1
    ids = draw(st.permutations(list(range(1, n + 1))))
    return build_tree(edges, ids, max_degree=max_degree)


def to_networkx(tree: Tree) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(tree.node_count))
    graph.add_edges_from(tree.edges())
    return graph


def path_tree(n: int, first_id: int = 1) -> Tree:
    return build_tree([(u, u + 1) for u in range(n - 1)], list(range(first_id, first_id + n)), node_count=n)


@pytest.fixture
def lb13():
    """Two-level lower bound graph with a 3-node top path and 2-node legs."""
    return gen_lb_graph(2, [2, 3])
