# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from locallab.errors import RangeTooSmall
from locallab.errors import SizeOverflow
from locallab.generators import assign_ids
from locallab.generators import gen_caterpillar2
from locallab.generators import gen_complete_tree
from locallab.generators import gen_lb_graph
from locallab.generators import gen_path
from locallab.generators import gen_random_tree
from locallab.generators import gen_spine_comb
from locallab.generators import gen_threelevel
from locallab.generators import lb_graph_size
from locallab.generators import MonotoneAlongPaths
from locallab.generators import RandomPermutation
from locallab.generators import Sequential
from locallab.tree import compute_levels
from tests.conftest import PROPERTY_SETTINGS
from tests.conftest import to_networkx


def test_lb_graph_two_levels():
    instance = gen_lb_graph(2, [2, 3])
    assert instance.n == 13 == lb_graph_size([2, 3])
    assert len(instance.paths) == 5
    assert all(len(p) == 2 for p in instance.paths)
    assert instance.tree.max_degree == 3


def test_lb_graph_one_level_is_a_path():
    instance = gen_lb_graph(1, [7])
    assert instance.n == 7
    assert instance.levels.levels == (1,) * 7


@given(
    st.integers(min_value=1, max_value=3).flatmap(
        lambda k: st.lists(st.integers(min_value=1, max_value=4), min_size=k, max_size=k)
    )
)
@PROPERTY_SETTINGS
def test_lb_graph_levels_agree_with_peeling(lengths):
    k = len(lengths)
    instance = gen_lb_graph(k, lengths)
    assert instance.n == lb_graph_size(lengths)
    assert compute_levels(instance.tree, k).levels == instance.levels.levels
    assert nx.is_tree(to_networkx(instance.tree))


@pytest.mark.parametrize("k, lengths", [(0, []), (2, [3]), (2, [0, 2])])
def test_lb_graph_rejects_bad_lengths(k, lengths):
    with pytest.raises(ValueError):
        gen_lb_graph(k, lengths)


def test_single_node_path():
    assert gen_path(1).n == 1


def test_node_cap():
    with pytest.raises(SizeOverflow):
        gen_path(10**7 + 1)


def test_caterpillar():
    instance = gen_caterpillar2(3, 2)
    assert instance.n == 9
    levels = instance.levels
    assert [levels[s] for s in range(3)] == [1, 2, 1]
    assert all(levels[u] == 1 for leg in instance.paths for u in leg)


def test_threelevel_smallest():
    instance = gen_threelevel(1, 1, 1)
    assert instance.n == 13
    assert instance.family == "threelevel"
    assert instance.params == {"ell": 1, "ell_prime": 1, "i": 1}


def test_spine_comb():
    instance = gen_spine_comb(1, 2)
    assert instance.n == 18
    assert len(instance.paths) == 6


def test_random_tree_is_seeded():
    a = gen_random_tree(300, seed=7)
    b = gen_random_tree(300, seed=7)
    c = gen_random_tree(300, seed=8)
    assert a.tree == b.tree
    assert a.tree != c.tree
    assert a.tree.max_degree == 4
    assert all(a.tree.degree(u) <= 4 for u in range(300))
    assert nx.is_tree(to_networkx(a.tree))


def test_complete_tree():
    tree = gen_complete_tree(7).tree
    assert [tree.degree(u) for u in range(7)] == [2, 3, 3, 1, 1, 1, 1]
    with pytest.raises(ValueError):
        gen_complete_tree(7, branching=4)


def test_sequential_ids():
    tree = assign_ids(gen_random_tree(20, 1).tree, Sequential())
    assert tree.ids == tuple(range(1, 21))


def test_random_ids_respect_range():
    tree = gen_path(50).tree
    relabeled = assign_ids(tree, RandomPermutation(c=2, seed=3))
    assert len(set(relabeled.ids)) == 50
    assert max(relabeled.ids) <= 50**2
    assert relabeled.ids == assign_ids(tree, RandomPermutation(c=2, seed=3)).ids
    assert set(relabeled.edges()) == set(tree.edges())


def test_random_ids_need_room():
    with pytest.raises(RangeTooSmall):
        assign_ids(gen_path(50).tree, RandomPermutation(c=0.5))


def test_monotone_ids_grow_outward():
    instance = gen_path(9)
    tree = assign_ids(instance.tree, MonotoneAlongPaths(seed=5), instance.paths)
    ids = tree.ids
    assert all(ids[u] > ids[u + 1] for u in range(4))
    assert all(ids[u] < ids[u + 1] for u in range(4, 8))
