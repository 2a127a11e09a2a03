# SPDX-FileCopyrightText: 2024-present locallab contributors
#
# SPDX-License-Identifier: AGPL-3.0-or-later
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from locallab.errors import KnowledgeViolation
from locallab.errors import PromiseViolation
from locallab.errors import WrongLevel
from locallab.generators import assign_ids
from locallab.generators import gen_caterpillar2
from locallab.generators import gen_lb_graph
from locallab.generators import gen_path
from locallab.generators import gen_random_tree
from locallab.generators import gen_spine_comb
from locallab.generators import gen_threelevel
from locallab.generators import RandomPermutation
from locallab.halfcol import algo_id_promise
from locallab.halfcol import algo_known_n
from locallab.halfcol import algo_rand_k2
from locallab.halfcol import algo_rand_k3
from locallab.halfcol import build_halflog
from locallab.halfcol import friendly_windows
from locallab.halfcol import has_friendly_subpath
from locallab.halfcol import is_friendly
from locallab.halfcol import q_set
from locallab.halfcol import verify_halfcol
from locallab.halfcol.id_promise import largest_id
from locallab.halfcol.paths import canonical_color
from locallab.halfcol.paths import SegmentWalk
from locallab.halfcol.paths import walk_segment
from locallab.sim import ForcedTape
from locallab.sim import KnowledgeModel
from locallab.tree import build_tree
from locallab.tree import compute_levels
from locallab.tree import extract_ball
from locallab.tree import induced_paths
from tests.conftest import path_tree
from tests.conftest import PROPERTY_SETTINGS
from tests.conftest import to_networkx
from tests.conftest import trees


def assert_valid(tree, k, result):
    report = verify_halfcol(tree, k, result.output, result.levels)
    assert report.ok, report.lines()


def forced(bits):
    tapes = {u: ForcedTape([b]) for u, b in enumerate(bits)}
    return tapes.__getitem__


#
# Known n
#


def test_known_n_lower_bound_graph(lb13):
    result = algo_known_n(lb13.tree, 2)
    assert_valid(lb13.tree, 2, result)
    assert all(result.output[u] == "E" for u in result.levels.nodes_at(2))
    assert all(result.output[u] in "BW" for u in result.levels.nodes_at(1))


def test_known_n_declines_long_paths():
    result = algo_known_n(path_tree(16), 2)
    assert set(result.output) == {"D"}
    assert_valid(path_tree(16), 2, result)


def test_known_n_single_level_colors_the_path():
    tree = path_tree(9)
    result = algo_known_n(tree, 1)
    assert result.output == ("B", "W", "B", "W", "B", "W", "B", "W", "B")
    assert result.trace.rounds_max <= 10


def test_known_n_needs_n():
    with pytest.raises(KnowledgeViolation):
        algo_known_n(path_tree(5), 2, KnowledgeModel.promise(1.0))


@pytest.mark.parametrize("k", [1, 2, 3])
@given(tree=trees(max_nodes=50))
@PROPERTY_SETTINGS
def test_known_n_is_valid(k, tree):
    assert_valid(tree, k, algo_known_n(tree, k))


def test_known_n_on_caterpillar():
    instance = gen_caterpillar2(10, 3)
    result = algo_known_n(instance.tree, 2)
    assert_valid(instance.tree, 2, result)
    assert result.trace.rounds_max <= 2 * math.isqrt(instance.n) + 6


#
# Id range promise
#


def test_id_promise_path_declines_together():
    tree = path_tree(36, first_id=65)
    result = algo_id_promise(tree, 2, KnowledgeModel.promise(2.0))
    assert set(result.output) == {"D"}
    assert set(result.trace.decision_rounds) == {5}


def test_id_promise_on_lower_bound_graph():
    tree = gen_lb_graph(2, [4, 6]).tree
    result = algo_id_promise(tree, 2, KnowledgeModel.promise(2.0))
    assert_valid(tree, 2, result)


def test_id_promise_three_levels():
    tree = gen_lb_graph(3, [2, 3, 4]).tree
    result = algo_id_promise(tree, 3, KnowledgeModel.promise(3.0))
    assert_valid(tree, 3, result)


def test_id_promise_rejects_large_ids():
    with pytest.raises(PromiseViolation):
        algo_id_promise(path_tree(10, first_id=200), 2, KnowledgeModel.promise(2.0))
    with pytest.raises(KnowledgeViolation):
        algo_id_promise(path_tree(10), 2, KnowledgeModel.exact(10))


@given(trees(max_nodes=50))
@PROPERTY_SETTINGS
def test_id_promise_is_valid(tree):
    assert_valid(tree, 2, algo_id_promise(tree, 2, KnowledgeModel.promise(1.0)))


#
# Randomized, k = 2
#


def test_unmarked_path_is_two_colored():
    tree = path_tree(5)
    result = algo_rand_k2(tree, tapes=forced([0] * 5))
    assert result.output == ("B", "W", "B", "W", "B")


def test_one_mark_declines_the_whole_path():
    tree = path_tree(5)
    result = algo_rand_k2(tree, tapes=forced([0, 0, 1, 0, 0]))
    assert result.output == ("D",) * 5
    assert result.trace.decision_rounds[2] == 0
    assert result.trace.decision_rounds[1] == 1


@pytest.mark.parametrize("length", [1, 2, 3, 5])
def test_decline_probability(length):
    tree = gen_path(length).tree
    seeds = 10**4
    declined = sum(algo_rand_k2(tree, seed).output[0] == "D" for seed in range(seeds))
    p = 1 - 2.0**-length
    sigma = math.sqrt(p * (1 - p) / seeds)
    assert abs(declined / seeds - p) <= 3 * sigma + 1e-9


@pytest.mark.parametrize("seed", range(10))
def test_rand_k2_on_caterpillars(seed):
    instance = gen_caterpillar2(12, 8)
    assert_valid(instance.tree, 2, algo_rand_k2(instance.tree, seed))


@given(trees(max_nodes=50), st.integers(min_value=0, max_value=2**16))
@PROPERTY_SETTINGS
def test_rand_k2_is_valid(tree, seed):
    assert_valid(tree, 2, algo_rand_k2(tree, seed))


def test_rand_k2_needs_tapes():
    with pytest.raises(KnowledgeViolation):
        algo_rand_k2(path_tree(4), knowledge=KnowledgeModel.exact(4))


#
# Randomized, k = 3
#


@pytest.fixture(scope="module")
def halflog():
    return build_halflog()


SHAPES = [
    lambda: gen_threelevel(3, 2, 2).tree,
    lambda: gen_threelevel(2, 3, 4).tree,
    lambda: gen_caterpillar2(8, 4).tree,
    lambda: gen_spine_comb(1, 3).tree,
    lambda: gen_random_tree(60, 11).tree,
]


def level2_segments(tree, levels, output):
    """Components of the level-2 nodes whose lower neighbours all declined."""
    return induced_paths(tree, [u for u in levels.nodes_at(2) if output[u] != "E"])


@pytest.mark.parametrize("shape", range(len(SHAPES)))
def test_rand_k3_valid_and_declines_exactly_on_friendly_paths(shape, halflog):
    tree = SHAPES[shape]()
    for seed in range(20):
        result = algo_rand_k3(tree, seed, halflog)
        assert_valid(tree, 3, result)
        for segment in level2_segments(tree, result.levels, result.output):
            labels = {result.output[u] for u in segment}
            friendly = has_friendly_subpath(tree, result.levels, segment, halflog.threshold)
            assert labels == {"D"} if friendly else labels <= {"B", "W"}


#
# Friendliness
#


@given(trees(min_nodes=3, max_nodes=50))
@PROPERTY_SETTINGS
def test_q_set_matches_reachability(tree):
    levels = compute_levels(tree, 3)
    ones = set(levels.nodes_at(1))
    graph = to_networkx(tree)
    for v in levels.nodes_at(2):
        sub = graph.subgraph(ones | {v})
        for i in (1, 2, 4):
            expected = set(nx.single_source_shortest_path_length(sub, v, cutoff=i)) - {v}
            assert q_set(tree, levels, v, i) == expected


@given(trees(min_nodes=3, max_nodes=50), st.floats(min_value=0.2, max_value=3.0))
@PROPERTY_SETTINGS
def test_friendly_windows_match_brute_force(tree, scale):
    levels = compute_levels(tree, 3)

    def f(x):
        return scale * math.log(x + 1)

    for path in induced_paths(tree, levels.nodes_at(2)):
        expected = [
            (start, i)
            for i in range(1, len(path) + 1)
            for start in range(len(path) - i + 1)
            if is_friendly(tree, levels, path[start : start + i], f)
        ]
        assert friendly_windows(tree, levels, path, f) == expected


def test_q_set_wrong_level(lb13):
    with pytest.raises(WrongLevel):
        q_set(lb13.tree, lb13.levels, lb13.paths[0][0], 1)
    assert not is_friendly(lb13.tree, lb13.levels, [], lambda x: 1.0)


def test_bare_level_two_path_is_friendly():
    # three degree-3 nodes in a row whose leaves are all level 1
    tree = gen_lb_graph(2, [1, 3]).tree
    levels = compute_levels(tree, 2)
    top = induced_paths(tree, levels.nodes_at(2))[0]
    assert len(q_set(tree, levels, top[1], 1)) == 1
    assert is_friendly(tree, levels, top, lambda x: 2.0)
    assert not is_friendly(tree, levels, top, lambda x: 1.0)


#
# Verifier
#


def test_verifier_rules():
    tree = path_tree(3)
    assert verify_halfcol(tree, 2, "BWB").ok
    assert "adjacency" in verify_halfcol(tree, 2, "BBW").rules
    assert "adjacency" in verify_halfcol(tree, 2, "BDW").rules
    assert verify_halfcol(tree, 2, "DDD").ok
    assert "top-decline" in verify_halfcol(tree, 1, "DDD").rules
    assert "bottom-exempt" in verify_halfcol(tree, 2, "BEB").rules
    assert "label" in verify_halfcol(tree, 2, "BXB").rules
    assert "shape" in verify_halfcol(tree, 2, "BW").rules
    star = build_tree([(0, 1), (0, 2), (0, 3)])
    assert "remainder" in verify_halfcol(star, 1, "BWWW").rules
    assert verify_halfcol(star, 1, "DBBB").ok


def test_exemption_needs_backing(lb13):
    output = ["D"] * lb13.n
    for u in lb13.levels.nodes_at(2):
        output[u] = "E"
    report = verify_halfcol(lb13.tree, 2, output)
    assert report.rules == {"exempt"}


def mutate(tree, k, levels, output, u):
    """A single-label change at u that no valid labeling allows, or None."""
    out = list(output)
    level = levels[u]
    same = [w for w in tree.adjacency[u] if levels[w] == level]
    if levels.is_remainder(u):
        out[u] = "B"
    elif level == 1:
        out[u] = "E"
    elif level == k:
        out[u] = "D"
    elif output[u] in ("B", "W") and any(output[w] in ("B", "W") for w in same):
        out[u] = "W" if output[u] == "B" else "B"
    else:
        return None
    return out


def test_single_label_mutations_are_rejected(halflog):
    rng = np.random.default_rng(1)
    runs = [
        (2, gen_caterpillar2(12, 4).tree, lambda tree: algo_known_n(tree, 2)),
        (2, gen_lb_graph(2, [3, 5]).tree, lambda tree: algo_rand_k2(tree, 3)),
        (3, gen_threelevel(3, 2, 2).tree, lambda tree: algo_rand_k3(tree, 5, halflog)),
        (3, gen_random_tree(80, 2).tree, lambda tree: algo_known_n(tree, 3)),
    ]
    rejected = 0
    for k, tree, run in runs:
        result = run(tree)
        assert_valid(tree, k, result)
        for u in rng.integers(tree.node_count, size=60):
            mutated = mutate(tree, k, result.levels, result.output, int(u))
            if mutated is None:
                continue
            report = verify_halfcol(tree, k, mutated, result.levels)
            assert not report.ok
            assert any(int(u) in violation.nodes for violation in report.violations)
            rejected += 1
    assert rejected > 100


def test_canonical_color_anchors_smaller_key():
    nodes = (4, 5, 6, 7)
    assert [canonical_color(nodes, v, lambda u: u) for v in nodes] == ["B", "W", "B", "W"]
    assert [canonical_color(nodes, v, lambda u: -u) for v in nodes] == ["W", "B", "W", "B"]


#
# Walks that resume across rounds
#


@given(trees(min_nodes=2, max_nodes=50))
@PROPERTY_SETTINGS
def test_resumed_walk_matches_fresh_walk(tree):
    levels = compute_levels(tree, 2)
    for v in range(tree.node_count):
        level = levels[v]
        if level > 2:
            continue
        walk = SegmentWalk(v, level)
        sizes = None
        for t in range(tree.node_count + 1):
            ball = extract_ball(tree, v, t, levels=levels)
            segment = walk.advance(ball, lambda u: "in")
            assert segment == walk_segment(ball, v, level)
            if segment is None:
                continue
            now = (len(segment.left.nodes), len(segment.right.nodes))
            if sizes is not None:
                assert all(0 <= b - a <= 1 for a, b in zip(sizes, now))
            sizes = now


def test_resumed_walk_cuts_at_nodes_that_decide_later():
    tree = path_tree(15)
    levels = compute_levels(tree, 1)
    rounds = [-1] * 15
    rounds[2], rounds[11] = 0, 3
    outputs = [None] * 15
    outputs[2], outputs[11] = "D", "B"
    v = 7
    walk = SegmentWalk(v, 1)
    cuts = []
    for t in range(16):
        ball = extract_ball(tree, v, t, levels=levels, rounds=rounds, outputs=outputs)

        def classify(u, ball=ball):
            return "stop" if u != v and ball.decided(u) else "in"

        resumed = walk.advance(ball, classify, ball.decided)
        assert resumed == walk_segment(ball, v, 1, classify)
        cuts.append(None if resumed is None else resumed.right.blocker)
    assert cuts[4:7] == [None, None, None]
    assert cuts[7:] == [11] * 9
    assert resumed.nodes == tuple(range(3, 11))
    assert resumed.left.blocker == 2


def test_largest_id_follows_the_growing_view():
    tree = assign_ids(gen_random_tree(60, 2).tree, RandomPermutation(c=2, seed=3))
    memory: dict = {}
    for t in range(12):
        ball = extract_ball(tree, 0, t)
        assert largest_id(ball, memory) == max(tree.ids[u] for u in ball)
    for t in (20, 5):
        ball = extract_ball(tree, 0, t)
        assert largest_id(ball, {}) == max(tree.ids[u] for u in ball)
    ball = extract_ball(tree, 0, 20)
    assert largest_id(ball, memory) == max(tree.ids)
