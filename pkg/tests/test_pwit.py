"""
Tests for the PWIT truncations, the root matching and the limit rank law.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.core.errors import GraphError
from src.pwit.rank import (
    RootOutcome,
    TreeMatchMethod,
    limit_rank_from,
    rank_reference,
    root_match_on_truncation,
    sample_limit_rank,
    sample_limit_ranks,
    subtree_matching_costs,
)
from src.pwit.tree import PwitTree, dump_tree, sample_descending_tree
from src.stats.quadrature import rank_one_probability
from src.stats.streams import derive_stream


def small_tree(parent, cost, depth):
    return PwitTree(
        parent=np.array(parent, dtype=np.int64),
        cost=np.array(cost, dtype=float),
        depth=np.array(depth, dtype=np.int64),
        ceiling=1.0,
    )


class TestDescendingTree:
    """Sampling the truncated tree."""

    def setup_method(self):
        # root children at 0.3 and 0.7; the first child has a child at 0.1
        self.tree = small_tree([-1, 0, 0, 1], [np.nan, 0.3, 0.7, 0.1], [0, 1, 1, 2])

    def test_structure_helpers(self):
        assert self.tree.size == 4
        assert self.tree.children(0).tolist() == [1, 2]
        assert self.tree.children(1).tolist() == [3]
        assert self.tree.children(2).tolist() == []
        assert self.tree.depth_counts().tolist() == [1, 2, 1]

    def test_dump_preorder(self):
        assert dump_tree(self.tree).splitlines() == [
            "-1,",
            "0,0.29999999999999999",
            "1,0.10000000000000001",
            "0,0.69999999999999996",
        ]

    def test_tiny_ceiling_gives_root_alone(self):
        tree = sample_descending_tree(1e-9, 100, derive_stream(0, 0))
        assert tree.size == 1
        assert not tree.truncated

    def test_children_sorted_and_descending(self):
        tree = sample_descending_tree(3.0, 100_000, derive_stream(1, 0))
        assert np.all(np.diff(tree.parent[1:]) >= 0)
        for v in range(tree.size):
            kids = tree.children(v)
            ceiling = tree.ceiling if v == 0 else tree.cost[v]
            assert np.all(tree.cost[kids] < ceiling)
            assert np.all(np.diff(tree.cost[kids]) >= 0)

    def test_node_cap_flags_truncation(self):
        tree = sample_descending_tree(20.0, 2, derive_stream(2, 0))
        assert tree.truncated
        with pytest.raises(GraphError):
            root_match_on_truncation(tree)

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            sample_descending_tree(0.0, 10, derive_stream(0, 0))
        with pytest.raises(ValueError):
            sample_descending_tree(1.0, 0, derive_stream(0, 0))

    def test_mean_size_and_depth_counts(self):
        sizes, depth_two = [], []
        for i in range(5000):
            tree = sample_descending_tree(2.0, 100_000, derive_stream(3, i))
            sizes.append(tree.size)
            counts = tree.depth_counts()
            depth_two.append(counts[2] if counts.size > 2 else 0)
        for values, expected in ((sizes, math.exp(2.0)), (depth_two, 2.0)):
            se = np.std(values, ddof=1) / math.sqrt(len(values))
            assert abs(np.mean(values) - expected) <= 3 * se


class TestRootMatch:
    """Root outcome on finite truncations."""

    def test_single_child(self):
        tree = small_tree([-1, 0], [np.nan, 0.4], [0, 1])
        assert root_match_on_truncation(tree) == RootOutcome(matched=True, cost=0.4, rank=1)

    def test_second_child_when_first_is_taken(self):
        tree = small_tree([-1, 0, 0, 1], [np.nan, 0.3, 0.7, 0.1], [0, 1, 1, 2])
        np.testing.assert_array_equal(subtree_matching_costs(tree), [0.7, 0.1, np.inf, np.inf])
        for method in TreeMatchMethod:
            outcome = root_match_on_truncation(tree, method)
            assert outcome == RootOutcome(matched=True, cost=0.7, rank=2)

    def test_lonely_root_is_unmatched(self):
        outcome = root_match_on_truncation(small_tree([-1], [np.nan], [0]))
        assert not outcome.matched
        assert outcome.cost == math.inf and outcome.rank == math.inf

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**32), s=st.floats(0.5, 4.0))
    def test_methods_agree(self, seed, s):
        tree = sample_descending_tree(s, 50_000, derive_stream(seed, 0))
        assert root_match_on_truncation(tree, "recursion") == root_match_on_truncation(
            tree, "general-greedy"
        )

    @pytest.mark.slow
    def test_unmatched_frequency(self):
        s = 3.0
        unmatched = [
            not root_match_on_truncation(sample_descending_tree(s, 100_000, derive_stream(4, i))).matched
            for i in range(4000)
        ]
        p = np.mean(unmatched)
        se = math.sqrt(p * (1 - p) / len(unmatched))
        assert abs(p - 1.0 / (1.0 + s)) <= max(0.01, 3 * se)


class TestLimitRank:
    """The limit rank R = min{j : T_j <= W_j}."""

    def test_rank_from_sequences(self):
        assert limit_rank_from([0.5], [1.0]) == 1
        assert limit_rank_from([0.5, 0.9], [0.2, 1.5]) == 2
        assert limit_rank_from([0.5, 0.9], [0.2, 0.3]) == math.inf

    def test_overflow_sentinel(self):
        ranks = sample_limit_ranks(derive_stream(5, 0), 2000, j_max=1)
        assert set(np.unique(ranks).tolist()) <= {1.0, math.inf}
        assert np.isinf(ranks).any()
        with pytest.raises(ValueError):
            sample_limit_rank(derive_stream(5, 1), j_max=0)

    def test_rank_one_probability(self):
        ranks = sample_limit_ranks(derive_stream(6, 0), 40_000)
        p = float(np.mean(ranks == 1))
        se = math.sqrt(p * (1 - p) / ranks.size)
        assert abs(p - rank_one_probability()) <= 3 * se

    @pytest.mark.slow
    def test_sampler_agrees_with_tree_root(self):
        # rank 1 is decided below the first child's cost, so a ceiling s misses at most e^-s
        s = 5.0
        roots = [
            root_match_on_truncation(sample_descending_tree(s, 100_000, derive_stream(9, i))).rank == 1
            for i in range(3000)
        ]
        ranks = sample_limit_ranks(derive_stream(9, 10_000), 40_000)
        p_tree, p_law = float(np.mean(roots)), float(np.mean(ranks == 1))
        se = math.hypot(
            math.sqrt(p_tree * (1 - p_tree) / len(roots)), math.sqrt(p_law * (1 - p_law) / ranks.size)
        )
        assert abs(p_tree - p_law) <= 3 * se + math.exp(-s)

    def test_scalar_sampler_matches_law(self):
        stream = derive_stream(7, 0)
        ranks = np.array([sample_limit_rank(stream) for _ in range(5000)], dtype=float)
        p = float(np.mean(ranks == 1))
        assert abs(p - rank_one_probability()) <= 3 * math.sqrt(p * (1 - p) / ranks.size)

    def test_reference_table(self):
        reference = rank_reference(5, derive_stream(8, 0), reps=20_000, chunk=7000)
        first, second = reference.rows[0], reference.rows[1]
        assert first.at_least == 1.0 and first.at_least_se == 0.0
        assert second.at_least == first.tail_product
        assert reference.p_one == pytest.approx(0.596347362, abs=1e-8)
        assert first.tail_display == pytest.approx(reference.p_one, abs=1e-8)
        assert abs(first.tail_product - (1.0 - reference.p_one)) <= 3 * first.tail_product_se
        tails = [row.tail_product for row in reference.rows]
        assert all(a >= b for a, b in zip(tails, tails[1:]))
        with pytest.raises(ValueError):
            rank_reference(0, derive_stream(8, 1))
