from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from linhyper.errors import NotAForest, NotATree
from linhyper.generators import (cycle_pattern, matching_pattern, path_pattern, random_tree_pattern,
                                 star_pattern)
from linhyper.hypergraph import LinearKGraph
from linhyper.trees import (bfs_edge_order, check_tree, forest_components, is_forest, is_leaf_edge, is_semi_bare,
                            leaf_edge_count, semi_bare_decomposition)


class TestForests:
    def test_cycle_is_not_forest(self):
        assert not is_forest(cycle_pattern(4, 3).graph)
        with pytest.raises(NotAForest):
            forest_components(cycle_pattern(3, 3).graph)

    def test_matching_is_forest_not_tree(self):
        G = matching_pattern(3, 3).graph
        assert is_forest(G)
        with pytest.raises(NotATree):
            check_tree(G)

    @pytest.mark.parametrize("pattern,leaves", [
        (star_pattern(4, 3), 4),
        (path_pattern(3, 3), 2),
        (path_pattern(1, 3), 1),
    ])
    def test_leaf_counts(self, pattern, leaves):
        assert leaf_edge_count(pattern.graph) == leaves

    def test_leaf_edge_definition(self):
        G = path_pattern(3, 3).graph
        assert [is_leaf_edge(G, e) for e in range(3)] == [True, False, True]


class TestOrder:
    @given(st.integers(1, 80), st.integers(2, 4), st.integers(0, 10**6), st.data())
    @settings(max_examples=40, deadline=None)
    def test_valid_for_any_root(self, edges, k, seed, data):
        T = random_tree_pattern(edges, k, seed)
        root = data.draw(st.integers(0, T.n - 1))
        tp = bfs_edge_order(T, root)
        assert tp.is_valid_order()
        assert tp.m == edges and tp.t == T.n

    def test_root_edges_first(self):
        tp = bfs_edge_order(star_pattern(3, 3), 0)
        assert tp.attach == (0, 0, 0)

    def test_bad_root(self):
        with pytest.raises(NotATree):
            bfs_edge_order(path_pattern(2, 3), 99)


class TestSemiBare:
    def test_long_path(self):
        dec = semi_bare_decomposition(path_pattern(11, 3), 2)
        assert len(dec.paths) == 3 and dec.remainder_edges == 2

    def test_star_has_no_paths(self):
        dec = semi_bare_decomposition(star_pattern(5, 3), 2)
        assert dec.paths == () and dec.within_bound()

    def test_bad_m(self):
        with pytest.raises(ValueError):
            semi_bare_decomposition(path_pattern(5, 3), 0)

    @given(st.integers(1, 400), st.sampled_from([2, 4, 8]), st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_bound_and_structure(self, edges, m, seed):
        T = random_tree_pattern(edges, 3, seed)
        dec = semi_bare_decomposition(T, m)
        assert dec.within_bound()
        assert dec.remainder_edges <= dec.bound
        used = [e for p in dec.paths for e in p]
        assert len(used) == len(set(used))
        for p in dec.paths:
            assert len(p) == m + 1
            assert is_semi_bare(T.graph, p)

    def test_semi_bare_rejects_branching(self):
        # path of three edges plus a pendant edge on the middle edge's free vertex
        G = LinearKGraph(3, 9, [(0, 1, 2), (2, 3, 4), (4, 5, 6), (3, 7, 8)])
        assert not is_semi_bare(G, (0, 1, 2))
        assert is_semi_bare(G, (0, 1))
