from __future__ import annotations

from fractions import Fraction

import pytest

from linhyper.embedding import (BarePath, EmbedParams, Embedding, PatternSpec, check_reservoir, connect_pair,
                                embed_linear_cycle, embed_pattern, greedy_forest_embed, is_linear_cycle,
                                pattern_spec_for, reservoir_pair_count, sample_reservoir, verify_embedding,
                                verify_linear_cycle)
from linhyper.errors import NoPath, RetriesExhausted, StageFailure, Stuck
from linhyper.generators import (cycle_pattern, extremal_construction, path_pattern,
                                 random_tree_pattern, star_pattern, steiner_triple, subdivision_pattern)
from linhyper.hypergraph import LinearKGraph
from linhyper.oracle import find_embedding_exact

FANO = steiner_triple(7)


class TestVerifiers:
    def test_accepts_oracle_embedding(self):
        r = find_embedding_exact(FANO, path_pattern(2, 3))
        assert verify_embedding(FANO, path_pattern(2, 3), r.vertex_map, r.edge_map)

    @pytest.mark.parametrize("vmap,emap", [
        ((0, 2, 4), (0,)),  # too few vertices
        ((0, 2, 4, 1, 6), (0,)),  # too few edges
        ((0, 2, 4, 2, 6), (0, 1)),  # not injective
        ((0, 2, 4, 1, 6), (0, 0)),  # repeated host edge
        ((0, 2, 4, 1, 9), (0, 1)),  # outside the host
        ((0, 2, 4, 1, 5), (0, 1)),  # wrong edge
    ])
    def test_rejects(self, vmap, emap):
        assert not verify_embedding(FANO, path_pattern(2, 3), vmap, emap)

    def test_linear_cycle_check(self):
        H = steiner_triple(9)
        r = find_embedding_exact(H, cycle_pattern(4, 3))
        C = cycle_pattern(4, 3)
        emb = Embedding(C, r.vertex_map, r.edge_map)
        assert verify_linear_cycle(H, emb)
        order = [r.edge_map[e] for e in C.branches[0]]
        assert is_linear_cycle(H, order)
        assert not is_linear_cycle(H, order[:2])
        # three Fano lines through one point pairwise meet there, so no cycle
        assert not is_linear_cycle(FANO, list(FANO.edges_of(0)))


class TestGreedyForest:
    def test_path_on_sts63(self):
        H = steiner_triple(63)
        T = path_pattern(3, 3)
        emb = greedy_forest_embed(H, T, forbidden=range(10))
        assert verify_embedding(H, T, emb.vertex_map, emb.edge_map)
        assert min(emb.vertex_map) >= 10

    def test_random_tree(self):
        H = steiner_triple(99)
        T = random_tree_pattern(15, 3, 3)
        emb = greedy_forest_embed(H, T)
        assert verify_embedding(H, T, emb.vertex_map, emb.edge_map)

    def test_stuck(self):
        with pytest.raises(Stuck):
            greedy_forest_embed(FANO, path_pattern(4, 3))


class TestReservoir:
    def test_flags_and_conditions(self):
        H = steiner_triple(63)
        res = sample_reservoir(H, Fraction(3, 5), Fraction(1, 63), Fraction(1, 10), seed=3,
                               require=("i", "iii"))
        flags, _ = check_reservoir(H, res.R, res.delta, res.delta_prime, res.epsilon)
        assert flags == res.flags and flags["i"] and flags["iii"]
        assert len(H.edges) and len(res) < H.n

    def test_min_degree_precondition(self):
        with pytest.raises(ValueError):
            sample_reservoir(extremal_construction(5, 1, 3), Fraction(1, 2), Fraction(1, 13), Fraction(1, 10))

    def test_retries_exhausted(self):
        H = steiner_triple(21)
        with pytest.raises(RetriesExhausted) as info:
            sample_reservoir(H, Fraction(0), Fraction(1, 21), Fraction(1, 10), max_retries=2)
        assert info.value.condition == "iii"

    def test_pair_count_full_set(self):
        # with every vertex available the count is the l2 maximum, 1 in the Fano plane
        assert reservoir_pair_count(FANO, range(7), 0, 1) == 1

    def test_connect_pair(self):
        H = steiner_triple(13)
        R = set(range(2, 13))
        e1, e2, c = connect_pair(H, 0, 1, R)
        s1, s2 = set(H.edges[e1]), set(H.edges[e2])
        assert 0 in s1 and 1 in s2 and s1 & s2 == {c}
        assert (s1 | s2) - {0, 1} <= R

    def test_connect_pair_no_path(self):
        with pytest.raises(NoPath):
            connect_pair(steiner_triple(13), 0, 1, R=set())


class TestSpecs:
    def test_cycle_spec(self):
        spec = pattern_spec_for(cycle_pattern(6, 3))
        assert len(spec.bare_paths) == 1
        verts, edges = spec.forest()
        assert len(edges) == 4 and len(verts) == 12 - 3

    def test_subdivision_spec(self):
        S = subdivision_pattern([(0, 1), (1, 2), (2, 0)], 3, 3)
        spec = pattern_spec_for(S)
        assert len(spec.bare_paths) == 3
        spec.validate()

    def test_invalid_bare_path(self):
        C = cycle_pattern(5, 3)
        with pytest.raises(ValueError):
            PatternSpec(C, (BarePath(0, 0, 2, 1),)).validate()

    def test_cycle_without_bare_path_is_not_forest(self):
        with pytest.raises(ValueError):
            PatternSpec(cycle_pattern(4, 3)).validate()


class TestParams:
    def test_default_length(self):
        assert EmbedParams().long_length() == 14

    @pytest.mark.parametrize("m,mu,M", [(2, Fraction(1, 100), 10), (4, Fraction(1, 400), 20), (1, Fraction(1, 4), 5)])
    def test_auto_length(self, m, mu, M):
        assert EmbedParams(m=m, mu=mu).long_length() == M

    def test_invalid_length(self):
        with pytest.raises(ValueError):
            EmbedParams(M=15).long_length()


class TestPipeline:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_cycle_sts63(self, seed):
        H = steiner_triple(63)
        emb = embed_linear_cycle(H, 12, EmbedParams(seed=seed))
        assert verify_linear_cycle(H, emb)
        assert len(set(emb.vertex_map)) == 24

    def test_cycle_sts99(self):
        H = steiner_triple(99)
        emb = embed_linear_cycle(H, 20, EmbedParams(seed=0))
        assert verify_linear_cycle(H, emb)

    def test_graph_case(self):
        H = LinearKGraph(2, 10, [(a, b) for a in range(10) for b in range(a + 1, 10)])
        emb = embed_linear_cycle(H, 4, EmbedParams(seed=0))
        assert verify_linear_cycle(H, emb)

    def test_tree(self):
        H = steiner_triple(99)
        T = path_pattern(20, 3)
        emb = embed_pattern(H, T, EmbedParams(seed=0))
        assert verify_embedding(H, T, emb.vertex_map, emb.edge_map)

    def test_subdivision(self):
        H = steiner_triple(63)
        S = subdivision_pattern([(0, 1), (1, 2), (2, 3), (3, 0)], 3, 2)
        emb = embed_pattern(H, S, EmbedParams(seed=0))
        assert verify_embedding(H, S, emb.vertex_map, emb.edge_map)

    def test_deterministic(self):
        H = steiner_triple(63)
        a = embed_linear_cycle(H, 10, EmbedParams(seed=5))
        b = embed_linear_cycle(H, 10, EmbedParams(seed=5))
        assert (a.vertex_map, a.edge_map) == (b.vertex_map, b.edge_map)

    def test_too_long(self):
        with pytest.raises(ValueError):
            embed_linear_cycle(steiner_triple(21), 10)
        with pytest.raises(ValueError):
            embed_linear_cycle(steiner_triple(21), 2)

    def test_uniformity_mismatch(self):
        with pytest.raises(StageFailure) as info:
            embed_pattern(steiner_triple(63), path_pattern(2, 4))
        assert info.value.stage == "decompose"

    def test_pattern_too_large(self):
        with pytest.raises(StageFailure) as info:
            embed_pattern(steiner_triple(21), star_pattern(10, 3))
        assert info.value.stage == "decompose"

    def test_leaf_limit(self):
        with pytest.raises(StageFailure) as info:
            embed_pattern(steiner_triple(63), star_pattern(5, 3), EmbedParams(max_leaf_edges=2))
        assert info.value.stage == "decompose"

    def test_small_hosts_agree_with_oracle(self):
        for n in (13, 15):
            H = steiner_triple(n)
            for seed in range(5):
                try:
                    emb = embed_pattern(H, cycle_pattern(3, 3), EmbedParams(seed=seed))
                except StageFailure:
                    continue
                assert verify_embedding(H, emb.pattern, emb.vertex_map, emb.edge_map)
                assert find_embedding_exact(H, cycle_pattern(3, 3)).status == "found"

    def test_edgeless_host_fails(self):
        with pytest.raises((StageFailure, ValueError)):
            embed_pattern(LinearKGraph(3, 30, []), path_pattern(2, 3))
