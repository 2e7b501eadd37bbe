from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linhyper import lhg
from linhyper.errors import BadEdge, BadVertex, LinearityViolation, ParseError
from linhyper.hypergraph import (LinearKGraph, MultiKGraph, as_multigraph, build_linear_graph, check_pseudorandom,
                                 codegree, degree_profile, induced_remove, reassemble, simplify)

FANO = ((0, 2, 4), (1, 2, 6), (3, 4, 6), (0, 5, 6), (0, 1, 3), (2, 3, 5), (1, 4, 5))


@st.composite
def linear_graphs(draw, max_n=14):
    k = draw(st.integers(2, 4))
    n = draw(st.integers(k, max_n))
    candidates = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=k, max_size=k, unique=True), max_size=30))
    edges, pairs = [], set()
    for e in candidates:
        e = tuple(sorted(e))
        ps = {(a, b) for i, a in enumerate(e) for b in e[i + 1:]}
        if ps & pairs:
            continue
        pairs |= ps
        edges.append(e)
    return LinearKGraph(k, n, edges)


class TestConstruction:
    def test_fano_basics(self):
        H = LinearKGraph(3, 7, FANO)
        assert H.m == 7
        assert H.degrees() == [3] * 7
        assert H.is_regular()
        assert H.edge_of_pair(0, 2) == 0
        assert H.edge_of_pair(6, 1) == 1

    def test_edges_are_sorted(self):
        H = LinearKGraph(3, 5, [(4, 0, 2)])
        assert H.edges == ((0, 2, 4),)

    @pytest.mark.parametrize("edges,exc", [
        ([(0, 1)], BadEdge),
        ([(0, 0, 1)], BadEdge),
        ([(0, 1, 9)], BadEdge),
        ([(0, 1, 2), (2, 1, 0)], BadEdge),
        ([(0, 1, 2), (0, 1, 3)], LinearityViolation),
    ])
    def test_rejects(self, edges, exc):
        with pytest.raises(exc):
            build_linear_graph(3, 5, edges)

    def test_linearity_error_names_pair(self):
        with pytest.raises(LinearityViolation) as info:
            LinearKGraph(3, 5, [(0, 1, 2), (1, 2, 3)])
        assert info.value.pair == (1, 2)
        assert info.value.edge_ids == (0, 1)

    def test_bad_vertex_query(self):
        H = LinearKGraph(3, 7, FANO)
        with pytest.raises(BadVertex):
            H.degree(7)
        with pytest.raises(BadVertex):
            H.edge_of_pair(3, 3)

    def test_empty_graph(self):
        H = LinearKGraph(3, 0, [])
        assert H.m == 0 and H.min_degree() == 0

    @given(linear_graphs())
    @settings(max_examples=60, deadline=None)
    def test_handshake(self, H):
        assert sum(H.degrees()) == H.k * H.m
        for v in range(H.n):
            assert all(v in H.edges[e] for e in H.edges_of(v))

    @given(linear_graphs())
    @settings(max_examples=60, deadline=None)
    def test_codegree_at_most_one(self, H):
        for u in range(H.n):
            for v in range(u + 1, H.n):
                assert codegree(H, u, v) <= 1
                assert (H.edge_of_pair(u, v) is not None) == (codegree(H, u, v) == 1)


class TestMultigraph:
    def test_degrees_count_multiplicity(self):
        base = LinearKGraph(3, 7, FANO)
        F = MultiKGraph(base, [2, 1, 1, 1, 1, 1, 1])
        assert F.degrees()[0] == 4 and F.degrees()[3] == 3
        assert F.max_codegree() == 2
        prof = degree_profile(F)
        assert (prof.min, prof.max, prof.max_codegree) == (3, 4, 2)

    def test_rejects_nonpositive(self):
        with pytest.raises(BadEdge):
            MultiKGraph(LinearKGraph(3, 7, FANO), [0] * 7)

    def test_simplify_roundtrip(self):
        F = MultiKGraph(LinearKGraph(3, 7, FANO), [3, 1, 2, 1, 1, 1, 5])
        base, mult = simplify(F)
        assert reassemble(base, mult) == F

    def test_as_multigraph_unit(self):
        F = as_multigraph(LinearKGraph(3, 7, FANO))
        assert F.multiplicity == (1,) * 7


class TestInducedRemove:
    def test_fano_minus_vertex(self):
        H = LinearKGraph(3, 7, FANO)
        ind = induced_remove(H, {6})
        assert ind.graph.n == 6 and ind.graph.m == 4
        for new, old in enumerate(ind.edge_to_old):
            assert [ind.new_to_old[v] for v in ind.graph.edges[new]] == list(H.edges[old])

    @given(linear_graphs(), st.data())
    @settings(max_examples=40, deadline=None)
    def test_maps_back(self, H, data):
        X = data.draw(st.sets(st.integers(0, H.n - 1)))
        ind = induced_remove(H, X)
        assert ind.graph.n == H.n - len(X)
        assert len(ind.edge_to_old) == sum(1 for e in H.edges if not X & set(e))


class TestPseudorandom:
    def test_regular_passes(self):
        H = LinearKGraph(3, 7, FANO)
        assert check_pseudorandom(H, 3, 0, Fraction(1, 3))

    def test_reports_worst(self):
        F = MultiKGraph(LinearKGraph(3, 7, FANO), [4, 1, 1, 1, 1, 1, 1])
        rep = check_pseudorandom(F, 3, Fraction(1, 10), Fraction(1, 2))
        assert not rep
        assert rep.worst_vertex in (0, 2, 4)
        assert rep.worst_pair == (0, 2)

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            check_pseudorandom(LinearKGraph(3, 7, FANO), 0, 0, 1)


class TestLhg:
    def test_roundtrip_simple(self):
        H = LinearKGraph(3, 7, FANO)
        text = lhg.dumps(H)
        assert text.splitlines()[0] == "lhg 1 3 7 7"
        assert lhg.loads(text) == H

    def test_roundtrip_multi(self):
        F = MultiKGraph(LinearKGraph(3, 7, FANO), [1, 2, 3, 4, 5, 6, 7])
        assert lhg.loads(lhg.dumps(F, "note")) == F

    def test_comments_ignored(self):
        H = lhg.loads("# hi\nlhg 1 3 4 1  # header\n0 1 2 # edge\n")
        assert H.edges == ((0, 1, 2),)

    @pytest.mark.parametrize("text", [
        "",
        "lhg 2 3 4 1\n0 1 2\n",
        "lhg 1 3 4 2\n0 1 2\n",
        "lhg 1 3 4 1\n2 1 0\n",
        "lhg 1 3 4 1\n0 1 x\n",
        "lhg 1 3 5 2\n0 1 2\n0 1 3\n",
        "lhg 1 3 4 1 multi\n0 1 2\n",
        "lhg 1 3 4 1 weird\n0 1 2\n",
    ])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            lhg.loads(text)

    @given(linear_graphs())
    @settings(max_examples=50, deadline=None)
    def test_roundtrip_property(self, H):
        assert lhg.loads(lhg.dumps(H)) == H
