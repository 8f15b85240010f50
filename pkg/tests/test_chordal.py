import json
import random

import pytest
from hypothesis import given, settings

import oracles
from decomposable.chordal import (
    CliqueTree,
    chordal_edge_masks,
    chordless_cycle_witness,
    clique_tree,
    find_peo,
    is_chordal,
    is_peo,
    maximal_cliques,
    mcs_order,
    minimal_separators,
)
from decomposable.errors import CapExceededError, NotChordalError
from decomposable.graph import UndirectedGraph, VertexSet, enumerate_graphs, is_complete, separated
from strategies import graphs

DIAMOND = UndirectedGraph.cycle(4)
CHORDED = DIAMOND.with_edges([(1, 3)])


def _is_induced_chordless_cycle(g, cyc):
    k = len(cyc)
    if k < 4 or len(set(cyc)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            adjacent = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(cyc[i], cyc[j]) != adjacent:
                return False
    return True


class TestRecognition:
    def test_examples(self):
        assert not is_chordal(DIAMOND)
        assert is_chordal(CHORDED)
        assert is_chordal(UndirectedGraph.complete(5))
        assert is_chordal(UndirectedGraph.path(3))
        assert is_chordal(UndirectedGraph.empty(4))

    def test_peo_examples(self):
        assert find_peo(UndirectedGraph.path(2)) is not None
        assert find_peo(DIAMOND) is None
        peo = find_peo(UndirectedGraph.path(3))
        assert sorted(peo) == [0, 1, 2] and is_peo(UndirectedGraph.path(3), peo)

    def test_mcs_is_a_permutation(self):
        g = UndirectedGraph.cycle(6)
        assert sorted(mcs_order(g)) == list(range(6))

    def test_is_peo_rejects_bad_order(self):
        g = UndirectedGraph.path(3)
        assert not is_peo(g, [1, 0, 2])
        assert not is_peo(g, [0, 1])

    def test_against_induced_cycle_oracle(self):
        for n in range(1, 6):
            for g in enumerate_graphs(n):
                assert is_chordal(g) == oracles.is_chordal(n, g.edges)

    @settings(max_examples=200, deadline=None)
    @given(graphs(max_n=8))
    def test_peo_valid_when_found(self, g):
        peo = find_peo(g)
        assert (peo is not None) == is_chordal(g)
        if peo is not None:
            assert is_peo(g, peo)


class TestWitness:
    def test_examples(self):
        assert chordless_cycle_witness(DIAMOND) == [0, 1, 2, 3]
        assert chordless_cycle_witness(UndirectedGraph.complete(3)) is None
        w = chordless_cycle_witness(UndirectedGraph.cycle(5))
        assert len(w) == 5 and _is_induced_chordless_cycle(UndirectedGraph.cycle(5), w)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            chordless_cycle_witness(UndirectedGraph.empty(11))

    def test_witness_is_chordless(self):
        rng = random.Random(11)
        for _ in range(300):
            n = rng.randint(4, 8)
            g = UndirectedGraph.from_edge_mask(n, rng.getrandbits(n * (n - 1) // 2))
            w = chordless_cycle_witness(g)
            assert (w is None) == is_chordal(g)
            if w is not None:
                assert _is_induced_chordless_cycle(g, w)


class TestCliques:
    def test_examples(self):
        assert maximal_cliques(UndirectedGraph.path(3)) == [VertexSet.of(0, 1), VertexSet.of(1, 2)]
        assert maximal_cliques(UndirectedGraph.complete(3)) == [VertexSet.of(0, 1, 2)]
        assert maximal_cliques(CHORDED) == [VertexSet.of(0, 1, 3), VertexSet.of(1, 2, 3)]

    def test_non_chordal_rejected(self):
        with pytest.raises(NotChordalError):
            maximal_cliques(DIAMOND)
        with pytest.raises(NotChordalError):
            clique_tree(DIAMOND)

    def test_against_subset_oracle(self):
        for n in range(1, 6):
            for mask in chordal_edge_masks(n):
                g = UndirectedGraph.from_edge_mask(n, mask)
                got = {frozenset(c) for c in maximal_cliques(g)}
                assert got == oracles.maximal_cliques(n, g.edges)


class TestCliqueTree:
    def test_path(self):
        t = clique_tree(UndirectedGraph.path(3))
        assert t.cliques == (VertexSet.of(0, 1), VertexSet.of(1, 2))
        assert t.tree_edges == ((0, 1),)
        assert t.separators == (VertexSet.of(1),)

    def test_triangle(self):
        t = clique_tree(UndirectedGraph.complete(3))
        assert len(t.cliques) == 1 and t.tree_edges == ()

    def test_chorded_diamond(self):
        t = clique_tree(CHORDED)
        assert t.separators == (VertexSet.of(1, 3),)

    def test_all_chordal_up_to_6(self):
        for n in range(1, 7):
            for mask in chordal_edge_masks(n):
                t = clique_tree(UndirectedGraph.from_edge_mask(n, mask))
                assert t.is_tree()
                assert t.has_running_intersection()
                for (i, j), s in zip(t.tree_edges, t.separators):
                    assert s == t.cliques[i] & t.cliques[j]

    def test_json_round_trip(self):
        t = clique_tree(CHORDED)
        data = json.loads(t.to_json())
        assert data == {"cliques": [[0, 1, 3], [1, 2, 3]], "edges": [{"a": 0, "b": 1, "separator": [1, 3]}]}
        assert CliqueTree.from_dict(data) == t

    def test_broken_tree_detected(self):
        t = CliqueTree(
            (VertexSet.of(0, 1), VertexSet.of(2, 3), VertexSet.of(1, 2)),
            ((0, 1), (1, 2)),
            (VertexSet(), VertexSet.of(2)),
        )
        assert t.is_tree()
        assert not t.has_running_intersection()


class TestMinimalSeparators:
    def test_examples(self):
        assert minimal_separators(UndirectedGraph.path(4), 0, 3) == {VertexSet.of(1), VertexSet.of(2)}
        assert minimal_separators(DIAMOND, 0, 2) == {VertexSet.of(1, 3)}
        assert minimal_separators(UndirectedGraph.empty(2), 0, 1) == {VertexSet()}
        assert minimal_separators(UndirectedGraph.path(2), 0, 1) == set()

    def test_separate_and_are_minimal(self):
        for g in enumerate_graphs(5):
            for a in range(5):
                for b in range(a + 1, 5):
                    for s in minimal_separators(g, a, b):
                        assert separated(g, [a], [b], list(s))
                        for v in s:
                            assert not separated(g, [a], [b], [u for u in s if u != v])

    def test_complete_in_chordal_graphs(self):
        for n in range(2, 7):
            for mask in chordal_edge_masks(n):
                g = UndirectedGraph.from_edge_mask(n, mask)
                for a in range(n):
                    for b in range(a + 1, n):
                        for s in minimal_separators(g, a, b):
                            assert is_complete(g, s)


class TestChordalEnumeration:
    @pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 8), (4, 61), (5, 822), (6, 18154)])
    def test_counts_match_filtered_enumeration(self, n, count):
        masks = chordal_edge_masks(n)
        assert len(masks) == count
        assert list(masks) == [g.edge_mask for g in enumerate_graphs(n) if is_chordal(g)]

    def test_cap(self):
        with pytest.raises(CapExceededError):
            chordal_edge_masks(8)
