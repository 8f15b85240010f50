import json

import numpy as np
import pytest

import oracles
from decomposable.chordal import chordal_edge_masks, is_chordal
from decomposable.errors import InconsistentOracleError, NotChordalError
from decomposable.graph import UndirectedGraph, separated
from decomposable.learn import (
    BASELINE,
    DataCi,
    Dataset,
    LearnConfig,
    chordalize,
    g2_test,
    learn_skeleton,
    oracle_ci,
    parse_csv,
    sample_dataset,
)
from decomposable.model import all_true_model, graph_model

DIAMOND = UndirectedGraph.cycle(4)
CHORDED = DIAMOND.with_edges([(1, 3)])
CHAIN = UndirectedGraph.path(3)


def _dataset(rows, arities=None):
    rows = np.asarray(rows, dtype=np.int64)
    names = tuple(f"v{i}" for i in range(rows.shape[1]))
    if arities is None:
        arities = tuple(int(c) + 1 for c in rows.max(axis=0))
    return Dataset(names, tuple(arities), rows)


class TestDataset:
    def test_validation(self):
        with pytest.raises(ValueError):
            Dataset(("a",), (2,), np.array([[2]]))
        with pytest.raises(ValueError):
            Dataset(("a", "a"), (2, 2), np.zeros((1, 2), dtype=int))
        with pytest.raises(ValueError):
            Dataset(("a",), (2,), np.array([[0.5]]))

    def test_csv_round_trip(self, tmp_path):
        d = sample_dataset(CHAIN, 3, 20, seed=1)
        assert parse_csv(d.to_csv(), d.arities) == d
        path = tmp_path / "d.csv"
        d.save_csv(path)
        assert parse_csv(path.read_text(), d.arities) == d

    def test_csv_errors(self):
        with pytest.raises(ValueError, match="line 3"):
            parse_csv("a,b\n0,1\n0\n")
        with pytest.raises(ValueError, match="non-integer"):
            parse_csv("a,b\n0,x\n")
        with pytest.raises(ValueError, match="empty"):
            parse_csv("")

    def test_constant_column_has_arity_one(self):
        d = parse_csv("a,b\n0,1\n0,0\n")
        assert d.arities == (1, 2)


class TestG2:
    def test_exact_factorization(self):
        rows = [[a, b] for a in range(2) for b in range(3) for _ in range(5)]
        r = g2_test(_dataset(rows), 0, 1)
        assert r.statistic == pytest.approx(0.0, abs=1e-12)
        assert r.independent and r.dof == 2

    def test_perfect_dependence(self):
        rng = np.random.default_rng(0)
        x = rng.integers(0, 3, 2000)
        r = g2_test(_dataset(np.column_stack([x, x])), 0, 1)
        assert not r.independent and r.p_value < 1e-10

    def test_constant_column_is_degenerate(self):
        rng = np.random.default_rng(1)
        rows = np.column_stack([rng.integers(0, 2, 100), np.zeros(100, dtype=int)])
        r = g2_test(_dataset(rows, (2, 1)), 0, 1)
        assert r.independent and r.degenerate and r.dof == 0

    def test_argument_errors(self):
        d = _dataset([[0, 1, 0], [1, 0, 1]])
        with pytest.raises(ValueError):
            g2_test(d, 0, 0)
        with pytest.raises(ValueError):
            g2_test(d, 0, 1, [1])
        with pytest.raises(ValueError):
            g2_test(d, 0, 1, alpha=0)
        with pytest.raises(ValueError):
            g2_test(Dataset(("a", "b"), (2, 2), np.zeros((0, 2), dtype=int)), 0, 1)

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_contingency_reference(self, seed):
        rng = np.random.default_rng(seed)
        n_rows = int(rng.integers(20, 300))
        arities = rng.integers(2, 4, size=4)
        rows = np.column_stack([rng.integers(0, a, n_rows) for a in arities])
        # correlate some columns so the statistic is not near zero
        rows[:, 1] = np.where(rng.random(n_rows) < 0.5, rows[:, 0] % arities[1], rows[:, 1])
        d = _dataset(rows, arities)
        for z in [(), (2,), (2, 3)]:
            r = g2_test(d, 0, 1, z)
            stat, dof = oracles.g2_reference(rows, 0, 1, z)
            assert r.statistic == pytest.approx(stat, rel=1e-9, abs=1e-9)
            assert r.dof == dof

    def test_mask_and_tuple_conditioning_agree(self):
        d = sample_dataset(CHORDED, 2, 500, seed=3)
        assert g2_test(d, 0, 2, 0b1010) == g2_test(d, 0, 2, (1, 3))

    def test_chain_calibration(self):
        # I(a, c | b) should be accepted in most seeded repetitions
        accepted = 0
        for seed in range(40):
            d = sample_dataset(CHAIN, 2, 10000, seed=seed)
            accepted += g2_test(d, 0, 2, (1,)).independent
        assert accepted >= 0.9 * 40


class TestSampler:
    def test_empty_graph_bits(self):
        d = sample_dataset(UndirectedGraph.empty(3), 2, 4, seed=5)
        assert d.rows.shape == (4, 3) and set(np.unique(d.rows)) <= {0, 1}
        assert d == sample_dataset(UndirectedGraph.empty(3), 2, 4, seed=5)

    def test_determinism(self):
        a = sample_dataset(CHORDED, (2, 3, 2, 4), 200, seed=9)
        b = sample_dataset(CHORDED, (2, 3, 2, 4), 200, seed=9)
        assert a == b and a.to_csv() == b.to_csv()
        assert a != sample_dataset(CHORDED, (2, 3, 2, 4), 200, seed=10)

    def test_chain_dependencies(self):
        d = sample_dataset(CHAIN, 2, 50000, seed=0)
        assert not g2_test(d, 0, 1).independent
        assert g2_test(d, 0, 2, (1,)).independent

    def test_arity_respected(self):
        d = sample_dataset(CHAIN, (2, 5, 3), 3000, seed=2)
        assert d.arities == (2, 5, 3)
        assert list(d.rows.max(axis=0)) == [1, 4, 2]

    def test_errors(self):
        with pytest.raises(NotChordalError):
            sample_dataset(DIAMOND, 2, 10)
        with pytest.raises(ValueError):
            sample_dataset(CHAIN, 2, 0)
        with pytest.raises(ValueError):
            sample_dataset(CHAIN, 1, 10)
        with pytest.raises(ValueError):
            sample_dataset(CHAIN, (2, 2), 10)


class TestChordalize:
    def test_chordal_unchanged(self):
        for mask in chordal_edge_masks(5)[::37]:
            g = UndirectedGraph.from_edge_mask(5, mask)
            assert chordalize(g) == (g, [])

    def test_diamond_one_chord(self):
        h, fill = chordalize(DIAMOND)
        assert fill == [(1, 3)] and is_chordal(h)

    def test_five_cycle_two_chords(self):
        h, fill = chordalize(UndirectedGraph.cycle(5))
        assert len(fill) == 2 and is_chordal(h)

    def test_always_chordal_supergraph(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            g = UndirectedGraph.from_edge_mask(n, int(rng.integers(0, 1 << (n * (n - 1) // 2))))
            h, fill = chordalize(g)
            assert oracles.is_chordal(n, h.edges)
            assert set(h.edges) == set(g.edges) | set(fill)
            assert not set(fill) & set(g.edges)


class TestOracleLearning:
    def test_chain(self):
        r = learn_skeleton(graph_model(CHAIN), 3)
        assert r.skeleton == CHAIN
        assert r.sepsets == {(0, 2): (1,)}

    def test_chorded_diamond(self):
        r = learn_skeleton(graph_model(CHORDED), 4)
        assert r.skeleton == CHORDED and r.graph.num_edges == 5

    def test_all_chordal_up_to_5_with_sepsets(self):
        for n in range(1, 6):
            for mask in chordal_edge_masks(n):
                g = UndirectedGraph.from_edge_mask(n, mask)
                r = learn_skeleton(graph_model(g), n)
                assert r.skeleton == g and not r.fill_edges
                assert all(g.has_edge(u, v) for u, v in r.fixed_edges)
                for (a, b), s in r.sepsets.items():
                    assert oracles.separated(n, g.edges, [a], [b], list(s))

    def test_baseline_recovers_too(self):
        for mask in chordal_edge_masks(4):
            g = UndirectedGraph.from_edge_mask(4, mask)
            assert learn_skeleton(graph_model(g), 4, BASELINE).skeleton == g

    def test_pruning_saves_tests(self):
        g = UndirectedGraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 3)])
        pruned = learn_skeleton(graph_model(g), 6)
        base = learn_skeleton(graph_model(g), 6, BASELINE)
        assert pruned.ci_tests <= base.ci_tests

    def test_fixing_rule_fires(self):
        r = learn_skeleton(graph_model(CHORDED), 4)
        assert r.fixed_edges == [(1, 3)]
        off = learn_skeleton(graph_model(CHORDED), 4, LearnConfig(c6_rule=False))
        assert off.fixed_edges == [] and off.skeleton == CHORDED

    def test_max_cond_size(self):
        r = learn_skeleton(graph_model(CHORDED), 4, LearnConfig(max_cond_size=1))
        assert (0, 2) not in r.sepsets and r.skeleton.has_edge(0, 2)
        assert max(r.tests_per_level) <= 1

    def test_non_chordal_oracle_with_chordalize(self):
        # the fixing rule keeps chord 1-3 alive, so the output is already chordal
        r = learn_skeleton(graph_model(DIAMOND), 4, LearnConfig(chordalize=True))
        assert r.fixed_edges == [(1, 3)] and not r.chordalized and is_chordal(r.graph)
        plain = LearnConfig(chordalize=True, c6_rule=False, c8_pruning=False)
        r = learn_skeleton(graph_model(DIAMOND), 4, plain)
        assert r.skeleton == DIAMOND
        assert r.chordalized and r.fill_edges == [(1, 3)] and is_chordal(r.graph)

    def test_callable_source_and_dataset_mismatch(self):
        r = learn_skeleton(oracle_ci(all_true_model(3)), 3)
        assert r.skeleton.num_edges == 0
        with pytest.raises(ValueError):
            learn_skeleton(sample_dataset(CHAIN, 2, 10), 4)
        with pytest.raises(TypeError):
            learn_skeleton(object(), 3)

    def test_inconsistent_source(self):
        calls = {"n": 0}

        def flaky(a, b, z):
            calls["n"] += 1
            return calls["n"] % 2 == 0

        with pytest.raises(InconsistentOracleError):
            learn_skeleton(flaky, 3)

    def test_result_json(self):
        r = learn_skeleton(graph_model(CHAIN), 3)
        data = json.loads(r.to_json())
        assert data["skeleton"] == [[0, 1], [1, 2]]
        assert data["sepsets"] == [{"pair": [0, 2], "sepset": [1]}]
        assert data["ci_tests"]["total"] == r.ci_tests


class TestDataLearning:
    def test_chain_end_to_end(self):
        d = sample_dataset(CHAIN, 2, 50000, seed=0)
        r = learn_skeleton(d, 3)
        assert r.skeleton == CHAIN
        assert r.names == ("x0", "x1", "x2")

    def test_data_ci_source(self):
        d = sample_dataset(CHAIN, 2, 5000, seed=1)
        ci = DataCi(d, 0.01)
        assert ci(0, 2, 0b10) == g2_test(d, 0, 2, (1,), 0.01).independent
        with pytest.raises(ValueError):
            DataCi(d, 1.5)

    def test_learned_sepsets_separate_in_truth(self):
        g = UndirectedGraph.from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4), (2, 3)])
        d = sample_dataset(g, 2, 50000, seed=4)
        r = learn_skeleton(d, 5)
        for (a, b), s in r.sepsets.items():
            assert separated(g, [a], [b], list(s))
