import json
import random

import pytest

import oracles
from decomposable.axioms import (
    AXIOM_NAMES,
    MAX_REPORTED,
    check_all,
    check_axiom,
    check_chordality_c7,
    check_decomposition,
    check_intersection,
    check_strong_chordality,
    check_strong_union,
    check_symmetry,
    check_transitivity,
    holds,
    normalize_axiom_name,
    replay,
)
from decomposable.errors import CapExceededError
from decomposable.graph import UndirectedGraph, enumerate_graphs
from decomposable.model import (
    Dag,
    DagModel,
    ExplicitModel,
    FunctionModel,
    all_true_model,
    disjoint_triples,
    explicit_from_model,
    graph_model,
)

DIAMOND = UndirectedGraph.cycle(4)
CHORDED = DIAMOND.with_edges([(1, 3)])
BASIC = ["C1", "C2", "C3", "C4", "C5"]
CHORDAL_AXIOMS = ["C6", "C7", "C8", "C9", "C9'"]


def _mask(s):
    return sum(1 << v for v in s)


def _separation_predicate(g):
    def I(x, y, z):
        if not x or not y:
            return True
        return oracles.separated(g.n, g.edges, sorted(x), sorted(y), sorted(z))

    return I


def _table_predicate(m):
    return lambda x, y, z: m.query(_mask(x), _mask(y), _mask(z))


class TestNames:
    def test_normalize(self):
        assert normalize_axiom_name("c6") == "C6"
        assert normalize_axiom_name("C9'") == "C9'"
        assert normalize_axiom_name("c9p") == "C9'"
        assert normalize_axiom_name("C9prime") == "C9'"
        assert AXIOM_NAMES == ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C9'")

    def test_unknown(self):
        with pytest.raises(ValueError, match="unknown axiom"):
            normalize_axiom_name("C10")


class TestExamples:
    def test_diamond(self):
        report = check_all(graph_model(DIAMOND))
        assert report.failing() == CHORDAL_AXIOMS
        c6 = report["C6"]
        assert {"alpha": 0, "beta": 2, "gamma": 1, "delta": 3, "z": []} in [v.bindings for v in c6.violations]

    def test_chorded_diamond(self):
        assert check_all(graph_model(CHORDED)).holds

    def test_all_true(self):
        assert check_all(all_true_model(4)).holds

    def test_complete_graph_vacuous(self):
        m = graph_model(UndirectedGraph.complete(5))
        for name in CHORDAL_AXIOMS:
            assert check_axiom(m, name).holds

    def test_c1_single_violation(self):
        m = ExplicitModel.from_independencies(2, [([0], [1], [])], symmetric=False)
        r = check_symmetry(m)
        assert not r.holds and r.violation_count == 1
        assert r.violations[0].bindings == {"x": [0], "y": [1], "z": []}

    def test_c2_constructed(self):
        m = ExplicitModel.from_independencies(3, [([0], [1, 2], [])])
        r = check_decomposition(m)
        assert not r.holds
        assert {"x": [0], "y": [1], "w": [2], "z": []} in [v.bindings for v in r.violations]

    def test_c3_collider_fails(self):
        r = check_strong_union(DagModel(Dag.from_arcs(3, [(0, 2), (1, 2)])))
        assert not r.holds
        assert {"x": [0], "y": [1], "w": [2], "z": []} in [v.bindings for v in r.violations]

    def test_c4_constructed(self):
        m = ExplicitModel.from_independencies(3, [([0], [1], [2]), ([0], [2], [1])])
        r = check_intersection(m)
        assert not r.holds
        assert {"x": [0], "y": [1], "w": [2], "z": []} in [v.bindings for v in r.violations]

    def test_c5_dag_counterexample(self):
        r = check_transitivity(DagModel(Dag.from_arcs(3, [(0, 2), (1, 2)])))
        assert not r.holds
        assert {"x": [0], "y": [1], "z": [], "gamma": 2} in [v.bindings for v in r.violations]

    def test_c6_c7_constructed(self):
        m = ExplicitModel.from_independencies(4, [([0], [1], [2, 3]), ([2], [3], [0, 1])])
        assert not check_chordality_c7(m).holds
        assert not check_strong_chordality(m).holds

    @pytest.mark.parametrize("name", BASIC)
    def test_all_true_holds(self, name):
        assert check_axiom(all_true_model(3), name).holds


class TestAgainstOracle:
    @pytest.mark.parametrize("name", AXIOM_NAMES)
    def test_graph_models_up_to_4(self, name):
        for n in range(1, 5):
            for g in enumerate_graphs(n):
                want = oracles.axiom_holds(n, _separation_predicate(g), name)
                assert holds(graph_model(g), name) == want, g

    @pytest.mark.parametrize("name", AXIOM_NAMES)
    def test_perturbed_tables(self, name):
        # graph models with a few flipped entries, symmetric and not
        rng = random.Random(AXIOM_NAMES.index(name))
        verdicts = set()
        for trial in range(30):
            n = 4 if name in CHORDAL_AXIOMS else 3
            g = UndirectedGraph.from_edge_mask(n, rng.getrandbits(n * (n - 1) // 2))
            base = explicit_from_model(graph_model(g))
            table = dict(base.items())
            keys = [t for t in disjoint_triples(n) if t[0] and t[1]]
            for x, y, z in rng.sample(keys, rng.randint(1, 3)):
                table[(x, y, z)] = not table[(x, y, z)]
                if trial % 2:
                    table[(y, x, z)] = table[(x, y, z)]
            m = ExplicitModel(n, table)
            got = holds(m, name)
            verdicts.add(got)
            assert got == oracles.axiom_holds(n, _table_predicate(m), name)
            assert check_axiom(m, name).holds == got
        assert verdicts == {True, False}


class TestInvariants:
    def test_basic_axioms_hold_on_graph_models_n5(self):
        for g in enumerate_graphs(5):
            assert check_all(graph_model(g), BASIC).holds

    def test_violations_replay(self):
        for m in (graph_model(DIAMOND), DagModel(Dag.from_arcs(4, [(0, 2), (1, 2), (2, 3)]))):
            for r in check_all(m).reports.values():
                for v in r.violations:
                    assert replay(m, v)

    def test_truncation(self):
        m = FunctionModel(5, lambda x, y, z: (x & -x) < (y & -y))
        r = check_symmetry(m)
        assert r.violation_count > MAX_REPORTED
        assert len(r.violations) == MAX_REPORTED

    def test_deterministic_report(self):
        a = check_all(graph_model(DIAMOND)).to_json()
        b = check_all(graph_model(DIAMOND)).to_json()
        assert a == b
        data = json.loads(a)
        assert [r["axiom"] for r in data["axioms"]] == list(AXIOM_NAMES)
        assert data["holds"] is False

    def test_selection(self):
        report = check_all(graph_model(DIAMOND), ["c6", "C1"])
        assert list(report.reports) == ["C6", "C1"]

    def test_cap(self):
        with pytest.raises(CapExceededError, match="cap of 7"):
            check_all(graph_model(UndirectedGraph.empty(8)))
