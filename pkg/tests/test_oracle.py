import pytest

from igcheck.graph import ImprovementGraph
from igcheck.oracle import (
    OracleReport,
    oracle_acyclic,
    oracle_envy_free,
    oracle_nash,
    oracle_path_count,
    oracle_reach_count,
    oracle_report,
    oracle_sinks,
    oracle_weakly_acyclic,
)
from igcheck.randgraphs import random_improvement_graph

U = frozenset


def test_sinks_respect_coalition_bound():
    g = ImprovementGraph(
        2, [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")],
        [(0, U({0, 1}), 3)])
    # no unilateral edges at all: every node is a 1-sink
    assert oracle_sinks(g) == frozenset({0, 1, 2, 3})
    assert oracle_sinks(g, 2) == frozenset({1, 2, 3})
    assert oracle_sinks(g, None) == frozenset({1, 2, 3})


def test_acyclicity_views(path_graph, cycle_graph):
    assert oracle_acyclic(path_graph)
    assert not oracle_acyclic(cycle_graph)
    assert oracle_weakly_acyclic(path_graph)
    assert not oracle_weakly_acyclic(cycle_graph)
    assert oracle_reach_count(path_graph) == 3
    assert oracle_reach_count(cycle_graph) == 0
    assert oracle_path_count(path_graph, 4)
    assert not oracle_path_count(path_graph, 3)


def test_coalition_bound_changes_acyclicity():
    # the only cycle needs two-agent moves
    g = ImprovementGraph(
        2, [("a", "a"), ("b", "b")],
        [(0, U({0, 1}), 1), (1, U({0, 1}), 0)])
    assert oracle_acyclic(g, 1)
    assert not oracle_acyclic(g, 2)
    assert not oracle_acyclic(g, None)


def test_oracle_nash_prisoners_dilemma(pd_game, pd_graph):
    nash = oracle_nash(pd_game)
    assert nash == frozenset({3})
    assert pd_graph.labels[3] == ("D", "D")


def test_oracle_nash_matching_pennies(mp_game):
    assert oracle_nash(mp_game) == frozenset()


def test_oracle_nash_coordination(coordination_game):
    assert oracle_nash(coordination_game) == frozenset({0, 3})


def test_oracle_envy_free(goods_two_graph, goods_two):
    got = oracle_envy_free(goods_two_graph, goods_two)
    assert got == frozenset({goods_two_graph.node_id(("g1", "g2"))})


def test_report_consistency_on_random_graphs():
    for seed in range(60):
        g = random_improvement_graph(seed, max_nodes=24, max_agents=4)
        rep = oracle_report(g)  # raises AssertionError on inconsistency
        assert isinstance(rep, OracleReport)
        if rep.acyclic:
            assert rep.weakly_acyclic
        if rep.weakly_acyclic:
            assert rep.reach_count == g.node_count
        assert rep.reach_count >= len(rep.sinks)
        assert rep.sinks == oracle_sinks(g)


def test_report_fixture_values(mp_graph, pd_graph):
    rep = oracle_report(mp_graph)
    assert rep.sinks == frozenset()
    assert not rep.acyclic and not rep.weakly_acyclic
    assert rep.reach_count == 0
    rep = oracle_report(pd_graph)
    assert rep.sinks == frozenset({3})
    assert rep.acyclic and rep.weakly_acyclic
    assert rep.reach_count == 4
