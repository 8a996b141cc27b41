import json

import pytest

from igcheck.errors import InstanceError, InvalidArgumentError, VocabularyError
from igcheck.graph import ImprovementGraph
from igcheck.randgraphs import random_improvement_graph

U = frozenset


def two_agent_square():
    labels = [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]
    edges = [
        (0, U({0}), 2), (0, U({1}), 1), (1, U({0}), 3),
        (0, U({0, 1}), 3),
    ]
    return ImprovementGraph(2, labels, edges)


def test_node_ids_follow_label_order():
    g = two_agent_square()
    assert g.node_count == 4
    assert list(g.node_ids()) == [0, 1, 2, 3]
    assert g.node_id(("a", "b")) == 1
    with pytest.raises(InvalidArgumentError):
        g.node_id(("z", "z"))


def test_rejects_duplicate_labels():
    with pytest.raises(InstanceError, match="distinct"):
        ImprovementGraph(1, [("a",), ("a",)], [])


def test_rejects_wrong_label_width():
    with pytest.raises(InstanceError, match="components"):
        ImprovementGraph(2, [("a",), ("b", "c")], [])


def test_rejects_out_of_range_edge():
    with pytest.raises(InstanceError, match="out of range"):
        ImprovementGraph(1, [("a",), ("b",)], [(0, U({0}), 7)])


def test_rejects_self_loop():
    with pytest.raises(InstanceError, match="self loop"):
        ImprovementGraph(1, [("a",), ("b",)], [(0, U({0}), 0)])


def test_rejects_empty_coalition():
    with pytest.raises(InstanceError, match="empty coalition"):
        ImprovementGraph(1, [("a",), ("b",)], [(0, U(), 1)])


def test_rejects_unknown_agent_in_coalition():
    with pytest.raises(InstanceError, match="unknown agent"):
        ImprovementGraph(1, [("a",), ("b",)], [(0, U({3}), 1)])


def test_rejects_coalition_member_that_did_not_move():
    # agent 2 is named but its component is fixed
    with pytest.raises(InstanceError, match="did not change"):
        ImprovementGraph(2, [("a", "x"), ("b", "x")], [(0, U({0, 1}), 1)])


def test_rejects_mover_outside_coalition():
    with pytest.raises(InstanceError, match="not .* coalition"):
        ImprovementGraph(2, [("a", "x"), ("b", "y")], [(0, U({0}), 1)])


def test_rejects_atom_with_unknown_node():
    with pytest.raises(InstanceError, match="unknown node"):
        ImprovementGraph(1, [("a",), ("b",)], [],
                         atoms={"P": (1, {5})})


def test_singleton_slices_installed_and_checked():
    g = two_agent_square()
    assert g.atom_interpretation("E_1") == (2, frozenset({(0, 2), (1, 3)}))
    assert g.atom_interpretation("E_2") == (2, frozenset({(0, 1)}))
    with pytest.raises(InstanceError, match="disagrees"):
        ImprovementGraph(2, [("a", "x"), ("b", "x")], [(0, U({0}), 1)],
                         atoms={"E_1": (2, frozenset())})


def test_atom_resolution_order_and_views():
    g = two_agent_square()
    # E is the unilateral slice only
    assert g.atom_interpretation("E")[1] == {(0, 2), (0, 1), (1, 3)}
    assert g.atom_interpretation("E#1") == g.atom_interpretation("E")
    assert g.atom_interpretation("E#2")[1] == {(0, 2), (0, 1), (1, 3), (0, 3)}
    assert g.atom_interpretation("E_1_2")[1] == {(0, 3)}
    assert g.atom_interpretation("E_2_1")[1] == {(0, 3)}


def test_extensional_atom_wins_over_derived_name():
    g = ImprovementGraph(1, [("a",), ("b",)], [(0, U({0}), 1)],
                         atoms={"E": (1, {0})})
    assert g.atom_interpretation("E") == (1, frozenset({0}))


def test_bad_atom_names():
    g = two_agent_square()
    with pytest.raises(VocabularyError, match="outside 1..2"):
        g.atom_interpretation("E#3")
    with pytest.raises(VocabularyError, match="invalid coalition"):
        g.atom_interpretation("E_1_1")
    with pytest.raises(VocabularyError, match="invalid coalition"):
        g.atom_interpretation("E_9")
    with pytest.raises(VocabularyError, match="does not interpret"):
        g.atom_interpretation("Q")


def test_edge_views():
    g = two_agent_square()
    assert g.edge({0, 1}, 0, 3)
    assert not g.edge({0}, 0, 3)
    assert g.union_edge(0, 1)
    assert not g.union_edge(0, 3)
    assert g.k_edge(2, 0, 3)
    assert not g.k_edge(1, 0, 3)
    with pytest.raises(InvalidArgumentError):
        g.k_edge(0, 0, 1)
    with pytest.raises(InvalidArgumentError):
        g.k_edge(3, 0, 1)
    assert g.successors(0) == {1, 2, 3}
    assert g.predecessors(3) == {0, 1}
    assert g.out_edges(2) == ()
    assert g.pairs_with_coalition({1}) == {(0, 1)}


def test_json_round_trip():
    g = two_agent_square()
    text = g.dumps()
    h = ImprovementGraph.loads(text)
    assert h.n == g.n
    assert h.labels == g.labels
    assert h.edges == g.edges
    assert h.dumps() == text


def test_dumps_is_deterministic():
    g1 = two_agent_square()
    g2 = two_agent_square()
    assert g1.dumps() == g2.dumps()
    data = json.loads(g1.dumps())
    assert data["n"] == 2
    # agents serialize 1-based
    assert [0, [1, 2], 3] in data["edges"]


def test_loads_rejects_malformed_with_pointer():
    with pytest.raises(InstanceError) as exc:
        ImprovementGraph.loads(json.dumps({"nodes": [], "edges": []}))
    assert "n" in str(exc.value)
    bad = {"n": 1, "nodes": [["a"], ["b"]], "edges": [[0, "x", 1]]}
    with pytest.raises(InstanceError) as exc:
        ImprovementGraph.from_json_dict(bad)
    assert getattr(exc.value, "pointer", None)


def test_random_graphs_pass_validation():
    for seed in range(40):
        g = random_improvement_graph(seed, max_nodes=20, max_agents=4)
        # reconstructing with validation on must succeed
        ImprovementGraph(g.n, g.labels, g.edges)
        assert g.node_count <= 20
        assert 1 <= g.n <= 4
