import pytest

from igcheck.builders import (
    AllocationInstance,
    GameInstance,
    VotingInstance,
    build_allocation_graph,
    build_game_graph,
    build_voting_graph,
)
from igcheck.graph import ImprovementGraph


def _two_player(payoffs):
    # payoffs: {(s1, s2): (u1, u2)}
    strategies = (
        tuple(sorted({p[0] for p in payoffs})),
        tuple(sorted({p[1] for p in payoffs})),
    )
    utilities = (
        {p: u for p, (u, _) in payoffs.items()},
        {p: u for p, (_, u) in payoffs.items()},
    )
    return GameInstance(strategies, utilities)


@pytest.fixture(scope="session")
def pd_game():
    return _two_player({
        ("C", "C"): (3, 3), ("C", "D"): (0, 5),
        ("D", "C"): (5, 0), ("D", "D"): (1, 1),
    })


@pytest.fixture(scope="session")
def mp_game():
    return _two_player({
        ("H", "H"): (1, -1), ("H", "T"): (-1, 1),
        ("T", "H"): (-1, 1), ("T", "T"): (1, -1),
    })


@pytest.fixture(scope="session")
def coordination_game():
    return _two_player({
        ("a", "a"): (1, 1), ("a", "b"): (0, 0),
        ("b", "a"): (0, 0), ("b", "b"): (1, 1),
    })


@pytest.fixture(scope="session")
def congestion_game():
    # two links, each player pays the load on its own link
    def load(profile, me):
        return -sum(1 for q in profile if q == profile[me])
    payoffs = {}
    for a in ("l1", "l2"):
        for b in ("l1", "l2"):
            payoffs[(a, b)] = (load((a, b), 0), load((a, b), 1))
    return _two_player(payoffs)


@pytest.fixture(scope="session")
def pd_graph(pd_game):
    return build_game_graph(pd_game)


@pytest.fixture(scope="session")
def mp_graph(mp_game):
    return build_game_graph(mp_game)


@pytest.fixture(scope="session")
def coordination_graph(coordination_game):
    return build_game_graph(coordination_game)


@pytest.fixture(scope="session")
def congestion_graph(congestion_game):
    return build_game_graph(congestion_game)


@pytest.fixture(scope="session")
def voting_single():
    return VotingInstance(n=1, m=2, k=1, rule="plurality-top-k",
                          voter_utils=[[1, 0]])


@pytest.fixture(scope="session")
def voting_opposed():
    return VotingInstance(n=2, m=2, k=1, rule="plurality-top-k",
                          voter_utils=[[1, 0], [0, 1]])


@pytest.fixture(scope="session")
def voting_borda():
    return VotingInstance(n=2, m=3, k=1, rule="borda-top-k",
                          voter_utils=[[2, 1, 0], [2, 1, 0]])


@pytest.fixture(scope="session")
def housing_swap():
    return AllocationInstance(
        n=2, items=["h1", "h2"], housing=True, initial=["h1", "h2"],
        bundle_utils=[{"h1": 1, "h2": 2}, {"h1": 2, "h2": 1}])


@pytest.fixture(scope="session")
def housing_cycle():
    return AllocationInstance(
        n=3, items=["h1", "h2", "h3"], housing=True,
        initial=["h1", "h2", "h3"],
        bundle_utils=[
            {"h1": 1, "h2": 2, "h3": 0},
            {"h1": 0, "h2": 1, "h3": 2},
            {"h1": 2, "h2": 0, "h3": 1},
        ])


@pytest.fixture(scope="session")
def goods_two():
    return AllocationInstance(
        n=2, items=["g1", "g2"],
        bundle_utils=[{"g1": 3, "g2": 1}, {"g1": 1, "g2": 3}])


@pytest.fixture(scope="session")
def housing_swap_graph(housing_swap):
    return build_allocation_graph(housing_swap, max_coalition=2)


@pytest.fixture(scope="session")
def housing_cycle_graph(housing_cycle):
    return build_allocation_graph(housing_cycle, max_coalition=3)


@pytest.fixture(scope="session")
def goods_two_graph(goods_two):
    return build_allocation_graph(goods_two, max_coalition=2)


@pytest.fixture(scope="session")
def path_graph():
    # 0 -> 1 -> 2, one agent
    return ImprovementGraph(
        1, [("n0",), ("n1",), ("n2",)],
        [(0, frozenset({0}), 1), (1, frozenset({0}), 2)])


@pytest.fixture(scope="session")
def cycle_graph():
    # directed 3-cycle, one agent
    return ImprovementGraph(
        1, [("n0",), ("n1",), ("n2",)],
        [(0, frozenset({0}), 1), (1, frozenset({0}), 2),
         (2, frozenset({0}), 0)])
