"""Seeded random graphs and instances for tests and benchmarks.

Every generator takes either a seed or a random.Random so test sweeps
are reproducible.  Random graphs are arbitrary label-consistent
improvement graphs (the coalition on an edge is forced to be exactly the
set of components that differ); they need not arise from any game.
"""

from __future__ import annotations

import itertools
import math
import random

from .builders import AllocationInstance, GameInstance
from .graph import ImprovementGraph


def _rng(seed):
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


def random_improvement_graph(seed, max_nodes=64, max_agents=4):
    """A random graph: random distinct labels, random consistent edges."""
    rng = _rng(seed)
    agents = rng.randint(1, max_agents)
    nodes = rng.randint(1, max_nodes)
    width = 1
    while width ** agents < nodes:
        width += 1
    pool = sorted(itertools.product(
        *[[f"c{v}" for v in range(width)] for _ in range(agents)]))
    labels = sorted(rng.sample(pool, nodes))
    edges = set()
    want = rng.randint(0, 3 * nodes)
    for _ in range(4 * want):
        if len(edges) >= want:
            break
        x = rng.randrange(nodes)
        y = rng.randrange(nodes)
        if x == y:
            continue
        diff = frozenset(i for i in range(agents)
                         if labels[x][i] != labels[y][i])
        edges.add((x, diff, y))
    return ImprovementGraph(agents, labels, edges)


def random_game(seed, max_players=3, max_strategies=3, max_utility=5):
    """A random game with small integer utilities (ties are likely)."""
    rng = _rng(seed)
    players = rng.randint(1, max_players)
    strategies = [[f"s{v}" for v in range(rng.randint(1, max_strategies))]
                  for _ in range(players)]
    profiles = list(itertools.product(*strategies))
    utilities = [{p: rng.randint(0, max_utility) for p in profiles}
                 for _ in range(players)]
    return GameInstance(strategies, utilities)


def random_housing(seed, n=3):
    """A housing market with strict random preferences and endowment."""
    rng = _rng(seed)
    items = [f"h{i + 1}" for i in range(n)]
    bundle_utils = []
    for _ in range(n):
        values = list(range(n))
        rng.shuffle(values)
        bundle_utils.append(dict(zip(items, values)))
    initial = rng.sample(items, n)
    return AllocationInstance(n, items, housing=True, initial=initial,
                              bundle_utils=bundle_utils)


def bench_graph(size, seed=0):
    """A sparse two-agent graph of exactly size nodes for timing runs.

    size must be a perfect square; labels are the m x m token grid and
    every node gets a few single-component out-edges.
    """
    m = int(round(math.sqrt(size)))
    if m * m != size:
        raise ValueError(f"bench size must be a perfect square, got {size}")
    rng = _rng(seed)
    labels = sorted((f"a{i:03d}", f"b{j:03d}")
                    for i in range(m) for j in range(m))
    at = {lab: idx for idx, lab in enumerate(labels)}
    edges = set()
    for idx, (a, b) in enumerate(labels):
        for _ in range(rng.randint(1, 3)):
            agent = rng.randrange(2)
            other = rng.randrange(m)
            if agent == 0:
                lab = (f"a{other:03d}", b)
            else:
                lab = (a, f"b{other:03d}")
            if lab == (a, b):
                continue
            edges.add((idx, frozenset((agent,)), at[lab]))
    return ImprovementGraph(2, labels, edges)
