"""Brute-force reference answers for the stock properties.

Everything here recomputes results straight from the raw edge list with
textbook graph algorithms, sharing no code with the formula evaluator,
so the two sides can be diffed against each other.

The k argument bounds the coalition sizes considered: k=1 matches the
unilateral edge atom E, larger k matches E#k, and None takes every edge
regardless of coalition size.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .errors import InvalidArgumentError


def _step_pairs(g, k):
    pairs = set()
    for s, u, t in g.edges:
        if k is None or len(u) <= k:
            pairs.add((s, t))
    return pairs


def oracle_sinks(g, k=1):
    """Nodes with no outgoing edge of coalition size <= k."""
    sources = {s for s, _ in _step_pairs(g, k)}
    return frozenset(x for x in range(g.node_count) if x not in sources)


def oracle_acyclic(g, k=1):
    """True iff the size-<=k step relation has no cycle (iterative DFS)."""
    adj = {}
    for s, t in _step_pairs(g, k):
        adj.setdefault(s, []).append(t)
    color = [0] * g.node_count
    for start in range(g.node_count):
        if color[start]:
            continue
        color[start] = 1
        stack = [(start, iter(adj.get(start, ())))]
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                color[v] = 2
                stack.pop()
            elif color[w] == 1:
                return False
            elif color[w] == 0:
                color[w] = 1
                stack.append((w, iter(adj.get(w, ()))))
    return True


def _reaches_sink(g, k):
    """Nodes from which some sink is reachable: backward BFS from sinks."""
    rev = {}
    for s, t in _step_pairs(g, k):
        rev.setdefault(t, []).append(s)
    seen = set(oracle_sinks(g, k))
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for w in rev.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def oracle_weakly_acyclic(g, k=1):
    """True iff every node reaches a sink of the size-<=k step relation."""
    return len(_reaches_sink(g, k)) == g.node_count


def oracle_reach_count(g, k=1):
    """How many nodes can reach a sink."""
    return len(_reaches_sink(g, k))


def oracle_path_count(g, bound, k=1):
    """True iff fewer than bound many nodes can reach a sink."""
    return oracle_reach_count(g, k) < bound


def oracle_nash(game):
    """Pure equilibria of a game, as node ids of its improvement graph.

    Recomputes the ids from scratch: nodes are the strategy profiles in
    sorted order, the same convention the graph builder uses, so the
    result can be compared against evaluator output without touching the
    built graph.
    """
    profiles = sorted(itertools.product(*game.strategies))
    out = set()
    for idx, p in enumerate(profiles):
        best = True
        for i in range(len(game.strategies)):
            here = game.utility(i, p)
            for s in game.strategies[i]:
                if s == p[i]:
                    continue
                q = p[:i] + (s,) + p[i + 1:]
                if game.utility(i, q) > here:
                    best = False
                    break
            if not best:
                break
        if best:
            out.add(idx)
    return frozenset(out)


def oracle_envy_free(g, inst):
    """Envy-free nodes of an allocation graph, judged from the labels.

    The graph supplies only the id-to-label mapping; bundles and
    utilities come from the allocation instance.
    """
    out = set()
    for idx in range(g.node_count):
        label = g.labels[idx]
        if len(label) != inst.n:
            raise InvalidArgumentError(
                f"label {label!r} does not look like an allocation for "
                f"{inst.n} agents")
        bundles = [inst.parse_bundle(tok) for tok in label]
        envious = False
        for i in range(inst.n):
            own = inst.bundle_utility(i, bundles[i])
            for j in range(inst.n):
                if i != j and inst.bundle_utility(i, bundles[j]) > own:
                    envious = True
                    break
            if envious:
                break
        if not envious:
            out.add(idx)
    return frozenset(out)


@dataclass(frozen=True, slots=True)
class OracleReport:
    sinks: frozenset
    acyclic: bool
    weakly_acyclic: bool
    reach_count: int

    def to_json_dict(self):
        return {
            "sinks": sorted(self.sinks),
            "acyclic": self.acyclic,
            "weakly_acyclic": self.weakly_acyclic,
            "reach_count": self.reach_count,
        }


def oracle_report(g, k=1):
    """All reference answers for one slice, with internal sanity checks."""
    sinks = oracle_sinks(g, k)
    acyclic = oracle_acyclic(g, k)
    weak = oracle_weakly_acyclic(g, k)
    count = oracle_reach_count(g, k)
    if acyclic and not weak:
        raise AssertionError("acyclic graph must be weakly acyclic")
    if weak and g.node_count and not sinks:
        raise AssertionError("weakly acyclic graph must have a sink")
    if count < len(sinks):
        raise AssertionError("every sink reaches itself")
    return OracleReport(sinks, acyclic, weak, count)
