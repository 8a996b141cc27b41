"""Source models and their improvement-graph compilers.

Three instance kinds compile to graphs: normal-form games (unilateral,
coalition or best-response deviations), committee elections where voters
strategize over ballots, and allocations of indivisible items (housing
markets or general goods) where coalitions trade.

Node identity conventions shared with the oracle side: game and voting
nodes are the strategy/ballot profiles in sorted order; allocation nodes
are the allocation labels in sorted order, where a bundle is rendered as
its items sorted and joined with '+' (empty bundle = empty string) and a
ballot as candidates joined with '>'.

Edges always carry the exact set of agents whose component changed, and
every member must strictly improve; ties never generate edges.
"""

from __future__ import annotations

import itertools
import json
import os

from .errors import InstanceError, InvalidArgumentError, ResourceError
from .graph import ImprovementGraph

DEFAULT_NODE_GUARD = 10 ** 6

VOTING_RULES = ("plurality-top-k", "borda-top-k")

_CANDIDATE_POOL = "abcdefghijklmnopqrstuvwxyz"


def node_guard_limit():
    raw = os.environ.get("IGCHECK_GUARD_NODES")
    if raw is None:
        return DEFAULT_NODE_GUARD
    try:
        return int(raw)
    except ValueError:
        raise ResourceError(
            f"IGCHECK_GUARD_NODES must be an integer, got {raw!r}") from None


def _check_node_guard(count, force, what):
    limit = node_guard_limit()
    if not force and count > limit:
        raise ResourceError(
            f"{what} would create {count} nodes, over the guard of {limit}; "
            "pass force=True (--force) or raise IGCHECK_GUARD_NODES")


def _check_token(tok, what, forbidden):
    if not isinstance(tok, str) or not tok:
        raise InstanceError(f"{what} must be a nonempty string, got {tok!r}")
    for ch in forbidden:
        if ch in tok:
            raise InstanceError(f"{what} {tok!r} must not contain {ch!r}")


def _check_number(value, what):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InstanceError(f"{what} must be a number, got {value!r}")


def _validate_json(schema, data, what):
    import jsonschema

    validator = jsonschema.Draft202012Validator(schema)
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise InstanceError(f"{what}: {err.message}", pointer=pointer)


def _agent_keyed(mapping, n, what):
    """Decode a {'1': ..., '2': ...} object into a per-agent list."""
    want = {str(i + 1) for i in range(n)}
    got = set(mapping)
    if got != want:
        raise InstanceError(
            f"{what} must have exactly the agent keys 1..{n}, got "
            + (", ".join(sorted(got)) or "none"))
    return [mapping[str(i + 1)] for i in range(n)]


# -- games ---------------------------------------------------------------------

GAME_SCHEMA = {
    "type": "object",
    "required": ["strategies", "utilities"],
    "properties": {
        "strategies": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 1,
                      "items": {"type": "string"}},
        },
        "utilities": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": {"type": "number"},
            },
        },
    },
}


class GameInstance:
    """A normal-form game: per-agent strategy tokens and profile utilities.

    utilities holds one dict per agent mapping profile tuples to numbers;
    build with from_rankings when preferences are more natural as an
    ordered list of tiers (ties allowed within a tier).
    """

    def __init__(self, strategies, utilities):
        if not strategies:
            raise InstanceError("a game needs at least one agent")
        strats = []
        for i, names in enumerate(strategies):
            names = tuple(names)
            if not names:
                raise InstanceError(f"agent {i + 1} has no strategies")
            for tok in names:
                _check_token(tok, f"agent {i + 1} strategy", ",")
            if len(set(names)) != len(names):
                raise InstanceError(
                    f"agent {i + 1} has duplicate strategy names")
            strats.append(names)
        self.strategies = tuple(strats)
        self._profiles = tuple(sorted(itertools.product(*strats)))
        want = set(self._profiles)
        utils = []
        for i, table in enumerate(utilities):
            table = {tuple(p): v for p, v in dict(table).items()}
            for p, v in table.items():
                _check_number(v, f"utility of agent {i + 1} at {p!r}")
            if set(table) != want:
                raise InstanceError(
                    f"agent {i + 1} utilities must cover every profile "
                    "exactly")
            utils.append(table)
        if len(utils) != len(strats):
            raise InstanceError(
                f"got utilities for {len(utils)} agents, expected "
                f"{len(strats)}")
        self.utilities = tuple(utils)

    @property
    def n(self):
        return len(self.strategies)

    def profiles(self):
        return self._profiles

    def utility(self, i, profile):
        return self.utilities[i][tuple(profile)]

    @classmethod
    def from_rankings(cls, strategies, rankings):
        """Build from per-agent tier lists, best tier first; ties share a tier."""
        strats = [tuple(names) for names in strategies]
        profiles = set(itertools.product(*strats))
        utils = []
        for i, tiers in enumerate(rankings):
            table = {}
            for depth, tier in enumerate(tiers):
                for p in tier:
                    p = tuple(p)
                    if p in table:
                        raise InstanceError(
                            f"agent {i + 1} ranks profile {p!r} twice")
                    table[p] = len(tiers) - depth
            if set(table) != profiles:
                raise InstanceError(
                    f"agent {i + 1} ranking must cover every profile exactly")
            utils.append(table)
        return cls(strats, utils)

    def to_json_dict(self):
        return {
            "strategies": [list(s) for s in self.strategies],
            "utilities": {
                str(i + 1): {",".join(p): self.utilities[i][p]
                             for p in self._profiles}
                for i in range(self.n)
            },
        }

    @classmethod
    def from_json_dict(cls, data):
        _validate_json(GAME_SCHEMA, data, "game instance")
        strategies = [tuple(s) for s in data["strategies"]]
        n = len(strategies)
        per_agent = _agent_keyed(data["utilities"], n, "game utilities")
        utils = []
        for i, table in enumerate(per_agent):
            decoded = {}
            for key, value in table.items():
                parts = tuple(key.split(","))
                if len(parts) != n:
                    raise InstanceError(
                        f"profile key {key!r} does not have {n} parts",
                        pointer=f"/utilities/{i + 1}/{key}")
                decoded[parts] = value
            utils.append(decoded)
        return cls(strategies, utils)


def _strategic_nodes(strategies, force, what):
    count = 1
    for names in strategies:
        count *= len(names)
    _check_node_guard(count, force, what)
    return sorted(itertools.product(*strategies))


def _deviations(profile, agents, strategies):
    """All joint deviations where every listed agent switches strategy."""
    pools = [[s for s in strategies[i] if s != profile[i]] for i in agents]
    for choice in itertools.product(*pools):
        q = list(profile)
        for i, s in zip(agents, choice):
            q[i] = s
        yield tuple(q)


def _improvement_edges(strategies, util, sizes, profiles, index):
    n = len(strategies)
    edges = []
    for p in profiles:
        here = [util(i, p) for i in range(n)]
        for size in sizes:
            for agents in itertools.combinations(range(n), size):
                for q in _deviations(p, agents, strategies):
                    if all(util(i, q) > here[i] for i in agents):
                        edges.append((index[p], frozenset(agents), index[q]))
    return edges


def build_game_graph(game, mode="unilateral", k=None, force=False):
    """Compile a game into its improvement graph.

    mode 'unilateral' emits single-agent improvement steps; 'coalition'
    emits steps for every coalition of size <= k where each member
    changes strategy and strictly gains; 'best-response' keeps only
    unilateral steps onto a best response.
    """
    n = game.n
    profiles = _strategic_nodes(game.strategies, force,
                                f"game graph over {n} agents")
    index = {p: i for i, p in enumerate(profiles)}
    if mode == "unilateral":
        edges = _improvement_edges(game.strategies, game.utility, [1],
                                   profiles, index)
    elif mode == "coalition":
        if k is None or not 1 <= k <= n:
            raise InvalidArgumentError(
                f"coalition mode needs k in 1..{n}, got {k!r}")
        edges = _improvement_edges(game.strategies, game.utility,
                                   range(1, k + 1), profiles, index)
    elif mode == "best-response":
        edges = []
        for p in profiles:
            for i in range(n):
                here = game.utility(i, p)
                alts = [(game.utility(i, p[:i] + (s,) + p[i + 1:]), s)
                        for s in game.strategies[i]]
                best = max(v for v, _ in alts)
                if best > here:
                    for v, s in alts:
                        if v == best:
                            q = p[:i] + (s,) + p[i + 1:]
                            edges.append((index[p], frozenset((i,)),
                                          index[q]))
    else:
        raise InvalidArgumentError(
            f"unknown mode {mode!r}; expected unilateral, coalition or "
            "best-response")
    return ImprovementGraph(n, profiles, edges)


# -- committee voting ------------------------------------------------------------

VOTING_SCHEMA = {
    "type": "object",
    "required": ["n", "m", "k", "rule"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "m": {"type": "integer", "minimum": 1},
        "k": {"type": "integer", "minimum": 1},
        "rule": {"enum": list(VOTING_RULES)},
        "voter_utils": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}},
        },
        "committee_prefs": {
            "type": "array",
            "items": {"type": "object",
                      "additionalProperties": {"type": "number"}},
        },
    },
}


def committee_token(members):
    return "+".join(sorted(members))


class VotingInstance:
    """A committee election that voters play strategically.

    Every voter's strategy set is all m! linear ballots over the
    candidates, written 'a>b>c'.  The rule scores ballots (plurality: one
    point to each top choice; borda: m-1 down to 0 per ballot) and seats
    the k best candidates, breaking score ties toward the earlier
    candidate index.  Voter preferences over committees come either from
    an additive per-candidate utility vector or extensionally per
    committee.
    """

    def __init__(self, n, m, k, rule, voter_utils=None, committee_prefs=None,
                 candidates=None):
        if n < 1:
            raise InstanceError(f"need at least one voter, got {n}")
        if m < 1:
            raise InstanceError(f"need at least one candidate, got {m}")
        if not 1 <= k <= m:
            raise InstanceError(
                f"committee size must be within 1..{m}, got {k}")
        if rule not in VOTING_RULES:
            raise InstanceError(
                f"unknown rule {rule!r}; expected one of "
                + ", ".join(VOTING_RULES))
        if candidates is None:
            if m > len(_CANDIDATE_POOL):
                raise InstanceError(
                    f"default candidate names cover only "
                    f"{len(_CANDIDATE_POOL)} candidates")
            candidates = tuple(_CANDIDATE_POOL[:m])
        else:
            candidates = tuple(candidates)
            if len(candidates) != m:
                raise InstanceError(
                    f"got {len(candidates)} candidate names for m={m}")
            for tok in candidates:
                _check_token(tok, "candidate", ">,+")
            if len(set(candidates)) != m:
                raise InstanceError("candidate names must be distinct")
        self.n = n
        self.m = m
        self.k = k
        self.rule = rule
        self.candidates = candidates
        self._cand_index = {c: i for i, c in enumerate(candidates)}

        if (voter_utils is None) == (committee_prefs is None):
            raise InstanceError(
                "give exactly one of voter_utils and committee_prefs")
        if voter_utils is not None:
            voter_utils = [tuple(row) for row in voter_utils]
            if len(voter_utils) != n:
                raise InstanceError(
                    f"voter_utils has {len(voter_utils)} rows, expected {n}")
            for i, row in enumerate(voter_utils):
                if len(row) != m:
                    raise InstanceError(
                        f"voter {i + 1} utility vector has {len(row)} "
                        f"entries, expected {m}")
                for v in row:
                    _check_number(v, f"voter {i + 1} candidate utility")
            self.voter_utils = tuple(voter_utils)
            self.committee_prefs = None
        else:
            committee_prefs = [dict(row) for row in committee_prefs]
            if len(committee_prefs) != n:
                raise InstanceError(
                    f"committee_prefs has {len(committee_prefs)} rows, "
                    f"expected {n}")
            want = {committee_token(c)
                    for c in itertools.combinations(candidates, k)}
            for i, row in enumerate(committee_prefs):
                if set(row) != want:
                    raise InstanceError(
                        f"voter {i + 1} committee preferences must cover "
                        f"every size-{k} committee exactly")
                for v in row.values():
                    _check_number(v, f"voter {i + 1} committee utility")
            self.voter_utils = None
            self.committee_prefs = tuple(committee_prefs)

    def ballots(self):
        return tuple(">".join(p)
                     for p in itertools.permutations(self.candidates))

    def outcome(self, profile):
        """The elected committee for a ballot profile, as a frozenset."""
        scores = {c: 0 for c in self.candidates}
        for ballot in profile:
            order = ballot.split(">")
            if self.rule == "plurality-top-k":
                scores[order[0]] += 1
            else:
                for pos, c in enumerate(order):
                    scores[c] += self.m - 1 - pos
        ranked = sorted(self.candidates,
                        key=lambda c: (-scores[c], self._cand_index[c]))
        return frozenset(ranked[:self.k])

    def committee_utility(self, i, committee):
        if self.voter_utils is not None:
            row = self.voter_utils[i]
            return sum(row[self._cand_index[c]] for c in committee)
        return self.committee_prefs[i][committee_token(committee)]

    def utility(self, i, profile):
        return self.committee_utility(i, self.outcome(profile))

    def to_json_dict(self):
        data = {"n": self.n, "m": self.m, "k": self.k, "rule": self.rule}
        if self.voter_utils is not None:
            data["voter_utils"] = [list(row) for row in self.voter_utils]
        else:
            data["committee_prefs"] = [dict(row)
                                       for row in self.committee_prefs]
        return data

    @classmethod
    def from_json_dict(cls, data):
        _validate_json(VOTING_SCHEMA, data, "voting instance")
        return cls(data["n"], data["m"], data["k"], data["rule"],
                   voter_utils=data.get("voter_utils"),
                   committee_prefs=data.get("committee_prefs"))


def build_voting_graph(v, force=False):
    """Compile an election into the ballot-profile improvement graph.

    Guarded at m <= 4 and n <= 3 by default because the node count is
    (m!)^n; pass force=True to override (the absolute node guard still
    applies).
    """
    if not force and (v.m > 4 or v.n > 3):
        raise ResourceError(
            f"voting graph over {v.n} voters and {v.m} candidates has "
            f"(m!)^n = {_factorial(v.m) ** v.n} nodes; pass force=True "
            "to build it anyway")
    ballots = v.ballots()
    strategies = [ballots] * v.n
    profiles = _strategic_nodes(strategies, force,
                                f"voting graph over {v.n} voters")
    index = {p: i for i, p in enumerate(profiles)}
    edges = _improvement_edges(strategies, v.utility, [1], profiles, index)
    return ImprovementGraph(v.n, profiles, edges)


def _factorial(m):
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


# -- allocations -------------------------------------------------------------------

ALLOCATION_SCHEMA = {
    "type": "object",
    "required": ["n", "items"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "items": {"type": "array", "minItems": 1,
                  "items": {"type": "string"}},
        "housing": {"type": "boolean"},
        "initial": {"type": "array", "items": {"type": "string"}},
        "bundle_utils": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": {"type": "number"},
            },
        },
        "allocation_prefs": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": {"type": "number"},
            },
        },
        "externalities": {"type": "boolean"},
    },
}


def bundle_token(items):
    return "+".join(sorted(items))


class AllocationInstance:
    """Indivisible items split among agents.

    With the housing flag the instance is a housing market: as many items
    as agents, every allocation a bijection, bundles single items.
    Otherwise any split of the items into labeled possibly-empty bundles
    is a node.

    Preferences: bundle_utils gives each agent either per-item values
    (additive, every key an item) or a value for every reachable bundle
    token.  With externalities=True, allocation_prefs instead values
    whole allocations by their comma-joined label.
    """

    def __init__(self, n, items, housing=False, initial=None,
                 bundle_utils=None, allocation_prefs=None,
                 externalities=False):
        if n < 1:
            raise InstanceError(f"need at least one agent, got {n}")
        items = tuple(items)
        if not items:
            raise InstanceError("need at least one item")
        for tok in items:
            _check_token(tok, "item", "+,>")
        if len(set(items)) != len(items):
            raise InstanceError("item names must be distinct")
        if housing and len(items) != n:
            raise InstanceError(
                f"a housing market needs exactly one item per agent; got "
                f"{len(items)} items for {n} agents")
        self.n = n
        self.items = items
        self.housing = housing
        self.externalities = bool(externalities)

        if self.externalities:
            if allocation_prefs is None or bundle_utils is not None:
                raise InstanceError(
                    "externalities=True needs allocation_prefs and no "
                    "bundle_utils")
        else:
            if bundle_utils is None or allocation_prefs is not None:
                raise InstanceError(
                    "without externalities give bundle_utils and no "
                    "allocation_prefs")

        if initial is not None:
            initial = tuple(str(t) for t in initial)
            self._check_allocation(initial, "initial allocation")
        self.initial = initial

        if bundle_utils is not None:
            bundle_utils = [dict(row) for row in bundle_utils]
            if len(bundle_utils) != n:
                raise InstanceError(
                    f"bundle_utils has {len(bundle_utils)} rows, "
                    f"expected {n}")
            self.bundle_utils = []
            self._additive = []
            item_set = set(items)
            for i, row in enumerate(bundle_utils):
                for v in row.values():
                    _check_number(v, f"agent {i + 1} bundle utility")
                if set(row) <= item_set:
                    if set(row) != item_set:
                        raise InstanceError(
                            f"agent {i + 1} per-item utilities must cover "
                            "every item")
                    self._additive.append(True)
                else:
                    want = {bundle_token(b) for b in self._reachable_bundles()}
                    if set(row) != want:
                        raise InstanceError(
                            f"agent {i + 1} bundle utilities must cover "
                            "every reachable bundle exactly")
                    self._additive.append(False)
                self.bundle_utils.append(dict(row))
            self.bundle_utils = tuple(self.bundle_utils)
            self.allocation_prefs = None
        else:
            allocation_prefs = [dict(row) for row in allocation_prefs]
            if len(allocation_prefs) != n:
                raise InstanceError(
                    f"allocation_prefs has {len(allocation_prefs)} rows, "
                    f"expected {n}")
            want = {",".join(lab) for lab in self.allocations()}
            for i, row in enumerate(allocation_prefs):
                if set(row) != want:
                    raise InstanceError(
                        f"agent {i + 1} allocation preferences must cover "
                        "every allocation exactly")
                for v in row.values():
                    _check_number(v, f"agent {i + 1} allocation utility")
            self.bundle_utils = None
            self._additive = None
            self.allocation_prefs = tuple(allocation_prefs)

    # bundles and allocations

    def parse_bundle(self, token):
        if not token:
            return frozenset()
        parts = token.split("+")
        bundle = frozenset(parts)
        if len(bundle) != len(parts) or not bundle <= set(self.items):
            raise InvalidArgumentError(f"not a bundle of items: {token!r}")
        return bundle

    def _reachable_bundles(self):
        if self.housing:
            return [frozenset((it,)) for it in self.items]
        out = []
        for size in range(len(self.items) + 1):
            out.extend(frozenset(c)
                       for c in itertools.combinations(self.items, size))
        return out

    def _check_allocation(self, label, what):
        if len(label) != self.n:
            raise InstanceError(
                f"{what} has {len(label)} bundles, expected {self.n}")
        seen = []
        for tok in label:
            try:
                seen.append(self.parse_bundle(tok))
            except InvalidArgumentError as exc:
                raise InstanceError(f"{what}: {exc}") from None
        if self.housing and any(len(b) != 1 for b in seen):
            raise InstanceError(f"{what}: housing bundles are single items")
        flat = [it for b in seen for it in sorted(b)]
        if len(flat) != len(set(flat)) or set(flat) != set(self.items):
            raise InstanceError(
                f"{what} must hand out every item exactly once")

    def allocations(self):
        """All node labels, sorted: bijections for housing, else all splits."""
        if self.housing:
            return sorted(itertools.permutations(self.items))
        labels = []
        for owners in itertools.product(range(self.n),
                                        repeat=len(self.items)):
            bundles = [[] for _ in range(self.n)]
            for item, owner in zip(self.items, owners):
                bundles[owner].append(item)
            labels.append(tuple(bundle_token(b) for b in bundles))
        return sorted(labels)

    def allocation_count(self):
        if self.housing:
            return _factorial(self.n)
        return self.n ** len(self.items)

    # preferences

    def bundle_utility(self, i, bundle):
        """Agent i's value for holding a bundle (own-bundle preferences only)."""
        if self.externalities:
            raise InvalidArgumentError(
                "an instance with externalities has no own-bundle utilities")
        row = self.bundle_utils[i]
        if self._additive[i]:
            return sum(row[it] for it in bundle)
        return row[bundle_token(bundle)]

    def allocation_utility(self, i, label):
        """Agent i's value for a whole allocation label."""
        if self.externalities:
            return self.allocation_prefs[i][",".join(label)]
        return self.bundle_utility(i, self.parse_bundle(label[i]))

    def item_ranking(self, i):
        """Agent i's items best-first; requires strict per-item values."""
        if self.externalities:
            raise InvalidArgumentError(
                "item rankings need own-bundle utilities, not externalities")
        values = [self.bundle_utility(i, frozenset((it,)))
                  for it in self.items]
        if len(set(values)) != len(values):
            raise InvalidArgumentError(
                f"agent {i + 1} item preferences are not strict")
        return tuple(it for _, it in
                     sorted(zip(values, self.items),
                            key=lambda pair: -pair[0]))

    def to_json_dict(self):
        data = {"n": self.n, "items": list(self.items),
                "housing": self.housing,
                "externalities": self.externalities}
        if self.initial is not None:
            data["initial"] = list(self.initial)
        if self.bundle_utils is not None:
            data["bundle_utils"] = {
                str(i + 1): dict(self.bundle_utils[i]) for i in range(self.n)}
        else:
            data["allocation_prefs"] = {
                str(i + 1): dict(self.allocation_prefs[i])
                for i in range(self.n)}
        return data

    @classmethod
    def from_json_dict(cls, data):
        _validate_json(ALLOCATION_SCHEMA, data, "allocation instance")
        n = data["n"]
        bundle_utils = data.get("bundle_utils")
        if bundle_utils is not None:
            bundle_utils = _agent_keyed(bundle_utils, n, "bundle_utils")
        allocation_prefs = data.get("allocation_prefs")
        if allocation_prefs is not None:
            allocation_prefs = _agent_keyed(allocation_prefs, n,
                                            "allocation_prefs")
        return cls(n, data["items"], housing=data.get("housing", False),
                   initial=data.get("initial"),
                   bundle_utils=bundle_utils,
                   allocation_prefs=allocation_prefs,
                   externalities=data.get("externalities", False))


def _trade_targets(inst, label, agents):
    """All reallocations of the coalition's items among its members
    that change every member's bundle."""
    pool = []
    for i in agents:
        pool.extend(sorted(inst.parse_bundle(label[i])))
    out = []
    for owners in itertools.product(agents, repeat=len(pool)):
        bundles = {i: [] for i in agents}
        for item, owner in zip(pool, owners):
            bundles[owner].append(item)
        new = list(label)
        for i in agents:
            new[i] = bundle_token(bundles[i])
        new = tuple(new)
        if all(new[i] != label[i] for i in agents):
            out.append(new)
    return out


def build_allocation_graph(inst, max_coalition, force=False):
    """Compile an allocation instance into its trading improvement graph.

    Coalitions of 2..max_coalition agents redistribute the items they
    jointly hold; an edge needs every member's bundle to change and every
    member to strictly prefer the result.  Installs pref_i and
    samebundle_i_j atoms for envy queries.
    """
    if not isinstance(max_coalition, int) or max_coalition < 2:
        raise InvalidArgumentError(
            f"max_coalition must be an integer >= 2, got {max_coalition!r}; "
            "one agent cannot trade alone")
    _check_node_guard(inst.allocation_count(), force, "allocation graph")
    labels = inst.allocations()
    index = {lab: i for i, lab in enumerate(labels)}
    edges = []
    for lab in labels:
        src = index[lab]
        here = [inst.allocation_utility(i, lab) for i in range(inst.n)]
        for size in range(2, min(max_coalition, inst.n) + 1):
            for agents in itertools.combinations(range(inst.n), size):
                for new in _trade_targets(inst, lab, agents):
                    if all(inst.allocation_utility(i, new) > here[i]
                           for i in agents):
                        edges.append((src, frozenset(agents), index[new]))
    atoms = {}
    for i in range(inst.n):
        worth = [inst.allocation_utility(i, lab) for lab in labels]
        atoms[f"pref_{i + 1}"] = (2, frozenset(
            (x, y) for x in range(len(labels))
            for y in range(len(labels)) if worth[y] > worth[x]))
    for i in range(inst.n):
        for j in range(inst.n):
            if i != j:
                atoms[f"samebundle_{i + 1}_{j + 1}"] = (2, frozenset(
                    (x, y) for x in range(len(labels))
                    for y in range(len(labels))
                    if labels[x][i] == labels[y][j]))
    return ImprovementGraph(inst.n, labels, edges, atoms)


def top_trading_cycle(inst):
    """Run the classic trading procedure on a housing market.

    Starting from the instance's initial allocation, every remaining
    agent points at the owner of its favorite remaining item; some cycle
    always exists, its members receive what they point at and leave.
    Requires strict item preferences.  Returns the final allocation
    label.
    """
    if not inst.housing:
        raise InvalidArgumentError(
            "top_trading_cycle needs a housing instance")
    if inst.initial is None:
        raise InvalidArgumentError(
            "top_trading_cycle needs the initial allocation")
    rankings = [inst.item_ranking(i) for i in range(inst.n)]
    owner = {tok: i for i, tok in enumerate(inst.initial)}
    remaining_agents = set(range(inst.n))
    remaining_items = set(inst.items)
    assigned = {}
    while remaining_agents:
        fav = {}
        point = {}
        for i in remaining_agents:
            fav[i] = next(it for it in rankings[i] if it in remaining_items)
            point[i] = owner[fav[i]]
        start = min(remaining_agents)
        trail = []
        seen = {}
        at = start
        while at not in seen:
            seen[at] = len(trail)
            trail.append(at)
            at = point[at]
        cycle = trail[seen[at]:]
        for i in cycle:
            assigned[i] = fav[i]
            remaining_agents.discard(i)
            remaining_items.discard(fav[i])
    return tuple(assigned[i] for i in range(inst.n))


# -- instance files -----------------------------------------------------------------

def instance_from_json_dict(data):
    """Decode an instance dict, telling the three kinds apart by their keys."""
    if not isinstance(data, dict):
        raise InstanceError("instance must be a JSON object")
    if "strategies" in data:
        return GameInstance.from_json_dict(data)
    if "rule" in data:
        return VotingInstance.from_json_dict(data)
    if "items" in data:
        return AllocationInstance.from_json_dict(data)
    raise InstanceError(
        "cannot tell the instance kind: expected a 'strategies' (game), "
        "'rule' (voting) or 'items' (allocation) key")


def load_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"{path}: not valid JSON: {exc}") from exc
    return instance_from_json_dict(data)


def build_from_instance(inst, *, mode="unilateral", k=None,
                        max_coalition=None, force=False):
    """Build the improvement graph for any instance kind."""
    if isinstance(inst, GameInstance):
        return build_game_graph(inst, mode=mode, k=k, force=force)
    if isinstance(inst, VotingInstance):
        return build_voting_graph(inst, force=force)
    if isinstance(inst, AllocationInstance):
        if max_coalition is None:
            max_coalition = max(inst.n, 2)
        return build_allocation_graph(inst, max_coalition, force=force)
    raise InvalidArgumentError(f"not an instance: {inst!r}")
