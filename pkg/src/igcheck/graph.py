"""Improvement graphs.

An improvement graph is a finite directed graph whose nodes carry one label
component per agent (a strategy name, a ballot, a bundle) and whose edges
are labelled with the coalition of agents that moved.  An edge (x, u, y)
records that every agent in u changed its component between x and y, nobody
outside u did, and the move was strictly improving for every member; the
improvement part is the builders' duty, the component consistency part is
validated here.

Nodes are addressed by dense integer ids.  Builders assign ids in
lexicographic order of the label tuples, so identical inputs always yield
identical ids.  Instances are immutable once constructed; mutate by
building a new graph.
"""

from __future__ import annotations

import json
import re
from typing import Iterable, Mapping

from .errors import InstanceError, InvalidArgumentError, VocabularyError

Coalition = frozenset  # of agent ids, 0-based
Edge = tuple  # (src, Coalition, dst)

_EDGE_INDEXED = re.compile(r"^E(_[0-9]+)+$")
_EDGE_BOUNDED = re.compile(r"^E#([0-9]+)$")


def _edge_sort_key(edge):
    src, u, dst = edge
    return (src, dst, tuple(sorted(u)))


class ImprovementGraph:
    """Immutable coalition-labelled improvement graph."""

    __slots__ = ("n", "labels", "edges", "atoms", "_id_of", "_succ", "_pred",
                 "_pairs_by_size")

    def __init__(self, n, labels, edges, atoms=None, validate=True):
        """Build a graph from raw parts.

        labels is a sequence of per-agent component tuples; its order fixes
        the node ids.  edges is an iterable of (src, coalition, dst) with
        0-based agent ids.  atoms maps names to (arity, tuples); unary
        tuples are plain node ids, binary tuples are (node, node) pairs.
        Singleton edge-slice atoms E_1..E_n are installed automatically and
        verified against the edge set when supplied.
        """
        self.n = int(n)
        self.labels = tuple(tuple(str(c) for c in lab) for lab in labels)
        self.edges = frozenset(
            (int(s), Coalition(int(a) for a in u), int(t)) for s, u, t in edges)
        self._id_of = {lab: i for i, lab in enumerate(self.labels)}

        norm_atoms = {}
        for name, (arity, tuples) in (atoms or {}).items():
            if arity == 1:
                norm_atoms[name] = (1, frozenset(int(t) for t in tuples))
            elif arity == 2:
                norm_atoms[name] = (
                    2, frozenset((int(a), int(b)) for a, b in tuples))
            else:
                raise InvalidArgumentError(
                    f"atom {name!r}: arity must be 1 or 2, got {arity}")
        self.atoms = norm_atoms

        if validate:
            self._validate()
        for i in range(self.n):
            slice_name = f"E_{i + 1}"
            pairs = frozenset((s, t) for s, u, t in self.edges
                              if u == Coalition((i,)))
            if slice_name in self.atoms:
                if validate and self.atoms[slice_name] != (2, pairs):
                    raise InstanceError(
                        f"atom {slice_name} disagrees with the singleton "
                        f"edge slice for agent {i + 1}")
            else:
                self.atoms[slice_name] = (2, pairs)

        succ = {}
        pred = {}
        by_size = {}
        for s, u, t in sorted(self.edges, key=_edge_sort_key):
            succ.setdefault(s, []).append((u, t))
            pred.setdefault(t, []).append((u, s))
            by_size.setdefault(len(u), set()).add((s, t))
        self._succ = succ
        self._pred = pred
        self._pairs_by_size = {k: frozenset(v) for k, v in by_size.items()}

    # -- basic shape ----------------------------------------------------

    @property
    def node_count(self):
        return len(self.labels)

    def node_ids(self):
        return range(len(self.labels))

    def node_id(self, label):
        """Id of a label tuple; raises InvalidArgumentError if absent."""
        key = tuple(str(c) for c in label)
        try:
            return self._id_of[key]
        except KeyError:
            raise InvalidArgumentError(f"no node with label {key!r}") from None

    def _validate(self):
        if self.n < 0:
            raise InstanceError("agent count must be nonnegative")
        if len(self._id_of) != len(self.labels):
            raise InstanceError("node labels must be distinct")
        for lab in self.labels:
            if len(lab) != self.n:
                raise InstanceError(
                    f"label {lab!r} has {len(lab)} components, expected {self.n}")
        v = len(self.labels)
        for s, u, t in self.edges:
            if not (0 <= s < v and 0 <= t < v):
                raise InstanceError(f"edge ({s}, {sorted(u)}, {t}) out of range")
            if s == t:
                raise InstanceError(f"self loop at node {s}")
            if not u:
                raise InstanceError(f"edge ({s}, ?, {t}) has an empty coalition")
            if any(a < 0 or a >= self.n for a in u):
                raise InstanceError(
                    f"edge ({s}, {sorted(u)}, {t}) names an unknown agent")
            src, dst = self.labels[s], self.labels[t]
            for i in range(self.n):
                if i in u and src[i] == dst[i]:
                    raise InstanceError(
                        f"edge ({s}, {sorted(u)}, {t}): agent {i + 1} is in "
                        f"the coalition but its component did not change")
                if i not in u and src[i] != dst[i]:
                    raise InstanceError(
                        f"edge ({s}, {sorted(u)}, {t}): agent {i + 1} is not "
                        f"in the coalition but its component changed")
        for name, (arity, tuples) in self.atoms.items():
            for tup in tuples:
                nodes = (tup,) if arity == 1 else tup
                for x in nodes:
                    if not (0 <= x < v):
                        raise InstanceError(
                            f"atom {name!r} mentions unknown node {x}")

    # -- edge views ------------------------------------------------------

    def edge(self, u, x, y):
        """True iff the edge (x, u, y) with exactly coalition u exists."""
        return (int(x), Coalition(int(a) for a in u), int(y)) in self.edges

    def union_edge(self, x, y):
        """True iff some singleton-coalition edge connects x to y."""
        return (x, y) in self._pairs_by_size.get(1, frozenset())

    def k_edge(self, k, x, y):
        """True iff an edge with coalition size at most k connects x to y."""
        if not 1 <= k <= max(self.n, 1):
            raise InvalidArgumentError(
                f"coalition bound {k} outside 1..{self.n}")
        return any((x, y) in self._pairs_by_size.get(j, frozenset())
                   for j in range(1, k + 1))

    def successors(self, x):
        """Targets of edges leaving x, under any coalition label."""
        return {t for _, t in self._succ.get(x, ())}

    def predecessors(self, x):
        """Sources of edges entering x, under any coalition label."""
        return {s for _, s in self._pred.get(x, ())}

    def out_edges(self, x):
        return tuple(self._succ.get(x, ()))

    def in_edges(self, x):
        return tuple(self._pred.get(x, ()))

    def pairs_with_size_at_most(self, k):
        """All (src, dst) pairs joined by an edge with coalition size <= k."""
        out = set()
        for j in range(1, k + 1):
            out |= self._pairs_by_size.get(j, frozenset())
        return frozenset(out)

    def pairs_with_coalition(self, u):
        """All (src, dst) pairs joined by an edge labelled exactly u."""
        u = Coalition(u)
        return frozenset((s, t) for s, c, t in self.edges if c == u)

    # -- atom resolution ---------------------------------------------------

    def atom_interpretation(self, name):
        """Resolve an atom name to (arity, tuple set).

        Extensional atoms stored on the graph win.  Otherwise E, E#k and
        E_i1_i2_... are derived views of the edge set.  Unknown names raise
        VocabularyError.
        """
        if name in self.atoms:
            return self.atoms[name]
        if name == "E":
            return (2, self._pairs_by_size.get(1, frozenset()))
        m = _EDGE_BOUNDED.match(name)
        if m:
            k = int(m.group(1))
            if not 1 <= k <= max(self.n, 1):
                raise VocabularyError(
                    f"atom {name!r}: coalition bound outside 1..{self.n}")
            return (2, self.pairs_with_size_at_most(k))
        if _EDGE_INDEXED.match(name):
            agents = [int(p) - 1 for p in name.split("_")[1:]]
            if len(set(agents)) != len(agents) or any(
                    a < 0 or a >= self.n for a in agents):
                raise VocabularyError(
                    f"atom {name!r} names an invalid coalition")
            return (2, self.pairs_with_coalition(agents))
        raise VocabularyError(f"graph does not interpret atom {name!r}")

    # -- serialization ---------------------------------------------------

    def to_json_dict(self):
        """Plain-dict form with 1-based agent ids and sorted collections."""
        edges = [[s, [a + 1 for a in sorted(u)], t]
                 for s, u, t in sorted(self.edges, key=_edge_sort_key)]
        atoms = {}
        for name in sorted(self.atoms):
            arity, tuples = self.atoms[name]
            if arity == 1:
                tups = sorted(tuples)
            else:
                tups = [list(p) for p in sorted(tuples)]
            atoms[name] = {"arity": arity, "tuples": tups}
        return {
            "n": self.n,
            "nodes": [list(lab) for lab in self.labels],
            "edges": edges,
            "atoms": atoms,
        }

    def dumps(self):
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json_dict(cls, data):
        _validate_graph_json(data)
        edges = [(s, Coalition(a - 1 for a in u), t)
                 for s, u, t in data.get("edges", [])]
        atoms = {}
        for name, spec in data.get("atoms", {}).items():
            arity = spec["arity"]
            if arity == 1:
                tuples = frozenset(spec["tuples"])
            else:
                tuples = frozenset(tuple(p) for p in spec["tuples"])
            atoms[name] = (arity, tuples)
        return cls(data["n"], data["nodes"], edges, atoms)

    @classmethod
    def loads(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InstanceError(f"not valid JSON: {exc}") from exc
        return cls.from_json_dict(data)

    def __repr__(self):
        return (f"ImprovementGraph(n={self.n}, nodes={len(self.labels)}, "
                f"edges={len(self.edges)})")

    def __eq__(self, other):
        if not isinstance(other, ImprovementGraph):
            return NotImplemented
        return (self.n == other.n and self.labels == other.labels
                and self.edges == other.edges and self.atoms == other.atoms)

    def __hash__(self):
        return hash((self.n, self.labels, self.edges))


GRAPH_SCHEMA = {
    "type": "object",
    "required": ["n", "nodes", "edges"],
    "properties": {
        "n": {"type": "integer", "minimum": 0},
        "nodes": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}},
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 3,
                "maxItems": 3,
                "prefixItems": [
                    {"type": "integer", "minimum": 0},
                    {"type": "array",
                     "items": {"type": "integer", "minimum": 1},
                     "minItems": 1},
                    {"type": "integer", "minimum": 0},
                ],
            },
        },
        "atoms": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["arity", "tuples"],
                "properties": {
                    "arity": {"enum": [1, 2]},
                    "tuples": {"type": "array"},
                },
            },
        },
    },
}


def _validate_graph_json(data):
    import jsonschema

    validator = jsonschema.Draft202012Validator(GRAPH_SCHEMA)
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise InstanceError(err.message, pointer=pointer)
