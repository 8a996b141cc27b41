"""Stock property formulas over improvement graphs.

Each builder returns a formula AST ready for the evaluator; render with
parser.pretty for display.  The edge atom E is the unilateral (single
agent) improvement step, E#k allows coalitions up to size k, and E_i1_..
names one exact coalition.  Properties so built:

  sink            nodes with no unilateral improvement (free var x)
  sink_k          nodes with no improvement by any coalition of size <= k
  acyclic         every unilateral improvement path is finite
  weakly_acyclic  from every node some sink is reachable
  k_fip           acyclicity of the coalition-bounded step relation
  path_count      fewer than a bound many nodes can reach a sink
  special         fixpoint over low-indegree nodes covers the graph
  envy_free       allocation nodes where no agent envies another
  phi_reachable   from every node some node satisfying phi is reachable

The literal variants of sink_k and k_fip spell coalitions out as exact
slice atoms instead of using E#k; both forms must agree on every graph.
"""

from __future__ import annotations

import itertools

from .errors import InvalidArgumentError
from .formulas import (
    And,
    Atom,
    Exists,
    Forall,
    Lfp,
    Or,
    SoAtom,
    all_variable_names,
    free_vars,
    fresh_var,
    substitute_free_fo,
)
from .parser import parse


def _coalition_atom(agents):
    return "E" + "".join(f"_{i}" for i in sorted(agents))


def _coalitions_upto(k, n):
    for size in range(1, min(k, n) + 1):
        yield from itertools.combinations(range(1, n + 1), size)


def _check_k(k):
    if not isinstance(k, int) or k < 1:
        raise InvalidArgumentError(f"coalition bound must be >= 1, got {k!r}")


def _check_n(n, what):
    if not isinstance(n, int) or n < 1:
        raise InvalidArgumentError(
            f"{what} needs the agent count n >= 1, got {n!r}")


def sink():
    """Nodes with no outgoing unilateral improvement; free variable x."""
    return parse("all y. !E(x,y)")


def sink_k(k, n=None, literal=False):
    """Nodes no coalition of size <= k can move; free variable x.

    The literal form enumerates every coalition as an exact slice atom
    and needs the agent count n.
    """
    _check_k(k)
    if not literal:
        return parse(f"all y. !E#{k}(x,y)")
    _check_n(n, "literal sink_k")
    parts = [f"(all y. !{_coalition_atom(u)}(x,y))"
             for u in _coalitions_upto(k, n)]
    return parse(" & ".join(parts))


def acyclic():
    """Every unilateral improvement path is finite (the graph has no cycle)."""
    return parse("all u. lfp S,x. (all y. (E(y,x) -> S(y))) @ u")


def k_fip(k, n=None, literal=False):
    """Every improvement path by coalitions of size <= k is finite."""
    _check_k(k)
    if not literal:
        step = f"E#{k}(y,x)"
    else:
        _check_n(n, "literal k_fip")
        step = " | ".join(f"{_coalition_atom(u)}(y,x)"
                          for u in _coalitions_upto(k, n))
    return parse(f"all u. lfp S,x. (all y. (({step}) -> S(y))) @ u")


def weakly_acyclic():
    """From every node some sink is reachable by unilateral steps."""
    return parse(
        "all u. lfp S,x. ((all z. !E(x,z)) | (ex y. (E(x,y) & S(y)))) @ u")


def path_count(bound):
    """Fewer than bound many nodes can reach a sink."""
    if not isinstance(bound, int) or bound < 0:
        raise InvalidArgumentError(
            f"path_count bound must be >= 0, got {bound!r}")
    return parse(
        "C x (lfp S,y. ((all z. !E(y,z)) | (ex w. (E(y,w) & S(w)))) @ x) "
        f"< {bound}")


def special(k):
    """Fixpoint over nodes of indegree below k closes off the whole graph."""
    _check_k(k)
    return parse(
        f"all u. lfp S,x. (C y (E(y,x)) < {k} -> (all z. (E(z,x) -> S(z)))) "
        "@ u")


def envy_free(n):
    """Allocation nodes where no agent envies another; free variable x.

    Relies on the pref_i and samebundle_i_j atoms the allocation builders
    install: agent i envies agent j at x when some node y gives i exactly
    j's bundle at x and i prefers its lot at y.  Allocation graphs contain
    such a witness node for every bundle, so the encoding is exact there.
    """
    _check_n(n, "envy_free")
    parts = [f"!(ex y. (samebundle_{i}_{j}(y,x) & pref_{i}(x,y)))"
             for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    if not parts:
        return parse("x = x")
    return parse(" & ".join(parts))


def phi_reachable(phi):
    """From every node some node satisfying phi is reachable.

    phi is a formula (or source text) with exactly one free first-order
    variable and no free relation variables; helper variables are chosen
    fresh so nothing in phi is captured.
    """
    f = parse(phi) if isinstance(phi, str) else phi
    fv = free_vars(f)
    if fv.so:
        raise InvalidArgumentError(
            "phi_reachable needs a formula without free relation variables")
    if len(fv.fo) != 1:
        raise InvalidArgumentError(
            "phi_reachable needs exactly one free variable, got "
            + (", ".join(sorted(fv.fo)) or "none"))
    tgt = next(iter(fv.fo))
    fo_names, so_names = all_variable_names(f)
    taken = set(fo_names) | set(so_names)
    x = fresh_var("x", taken)
    taken.add(x)
    y = fresh_var("y", taken)
    taken.add(y)
    u = fresh_var("u", taken)
    taken.add(u)
    s = fresh_var("S", taken)
    body = Or(substitute_free_fo(f, {tgt: x}),
              Exists(y, And(Atom("E", (x, y)), SoAtom(s, y))))
    return Forall(u, Lfp(s, x, body, u))


PROPERTY_NAMES = (
    "sink", "sink-k", "acyclic", "weakly-acyclic", "k-fip",
    "path-count", "special", "envy-free", "reachable",
)


def build_property(name, *, k=None, bound=None, n=None, phi=None,
                   literal=False):
    """Look up a property by CLI name and instantiate it."""
    if name == "sink":
        return sink()
    if name == "sink-k":
        if k is None:
            raise InvalidArgumentError("sink-k needs --k")
        return sink_k(k, n=n, literal=literal)
    if name == "acyclic":
        return acyclic()
    if name == "weakly-acyclic":
        return weakly_acyclic()
    if name == "k-fip":
        if k is None:
            raise InvalidArgumentError("k-fip needs --k")
        return k_fip(k, n=n, literal=literal)
    if name == "path-count":
        if bound is None:
            raise InvalidArgumentError("path-count needs --bound")
        return path_count(bound)
    if name == "special":
        if k is None:
            raise InvalidArgumentError("special needs --k")
        return special(k)
    if name == "envy-free":
        if n is None:
            raise InvalidArgumentError("envy-free needs --n")
        return envy_free(n)
    if name == "reachable":
        if phi is None:
            raise InvalidArgumentError("reachable needs --phi")
        return phi_reachable(phi)
    raise InvalidArgumentError(
        f"unknown property {name!r}; known: {', '.join(PROPERTY_NAMES)}")
