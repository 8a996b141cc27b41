"""Formula syntax trees and their static checks.

The language is first-order logic over graph atoms, extended with a
counting quantifier and a monadic least-fixpoint operator.  Implication is
surface sugar and never appears in a tree; the parser desugars `a -> b`
into `!a | b` before anything else looks at the formula.

Nodes are frozen dataclasses, so formulas hash, compare structurally and
can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgumentError, WellFormednessError

COMPARATORS = ("<", "<=", "=", ">=", ">")


@dataclass(frozen=True, slots=True)
class Atom:
    """Graph atom applied to first-order variables, e.g. E(x, y)."""
    name: str
    args: tuple


@dataclass(frozen=True, slots=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True, slots=True)
class SoAtom:
    """Monadic set-variable membership test S(x)."""
    svar: str
    arg: str


@dataclass(frozen=True, slots=True)
class Not:
    sub: object


@dataclass(frozen=True, slots=True)
class And:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class Exists:
    var: str
    sub: object


@dataclass(frozen=True, slots=True)
class Forall:
    var: str
    sub: object


@dataclass(frozen=True, slots=True)
class Count:
    """Counting comparison: |{var : sub}| cmp bound."""
    var: str
    sub: object
    cmp: str
    bound: int


@dataclass(frozen=True, slots=True)
class Lfp:
    """Least fixpoint of body over set variable svar and point variable var,
    applied to the node variable applied_to."""
    svar: str
    var: str
    body: object
    applied_to: str


Formula = (Atom, Eq, SoAtom, Not, And, Or, Exists, Forall, Count, Lfp)


@dataclass(frozen=True, slots=True)
class VarSets:
    fo: frozenset
    so: frozenset


def free_vars(f):
    """Free first-order and set variables of a formula."""
    if isinstance(f, Atom):
        return VarSets(frozenset(f.args), frozenset())
    if isinstance(f, Eq):
        return VarSets(frozenset((f.left, f.right)), frozenset())
    if isinstance(f, SoAtom):
        return VarSets(frozenset((f.arg,)), frozenset((f.svar,)))
    if isinstance(f, Not):
        return free_vars(f.sub)
    if isinstance(f, (And, Or)):
        a, b = free_vars(f.left), free_vars(f.right)
        return VarSets(a.fo | b.fo, a.so | b.so)
    if isinstance(f, (Exists, Forall, Count)):
        inner = free_vars(f.sub)
        return VarSets(inner.fo - {f.var}, inner.so)
    if isinstance(f, Lfp):
        inner = free_vars(f.body)
        return VarSets((inner.fo - {f.var}) | {f.applied_to},
                       inner.so - {f.svar})
    raise InvalidArgumentError(f"not a formula node: {f!r}")


def check_positive(f, svar):
    """True iff every free occurrence of svar sits under an even number of
    negations.  Vacuously true when svar does not occur."""
    return _polarity_ok(f, svar, 0)


def _polarity_ok(f, svar, negs):
    if isinstance(f, (Atom, Eq)):
        return True
    if isinstance(f, SoAtom):
        return f.svar != svar or negs % 2 == 0
    if isinstance(f, Not):
        return _polarity_ok(f.sub, svar, negs + 1)
    if isinstance(f, (And, Or)):
        return (_polarity_ok(f.left, svar, negs)
                and _polarity_ok(f.right, svar, negs))
    if isinstance(f, (Exists, Forall, Count)):
        return _polarity_ok(f.sub, svar, negs)
    if isinstance(f, Lfp):
        if f.svar == svar:
            return True
        return _polarity_ok(f.body, svar, negs)
    raise InvalidArgumentError(f"not a formula node: {f!r}")


def validate(f):
    """Check the side conditions the grammar cannot express.

    Raises WellFormednessError with a stable code:
      vacuous-quantifier     quantified or counted variable not free in body
      count-bound-negative   counting bound below zero
      bad-comparator         comparator outside <, <=, =, >=, >
      lfp-so-var-not-free    set variable does not occur in the body
      lfp-var-not-free       point variable not free in the body
      lfp-applied-free       applied variable already free in the body
      lfp-not-positive       set variable under an odd number of negations
    """
    if isinstance(f, (Atom, Eq, SoAtom)):
        return
    if isinstance(f, Not):
        validate(f.sub)
        return
    if isinstance(f, (And, Or)):
        validate(f.left)
        validate(f.right)
        return
    if isinstance(f, (Exists, Forall)):
        validate(f.sub)
        if f.var not in free_vars(f.sub).fo:
            raise WellFormednessError(
                "vacuous-quantifier",
                f"variable {f.var!r} is not free in the quantified body")
        return
    if isinstance(f, Count):
        validate(f.sub)
        if f.var not in free_vars(f.sub).fo:
            raise WellFormednessError(
                "vacuous-quantifier",
                f"variable {f.var!r} is not free in the counted body")
        if f.cmp not in COMPARATORS:
            raise WellFormednessError(
                "bad-comparator", f"unknown comparator {f.cmp!r}")
        if f.bound < 0:
            raise WellFormednessError(
                "count-bound-negative", f"bound {f.bound} is negative")
        return
    if isinstance(f, Lfp):
        validate(f.body)
        inner = free_vars(f.body)
        if f.svar not in inner.so:
            raise WellFormednessError(
                "lfp-so-var-not-free",
                f"set variable {f.svar!r} does not occur in the body")
        if f.var not in inner.fo:
            raise WellFormednessError(
                "lfp-var-not-free",
                f"point variable {f.var!r} is not free in the body")
        if f.applied_to in inner.fo:
            raise WellFormednessError(
                "lfp-applied-free",
                f"applied variable {f.applied_to!r} is already free in the body")
        if not check_positive(f.body, f.svar):
            raise WellFormednessError(
                "lfp-not-positive",
                f"set variable {f.svar!r} occurs under an odd number of "
                f"negations in the body")
        return
    raise InvalidArgumentError(f"not a formula node: {f!r}")


def all_variable_names(f):
    """Every first-order and set variable name occurring in f, free or bound.
    Useful for picking fresh names."""
    fo, so = set(), set()
    _collect_names(f, fo, so)
    return frozenset(fo), frozenset(so)


def _collect_names(f, fo, so):
    if isinstance(f, Atom):
        fo.update(f.args)
    elif isinstance(f, Eq):
        fo.update((f.left, f.right))
    elif isinstance(f, SoAtom):
        fo.add(f.arg)
        so.add(f.svar)
    elif isinstance(f, Not):
        _collect_names(f.sub, fo, so)
    elif isinstance(f, (And, Or)):
        _collect_names(f.left, fo, so)
        _collect_names(f.right, fo, so)
    elif isinstance(f, (Exists, Forall, Count)):
        fo.add(f.var)
        _collect_names(f.sub, fo, so)
    elif isinstance(f, Lfp):
        fo.add(f.var)
        fo.add(f.applied_to)
        so.add(f.svar)
        _collect_names(f.body, fo, so)
    else:
        raise InvalidArgumentError(f"not a formula node: {f!r}")


def fresh_var(base, taken):
    """A variable name built from base that is not in taken."""
    if base not in taken:
        return base
    i = 0
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def substitute_free_fo(f, mapping):
    """Replace free first-order variables per mapping (name -> name).

    Target names must not be captured by a binder on the substitution path;
    callers are expected to pick fresh targets, and a capture raises
    InvalidArgumentError rather than silently changing meaning.
    """
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return f
    return _subst(f, mapping)


def _subst(f, mapping):
    if isinstance(f, Atom):
        return Atom(f.name, tuple(mapping.get(a, a) for a in f.args))
    if isinstance(f, Eq):
        return Eq(mapping.get(f.left, f.left), mapping.get(f.right, f.right))
    if isinstance(f, SoAtom):
        return SoAtom(f.svar, mapping.get(f.arg, f.arg))
    if isinstance(f, Not):
        return Not(_subst(f.sub, mapping))
    if isinstance(f, And):
        return And(_subst(f.left, mapping), _subst(f.right, mapping))
    if isinstance(f, Or):
        return Or(_subst(f.left, mapping), _subst(f.right, mapping))
    if isinstance(f, (Exists, Forall, Count)):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        if f.var in inner.values() and any(
                k in free_vars(f.sub).fo for k in inner):
            raise InvalidArgumentError(
                f"substitution target {f.var!r} would be captured")
        sub = _subst(f.sub, inner) if inner else f.sub
        if isinstance(f, Count):
            return Count(f.var, sub, f.cmp, f.bound)
        return type(f)(f.var, sub)
    if isinstance(f, Lfp):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        if f.var in inner.values() and any(
                k in free_vars(f.body).fo for k in inner):
            raise InvalidArgumentError(
                f"substitution target {f.var!r} would be captured")
        body = _subst(f.body, inner) if inner else f.body
        return Lfp(f.svar, f.var, body,
                   mapping.get(f.applied_to, f.applied_to))
    raise InvalidArgumentError(f"not a formula node: {f!r}")


def subformulas(f):
    """Yield f and every proper subformula, outermost first."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Not):
            stack.append(node.sub)
        elif isinstance(node, (And, Or)):
            stack.append(node.right)
            stack.append(node.left)
        elif isinstance(node, (Exists, Forall, Count)):
            stack.append(node.sub)
        elif isinstance(node, Lfp):
            stack.append(node.body)
