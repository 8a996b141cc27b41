"""Formula evaluation over improvement graphs.

The evaluator interprets formulas bottom-up as boolean tables over the
graph's node domain, one axis per free first-order variable (axes in
sorted variable-name order, see tables.py).  Least fixed points are
computed by simultaneous iteration: the stage relation carries one axis
per parameter plus one for the fixpoint variable, so a parameterized
fixpoint costs one iteration loop rather than one per parameter value.

Every stage is checked to extend the previous one; a shrinking stage
means the body is not monotone in the relation variable (possible when a
counting comparison inspects it through an upper bound) and raises
NonMonotoneFixpointError rather than returning garbage.

Tables are capped at max_table_vars axes (default 3) because memory is
|V|^axes; widen explicitly when a query needs it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .backends import get_backend
from .errors import (
    InvalidArgumentError,
    NonMonotoneFixpointError,
    QueryError,
    ResourceError,
    VocabularyError,
)
from .formulas import (
    And,
    Atom,
    Count,
    Eq,
    Exists,
    Forall,
    Lfp,
    Not,
    Or,
    SoAtom,
    free_vars,
    validate,
)
from .parser import parse
from .tables import Table, expand_payload, renamed_payload, union_vars

_CMP = {
    "<": np.less,
    "<=": np.less_equal,
    "=": np.equal,
    ">=": np.greater_equal,
    ">": np.greater,
}


@dataclass(frozen=True, slots=True)
class SoBinding:
    """A relation-variable binding: a table plus the axis naming its member.

    vars lists the table axes in sorted order; point_var is the axis that
    ranges over set members, the rest are parameter axes.
    """

    vars: tuple
    payload: object
    point_var: str
    serial: int


@dataclass(frozen=True, slots=True)
class LfpTrace:
    """Stage record of one fixpoint computation.

    stages counts body applications including the one that confirms
    convergence; sizes holds the stage-set cardinality after each.
    """

    stages: int
    sizes: tuple


@dataclass(slots=True)
class EvalStats:
    lfp_traces: list = field(default_factory=list)
    cells: int = 0

    @property
    def lfp_stages(self):
        return [t.stages for t in self.lfp_traces]

    def to_json_dict(self):
        return {"lfp_stages": self.lfp_stages, "cells": self.cells}


@dataclass(frozen=True, slots=True)
class Verdict:
    """Evaluation result: a boolean, a node set, or a relation table.

    kind is 'boolean' (no free variables), 'node-set' (one) or 'table'
    (two or more, value = (vars, true cells)).
    """

    kind: str
    value: object
    stats: EvalStats

    @property
    def truthy(self):
        if self.kind == "boolean":
            return bool(self.value)
        if self.kind == "node-set":
            return bool(self.value)
        return bool(self.value[1])

    def to_json_dict(self, graph=None):
        if self.kind == "boolean":
            value = bool(self.value)
        elif self.kind == "node-set":
            nodes = sorted(self.value)
            value = {"nodes": nodes}
            if graph is not None:
                value["labels"] = [list(graph.labels[i]) for i in nodes]
        else:
            vars_, cells = self.value
            value = {"vars": list(vars_),
                     "true_cells": [list(c) for c in cells]}
        return {"kind": self.kind, "value": value,
                "stats": self.stats.to_json_dict()}


class Evaluator:
    """Evaluates formulas over one graph, memoizing subformula tables.

    The memo key is the formula node identity plus the serials of the
    bindings for its free relation variables, so tables independent of a
    fixpoint's stage variable are computed once per fixpoint, not once
    per stage.
    """

    def __init__(self, graph, *, backend=None, max_table_vars=3):
        if max_table_vars < 1:
            raise InvalidArgumentError("max_table_vars must be at least 1")
        self.graph = graph
        if backend is None or isinstance(backend, str):
            backend = get_backend(graph.node_count, backend)
        self.backend = backend
        self.max_table_vars = max_table_vars
        self.stats = EvalStats()
        self._A = graph.node_count
        self._serials = itertools.count(1)
        self._memo = {}
        self._fv_cache = {}
        # memo and fv caches key by node identity; keep roots alive so ids
        # stay unique for the evaluator's lifetime
        self._pins = []

    # -- public entry points --------------------------------------------------

    def query(self, formula):
        """Evaluate a formula with no free relation variables."""
        self._pins.append(formula)
        fv = self._fv(formula)
        if fv.so:
            raise QueryError(
                "formula has free relation variables: "
                + ", ".join(sorted(fv.so)))
        t = self._eval(formula, {})
        return self._verdict(t)

    def subformula_table(self, formula, so_env=None):
        """Evaluate under explicit relation-variable bindings; returns a Table.

        so_env maps relation-variable names to iterables of node ids.
        """
        self._pins.append(formula)
        senv = self._external_env(formula, so_env or {})
        return self._eval(formula, senv)

    def fixpoint_set(self, formula, so_env=None, fo_env=None):
        """The set computed by a fixpoint formula, at given parameter values.

        formula must be an lfp formula; fo_env maps each parameter (free
        first-order variable of the body other than the fixpoint variable)
        to a node id.  Returns a frozenset of node ids.
        """
        if not isinstance(formula, Lfp):
            raise InvalidArgumentError("fixpoint_set needs an lfp formula")
        self._pins.append(formula)
        senv = self._external_env(formula.body, so_env or {},
                                  skip={formula.svar})
        t = self._lfp_table(formula, senv)
        fo_env = dict(fo_env or {})
        params = [v for v in t.vars if v != formula.var]
        missing = [v for v in params if v not in fo_env]
        if missing:
            raise QueryError(
                "fixpoint parameters need values: " + ", ".join(missing))
        stray = sorted(set(fo_env) - set(params))
        if stray:
            raise QueryError(
                "not fixpoint parameters: " + ", ".join(stray))
        payload, vars_ = t.payload, list(t.vars)
        for v in params:
            i = vars_.index(v)
            a = fo_env[v]
            if not isinstance(a, int) or not 0 <= a < self._A:
                raise InvalidArgumentError(f"bad node id for {v!r}: {a!r}")
            payload = self.backend.restrict(payload, len(vars_), i, a)
            vars_.pop(i)
        return frozenset(
            c[0] for c in self.backend.true_cells(payload, 1))

    # -- helpers ----------------------------------------------------------------

    def _verdict(self, t):
        if t.arity == 0:
            return Verdict("boolean", t.get(()), self.stats)
        if t.arity == 1:
            return Verdict(
                "node-set", frozenset(c[0] for c in t.true_cells()),
                self.stats)
        return Verdict("table", (t.vars, tuple(t.true_cells())), self.stats)

    def _external_env(self, formula, so_env, skip=frozenset()):
        from .formulas import all_variable_names, fresh_var

        fv = self._fv(formula)
        unbound = sorted(sv for sv in fv.so
                         if sv not in so_env and sv not in skip)
        if unbound:
            raise QueryError(
                "unbound relation variables: " + ", ".join(unbound))
        taken = set(all_variable_names(formula)) | set(so_env)
        senv = {}
        for sv in sorted(so_env):
            members = so_env[sv]
            arr = np.zeros(self._A, dtype=bool)
            for a in members:
                if not isinstance(a, int) or not 0 <= a < self._A:
                    raise InvalidArgumentError(
                        f"bad node id in binding for {sv!r}: {a!r}")
                arr[a] = True
            point = fresh_var("pt", taken)
            taken.add(point)
            senv[sv] = SoBinding(
                (point,), self.backend.from_dense(arr), point,
                next(self._serials))
        return senv

    def _fv(self, node):
        got = self._fv_cache.get(id(node))
        if got is None:
            got = free_vars(node)
            self._fv_cache[id(node)] = got
        return got

    def _guard(self, vars_):
        if len(vars_) > self.max_table_vars:
            raise ResourceError(
                f"table over {len(vars_)} variables {tuple(vars_)!r} exceeds "
                f"max_table_vars={self.max_table_vars}; pass a larger "
                "max_table_vars to allow it")

    def _table(self, vars_, payload):
        self._guard(vars_)
        self.stats.cells += self._A ** len(vars_)
        return Table(tuple(vars_), payload, self.backend,
                     next(self._serials))

    def _combine(self, a, b, op):
        tv = union_vars(a.vars, b.vars)
        self._guard(tv)
        pa = expand_payload(self.backend, a.vars, a.payload, tv)
        pb = expand_payload(self.backend, b.vars, b.payload, tv)
        return self._table(tv, op(pa, pb, len(tv)))

    def _apply_point(self, vars_, payload, point, target):
        """Rename a member axis to target; diagonalize if target is a param."""
        if target == point:
            return tuple(vars_), payload
        k = len(vars_)
        if target in vars_:
            i = vars_.index(point)
            j = vars_.index(target)
            remaining = tuple(v for v in vars_ if v != point)
            tpos = remaining.index(target)
            return remaining, self.backend.diagonal(payload, k, i, j, tpos)
        return renamed_payload(self.backend, vars_, payload, point, target)

    # -- evaluation -------------------------------------------------------------

    def _eval(self, node, senv):
        fv = self._fv(node)
        unbound = sorted(sv for sv in fv.so if sv not in senv)
        if unbound:
            raise QueryError(
                "unbound relation variables: " + ", ".join(unbound))
        key = (id(node),
               tuple((sv, senv[sv].serial) for sv in sorted(fv.so)))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        t = self._eval_inner(node, senv)
        self._memo[key] = t
        return t

    def _eval_inner(self, node, senv):
        be = self.backend
        if isinstance(node, Atom):
            return self._atom_table(node)
        if isinstance(node, Eq):
            if node.left == node.right:
                return self._table((node.left,), be.true_(1))
            arr = np.eye(self._A, dtype=bool)
            vars_ = tuple(sorted((node.left, node.right)))
            return self._table(vars_, be.from_dense(arr))
        if isinstance(node, SoAtom):
            b = senv.get(node.svar)
            if b is None:
                raise QueryError(
                    f"unbound relation variable {node.svar!r}")
            vars_, payload = self._apply_point(
                b.vars, b.payload, b.point_var, node.arg)
            return self._table(vars_, payload)
        if isinstance(node, Not):
            t = self._eval(node.sub, senv)
            return self._table(t.vars, be.lnot(t.payload, t.arity))
        if isinstance(node, And):
            return self._combine(self._eval(node.left, senv),
                                 self._eval(node.right, senv), be.land)
        if isinstance(node, Or):
            return self._combine(self._eval(node.left, senv),
                                 self._eval(node.right, senv), be.lor)
        if isinstance(node, Exists):
            t = self._eval(node.sub, senv)
            i = t.vars.index(node.var)
            rest = tuple(v for v in t.vars if v != node.var)
            return self._table(rest, be.reduce_any(t.payload, t.arity, i))
        if isinstance(node, Forall):
            t = self._eval(node.sub, senv)
            i = t.vars.index(node.var)
            rest = tuple(v for v in t.vars if v != node.var)
            return self._table(rest, be.reduce_all(t.payload, t.arity, i))
        if isinstance(node, Count):
            t = self._eval(node.sub, senv)
            i = t.vars.index(node.var)
            rest = tuple(v for v in t.vars if v != node.var)
            counts = np.asarray(be.reduce_count(t.payload, t.arity, i))
            # asarray keeps 0-d results 0-d; ascontiguousarray would not
            arr = np.asarray(_CMP[node.cmp](counts, node.bound), dtype=bool)
            return self._table(rest, be.from_dense(arr))
        if isinstance(node, Lfp):
            t = self._lfp_table(node, senv)
            vars_, payload = self._apply_point(
                t.vars, t.payload, node.var, node.applied_to)
            return self._table(vars_, payload)
        raise InvalidArgumentError(f"not a formula node: {node!r}")

    def _atom_table(self, node):
        arity, interp = self.graph.atom_interpretation(node.name)
        if len(node.args) != arity:
            raise VocabularyError(
                f"atom {node.name!r} has arity {arity}, "
                f"got {len(node.args)} arguments")
        A = self._A
        if arity == 1:
            arr = np.zeros(A, dtype=bool)
            for a in interp:
                arr[a] = True
            return self._table((node.args[0],), self.backend.from_dense(arr))
        v, w = node.args
        if v == w:
            arr = np.zeros(A, dtype=bool)
            for p, q in interp:
                if p == q:
                    arr[p] = True
            return self._table((v,), self.backend.from_dense(arr))
        arr = np.zeros((A, A), dtype=bool)
        if interp:
            rows = [p for p, q in interp]
            cols = [q for p, q in interp]
            if v < w:
                arr[rows, cols] = True
            else:
                arr[cols, rows] = True
        return self._table(tuple(sorted((v, w))),
                           self.backend.from_dense(arr))

    def _lfp_table(self, node, senv):
        """Iterate a fixpoint body to convergence; table keeps the member axis.

        The stage table spans the body's free first-order variables plus
        any parameter axes carried in by outer bindings; iteration is
        simultaneous across all parameter values.
        """
        body, svar, x = node.body, node.svar, node.var
        fv = self._fv(body)
        extra = set()
        for sv in fv.so:
            if sv == svar:
                continue
            b = senv.get(sv)
            if b is None:
                raise QueryError(f"unbound relation variable {sv!r}")
            extra |= set(b.vars) - {b.point_var}
        bvars = tuple(sorted(set(fv.fo) | extra))
        self._guard(bvars)
        k = len(bvars)
        be = self.backend
        B = be.false_(k)
        stages = 0
        sizes = []
        cap = self._A + 2
        while True:
            binding = SoBinding(bvars, B, x, next(self._serials))
            t = self._eval(body, {**senv, svar: binding})
            if t.vars != bvars:
                raise InvalidArgumentError(
                    f"fixpoint body table over {t.vars!r}, expected {bvars!r}")
            stages += 1
            sizes.append(be.popcount(t.payload, k))
            if be.eq(t.payload, B, k):
                break
            if not be.is_subset(B, t.payload, k):
                raise NonMonotoneFixpointError(
                    f"stage {stages} of lfp {svar},{x} shrank; body is not "
                    f"monotone in {svar}")
            if stages >= cap:
                raise NonMonotoneFixpointError(
                    f"lfp {svar},{x} did not converge after {stages} stages")
            B = t.payload
        self.stats.lfp_traces.append(LfpTrace(stages, tuple(sizes)))
        return Table(bvars, B, be, next(self._serials))


def _as_formula(formula, so_vars=()):
    if isinstance(formula, str):
        return parse(formula, so_vars=tuple(so_vars))
    validate(formula)
    return formula


def evaluate(graph, formula, *, backend=None, max_table_vars=3):
    """Evaluate a closed-relation formula over a graph; returns a Verdict."""
    f = _as_formula(formula)
    ev = Evaluator(graph, backend=backend, max_table_vars=max_table_vars)
    return ev.query(f)


def evaluate_with_stats(graph, formula, *, backend=None, max_table_vars=3):
    """Like evaluate, but returns (verdict, stats)."""
    v = evaluate(graph, formula, backend=backend,
                 max_table_vars=max_table_vars)
    return v, v.stats


def evaluate_sub(graph, formula, so_env=None, *, backend=None,
                 max_table_vars=3):
    """Evaluate a subformula under relation-variable bindings.

    so_env maps relation-variable names to sets of node ids.  Returns the
    resulting Table (axes in sorted variable order).
    """
    so_env = dict(so_env or {})
    f = _as_formula(formula, so_vars=sorted(so_env))
    ev = Evaluator(graph, backend=backend, max_table_vars=max_table_vars)
    return ev.subformula_table(f, so_env)


def lfp_eval(graph, formula, so_env=None, fo_env=None, *, backend=None,
             max_table_vars=3):
    """Compute the set defined by a fixpoint formula.

    formula must be (or parse to) an lfp formula; so_env binds any other
    free relation variables, fo_env gives node ids for the body's
    parameters.  Returns a frozenset of node ids.
    """
    so_env = dict(so_env or {})
    f = _as_formula(formula, so_vars=sorted(so_env))
    ev = Evaluator(graph, backend=backend, max_table_vars=max_table_vars)
    return ev.fixpoint_set(f, so_env, fo_env)
