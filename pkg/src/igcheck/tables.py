"""Tables: dense boolean relations over named variables.

A Table pairs a sorted tuple of variable names with a backend payload of
matching arity.  Variables are kept in sorted name order everywhere, so
aligning two tables only ever inserts broadcast axes; renames may permute
axes and go through the backend transpose.

Tables are immutable; every operation returns a fresh table.  The serial
number identifies a payload generation for memoization keys.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgumentError


@dataclass(frozen=True, slots=True)
class Table:
    vars: tuple
    payload: object
    backend: object
    serial: int

    @property
    def arity(self):
        return len(self.vars)

    def to_dense(self):
        return self.backend.to_dense(self.payload, self.arity)

    def true_cells(self):
        return self.backend.true_cells(self.payload, self.arity)

    def get(self, cell):
        if len(cell) != self.arity:
            raise InvalidArgumentError(
                f"cell {cell!r} does not match table over {self.vars!r}")
        return self.backend.get(self.payload, self.arity, cell)

    def popcount(self):
        return self.backend.popcount(self.payload, self.arity)


def expand_payload(backend, vars_, payload, target):
    """Broadcast a payload over vars_ (sorted) to the sorted superset target."""
    current = list(vars_)
    k = len(current)
    for pos, name in enumerate(target):
        if pos >= len(current) or current[pos] != name:
            payload = backend.insert_axis(payload, k, pos)
            current.insert(pos, name)
            k += 1
    if tuple(current) != tuple(target):
        raise InvalidArgumentError(
            f"cannot expand table over {vars_!r} to {target!r}")
    return payload


def union_vars(a, b):
    return tuple(sorted(set(a) | set(b)))


def renamed_payload(backend, vars_, payload, old, new):
    """Rename variable old to new, permuting axes if ordering changes.

    new must not already name an axis; diagonal cases are the caller's
    business.
    """
    if new in vars_:
        raise InvalidArgumentError(
            f"rename target {new!r} already present in {vars_!r}")
    relabeled = [new if v == old else v for v in vars_]
    target = sorted(relabeled)
    if relabeled != target:
        perm = []
        used = [False] * len(relabeled)
        for name in target:
            for i, v in enumerate(relabeled):
                if not used[i] and v == name:
                    perm.append(i)
                    used[i] = True
                    break
        payload = backend.transpose(payload, len(vars_), tuple(perm))
    return tuple(target), payload
