"""Pure Python table backend over numpy boolean arrays.

A table over k variables is an ndarray of shape (A,) * k where A is the
node count; k = 0 tables are 0-d arrays.  All operations allocate fresh
arrays, so payloads can be shared without defensive copies.
"""

from __future__ import annotations

import numpy as np


def _c(a):
    # contiguous bool array; unlike ascontiguousarray this keeps 0-d 0-d
    a = np.asarray(a, dtype=bool)
    if a.ndim and not a.flags.c_contiguous:
        a = np.ascontiguousarray(a)
    return a


class DenseBackend:
    name = "dense"

    def __init__(self, n_nodes):
        self.n_nodes = int(n_nodes)

    def _shape(self, k):
        return (self.n_nodes,) * k

    # -- constructors --------------------------------------------------

    def false_(self, k):
        return np.zeros(self._shape(k), dtype=bool)

    def true_(self, k):
        return np.ones(self._shape(k), dtype=bool)

    def from_dense(self, arr):
        return _c(arr)

    def to_dense(self, p, k):
        return p

    # -- boolean algebra -------------------------------------------------

    def lnot(self, p, k):
        return ~p

    def land(self, a, b, k):
        return a & b

    def lor(self, a, b, k):
        return a | b

    # -- shape changes ---------------------------------------------------

    def insert_axis(self, p, k, pos):
        expanded = np.expand_dims(p, axis=pos)
        return _c(np.broadcast_to(expanded, self._shape(k + 1)))

    def transpose(self, p, k, perm):
        return _c(p.transpose(perm))

    def restrict(self, p, k, axis, index):
        return _c(np.take(p, index, axis=axis))

    # -- reductions --------------------------------------------------------

    def reduce_any(self, p, k, axis):
        return _c(p.any(axis=axis))

    def reduce_all(self, p, k, axis):
        return _c(p.all(axis=axis))

    def reduce_count(self, p, k, axis):
        return p.sum(axis=axis, dtype=np.int64)

    def diagonal(self, p, k, ax1, ax2, target_pos):
        d = np.diagonal(p, axis1=ax1, axis2=ax2)
        return _c(np.moveaxis(d, -1, target_pos))

    # -- queries ------------------------------------------------------------

    def eq(self, a, b, k):
        return bool(np.array_equal(a, b))

    def is_subset(self, a, b, k):
        return not bool(np.any(a & ~b))

    def popcount(self, p, k):
        return int(p.sum())

    def get(self, p, k, cell):
        return bool(p[tuple(cell)])

    def true_cells(self, p, k):
        if k == 0:
            return [()] if bool(p) else []
        return [tuple(int(v) for v in row) for row in np.argwhere(p)]
