"""Packed table backend.

Stores a k-variable table as A**(k-1) rows of ceil(A/64) words with the
last axis bit-packed along the row.  The operations that dominate
fixpoint evaluation (boolean combination, broadcasting a missing axis,
reducing or counting the last axis) run in the compiled kernel; shapes the
shipped properties never hit (transpose, middle-axis reduction) round-trip
through the dense backend for correctness at no design cost.
"""

from __future__ import annotations

import numpy as np

from . import _packedcore as core
from .dense import DenseBackend

_WORD_ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


class PackedBackend:
    name = "packed"

    def __init__(self, n_nodes):
        if n_nodes < 1:
            raise ValueError("packed backend requires at least one node")
        self.n_nodes = int(n_nodes)
        self.wpr = (self.n_nodes + 63) // 64
        rem = self.n_nodes % 64
        self.tail = np.uint64((1 << rem) - 1) if rem else _WORD_ALL_ONES
        self._dense = DenseBackend(self.n_nodes)

    def _geom(self, k):
        """(rows, words per row, tail mask, last-axis length) for arity k."""
        if k == 0:
            return 1, 1, np.uint64(1), 1
        return self.n_nodes ** (k - 1), self.wpr, self.tail, self.n_nodes

    def _alloc(self, k):
        rows, wpr, _, _ = self._geom(k)
        return np.zeros(rows * wpr, dtype=np.uint64)

    # -- constructors ----------------------------------------------------

    def false_(self, k):
        return self._alloc(k)

    def true_(self, k):
        out = self._alloc(k)
        rows, wpr, tail, _ = self._geom(k)
        core.fill_true(out, rows, wpr, tail)
        return out

    def from_dense(self, arr):
        # asarray, not ascontiguousarray: the latter promotes 0-d to (1,),
        # which would silently pack with the wrong geometry
        arr = np.asarray(arr, dtype=bool)
        if arr.ndim and not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr)
        k = arr.ndim
        out = self._alloc(k)
        rows, wpr, _, a = self._geom(k)
        flat = arr.reshape(-1).view(np.uint8)
        if flat.size:
            core.pack(flat, out, rows, wpr, a)
        return out

    def to_dense(self, p, k):
        rows, wpr, _, a = self._geom(k)
        dense = np.zeros(rows * a, dtype=np.uint8)
        if dense.size:
            core.unpack(p, dense, rows, wpr, a)
        shape = (self.n_nodes,) * k
        return dense.astype(bool).reshape(shape)

    # -- boolean algebra ---------------------------------------------------

    def lnot(self, p, k):
        out = self._alloc(k)
        rows, wpr, tail, _ = self._geom(k)
        core.lnot(out, p, rows, wpr, tail)
        return out

    def land(self, a, b, k):
        out = self._alloc(k)
        core.land(out, a, b)
        return out

    def lor(self, a, b, k):
        out = self._alloc(k)
        core.lor(out, a, b)
        return out

    # -- shape changes ----------------------------------------------------

    def insert_axis(self, p, k, pos):
        if k == 0:
            return self.true_(1) if self.get(p, 0, ()) else self.false_(1)
        if pos == k:
            out = self._alloc(k + 1)
            rows, wpr, tail, a = self._geom(k)
            core.bit_to_row(p, out, rows, wpr, a, tail)
            return out
        out = self._alloc(k + 1)
        rows, wpr, _, a = self._geom(k)
        nblocks = a ** pos
        block_words = (rows * wpr) // nblocks
        core.tile_blocks(p, out, nblocks, block_words, a)
        return out

    def transpose(self, p, k, perm):
        return self.from_dense(self.to_dense(p, k).transpose(perm))

    def restrict(self, p, k, axis, index):
        return self.from_dense(
            self._dense.restrict(self.to_dense(p, k), k, axis, index))

    def diagonal(self, p, k, ax1, ax2, target_pos):
        return self.from_dense(
            self._dense.diagonal(self.to_dense(p, k), k, ax1, ax2, target_pos))

    # -- reductions -----------------------------------------------------------

    def reduce_any(self, p, k, axis):
        if axis != k - 1:
            return self.from_dense(
                self._dense.reduce_any(self.to_dense(p, k), k, axis))
        out = self._alloc(k - 1)
        rows, wpr, _, a = self._geom(k)
        _, out_wpr, _, _ = self._geom(k - 1)
        core.any_last(p, out, rows, wpr, a, out_wpr)
        return out

    def reduce_all(self, p, k, axis):
        if axis != k - 1:
            return self.from_dense(
                self._dense.reduce_all(self.to_dense(p, k), k, axis))
        out = self._alloc(k - 1)
        rows, wpr, tail, a = self._geom(k)
        _, out_wpr, _, _ = self._geom(k - 1)
        core.all_last(p, out, rows, wpr, tail, a, out_wpr)
        return out

    def reduce_count(self, p, k, axis):
        if axis != k - 1:
            return self._dense.reduce_count(self.to_dense(p, k), k, axis)
        rows, wpr, _, _ = self._geom(k)
        counts = np.zeros(rows, dtype=np.int64)
        core.count_last(p, counts, rows, wpr)
        return counts.reshape((self.n_nodes,) * (k - 1))

    # -- queries -----------------------------------------------------------

    def eq(self, a, b, k):
        return bool(core.eq(a, b))

    def is_subset(self, a, b, k):
        return bool(core.is_subset(a, b))

    def popcount(self, p, k):
        return int(core.popcount_all(p))

    def get(self, p, k, cell):
        if k == 0:
            return bool(p[0] & np.uint64(1))
        flat = 0
        for c in cell:
            flat = flat * self.n_nodes + int(c)
        row, bit = divmod(flat, self.n_nodes)
        word = int(p[row * self.wpr + (bit >> 6)])
        return bool((word >> (bit & 63)) & 1)

    def true_cells(self, p, k):
        return self._dense.true_cells(self.to_dense(p, k), k)
