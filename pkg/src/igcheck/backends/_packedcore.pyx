# cython: boundscheck=False, wraparound=False, cdivision=True
"""Word-level kernels for the packed table backend.

Tables are flat uint64 buffers.  A table over k >= 1 variables has
rows = A ** (k - 1) rows of wpr = ceil(A / 64) words each; the last axis
is packed along the row, padding bits held at zero.  Scalar tables are a
single word using bit 0.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.string cimport memcpy, memset

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int igk_popcount64(unsigned long long x)
    { return __builtin_popcountll(x); }
    #else
    static inline int igk_popcount64(unsigned long long x)
    { int c = 0; while (x) { x &= x - 1; ++c; } return c; }
    #endif
    """
    int igk_popcount64(unsigned long long x) nogil

cdef uint64_t ALL_ONES = <uint64_t>0xFFFFFFFFFFFFFFFFULL


def fill_true(uint64_t[::1] out, int64_t rows, int64_t wpr, uint64_t tail):
    cdef int64_t r, w
    with nogil:
        for r in range(rows):
            for w in range(wpr - 1):
                out[r * wpr + w] = ALL_ONES
            out[r * wpr + wpr - 1] = tail


def lnot(uint64_t[::1] out, uint64_t[::1] src,
         int64_t rows, int64_t wpr, uint64_t tail):
    cdef int64_t r, w
    with nogil:
        for r in range(rows):
            for w in range(wpr - 1):
                out[r * wpr + w] = ~src[r * wpr + w]
            out[r * wpr + wpr - 1] = (~src[r * wpr + wpr - 1]) & tail


def land(uint64_t[::1] out, uint64_t[::1] a, uint64_t[::1] b):
    cdef int64_t i, n = a.shape[0]
    with nogil:
        for i in range(n):
            out[i] = a[i] & b[i]


def lor(uint64_t[::1] out, uint64_t[::1] a, uint64_t[::1] b):
    cdef int64_t i, n = a.shape[0]
    with nogil:
        for i in range(n):
            out[i] = a[i] | b[i]


def eq(uint64_t[::1] a, uint64_t[::1] b):
    cdef int64_t i, n = a.shape[0]
    cdef bint same = True
    with nogil:
        for i in range(n):
            if a[i] != b[i]:
                same = False
                break
    return bool(same)


def is_subset(uint64_t[::1] a, uint64_t[::1] b):
    cdef int64_t i, n = a.shape[0]
    cdef bint inside = True
    with nogil:
        for i in range(n):
            if a[i] & ~b[i]:
                inside = False
                break
    return bool(inside)


def popcount_all(uint64_t[::1] src):
    cdef int64_t i, n = src.shape[0]
    cdef int64_t total = 0
    with nogil:
        for i in range(n):
            total += igk_popcount64(src[i])
    return total


def any_last(uint64_t[::1] src, uint64_t[::1] out,
             int64_t rows, int64_t wpr, int64_t a, int64_t out_wpr):
    """out cell r (over the first k-1 axes) = OR of src row r."""
    cdef int64_t r, w
    cdef uint64_t acc
    with nogil:
        for r in range(rows):
            acc = 0
            for w in range(wpr):
                acc |= src[r * wpr + w]
            if acc:
                out[(r // a) * out_wpr + ((r % a) >> 6)] |= (
                    <uint64_t>1 << <uint64_t>((r % a) & 63))


def all_last(uint64_t[::1] src, uint64_t[::1] out,
             int64_t rows, int64_t wpr, uint64_t tail,
             int64_t a, int64_t out_wpr):
    """out cell r = 1 iff src row r has all A bits set."""
    cdef int64_t r, w
    cdef bint full
    with nogil:
        for r in range(rows):
            full = True
            for w in range(wpr - 1):
                if src[r * wpr + w] != ALL_ONES:
                    full = False
                    break
            if full and src[r * wpr + wpr - 1] != tail:
                full = False
            if full:
                out[(r // a) * out_wpr + ((r % a) >> 6)] |= (
                    <uint64_t>1 << <uint64_t>((r % a) & 63))


def count_last(uint64_t[::1] src, int64_t[::1] out,
               int64_t rows, int64_t wpr):
    cdef int64_t r, w, c
    with nogil:
        for r in range(rows):
            c = 0
            for w in range(wpr):
                c += igk_popcount64(src[r * wpr + w])
            out[r] = c


def tile_blocks(uint64_t[::1] src, uint64_t[::1] out,
                int64_t nblocks, int64_t block_words, int64_t repeats):
    """Repeat each contiguous block of src `repeats` times into out."""
    cdef int64_t b, rep
    cdef uint64_t *dst
    cdef const uint64_t *sp
    with nogil:
        for b in range(nblocks):
            sp = &src[b * block_words]
            for rep in range(repeats):
                dst = &out[(b * repeats + rep) * block_words]
                memcpy(dst, sp, block_words * sizeof(uint64_t))


def bit_to_row(uint64_t[::1] src, uint64_t[::1] out,
               int64_t rows, int64_t wpr, int64_t a, uint64_t tail):
    """Append a new last axis: each src cell becomes a constant out row.

    out must be zeroed; only rows for set bits are written.
    """
    cdef int64_t r, bit, cell, w
    with nogil:
        for r in range(rows):
            for bit in range(a):
                if src[r * wpr + (bit >> 6)] & (
                        <uint64_t>1 << <uint64_t>(bit & 63)):
                    cell = r * a + bit
                    for w in range(wpr - 1):
                        out[cell * wpr + w] = ALL_ONES
                    out[cell * wpr + wpr - 1] = tail


def pack(const unsigned char[::1] dense, uint64_t[::1] out,
         int64_t rows, int64_t wpr, int64_t a):
    """Pack a flat row-major uint8 0/1 buffer of rows*a cells."""
    cdef int64_t r, bit
    with nogil:
        for r in range(rows):
            for bit in range(a):
                if dense[r * a + bit]:
                    out[r * wpr + (bit >> 6)] |= (
                        <uint64_t>1 << <uint64_t>(bit & 63))


def unpack(uint64_t[::1] src, unsigned char[::1] dense,
           int64_t rows, int64_t wpr, int64_t a):
    cdef int64_t r, bit
    with nogil:
        for r in range(rows):
            for bit in range(a):
                dense[r * a + bit] = 1 if (
                    src[r * wpr + (bit >> 6)]
                    & (<uint64_t>1 << <uint64_t>(bit & 63))) else 0
