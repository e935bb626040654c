# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled set-arithmetic kernels. Contract identical to ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libcpp.vector cimport vector
from libcpp.algorithm cimport unique, merge

cnp.import_array()

ADD = 0
MUL = 1

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

cdef Py_ssize_t CHUNK = 1 << 22


# shifted copies of the base bitset are precomputed when they fit in this many words
cdef Py_ssize_t TABLE_WORDS = 1 << 21


cdef void _or_shift_table(const uint64_t* bw, Py_ssize_t nwb, const int64_t* small, Py_ssize_t ns,
                          int64_t s0, uint64_t* ow) noexcept nogil:
    cdef Py_ssize_t stride = nwb + 1, i, j, w
    cdef vector[uint64_t] table
    table.resize(64 * stride, 0)
    cdef uint64_t* t = table.data()
    cdef uint64_t* row
    cdef int sh
    for i in range(nwb):
        t[i] = bw[i]
    for sh in range(1, 64):
        row = t + sh * stride
        for i in range(nwb):
            row[i] |= bw[i] << sh
            row[i + 1] |= bw[i] >> (64 - sh)
    cdef uint64_t* dst
    for j in range(ns):
        w = (small[j] - s0) >> 6
        row = t + ((small[j] - s0) & 63) * stride
        dst = ow + w
        for i in range(stride):
            dst[i] |= row[i]


cdef void _or_shift_direct(const uint64_t* bw, Py_ssize_t nwb, const int64_t* small, Py_ssize_t ns,
                           int64_t s0, uint64_t* ow) noexcept nogil:
    cdef Py_ssize_t i, j, w
    cdef int sh
    cdef uint64_t* dst
    for j in range(ns):
        w = (small[j] - s0) >> 6
        sh = (small[j] - s0) & 63
        dst = ow + w
        if sh == 0:
            for i in range(nwb):
                dst[i] |= bw[i]
        else:
            for i in range(nwb):
                dst[i] |= bw[i] << sh
                dst[i + 1] |= bw[i] >> (64 - sh)


def dense_sumset(const int64_t[::1] x, const int64_t[::1] y, Py_ssize_t max_size):
    cdef const int64_t[::1] big = x
    cdef const int64_t[::1] small = y
    if x.shape[0] < y.shape[0]:
        big, small = y, x
    cdef Py_ssize_t nb = big.shape[0], ns = small.shape[0]
    cdef int64_t b0 = big[0], s0 = small[0]
    cdef int64_t span_big = big[nb - 1] - b0
    cdef int64_t span_small = small[ns - 1] - s0
    cdef Py_ssize_t nwb = (span_big >> 6) + 1
    cdef Py_ssize_t nwo = ((span_big + span_small) >> 6) + 2
    base = np.zeros(nwb, dtype=np.uint64)
    out = np.zeros(nwo, dtype=np.uint64)
    cdef uint64_t[::1] bw = base
    cdef uint64_t[::1] ow = out
    cdef Py_ssize_t i, k
    cdef int64_t v
    cdef uint64_t word
    for i in range(nb):
        v = big[i] - b0
        bw[v >> 6] |= (<uint64_t>1) << (v & 63)
    with nogil:
        if 64 * (nwb + 1) <= TABLE_WORDS and ns > 64:
            _or_shift_table(&bw[0], nwb, &small[0], ns, s0, &ow[0])
        else:
            _or_shift_direct(&bw[0], nwb, &small[0], ns, s0, &ow[0])
    cdef Py_ssize_t count = 0
    for i in range(nwo):
        count += __builtin_popcountll(ow[i])
    if count > max_size:
        return None
    res = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] rv = res
    cdef int64_t offset = b0 + s0
    k = 0
    for i in range(nwo):
        word = ow[i]
        while word:
            rv[k] = offset + (i << 6) + __builtin_ctzll(word)
            k += 1
            word &= word - 1
    return res


cdef void _merge_into(vector[int64_t]& acc, const int64_t* chunk, Py_ssize_t n, vector[int64_t]& tmp) noexcept nogil:
    """Merge the sorted, duplicate-free ``chunk`` into ``acc``."""
    tmp.resize(acc.size() + n)
    tmp.erase(merge(acc.begin(), acc.end(), chunk, chunk + n, tmp.begin()), tmp.end())
    tmp.erase(unique(tmp.begin(), tmp.end()), tmp.end())
    acc.swap(tmp)


cdef Py_ssize_t _compact(int64_t* a, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, out = 1
    if n == 0:
        return 0
    for i in range(1, n):
        if a[i] != a[out - 1]:
            a[out] = a[i]
            out += 1
    return out


# results whose value range fits in this many bits are deduplicated in a bitmap
cdef int64_t BITMAP_BITS = (<int64_t>1) << 30


cdef void _bitmap_combine(const int64_t* x, Py_ssize_t nx, const int64_t* y, Py_ssize_t ny,
                          int op, int64_t lo, uint64_t* bits) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef int64_t v, yj
    for j in range(ny):
        yj = y[j]
        if op == 0:
            for i in range(nx):
                v = x[i] + yj - lo
                bits[v >> 6] |= (<uint64_t>1) << (v & 63)
        else:
            for i in range(nx):
                v = x[i] * yj - lo
                bits[v >> 6] |= (<uint64_t>1) << (v & 63)


def sparse_combine(const int64_t[::1] x, const int64_t[::1] y, int op, Py_ssize_t max_size):
    cdef Py_ssize_t nx = x.shape[0], ny = y.shape[0]
    cdef int64_t lo, hi, c1, c2, c3, c4
    if op == 0:
        lo = x[0] + y[0]
        hi = x[nx - 1] + y[ny - 1]
    else:
        c1, c2, c3, c4 = x[0] * y[0], x[0] * y[ny - 1], x[nx - 1] * y[0], x[nx - 1] * y[ny - 1]
        lo = min(min(c1, c2), min(c3, c4))
        hi = max(max(c1, c2), max(c3, c4))
    # a bitmap pays off while it is not much larger than the pair count
    cdef int64_t words = ((hi - lo) >> 6) + 1
    if hi - lo < BITMAP_BITS and words <= max(4 * nx * ny, 1 << 16):
        return _extract(np.zeros(words, dtype=np.uint64), &x[0], nx, &y[0], ny, op, lo, max_size)
    return _sorted_combine(x, y, op, max_size)


cdef object _extract(object bitmap, const int64_t* x, Py_ssize_t nx, const int64_t* y, Py_ssize_t ny,
                     int op, int64_t lo, Py_ssize_t max_size):
    cdef uint64_t[::1] bw = bitmap
    cdef Py_ssize_t nw = bw.shape[0], i, k = 0, count = 0
    cdef uint64_t word
    with nogil:
        _bitmap_combine(x, nx, y, ny, op, lo, &bw[0])
        for i in range(nw):
            count += __builtin_popcountll(bw[i])
    if count > max_size:
        return None
    res = np.empty(count, dtype=np.int64)
    cdef int64_t[::1] rv = res
    with nogil:
        for i in range(nw):
            word = bw[i]
            while word:
                rv[k] = lo + (i << 6) + __builtin_ctzll(word)
                k += 1
                word &= word - 1
    return res


def _sorted_combine(const int64_t[::1] x, const int64_t[::1] y, int op, Py_ssize_t max_size):
    # numpy's in-place sort is SIMD accelerated; everything around it stays in C
    cdef Py_ssize_t nx = x.shape[0], ny = y.shape[0], i, j, rows, fill, kept
    rows = max(1, CHUNK // nx)
    block = np.empty(rows * nx, dtype=np.int64)
    cdef int64_t[::1] bv = block
    cdef vector[int64_t] acc, tmp
    j = 0
    while j < ny:
        fill = 0
        with nogil:
            while j < ny and fill + nx <= rows * nx:
                if op == 0:
                    for i in range(nx):
                        bv[fill + i] = x[i] + y[j]
                else:
                    for i in range(nx):
                        bv[fill + i] = x[i] * y[j]
                fill += nx
                j += 1
        part = block[:fill]
        part.sort()
        with nogil:
            kept = _compact(&bv[0], fill)
            _merge_into(acc, &bv[0], kept, tmp)
        if <Py_ssize_t>acc.size() > max_size:
            return None
    res = np.empty(acc.size(), dtype=np.int64)
    cdef int64_t[::1] rv = res
    with nogil:
        for i in range(<Py_ssize_t>acc.size()):
            rv[i] = acc[i]
    return res


def rep_count(const int64_t[::1] x, int64_t t):
    """Number of ordered pairs (a, b) with a - b == t, by a two-pointer sweep."""
    cdef Py_ssize_t n = x.shape[0], i = 0, j = 0, count = 0
    cdef int64_t target
    while i < n and j < n:
        target = x[j] + t
        if x[i] == target:
            count += 1
            i += 1
            j += 1
        elif x[i] < target:
            i += 1
        else:
            j += 1
    return count
