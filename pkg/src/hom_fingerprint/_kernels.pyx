# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics match ``_pykernels`` exactly."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int8_t, int64_t

cnp.import_array()

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef int STRIDE = 9
cdef double TWO_M53 = 1.0 / 9007199254740992.0


cdef inline double _uniform(uint64_t key, uint64_t counter) nogil:
    cdef uint64_t z = key + (counter + 1) * GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    z = z ^ (z >> 31)
    return <double>(z >> 11) * TWO_M53


cdef inline int _emit(double u, double p1, double p12) nogil:
    if u < p1:
        return 1
    if u < p12:
        return 2
    return 0


cdef inline int _dark(double u, const double* cdf, Py_ssize_t n) nogil:
    cdef Py_ssize_t k = 0
    while k < n and u > cdf[k]:
        k += 1
    return <int>k


cdef inline void _route_one(uint64_t key, uint64_t run, double p1, double p12,
                            const double* cdf, Py_ssize_t ncdf, double w, double pc,
                            int* ka, int* kb, int* ca, int* cb) nogil:
    cdef uint64_t base = run * STRIDE
    cdef int na = 0, nb = 0, k, s
    cdef double u
    ka[0] = _emit(_uniform(key, base + 0), p1, p12)
    kb[0] = _emit(_uniform(key, base + 1), p1, p12)
    if ka[0] == 1 and kb[0] == 1:
        if _uniform(key, base + 4) < w:
            if _uniform(key, base + 5) < pc:
                na = 1
                nb = 1
            elif _uniform(key, base + 6) < 0.5:
                na = 2
            else:
                nb = 2
        else:
            for s in range(5, 7):
                if _uniform(key, base + s) < 0.5:
                    na += 1
                else:
                    nb += 1
    else:
        for s in range(7, 9):
            k = ka[0] if s == 7 else kb[0]
            if k == 0:
                continue
            u = _uniform(key, base + s)
            if k == 1:
                if u < 0.5:
                    na += 1
                else:
                    nb += 1
            elif u < 0.25:
                na += 2
            elif u < 0.5:
                nb += 2
            else:
                na += 1
                nb += 1
    ca[0] = na + _dark(_uniform(key, base + 2), cdf, ncdf)
    cb[0] = nb + _dark(_uniform(key, base + 3), cdf, ncdf)


def mc_tally(uint64_t key, uint64_t start, uint64_t count, double p1, double p12,
             const double[::1] dark_cdf, double w, double pc):
    cdef uint64_t i
    cdef int ka, kb, ca, cb
    cdef int64_t coinc = 0, da = 0, db = 0
    # Raw pointer: handing a memoryview to the per-run call costs a refcount each time.
    cdef const double* cdf = &dark_cdf[0]
    cdef Py_ssize_t ncdf = dark_cdf.shape[0]
    with nogil:
        for i in range(start, start + count):
            _route_one(key, i, p1, p12, cdf, ncdf, w, pc, &ka, &kb, &ca, &cb)
            if ca >= 1 and cb >= 1:
                coinc += 1
            elif ca >= 2:
                da += 1
            elif cb >= 2:
                db += 1
    return int(coinc), int(da), int(db)


def mc_outcomes(uint64_t key, uint64_t start, uint64_t count, double p1, double p12,
                const double[::1] dark_cdf, double w, double pc):
    out = np.empty((4, count), dtype=np.int8)
    cdef int8_t[:, ::1] o = out
    cdef uint64_t i
    cdef int ka, kb, ca, cb
    cdef const double* cdf = &dark_cdf[0]
    cdef Py_ssize_t ncdf = dark_cdf.shape[0]
    with nogil:
        for i in range(count):
            _route_one(key, start + i, p1, p12, cdf, ncdf, w, pc, &ka, &kb, &ca, &cb)
            o[0, i] = ka
            o[1, i] = kb
            o[2, i] = ca
            o[3, i] = cb
    return out[0], out[1], out[2], out[3]


def min_weight(columns):
    cdef uint64_t[::1] cols = np.ascontiguousarray(columns, dtype=np.uint64)
    cdef Py_ssize_t n = cols.shape[0]
    cdef uint64_t i, total = (<uint64_t>1) << n
    cdef uint64_t word = 0
    cdef int best = 65, wt
    with nogil:
        for i in range(1, total):
            word ^= cols[ctz64(i)]
            wt = popcount64(word)
            if wt < best:
                best = wt
    return best
