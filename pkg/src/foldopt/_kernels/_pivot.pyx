# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pivot kernel; same contract as ``_pivot_py``.

Row updates first run on 64-bit machine integers with overflow checks and
fall back to Python ints for any row that does not fit.
"""

from cpython.long cimport PyLong_AsLongLongAndOverflow
from libc.stdlib cimport free, malloc
from math import gcd

cdef extern from *:
    """
    static inline int fo_mul_ovf(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int fo_sub_ovf(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int fo_mul_ovf(long long a, long long b, long long *r) nogil
    int fo_sub_ovf(long long a, long long b, long long *r) nogil


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef int _load(list values, long long *buf, Py_ssize_t n) except -1:
    """Copy ``values`` into ``buf``; returns 1 if they all fit, else 0."""
    cdef Py_ssize_t j
    cdef int ovf = 0
    cdef long long x
    for j in range(n):
        x = PyLong_AsLongLongAndOverflow(values[j], &ovf)
        # keep clear of the extremes so negation cannot overflow
        if ovf or x == -9223372036854775807LL - 1:
            return 0
        buf[j] = x
    return 1


cdef int _combine(long long a, long long *row, long long f, long long *prow,
                  long long den, long long *out, long long *den_out, Py_ssize_t n) nogil:
    """``out = (a*row - f*prow) / g`` and ``den_out = den*a / g``; 0 on overflow."""
    cdef Py_ssize_t j
    cdef long long u, v, g, d
    if fo_mul_ovf(den, a, &d):
        return 0
    g = d
    for j in range(n):
        if fo_mul_ovf(a, row[j], &u) or fo_mul_ovf(f, prow[j], &v) or fo_sub_ovf(u, v, &out[j]):
            return 0
        if g != 1:
            g = _gcd(g, out[j])
    if g > 1:
        for j in range(n):
            out[j] = out[j] // g
        d = d // g
    den_out[0] = d
    return 1


cdef list _slow_combine(object a, list row, object f, list prow, object den):
    cdef Py_ssize_t j, n = len(row)
    cdef list new = [None] * n
    for j in range(n):
        new[j] = a * row[j] - f * prow[j]
    den = den * a
    g = gcd(den, *new)
    if g > 1:
        for j in range(n):
            new[j] = new[j] // g
        den = den // g
    return [new, den]


cdef list _to_list(long long *buf, Py_ssize_t n):
    cdef Py_ssize_t j
    cdef list out = [None] * n
    for j in range(n):
        out[j] = buf[j]
    return out


def pivot(list rows, list dens, Py_ssize_t r, Py_ssize_t p):
    cdef list prow = rows[r]
    cdef list row, res
    cdef Py_ssize_t i, n = len(prow), m = len(rows)
    cdef object a = prow[p], f, g
    cdef long long ca, cf, cden, den_out
    cdef int fast
    if a < 0:
        prow = [-x for x in prow]
        a = -a
    g = gcd(a, *prow)
    if g > 1:
        prow = [x // g for x in prow]
        a = a // g
    rows[r] = prow
    dens[r] = a

    cdef long long *pbuf = <long long *>malloc(n * sizeof(long long))
    cdef long long *rbuf = <long long *>malloc(n * sizeof(long long))
    cdef long long *obuf = <long long *>malloc(n * sizeof(long long))
    if pbuf == NULL or rbuf == NULL or obuf == NULL:
        free(pbuf); free(rbuf); free(obuf)
        raise MemoryError()
    try:
        fast = _load(prow, pbuf, n) and _load([a], &ca, 1)
        for i in range(m):
            if i == r:
                continue
            row = <list>rows[i]
            f = row[p]
            if f == 0:
                continue
            if fast and _load(row, rbuf, n) and _load([dens[i]], &cden, 1):
                cf = rbuf[p]
                if _combine(ca, rbuf, cf, pbuf, cden, obuf, &den_out, n):
                    rows[i] = _to_list(obuf, n)
                    dens[i] = den_out
                    continue
            res = _slow_combine(a, row, f, prow, dens[i])
            rows[i] = res[0]
            dens[i] = res[1]
    finally:
        free(pbuf)
        free(rbuf)
        free(obuf)


def eliminate(list row, object den, list rows, list dens, list basis):
    cdef Py_ssize_t i, n = len(row)
    cdef object f, a
    cdef list brow, res
    for i in range(len(basis)):
        b = basis[i]
        f = row[b]
        if f == 0:
            continue
        brow = <list>rows[i]
        a = brow[b]
        res = _slow_combine(a, row, f, brow, den)
        row = res[0]
        den = res[1]
    return row, den
