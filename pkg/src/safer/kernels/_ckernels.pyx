# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled batch scans; same contracts as ``_fallback``, with early exit."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmax

cnp.import_array()


def first_crossing_failure(alpha, beta, beliefs, double abs_eps, double rel_eps):
    cdef double[:] a = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef double[:] b = np.ascontiguousarray(beta, dtype=np.float64)
    cdef double[:, ::1] x = np.ascontiguousarray(beliefs, dtype=np.float64)
    support = np.unique(np.concatenate([np.asarray(a), np.asarray(b)]))
    cdef Py_ssize_t[:] ia = np.searchsorted(support, np.asarray(a)).astype(np.intp)
    cdef Py_ssize_t[:] ib = np.searchsorted(support, np.asarray(b)).astype(np.intp)
    cdef Py_ssize_t k = support.shape[0], n = a.shape[0], m = x.shape[0]
    cdef double[:] ma = np.zeros(k), mb = np.zeros(k)
    cdef Py_ssize_t row, i
    cdef double fa, fb, d, bound
    cdef bint seen_pos
    for row in range(m):
        for i in range(k):
            ma[i] = 0.0
            mb[i] = 0.0
        for i in range(n):
            ma[ia[i]] += x[row, i]
            mb[ib[i]] += x[row, i]
        fa = 0.0
        fb = 0.0
        seen_pos = False
        for i in range(k):
            fa += ma[i]
            fb += mb[i]
            d = fa - fb
            bound = abs_eps + rel_eps * fmax(fabs(fa), fabs(fb))
            if d > bound:
                seen_pos = True
            elif d < -bound and seen_pos:
                return row
    return -1


def first_violation(alpha, beta, phi_alpha, phi_beta, beliefs, double abs_eps, double rel_eps):
    cdef double[:] a = np.ascontiguousarray(alpha, dtype=np.float64)
    cdef double[:] b = np.ascontiguousarray(beta, dtype=np.float64)
    cdef double[:, ::1] pa = np.ascontiguousarray(phi_alpha, dtype=np.float64).reshape(-1, a.shape[0])
    cdef double[:, ::1] pb = np.ascontiguousarray(phi_beta, dtype=np.float64).reshape(-1, a.shape[0])
    cdef double[:, ::1] x = np.ascontiguousarray(beliefs, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], m = x.shape[0], n_t = pa.shape[0]
    cdef Py_ssize_t t, j, i, cnt = 0
    cdef double ea, eb
    cdef Py_ssize_t[:] rows = np.empty(m, dtype=np.intp)
    for j in range(m):
        ea = 0.0
        eb = 0.0
        for i in range(n):
            ea += x[j, i] * a[i]
            eb += x[j, i] * b[i]
        if ea - eb >= -(abs_eps + rel_eps * fmax(fabs(ea), fabs(eb))):
            rows[cnt] = j
            cnt += 1
    for t in range(n_t):
        for j in range(cnt):
            ea = 0.0
            eb = 0.0
            for i in range(n):
                ea += x[rows[j], i] * pa[t, i]
                eb += x[rows[j], i] * pb[t, i]
            if eb - ea > abs_eps + rel_eps * fmax(fabs(ea), fabs(eb)):
                return t, rows[j]
    return -1, -1
