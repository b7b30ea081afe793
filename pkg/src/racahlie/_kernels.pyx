# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer CSR kernels.

Callers guarantee that no intermediate value leaves the int64 range; see
``racahlie.kernels`` for the bound check that routes large operands to the
pure-Python path.
"""
import numpy as np
cimport numpy as cnp

ctypedef long long i64

cnp.import_array()


cdef void _sort_cols(i64* cols, Py_ssize_t n) noexcept nogil:
    # rows are short; insertion sort
    cdef Py_ssize_t i, j
    cdef i64 key
    for i in range(1, n):
        key = cols[i]
        j = i - 1
        while j >= 0 and cols[j] > key:
            cols[j + 1] = cols[j]
            j -= 1
        cols[j + 1] = key


def spgemm(Py_ssize_t n_rows, Py_ssize_t n_cols,
           const i64[::1] ap, const i64[::1] ai, const i64[::1] ax,
           const i64[::1] bp, const i64[::1] bi, const i64[::1] bx):
    """C = A @ B for CSR integer matrices; output rows sorted, zeros dropped."""
    cdef Py_ssize_t i, jj, kk, k, c, nnz = 0, row_start, cap
    cdef i64 a
    cdef i64[::1] acc = np.zeros(n_cols, dtype=np.int64)
    cdef cnp.int8_t[::1] seen = np.zeros(n_cols, dtype=np.int8)
    cdef i64[::1] touched = np.empty(n_cols, dtype=np.int64)
    cdef Py_ssize_t ntouched

    cap = 0
    for i in range(n_rows):
        for jj in range(ap[i], ap[i + 1]):
            k = ai[jj]
            cap += bp[k + 1] - bp[k]
    cdef i64[::1] cp = np.zeros(n_rows + 1, dtype=np.int64)
    cdef i64[::1] ci = np.empty(max(cap, 1), dtype=np.int64)
    cdef i64[::1] cx = np.empty(max(cap, 1), dtype=np.int64)

    with nogil:
        for i in range(n_rows):
            ntouched = 0
            for jj in range(ap[i], ap[i + 1]):
                k = ai[jj]
                a = ax[jj]
                for kk in range(bp[k], bp[k + 1]):
                    c = bi[kk]
                    if not seen[c]:
                        seen[c] = 1
                        touched[ntouched] = c
                        ntouched += 1
                    acc[c] += a * bx[kk]
            _sort_cols(&touched[0], ntouched)
            row_start = nnz
            for jj in range(ntouched):
                c = touched[jj]
                if acc[c] != 0:
                    ci[nnz] = c
                    cx[nnz] = acc[c]
                    nnz += 1
                acc[c] = 0
                seen[c] = 0
            cp[i + 1] = nnz
    return (np.asarray(cp), np.asarray(ci)[:nnz].copy(), np.asarray(cx)[:nnz].copy())


def lincomb(Py_ssize_t n_rows, i64 alpha,
            const i64[::1] ap, const i64[::1] ai, const i64[::1] ax,
            i64 beta,
            const i64[::1] bp, const i64[::1] bi, const i64[::1] bx):
    """alpha*A + beta*B for CSR integer matrices with sorted rows."""
    cdef Py_ssize_t i, p, q, pe, qe, nnz = 0
    cdef i64 v, ca, cb
    cdef Py_ssize_t cap = ap[n_rows] + bp[n_rows]
    cdef i64[::1] cp = np.zeros(n_rows + 1, dtype=np.int64)
    cdef i64[::1] ci = np.empty(max(cap, 1), dtype=np.int64)
    cdef i64[::1] cx = np.empty(max(cap, 1), dtype=np.int64)
    with nogil:
        for i in range(n_rows):
            p, pe = ap[i], ap[i + 1]
            q, qe = bp[i], bp[i + 1]
            while p < pe or q < qe:
                ca = ai[p] if p < pe else -1
                cb = bi[q] if q < qe else -1
                if q >= qe or (p < pe and ca < cb):
                    v = alpha * ax[p]
                    ci[nnz] = ca
                    p += 1
                elif p >= pe or cb < ca:
                    v = beta * bx[q]
                    ci[nnz] = cb
                    q += 1
                else:
                    v = alpha * ax[p] + beta * bx[q]
                    ci[nnz] = ca
                    p += 1
                    q += 1
                if v != 0:
                    cx[nnz] = v
                    nnz += 1
            cp[i + 1] = nnz
    return (np.asarray(cp), np.asarray(ci)[:nnz].copy(), np.asarray(cx)[:nnz].copy())
