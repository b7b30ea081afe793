"""Pure-Python integer CSR kernels (exact for any integer size).

Same signatures as the compiled ``_kernels`` module; data arrays may hold
Python ints (object dtype).
"""
import numpy as np


def _out(cp, ci, cx, big):
    dtype = object if big else np.int64
    return (
        np.asarray(cp, dtype=np.int64),
        np.asarray(ci, dtype=np.int64),
        np.asarray(cx, dtype=dtype) if cx else np.zeros(0, dtype=dtype),
    )


def spgemm(n_rows, n_cols, ap, ai, ax, bp, bi, bx):
    ap, ai, ax = ap.tolist(), ai.tolist(), ax.tolist()
    bp, bi, bx = bp.tolist(), bi.tolist(), bx.tolist()
    cp, ci, cx = [0], [], []
    for i in range(n_rows):
        acc = {}
        for jj in range(ap[i], ap[i + 1]):
            k = ai[jj]
            a = ax[jj]
            for kk in range(bp[k], bp[k + 1]):
                c = bi[kk]
                acc[c] = acc.get(c, 0) + a * bx[kk]
        for c in sorted(acc):
            v = acc[c]
            if v:
                ci.append(c)
                cx.append(v)
        cp.append(len(ci))
    return _out(cp, ci, cx, any(abs(v) >= 2**62 for v in cx))


def lincomb(n_rows, alpha, ap, ai, ax, beta, bp, bi, bx):
    ap, ai, ax = ap.tolist(), ai.tolist(), ax.tolist()
    bp, bi, bx = bp.tolist(), bi.tolist(), bx.tolist()
    cp, ci, cx = [0], [], []
    for i in range(n_rows):
        p, pe = ap[i], ap[i + 1]
        q, qe = bp[i], bp[i + 1]
        while p < pe or q < qe:
            if q >= qe or (p < pe and ai[p] < bi[q]):
                c, v = ai[p], alpha * ax[p]
                p += 1
            elif p >= pe or bi[q] < ai[p]:
                c, v = bi[q], beta * bx[q]
                q += 1
            else:
                c, v = ai[p], alpha * ax[p] + beta * bx[q]
                p += 1
                q += 1
            if v:
                ci.append(c)
                cx.append(v)
        cp.append(len(ci))
    return _out(cp, ci, cx, any(abs(v) >= 2**62 for v in cx))
