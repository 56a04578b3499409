# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cell-sweep kernels.

Walks the 2**(M+1) depth-M dyadic cells in index order with an odometer
over the digit path: advancing to the next cell flips a trailing run of
digits, so only the affected suffix of prefix sums, return terms and
loop counts is recomputed (amortized O(1) per cell).  Also provides
Neumaier-compensated reductions.  Must be compiled without -ffast-math;
the error-free transformations rely on IEEE rounding.
"""

from libc.math cimport fabs
from libc.string cimport memset

cdef int MAX_DEPTH = 60


cdef void _sweep(double lam, int M, unsigned long long i0, unsigned long long i1,
                 double* out_v, double* out_u, bint want_u) noexcept nogil:
    cdef double pw[64]
    cdef int ssum[64]
    cdef double vval[64]
    cdef double uval[64]
    cdef int cnt[131]
    cdef int off = M + 1
    cdef int n, d, s, k, h
    cdef unsigned long long i, changed
    cdef double pv, pu

    pw[0] = lam
    for n in range(1, M + 1):
        pw[n] = pw[n - 1] * lam
    memset(cnt, 0, sizeof(cnt))
    cnt[off] = 1  # empty prefix has sum 0

    i = i0
    for n in range(M + 1):
        d = 2 * <int>((i >> (M - n)) & 1) - 1
        s = (ssum[n - 1] if n > 0 else 0) + d
        ssum[n] = s
        pv = vval[n - 1] if n > 0 else 1.0
        vval[n] = pv + pw[n] if s == 0 else pv
        if want_u:
            k = cnt[s + off]
            pu = uval[n - 1] if n > 0 else 0.0
            uval[n] = pu + pw[n] * k
            cnt[s + off] = k + 1

    while True:
        out_v[i] = vval[M]
        if want_u:
            out_u[i] = uval[M]
        i += 1
        if i == i1:
            break
        # bits 0..h of the index flipped, i.e. digit levels M-h..M
        changed = i ^ (i - 1)
        h = -1
        while changed:
            changed >>= 1
            h += 1
        if want_u:
            for n in range(M, M - h - 1, -1):
                cnt[ssum[n] + off] -= 1
        for n in range(M - h, M + 1):
            d = 2 * <int>((i >> (M - n)) & 1) - 1
            s = (ssum[n - 1] if n > 0 else 0) + d
            ssum[n] = s
            pv = vval[n - 1] if n > 0 else 1.0
            vval[n] = pv + pw[n] if s == 0 else pv
            if want_u:
                k = cnt[s + off]
                pu = uval[n - 1] if n > 0 else 0.0
                uval[n] = pu + pw[n] * k
                cnt[s + off] = k + 1


def sweep_range(double lam, int M, unsigned long long i0, unsigned long long i1,
                double[::1] out_v, out_u=None):
    """Fill out_v (and out_u if given) for cells i0 <= i < i1."""
    cdef double[::1] umv
    cdef double* up = NULL
    cdef bint want_u = out_u is not None
    if M < 0 or M > MAX_DEPTH:
        raise ValueError(f"depth must be in [0, {MAX_DEPTH}]")
    if i1 > (<unsigned long long>1) << (M + 1) or i0 > i1:
        raise ValueError("cell range out of bounds")
    if i0 == i1:
        return
    if want_u:
        umv = out_u
        up = &umv[0]
    with nogil:
        _sweep(lam, M, i0, i1, &out_v[0], up, want_u)


def comp_sum(double[::1] a):
    """Neumaier-compensated sum."""
    cdef double s = 0.0, c = 0.0, t, x
    cdef Py_ssize_t i, n = a.shape[0]
    with nogil:
        for i in range(n):
            x = a[i]
            t = s + x
            if fabs(s) >= fabs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
    return s + c


def comp_dot(double[::1] a, double[::1] b):
    """Neumaier-compensated dot product (products rounded once)."""
    cdef double s = 0.0, c = 0.0, t, x
    cdef Py_ssize_t i, n = a.shape[0]
    if b.shape[0] != n:
        raise ValueError("length mismatch")
    with nogil:
        for i in range(n):
            x = a[i] * b[i]
            t = s + x
            if fabs(s) >= fabs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
    return s + c
