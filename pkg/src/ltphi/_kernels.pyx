# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernels: truncated modular convolution and min-plus precision propagation."""

from libc.stdint cimport int64_t

cdef int64_t BIG = (<int64_t>1) << 61


def conv_trunc(list a, list b, Py_ssize_t n, object mod):
    cdef Py_ssize_t la = len(a), lb = len(b), i, j, top
    cdef list out
    cdef object ai, bj
    if mod and mod < 2147483648:
        return _conv_small(a, b, n, <long long>mod)
    out = [0] * n
    for i in range(min(la, n)):
        ai = a[i]
        if not ai:
            continue
        top = min(lb, n - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] = out[i + j] + ai * bj
    if mod:
        return [c % mod for c in out]
    return out


cdef list _conv_small(list a, list b, Py_ssize_t n, long long m):
    cdef Py_ssize_t la = min(len(a), n), lb = len(b), i, j, top
    cdef long long ai
    cdef long long[::1] ca, cb, acc
    import array
    ca = array.array("q", [x % m for x in a[:la]])
    cb = array.array("q", [x % m for x in b])
    acc = array.array("q", [0]) * n
    for i in range(la):
        ai = ca[i]
        if ai == 0:
            continue
        top = lb if lb < n - i else n - i
        for j in range(top):
            acc[i + j] = (acc[i + j] + ai * cb[j]) % m
    return [acc[k] for k in range(n)]


def minplus_trunc(list pa, list va, list pb, list vb, Py_ssize_t n):
    cdef Py_ssize_t la = min(len(pa), n), lb = len(pb), i, j, top
    cdef int64_t x, y, pai, vai
    import array
    cdef int64_t[::1] cpa = array.array("q", [min(t, BIG) for t in pa[:la]])
    cdef int64_t[::1] cva = array.array("q", [min(t, BIG) for t in va[:la]])
    cdef int64_t[::1] cpb = array.array("q", [min(t, BIG) for t in pb])
    cdef int64_t[::1] cvb = array.array("q", [min(t, BIG) for t in vb])
    cdef int64_t[::1] out = array.array("q", [BIG]) * n
    for i in range(la):
        pai = cpa[i]
        vai = cva[i]
        top = lb if lb < n - i else n - i
        for j in range(top):
            x = pai + cvb[j]
            y = cpb[j] + vai
            if y < x:
                x = y
            if x < out[i + j]:
                out[i + j] = x
    return [BIG if out[k] > BIG else out[k] for k in range(n)]
