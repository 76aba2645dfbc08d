# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled BAE residual and Jacobian; mirrors ``_kernels_py`` factor by factor."""
import numpy as np


cdef double complex ETA = 1j

cdef struct Factor:
    double complex c0
    int v1
    double complex c1
    int v2
    double complex c2
    int e
    double complex val


cdef inline void _set(Factor* f, const double complex[:] z, double complex c0, int v1, double complex c1,
                      int v2, double complex c2, int e) noexcept nogil:
    f.c0 = c0
    f.v1 = v1
    f.c1 = c1
    f.v2 = v2
    f.c2 = c2
    f.e = e
    f.val = c0
    if v1 >= 0:
        f.val = f.val + c1 * z[v1]
    if v2 >= 0:
        f.val = f.val + c2 * z[v2]


cdef inline double complex _ipow(double complex x, int e) noexcept nogil:
    cdef double complex r = 1.0
    cdef int k
    for k in range(e):
        r = r * x
    return r


cdef double complex _product(Factor* fs, int m, double complex* grad, int n,
                             double complex* prefix, double complex* suffix) noexcept nogil:
    cdef int i
    cdef double complex d
    for i in range(n):
        grad[i] = 0
    prefix[0] = 1.0
    for i in range(m):
        prefix[i + 1] = prefix[i] * _ipow(fs[i].val, fs[i].e)
    suffix[m] = 1.0
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] * _ipow(fs[i].val, fs[i].e)
    for i in range(m):
        d = fs[i].e * _ipow(fs[i].val, fs[i].e - 1) * prefix[i] * suffix[i + 1]
        if fs[i].v1 >= 0:
            grad[fs[i].v1] = grad[fs[i].v1] + d * fs[i].c1
        if fs[i].v2 >= 0:
            grad[fs[i].v2] = grad[fs[i].v2] + d * fs[i].c2
    return prefix[m]


def bae_system(int case, z_in, int M, params, int N):
    """Return ``(g, scale, jac)`` for the cleared Bethe equations (see ``_kernels_py``)."""
    cdef double complex[:] z = np.ascontiguousarray(z_in, dtype=complex)
    cdef int n = z.shape[0]
    cdef int K = n - M
    pr = [complex(x) for x in params]
    cdef double complex p = pr[0], q = pr[1], sN = pr[2], n1 = pr[3], aN = pr[4], a1 = pr[5], c = pr[6]
    cdef double complex eta = ETA
    g_arr = np.empty(n, dtype=complex)
    s_arr = np.empty(n, dtype=float)
    j_arr = np.zeros((n, n), dtype=complex)
    cdef double complex[:] g = g_arr
    cdef double[:] scale = s_arr
    cdef double complex[:, :] jac = j_arr
    cdef int cap = 8 + 2 * n
    cdef Factor[64] f1s
    cdef Factor[64] f2s
    cdef double complex[32] d1
    cdef double complex[32] d2
    cdef double complex[72] prefix
    cdef double complex[72] suffix
    if cap > 64 or n > 32:
        raise ValueError("system too large for the compiled kernel")
    cdef int j, jj, l, ll, a, m1, m2, k
    cdef double complex t1, t2
    with nogil:
        for j in range(M):
            _set(&f1s[0], z, p, j, -sN, -1, 0, 1)
            _set(&f1s[1], z, q, j, n1, -1, 0, 1)
            _set(&f1s[2], z, -eta, j, 2.0, -1, 0, 2 * N)
            _set(&f2s[0], z, p, j, aN, -1, 0, 1)
            _set(&f2s[1], z, q, j, -a1, -1, 0, 1)
            _set(&f2s[2], z, eta, j, 2.0, -1, 0, 2 * N)
            m1 = 3
            m2 = 3
            for l in range(K):
                a = M + l
                _set(&f1s[m1], z, eta, j, 1.0, a, 1.0, 1)
                m1 += 1
                _set(&f2s[m2], z, -eta, j, 1.0, a, -1.0, 1)
                m2 += 1
                if case == 2:
                    _set(&f1s[m1], z, 0, j, 1.0, a, -1.0, 1)
                    m1 += 1
                    _set(&f2s[m2], z, 0, j, 1.0, a, 1.0, 1)
                    m2 += 1
            t1 = _product(f1s, m1, d1, n, prefix, suffix)
            t2 = _product(f2s, m2, d2, n, prefix, suffix)
            g[j] = t1 - t2
            scale[j] = abs(t1) + abs(t2)
            for k in range(n):
                jac[j, k] = d1[k] - d2[k]
        for jj in range(K):
            j = M + jj
            if case == 2:
                _set(&f1s[0], z, 0, j, 1.0, -1, 0, 1)
                _set(&f1s[1], z, p - eta * sN, j, -sN, -1, 0, 1)
                _set(&f1s[2], z, q + eta * n1, j, n1, -1, 0, 1)
                _set(&f2s[0], z, -eta, j, -1.0, -1, 0, 1)
                _set(&f2s[1], z, p, j, sN, -1, 0, 1)
                _set(&f2s[2], z, q, j, -n1, -1, 0, 1)
                m1 = 3
                m2 = 3
                for l in range(M):
                    _set(&f1s[m1], z, 0, j, 1.0, l, 1.0, 1)
                    _set(&f1s[m1 + 1], z, 0, j, 1.0, l, -1.0, 1)
                    _set(&f2s[m2], z, eta, j, 1.0, l, -1.0, 1)
                    _set(&f2s[m2 + 1], z, eta, j, 1.0, l, 1.0, 1)
                    m1 += 2
                    m2 += 2
                for ll in range(K):
                    a = M + ll
                    if a == j:
                        _set(&f1s[m1], z, eta, -1, 0, -1, 0, 1)
                        _set(&f1s[m1 + 1], z, 2 * eta, j, 2.0, -1, 0, 1)
                        _set(&f2s[m2], z, -eta, -1, 0, -1, 0, 1)
                        _set(&f2s[m2 + 1], z, 0, j, 2.0, -1, 0, 1)
                    else:
                        _set(&f1s[m1], z, eta, j, 1.0, a, -1.0, 1)
                        _set(&f1s[m1 + 1], z, 2 * eta, j, 1.0, a, 1.0, 1)
                        _set(&f2s[m2], z, -eta, j, 1.0, a, -1.0, 1)
                        _set(&f2s[m2 + 1], z, 0, j, 1.0, a, 1.0, 1)
                    m1 += 2
                    m2 += 2
            else:
                _set(&f1s[0], z, c, -1, 0, -1, 0, 1)
                if case == 1:
                    _set(&f1s[1], z, 0, j, 1.0, -1, 0, 1)
                    _set(&f1s[2], z, eta, j, 1.0, -1, 0, 2)
                    _set(&f1s[3], z, eta, j, 2.0, -1, 0, 1)
                    m1 = 4
                else:
                    _set(&f1s[1], z, eta, j, 1.0, -1, 0, 1)
                    _set(&f1s[2], z, eta, j, 2.0, -1, 0, 1)
                    m1 = 3
                for l in range(M):
                    _set(&f1s[m1], z, eta, j, 1.0, l, -1.0, 1)
                    _set(&f1s[m1 + 1], z, eta, j, 1.0, l, 1.0, 1)
                    m1 += 2
                _set(&f2s[0], z, -2.0, -1, 0, -1, 0, 1)
                _set(&f2s[1], z, p - eta * sN, j, -sN, -1, 0, 1)
                _set(&f2s[2], z, q + eta * n1, j, n1, -1, 0, 1)
                m2 = 3
                for ll in range(K):
                    a = M + ll
                    if a == j:
                        _set(&f2s[m2], z, eta, j, 2.0, -1, 0, 1)
                        _set(&f2s[m2 + 1], z, 2 * eta, j, 2.0, -1, 0, 1)
                    else:
                        _set(&f2s[m2], z, eta, j, 1.0, a, 1.0, 1)
                        _set(&f2s[m2 + 1], z, 2 * eta, j, 1.0, a, 1.0, 1)
                    m2 += 2
            t1 = _product(f1s, m1, d1, n, prefix, suffix)
            t2 = _product(f2s, m2, d2, n, prefix, suffix)
            g[j] = t1 - t2
            scale[j] = abs(t1) + abs(t2)
            for k in range(n):
                jac[j, k] = d1[k] - d2[k]
    return g_arr, s_arr, j_arr
