"""Pure-Python BAE residual and Jacobian (fallback for the compiled ``_kernels``).

Every equation is written as ``G = T1 - T2`` with ``T1``, ``T2`` products of
factors that are affine in at most two unknowns.  The unknown vector is
``z = (lam_0, ..., lam_{M-1}, aux_0, ..., aux_{K-1})``; ``params`` holds
``(p, q, sgn*|hN|, |h1|, t + xiN, t + xi1, c)``.
"""
import numpy as np

EVEN, ODD, PARALLEL = 0, 1, 2
ETA = 1j


def _product(factors, n):
    """Value and gradient of ``prod_i (c0 + c1 z[v1] + c2 z[v2]) ** e``."""
    m = len(factors)
    powered = []
    for c0, v1, c1, v2, c2, e, zval in factors:
        powered.append(zval**e)
    prefix = [1.0 + 0j] * (m + 1)
    for i in range(m):
        prefix[i + 1] = prefix[i] * powered[i]
    suffix = [1.0 + 0j] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] * powered[i]
    grad = [0j] * n
    for i, (c0, v1, c1, v2, c2, e, zval) in enumerate(factors):
        others = prefix[i] * suffix[i + 1]
        d = e * zval ** (e - 1) * others
        if v1 >= 0:
            grad[v1] += d * c1
        if v2 >= 0:
            grad[v2] += d * c2
    return prefix[m], grad


def _f(z, c0, v1=-1, c1=0j, v2=-1, c2=0j, e=1):
    val = c0
    if v1 >= 0:
        val += c1 * z[v1]
    if v2 >= 0:
        val += c2 * z[v2]
    return (c0, v1, c1, v2, c2, e, val)


def bae_system(case, z, M, params, N):
    """Return ``(g, scale, jac)`` for the cleared Bethe equations.

    ``scale[k] = |T1| + |T2|`` of equation ``k``; ``g / scale`` is the
    normalized residual used for convergence tests.
    """
    z = [complex(x) for x in z]
    n = len(z)
    K = n - M
    p, q, sN, n1, aN, a1, c = [complex(x) for x in params]
    eta = ETA
    g = np.empty(n, dtype=complex)
    scale = np.empty(n, dtype=float)
    jac = np.zeros((n, n), dtype=complex)
    for j in range(M):
        # [p - l sN](q + l n1)(2l - eta)^{2N} X  vs  [p + l aN][q - l a1](2l + eta)^{2N} Y
        f1 = [_f(z, p, j, -sN), _f(z, q, j, n1), _f(z, -eta, j, 2.0, e=2 * N)]
        f2 = [_f(z, p, j, aN), _f(z, q, j, -a1), _f(z, eta, j, 2.0, e=2 * N)]
        for l in range(K):
            a = M + l
            if case == PARALLEL:
                f1.append(_f(z, eta, j, 1.0, a, 1.0))
                f1.append(_f(z, 0j, j, 1.0, a, -1.0))
                f2.append(_f(z, -eta, j, 1.0, a, -1.0))
                f2.append(_f(z, 0j, j, 1.0, a, 1.0))
            else:
                f1.append(_f(z, eta, j, 1.0, a, 1.0))
                f2.append(_f(z, -eta, j, 1.0, a, -1.0))
        _store(g, scale, jac, j, f1, f2, n)
    for jj in range(K):
        j = M + jj
        if case == PARALLEL:
            f1 = [_f(z, 0j, j, 1.0), _f(z, p - eta * sN, j, -sN), _f(z, q + eta * n1, j, n1)]
            f2 = [_f(z, -eta, j, -1.0), _f(z, p, j, sN), _f(z, q, j, -n1)]
            for l in range(M):
                f1.append(_f(z, 0j, j, 1.0, l, 1.0))
                f1.append(_f(z, 0j, j, 1.0, l, -1.0))
                f2.append(_f(z, eta, j, 1.0, l, -1.0))
                f2.append(_f(z, eta, j, 1.0, l, 1.0))
            for ll in range(K):
                a = M + ll
                if a == j:
                    # (g - g + eta)(2g + 2 eta) and (g - g - eta)(2g)
                    f1.append(_f(z, eta))
                    f1.append(_f(z, 2 * eta, j, 2.0))
                    f2.append(_f(z, -eta))
                    f2.append(_f(z, 0j, j, 2.0))
                else:
                    f1.append(_f(z, eta, j, 1.0, a, -1.0))
                    f1.append(_f(z, 2 * eta, j, 1.0, a, 1.0))
                    f2.append(_f(z, -eta, j, 1.0, a, -1.0))
                    f2.append(_f(z, 0j, j, 1.0, a, 1.0))
        else:
            f1 = [_f(z, c), _f(z, eta, j, 1.0), _f(z, eta, j, 2.0)]
            if case == ODD:
                f1 = [_f(z, c), _f(z, 0j, j, 1.0), _f(z, eta, j, 1.0, e=2), _f(z, eta, j, 2.0)]
            for l in range(M):
                f1.append(_f(z, eta, j, 1.0, l, -1.0))
                f1.append(_f(z, eta, j, 1.0, l, 1.0))
            f2 = [_f(z, -2.0 + 0j), _f(z, p - eta * sN, j, -sN), _f(z, q + eta * n1, j, n1)]
            for ll in range(K):
                a = M + ll
                if a == j:
                    f2.append(_f(z, eta, j, 2.0))
                    f2.append(_f(z, 2 * eta, j, 2.0))
                else:
                    f2.append(_f(z, eta, j, 1.0, a, 1.0))
                    f2.append(_f(z, 2 * eta, j, 1.0, a, 1.0))
        _store(g, scale, jac, j, f1, f2, n)
    return g, scale, jac


def _store(g, scale, jac, row, f1, f2, n):
    t1, d1 = _product(f1, n)
    t2, d2 = _product(f2, n)
    g[row] = t1 - t2
    scale[row] = abs(t1) + abs(t2)
    for k in range(n):
        jac[row, k] = d1[k] - d2[k]
