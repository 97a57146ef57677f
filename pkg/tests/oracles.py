"""Reference computations that share no code path with the package."""

import numpy as np
from scipy.linalg import expm


def sturm_count(off, x):
    """Number of eigenvalues of the zero-diagonal tridiagonal matrix below x."""
    # LDL^T pivots q_i = (0 - x) - e_{i-1}^2 / q_{i-1}
    count = 0
    q = -x
    if q < 0:
        count += 1
    for e in off:
        if q == 0.0:
            q = 1e-300
        q = -x - e * e / q
        if q < 0:
            count += 1
    return count


def bisection_eigenvalues(off, tol=1e-15):
    """All eigenvalues by bisection on the characteristic polynomial's Sturm sequence."""
    off = list(map(float, off))
    n = len(off) + 1
    bound = 2.0 * max(abs(e) for e in off) + 1.0
    out = []
    for k in range(n):
        lo, hi = -bound, bound
        while hi - lo > tol * max(1.0, abs(lo)):
            mid = 0.5 * (lo + hi)
            if sturm_count(off, mid) > k:
                hi = mid
            else:
                lo = mid
        out.append(0.5 * (lo + hi))
    return np.array(out)


def dense_matrix(off):
    off = np.asarray(off, dtype=float)
    return np.diag(off, 1) + np.diag(off, -1)


def expm_amplitude(off, t, src=0, dst=-1):
    return expm(-1j * dense_matrix(off) * t)[dst, src]


def determinant_recursion(off):
    """det of a zero-diagonal tridiagonal matrix: D_n = -e_{n-1}^2 D_{n-2}."""
    d_prev, d = 1.0, 0.0
    for e in off:
        d_prev, d = d, -e * e * d_prev
    return d


def brute_lambda(off):
    """(1, N) element of the dense inverse."""
    return np.linalg.inv(dense_matrix(off))[0, -1]
