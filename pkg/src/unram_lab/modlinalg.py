"""Dense linear algebra over a prime field F_ell with int64 numpy arrays.

Entries are kept in [0, ell).  Callers must pick ell small enough that a
dot product of length n fits in int64 (see ``fits_int64``).
"""

import numpy as np


def fits_int64(ell, n):
    return n * (ell - 1) ** 2 < 2**62


def matmul(a, b, ell):
    return (a @ b) % ell


def rref(m, ell):
    """Reduced row echelon form and pivot columns."""
    m = np.array(m, dtype=np.int64) % ell
    rows, cols = m.shape
    r = 0
    pivots = []
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if not nz.size:
            continue
        p = r + int(nz[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, ell)) % ell
        col = m[:, c].copy()
        col[r] = 0
        if col.any():
            m = (m - np.outer(col, m[r])) % ell
        pivots.append(c)
        r += 1
    return m[:r], pivots


def nullspace(m, ell):
    """Columns spanning {v : m v = 0}."""
    red, pivots = rref(m, ell)
    n = m.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        out[f, k] = 1
        for i, pc in enumerate(pivots):
            out[pc, k] = (-red[i, f]) % ell
    return out


def column_echelon(b, ell):
    """Basis with the same column span and rows ``pivots`` forming the identity."""
    red, pivots = rref(b.T, ell)
    return red.T.copy(), pivots


def charpoly(a, ell):
    """Characteristic polynomial of a square matrix, coefficients lowest first.

    Hessenberg reduction followed by the standard recurrence.
    """
    h = np.array(a, dtype=np.int64) % ell
    n = len(h)
    for m in range(1, n - 1):
        nz = np.nonzero(h[m:, m - 1])[0]
        if not nz.size:
            continue
        i = m + int(nz[0])
        if i != m:
            h[[i, m]] = h[[m, i]]
            h[:, [i, m]] = h[:, [m, i]]
        t_inv = pow(int(h[m, m - 1]), -1, ell)
        u = (h[m + 1:, m - 1] * t_inv) % ell
        if not u.any():
            continue
        h[m + 1:, :] = (h[m + 1:, :] - np.outer(u, h[m, :])) % ell
        h[:, m] = (h[:, m] + h[:, m + 1:] @ u) % ell
    polys = [np.array([1], dtype=np.int64)]
    for m in range(n):
        cur = np.zeros(m + 2, dtype=np.int64)
        prev = polys[m]
        cur[1:] = prev
        cur[:-1] = (cur[:-1] - h[m, m] * prev) % ell
        prod = 1
        for i in range(m - 1, -1, -1):
            prod = (prod * int(h[i + 1, i])) % ell
            if not prod:
                break
            coef = (int(h[i, m]) * prod) % ell
            if coef:
                cur[: i + 1] = (cur[: i + 1] - coef * polys[i]) % ell
        polys.append(cur % ell)
    return polys[n]


def roots(poly, ell):
    """All roots in F_ell by evaluating at every field element."""
    xs = np.arange(ell, dtype=np.int64)
    vals = np.zeros(ell, dtype=np.int64)
    for c in poly[::-1]:
        vals = (vals * xs + int(c)) % ell
    return [int(x) for x in np.nonzero(vals == 0)[0]]
