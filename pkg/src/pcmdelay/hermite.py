"""
Probabilists' Hermite polynomials He_k and the tensor-product chaos basis.

He_0 = 1, He_1 = x, He_{k+1} = x He_k - k He_{k-1}; orthogonal under the
standard normal density with E[He_j He_k] = k! delta_jk.
"""

from __future__ import annotations

import math
from itertools import product

import numpy as np

from .errors import RootRangeError, ShapeError

MAX_ROOT_ORDER = 12


def hermite_eval(k, xi):
    """He_k evaluated at ``xi`` (scalar or array) by the three-term recurrence."""
    if k < 0:
        raise ValueError("k must be >= 0")
    x = np.asarray(xi, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        cur = prev
    else:
        cur = x.copy()
        for j in range(1, k):
            prev, cur = cur, x * cur - j * prev
    return float(cur) if cur.ndim == 0 else cur


def hermite_table(xi, kmax):
    """All He_0..He_kmax at ``xi``; result has a trailing axis of length kmax+1."""
    x = np.asarray(xi, dtype=float)
    out = np.empty(x.shape + (kmax + 1,))
    out[..., 0] = 1.0
    if kmax >= 1:
        out[..., 1] = x
    for j in range(1, kmax):
        out[..., j + 1] = x * out[..., j] - j * out[..., j - 1]
    return out


def _hermite_deriv(k, x):
    # He_k' = k He_{k-1}
    return k * hermite_eval(k - 1, x)


def hermite_roots(k):
    """Sorted real roots of He_k for 1 <= k <= 12.

    Eigenvalues of the symmetric Jacobi matrix (off-diagonal sqrt(j)), one
    Newton step, then exact symmetrisation so that roots == -roots[::-1] and
    the middle root of an odd order is exactly 0.
    """
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= MAX_ROOT_ORDER):
        raise RootRangeError(f"root order must be an integer in 1..{MAX_ROOT_ORDER}, got {k!r}")
    k = int(k)
    off = np.sqrt(np.arange(1, k, dtype=float))
    jac = np.diag(off, 1) + np.diag(off, -1)
    r = np.sort(np.linalg.eigvalsh(jac))
    r = r - hermite_eval(k, r) / _hermite_deriv(k, r)
    r = 0.5 * (r - r[::-1])
    if k % 2:
        r[k // 2] = 0.0
    return r


def total_degree(idx):
    return sum(idx)


def _term_key(idx):
    active = sum(1 for e in idx if e)
    return (sum(idx), active, tuple(-e for e in idx))


def basis_terms(n, d):
    """Multi-indices of total degree <= d in n variables.

    Ordered by total degree, then by number of active variables (pure powers
    before interactions), then by exponent tuple descending so variable 1
    comes first. For n = 2, d = 2 this gives
    1, x1, x2, x1^2-1, x2^2-1, x1*x2.
    """
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    terms = [t for t in product(range(d + 1), repeat=n) if sum(t) <= d]
    terms.sort(key=_term_key)
    return terms


def basis_size(n, d):
    return math.comb(n + d, d)


def basis_eval(idx, xi):
    """Product of He_{k_i}(xi_i) over dimensions.

    ``xi`` is a length-n vector or an (N, n) array of points.
    """
    x = np.asarray(xi, dtype=float)
    if x.shape[-1:] != (len(idx),):
        raise ShapeError(f"multi-index has {len(idx)} dims, point has shape {x.shape}")
    val = np.ones(x.shape[:-1])
    for i, k in enumerate(idx):
        if k:
            val = val * hermite_eval(k, x[..., i])
    return float(val) if val.ndim == 0 else val


def basis_matrix(terms, points):
    """Psi[j, t] = basis_eval(terms[t], points[j]) for an (N, n) point array."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = len(terms[0])
    if pts.shape[1] != n:
        raise ShapeError(f"basis has {n} dims, points have {pts.shape[1]}")
    kmax = max(max(t) for t in terms)
    tab = hermite_table(pts, kmax)  # (N, n, kmax+1)
    out = np.ones((pts.shape[0], len(terms)))
    for t, idx in enumerate(terms):
        for i, k in enumerate(idx):
            if k:
                out[:, t] *= tab[:, i, k]
    return out


def basis_norm_sq(idx):
    """E[Psi_idx(xi)^2] = prod k_i!."""
    return float(math.prod(math.factorial(k) for k in idx))
