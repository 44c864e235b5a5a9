"""Pure-numpy implementations of the pairwise kernel reductions.

Same call signatures as the compiled module ``_kernels_cy``; the active
implementation is picked in :mod:`superlap.backend`.  All routines treat
``weights`` as a symmetric matrix with zero diagonal and ``tail`` as the
per-cell exterior weight, so a full reduction is

    sum_{i != j} W_ij f(u_i - u_j)  +  2 * sum_i tail_i * cell * f(u_i).

Row-blocked loops keep peak memory at ``block * n`` instead of ``n * n``.
"""

import numpy as np

_BLOCK = 512


def pairwise_weights(centers, h, expo):
    """Midpoint pair weights h^(2*dim) / |x_i - x_j|^expo with zero diagonal."""
    centers = np.ascontiguousarray(centers, dtype=np.float64)
    n, dim = centers.shape
    diff = centers[:, None, :] - centers[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    np.fill_diagonal(dist, 1.0)
    w = h ** (2 * dim) * dist**-expo
    np.fill_diagonal(w, 0.0)
    return w


def seminorm_power(weights, tail, cell, u, p):
    """sum_{i!=j} W_ij |u_i-u_j|^p + 2 sum_i tail_i cell |u_i|^p."""
    n = u.shape[0]
    acc = 0.0
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        d = np.abs(u[lo:hi, None] - u[None, :])
        acc += float(np.sum(weights[lo:hi] * d**p))
    return acc + 2.0 * cell * float(np.sum(tail * np.abs(u) ** p))


def pairing_power(weights, tail, cell, u, v, p):
    """sum_{i!=j} W_ij phi_p(u_i-u_j)(v_i-v_j) + 2 sum_i tail_i cell phi_p(u_i) v_i.

    phi_p(x) = |x|^(p-2) x, with phi_p(0) = 0 for p < 2.
    """
    n = u.shape[0]
    acc = 0.0
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        du = u[lo:hi, None] - u[None, :]
        dv = v[lo:hi, None] - v[None, :]
        acc += float(np.sum(weights[lo:hi] * _phi(du, p) * dv))
    return acc + 2.0 * cell * float(np.sum(tail * _phi(u, p) * v))


def dual_power(weights, tail, cell, u, p):
    """Pairings against every cell indicator: out_k = <A u, e_k> for one table.

    out_k = 2 sum_j W_kj phi_p(u_k - u_j) + 2 tail_k cell phi_p(u_k).
    """
    n = u.shape[0]
    out = np.empty(n)
    for lo in range(0, n, _BLOCK):
        hi = min(lo + _BLOCK, n)
        du = u[lo:hi, None] - u[None, :]
        out[lo:hi] = 2.0 * np.sum(weights[lo:hi] * _phi(du, p), axis=1)
    out += 2.0 * cell * tail * _phi(u, p)
    return out


def _phi(x, p):
    if p == 2.0:
        return x
    return np.sign(x) * np.abs(x) ** (p - 1.0)
