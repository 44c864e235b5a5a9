"""Shared fixtures and independent oracles for the test suite.

Oracles here deliberately re-derive quantities through a different route
than the library: plain Python double loops for seminorm sums, dense matrix
eigensolves for p = 2 spectra, and high-precision special functions for
constants.
"""

import math

import numpy as np
import pytest

from superlap.grid import Domain
from superlap.measure import MeasureAtom, SpectralMeasure, validate
from superlap.operators import Problem


@pytest.fixture
def interval24():
    return Domain.interval(0.0, 1.0, 24)


@pytest.fixture
def interval48():
    return Domain.interval(0.0, 1.0, 48)


def make_problem(domain, atoms, s_bar, p, lam=0.0):
    """atoms: list of (order, signed weight)."""
    m = SpectralMeasure.from_signed_atoms(
        [MeasureAtom(s, w) for s, w in atoms]
    )
    return Problem.build(domain, validate(m, s_bar), p, lam)


def brute_seminorm_pow(d, u, s, p, c):
    """Loop-and-quadrature re-derivation of the fractional seminorm power.

    Interior pairs via the midpoint rule; exterior tails from the analytic
    complement integral in 1-d, and in 2-d from an explicit exterior-cell
    sweep inside the per-cell covering radius plus the exact radial
    remainder.
    """
    x = d.centers()
    n = d.n
    sp = s * p
    acc = 0.0
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            dist = math.dist(x[i], x[j])
            acc += d.h ** (2 * d.dim) * abs(u[i] - u[j]) ** p / dist ** (d.dim + sp)
    tails = brute_tails(d, sp)
    for i in range(n):
        acc += 2.0 * tails[i] * d.cell * abs(u[i]) ** p
    return c * acc


def brute_tails(d, sp):
    x = d.centers()
    tails = []
    if d.dim == 1:
        (a, b), = d.box
        axis = d.axis_centers(0)
        holes = [axis[k] for k in range(d.shape[0]) if not d.mask[k]]
        for xi in x[:, 0]:
            t = ((xi - a) ** -sp + (b - xi) ** -sp) / sp
            for hx in holes:
                t += d.h * abs(xi - hx) ** -(1.0 + sp)
            tails.append(t)
        return tails
    corners = [(cx, cy) for cx in d.box[0] for cy in d.box[1]]
    covers = [max(math.dist(pt, c) for c in corners) + d.h for pt in x]
    pad = int(math.ceil(max(covers) / d.h)) + 1
    nx, ny = d.shape
    for i, pt in enumerate(x):
        t = 0.0
        for gi in range(-pad, nx + pad):
            for gj in range(-pad, ny + pad):
                if 0 <= gi < nx and 0 <= gj < ny and d.mask[gi, gj]:
                    continue
                yc = (d.box[0][0] + d.h * (gi + 0.5), d.box[1][0] + d.h * (gj + 0.5))
                dist = math.dist(pt, yc)
                if dist <= covers[i]:
                    t += d.h**2 * dist ** -(2.0 + sp)
        t += 2.0 * math.pi * covers[i] ** -sp / sp
        tails.append(t)
    return tails


def dense_form_matrix(prob):
    """p = 2 oracle: matrix K with rho_2(u)^2 = u^T K u, from the table data."""
    assert prob.p == 2.0
    d = prob.domain
    n = d.n
    K = np.zeros((n, n))
    for atom in prob.measure.plus_atoms:
        t = prob.tables[atom.order]
        assert t.fractional, "dense oracle covers fractional atoms"
        W = t.weights
        K += atom.weight * t.c * (
            2.0 * (np.diag(W.sum(axis=1)) - W) + 2.0 * np.diag(t.tail) * d.cell
        )
    return K


def dense_eigs(prob):
    """Generalized symmetric eigensolve of the assembled quadratic form."""
    K = dense_form_matrix(prob)
    return np.linalg.eigvalsh(K / prob.domain.cell)
