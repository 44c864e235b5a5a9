"""Pairings, potentials, energy, and weak-form residual for one problem.

The dissipative part pairs a function against test functions through the
measure-weighted Gagliardo forms; the lower-order terms are the plain
p-power and critical-power Lebesgue pairings.  Dual vectors are expressed
in cell-indicator coordinates: component i of a dual vector is the pairing
against the indicator of cell i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .kernel import table_for, seminorm_pow
from .measure import ValidatedMeasure

__all__ = [
    "CriticalExponentError",
    "Problem",
    "EnergyBreakdown",
    "rho_p",
    "rho_pow",
    "minus_pow",
    "pairing_Ap",
    "pairing_Lp",
    "pairing_Bp",
    "pairing_f",
    "dual_Ap",
    "dual_Lp",
    "energy",
    "residual",
    "residual_dual_norm",
    "eta_ratio",
]


class CriticalExponentError(ValueError):
    """The critical power Np/(N - s_sharp*p) is undefined (N <= s_sharp*p)."""


@dataclass(eq=False)
class Problem:
    """Domain + validated measure + exponents, with kernel tables per order."""

    domain: object
    measure: ValidatedMeasure
    p: float
    lam: float
    tables: dict
    p_star: float | None

    @classmethod
    def build(cls, domain, measure, p, lam=0.0):
        if p <= 1.0:
            raise ValueError("p must exceed 1")
        tables = {s: table_for(domain, s, p) for s in measure.orders}
        n, ssp = domain.dim, measure.s_sharp * p
        p_star = n * p / (n - ssp) if n > ssp else None
        return cls(domain, measure, float(p), float(lam), tables, p_star)

    def require_critical(self):
        if self.p_star is None:
            raise CriticalExponentError(
                f"need N > s_sharp*p for the critical power "
                f"(N={self.domain.dim}, s_sharp*p={self.measure.s_sharp * self.p})"
            )
        return self.p_star

    def with_lambda(self, lam):
        return Problem(self.domain, self.measure, self.p, float(lam),
                       self.tables, self.p_star)


def _phi(x, p):
    if p == 2.0:
        return x
    return np.sign(x) * np.abs(x) ** (p - 1.0)


def _grad_fields(d, u, p):
    full = np.pad(d.embed(u), 1)
    comps = [np.diff(full, axis=a, append=0.0) / d.h for a in range(d.dim)]
    mag2 = sum(c * c for c in comps)
    if p == 2.0:
        fac = np.ones_like(mag2)
    else:
        with np.errstate(divide="ignore"):
            fac = np.where(mag2 > 0.0, mag2 ** ((p - 2.0) / 2.0), 0.0)
    return comps, fac


def _atom_pairing(prob, t, u, v):
    d = prob.domain
    if t.s == 0.0:
        return d.cell * float(np.sum(_phi(u, t.p) * v))
    if t.s == 1.0:
        gu, fac = _grad_fields(d, u, t.p)
        gv, _ = _grad_fields(d, v, t.p)
        return d.cell * float(sum(np.sum(fac * a * b) for a, b in zip(gu, gv)))
    return t.c * backend.pairing_power(t.weights, t.tail, d.cell, u, v, t.p)


def _shift_plus(arr, axis):
    out = np.zeros_like(arr)
    dst = [slice(None)] * arr.ndim
    src = [slice(None)] * arr.ndim
    dst[axis] = slice(1, None)
    src[axis] = slice(0, -1)
    out[tuple(dst)] = arr[tuple(src)]
    return out


def _atom_dual(prob, t, u):
    d = prob.domain
    if t.s == 0.0:
        return d.cell * _phi(u, t.p)
    if t.s == 1.0:
        gu, fac = _grad_fields(d, u, t.p)
        acc = np.zeros_like(fac)
        for a, g in enumerate(gu):
            flux = fac * g
            acc += _shift_plus(flux, a) - flux
        inner = acc[tuple(slice(1, 1 + s) for s in d.shape)]
        return (d.cell / d.h) * inner[d.mask]
    return t.c * backend.dual_power(t.weights, t.tail, d.cell, u, t.p)


def rho_pow(u, prob):
    """Positive-part energy norm power: integral of [u]^p against the plus atoms."""
    return sum(a.weight * seminorm_pow(prob.domain, u, prob.tables[a.order])
               for a in prob.measure.plus_atoms)


def rho_p(u, prob):
    return rho_pow(u, prob) ** (1.0 / prob.p)


def minus_pow(u, prob):
    """Integral of [u]^p against the minus atoms (reported as a magnitude)."""
    return sum(a.weight * seminorm_pow(prob.domain, u, prob.tables[a.order])
               for a in prob.measure.minus_atoms)


def pairing_Ap(u, v, prob):
    u = np.ascontiguousarray(u, dtype=np.float64)
    v = np.ascontiguousarray(v, dtype=np.float64)
    return sum(a.weight * _atom_pairing(prob, prob.tables[a.order], u, v)
               for a in prob.measure.plus_atoms)


def pairing_Lp(u, v, prob):
    u = np.ascontiguousarray(u, dtype=np.float64)
    v = np.ascontiguousarray(v, dtype=np.float64)
    return sum(a.weight * _atom_pairing(prob, prob.tables[a.order], u, v)
               for a in prob.measure.minus_atoms)


def pairing_Bp(u, v, prob):
    return prob.domain.cell * float(np.sum(_phi(u, prob.p) * v))


def pairing_f(u, v, prob):
    q = prob.require_critical()
    return prob.domain.cell * float(np.sum(_phi(u, q) * v))


def dual_Ap(u, prob):
    """<A u, e_k> for every cell indicator e_k, as one vector."""
    u = np.ascontiguousarray(u, dtype=np.float64)
    out = np.zeros(prob.domain.n)
    for a in prob.measure.plus_atoms:
        out += a.weight * _atom_dual(prob, prob.tables[a.order], u)
    return out


def dual_Lp(u, prob):
    u = np.ascontiguousarray(u, dtype=np.float64)
    out = np.zeros(prob.domain.n)
    for a in prob.measure.minus_atoms:
        out += a.weight * _atom_dual(prob, prob.tables[a.order], u)
    return out


@dataclass(frozen=True)
class EnergyBreakdown:
    """Components of E(u); total = rho/p - minus/p - lam*lp/p - crit/p_star."""

    rho_pow: float
    minus_pow: float
    lp_pow: float
    crit_pow: float
    total: float


def energy(u, prob):
    q = prob.require_critical()
    d = prob.domain
    rp = rho_pow(u, prob)
    mp = minus_pow(u, prob)
    lp = d.cell * float(np.sum(np.abs(u) ** prob.p))
    cp = d.cell * float(np.sum(np.abs(u) ** q))
    total = (rp - mp - prob.lam * lp) / prob.p - cp / q
    return EnergyBreakdown(rp, mp, lp, cp, total)


def residual(u, prob):
    """Weak-form defect tested against every cell indicator; zero iff u solves."""
    q = prob.require_critical()
    u = np.ascontiguousarray(u, dtype=np.float64)
    r = dual_Ap(u, prob) - dual_Lp(u, prob)
    r -= prob.domain.cell * (prob.lam * _phi(u, prob.p) + _phi(u, q))
    return r


def residual_dual_norm(r, prob):
    """Dual p'-norm of a cell-indicator dual vector (density scaling h^dim)."""
    d = prob.domain
    q = prob.p / (prob.p - 1.0)
    return float(np.sum(np.abs(r / d.cell) ** q) * d.cell) ** (1.0 / q)


def eta_ratio(u, prob):
    """Measured negative-to-positive energy ratio p*N_p(u) / rho_p(u)^p."""
    rp = rho_pow(u, prob)
    if rp == 0.0:
        return 0.0
    return minus_pow(u, prob) / rp
