"""Numerical scans for the functional inequalities behind the method.

Every scan samples deterministically from a seed, writes one CSV
(sample id, inputs hash, LHS, RHS, ratio), and returns a ScanReport.
Scans that check a proved inequality must come back with zero violations;
scans that measure an existence-only constant report the empirical value
and only assert finiteness.

Deliberately absent: a compactness scan for the lower-order pairing.  On a
finite grid every operator is compact, so no discretization can probe that
property; it is taken as given rather than vacuously "verified".
"""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import lp_norm, test_function, volume
from .kernel import table_for, seminorm_pow
from .operators import minus_pow, rho_pow, rho_p

__all__ = [
    "ScanReport",
    "embedding_scan",
    "monotonicity_scan",
    "reabsorption_check",
    "convexity_modulus",
    "brezis_lieb_check",
    "scalar_inequalities",
    "limit_consistency",
    "growth_conditions_scan",
    "convexity_delta",
]


@dataclass
class ScanReport:
    name: str
    samples: int
    worst_ratio: float
    bound: float
    violations: int
    details: str
    extra: dict = field(default_factory=dict)


def _hash(*parts):
    md = hashlib.sha256()
    for part in parts:
        md.update(np.asarray(part, dtype=np.float64).tobytes())
    return md.hexdigest()[:12]


def _write_rows(out_dir, name, rows):
    path = Path(out_dir) / f"{name}.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["sample", "hash", "lhs", "rhs", "ratio"])
        w.writerows(rows)
    return str(path)


def _sample(d, rng, j):
    kind = ("random-smooth", "random-rough", "bump", "eigen-guess")[j % 4]
    u = test_function(kind, d, int(rng.integers(0, 2**31)))
    if not np.any(u != 0.0):
        u = test_function("random-rough", d, j + 1)
    return u


def embedding_scan(d, p, s_grid, n_samples, *, seed=0, out_dir="."):
    """Measured constant of ||u||_p <= C0 [u]_{s,p}, uniform over the s grid."""
    rng = np.random.default_rng(seed)
    tables = {s: table_for(d, s, p) for s in s_grid}
    rows, worst, violations = [], 0.0, 0
    k = 0
    for j in range(n_samples):
        u = _sample(d, rng, j)
        num = lp_norm(d, u, p)
        for s in s_grid:
            den = seminorm_pow(d, u, tables[s]) ** (1.0 / p)
            ratio = num / den if den > 0.0 else math.inf
            if not math.isfinite(ratio):
                violations += 1
            worst = max(worst, ratio)
            rows.append((k, _hash(u, [s]), num, den, ratio))
            k += 1
    path = _write_rows(out_dir, "embedding_scan", rows)
    return ScanReport("embedding_scan", k, worst, worst, violations, path)


def monotonicity_scan(d, p, pairs, n_samples, *, seed=0, out_dir="."):
    """Measured constant of [u]_{s,p} <= C [u]_{S,p} over order pairs s <= S."""
    for s, big in pairs:
        if s > big:
            raise ValueError(f"pair ({s}, {big}) is not ordered")
    rng = np.random.default_rng(seed)
    orders = sorted({s for pair in pairs for s in pair})
    tables = {s: table_for(d, s, p) for s in orders}
    rows, worst, violations = [], 0.0, 0
    k = 0
    for j in range(n_samples):
        u = _sample(d, rng, j)
        for s, big in pairs:
            lhs = seminorm_pow(d, u, tables[s]) ** (1.0 / p)
            rhs = seminorm_pow(d, u, tables[big]) ** (1.0 / p)
            ratio = lhs / rhs if rhs > 0.0 else math.inf
            if not math.isfinite(ratio):
                violations += 1
            worst = max(worst, ratio)
            rows.append((k, _hash(u, [s, big]), lhs, rhs, ratio))
            k += 1
    path = _write_rows(out_dir, "monotonicity_scan", rows)
    return ScanReport("monotonicity_scan", k, worst, worst, violations, path)


def reabsorption_check(prob, n_samples, *, seed=0, out_dir="."):
    """Negative part dominated: integral over minus atoms vs gamma * high mass.

    Ratio per sample is LHS / (gamma * RHS) with RHS the plus-part integral
    over orders >= s_bar; the worst ratio is the measured reabsorption
    constant.  Also measures eta = sup of (minus part)/(plus part).
    """
    m = prob.measure
    if m.gamma <= 0.0:
        raise ValueError("reabsorption check needs a nonempty negative part")
    d = prob.domain
    rng = np.random.default_rng(seed)
    high_atoms = [a for a in m.plus_atoms if a.order >= m.s_bar]
    rows, worst, violations, eta = [], 0.0, 0, 0.0
    for j in range(n_samples):
        u = _sample(d, rng, j)
        lhs = minus_pow(u, prob)
        rhs = sum(a.weight * seminorm_pow(d, u, prob.tables[a.order])
                  for a in high_atoms)
        if rhs == 0.0:
            ratio = math.inf if lhs > 0.0 else 0.0
            if lhs > 0.0:
                violations += 1
        else:
            ratio = lhs / (m.gamma * rhs)
            eta = max(eta, lhs / rho_pow(u, prob))
        worst = max(worst, ratio)
        rows.append((j, _hash(u), lhs, m.gamma * rhs, ratio))
    path = _write_rows(out_dir, "reabsorption_check", rows)
    return ScanReport("reabsorption_check", n_samples, worst, worst, violations,
                      path, extra={"eta": eta, "eta_below_one": eta < 1.0})


def convexity_delta(p, eps):
    """Uniform-convexity modulus: the guaranteed gap 2 - ||u + v||."""
    if p >= 2.0:
        return 2.0 - (2.0**p - eps**p) ** (1.0 / p)
    return 2.0 * (1.0 - (1.0 - eps * eps * p * (p - 1.0) / 8.0) ** (1.0 / p))


def convexity_modulus(prob, eps_grid, n_samples, *, seed=0, out_dir="."):
    """rho(u+v) <= 2 - delta(eps) for unit pairs with rho(u-v) >= eps."""
    d = prob.domain
    p = prob.p
    rng = np.random.default_rng(seed)
    rows, worst, violations = [], 0.0, 0
    k = 0
    for eps in eps_grid:
        bound = 2.0 - convexity_delta(p, eps)
        got = 0
        tries = 0
        while got < n_samples and tries < 50 * n_samples:
            u = _sample(d, rng, tries)
            v = _sample(d, rng, tries + 1)
            tries += 2
            nu, nv = rho_p(u, prob), rho_p(v, prob)
            if nu == 0.0 or nv == 0.0:
                continue
            u, v = u / nu, v / nv
            if rho_p(u - v, prob) < eps:
                continue
            lhs = rho_p(u + v, prob)
            ratio = lhs / bound
            if lhs > bound + 1e-12:
                violations += 1
            worst = max(worst, ratio)
            rows.append((k, _hash(u, v, [eps]), lhs, bound, ratio))
            k += 1
            got += 1
        if got < n_samples:
            raise RuntimeError(f"rejection sampling starved at eps={eps}")
    path = _write_rows(out_dir, "convexity_modulus", rows)
    return ScanReport("convexity_modulus", k, worst, 1.0, violations, path)


def _offset_bump(d, width, amp):
    """Smooth bump of fixed amplitude at an off-center anchor, given width."""
    pts = d.centers()
    prof = np.ones(d.n)
    for a in range(d.dim):
        lo, hi = d.box[a]
        x0 = lo + 0.7 * (hi - lo)
        xi = (pts[:, a] - x0) / width
        prof *= np.where(np.abs(xi) < 1.0,
                         np.exp(1.0 - 1.0 / (1.0 - np.minimum(xi * xi, 1.0 - 1e-12))),
                         0.0)
    return amp * prof


def brezis_lieb_check(prob, bump_widths, *, amp=0.05, out_dir="."):
    """Splitting identity under vanishing perturbations, both measure parts.

    u is a fixed smooth bump; the perturbations keep their amplitude while
    their support shrinks (pointwise convergence off a vanishing set).  The
    identity residual |M(u) - (M(u_n) - M(u_n - u))| must decay along the
    widths and end below 1e-2 of M(u).
    """
    d = prob.domain
    u = test_function("bump", d)
    parts = [("plus", lambda v: rho_pow(v, prob))]
    if prob.measure.minus_atoms:
        parts.append(("minus", lambda v: minus_pow(v, prob)))
    rows, worst, violations = [], 0.0, 0
    finals = {}
    k = 0
    for name, msr in parts:
        base = msr(u)
        residuals = []
        for width in bump_widths:
            w = _offset_bump(d, width, amp)
            un = u + w
            got = msr(un) - msr(un - u)
            rel = abs(base - got) / base
            residuals.append(rel)
            worst = max(worst, rel)
            rows.append((k, _hash(un, [width]), base, got, rel))
            k += 1
        finals[name] = residuals[-1]
        if residuals[-1] > 1e-2:
            violations += 1
    path = _write_rows(out_dir, "brezis_lieb_check", rows)
    return ScanReport("brezis_lieb_check", k, worst, 1e-2, violations, path,
                      extra={f"final_{n}": v for n, v in finals.items()})


def _phi_ratio(t, p):
    return abs(abs(1.0 + t) ** (p - 2.0) * (1.0 + t) - 1.0) / abs(t) ** (p - 1.0)


def _sup_phi(p, n_grid=4001):
    """Sharp constant sup_t phi(t) over both signs, golden-refined at the peak."""
    grid = np.concatenate([-np.logspace(-6, 6, n_grid), np.logspace(-6, 6, n_grid)])
    grid = grid[np.abs(1.0 + grid) > 1e-14]
    vals = np.array([_phi_ratio(t, p) for t in grid])
    i = int(np.argmax(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    gr = 0.5 * (math.sqrt(5.0) - 1.0)
    a, b = min(lo, hi), max(lo, hi)
    c, dd = b - gr * (b - a), a + gr * (b - a)
    fc, fd = _phi_ratio(c, p), _phi_ratio(dd, p)
    for _ in range(200):
        if fc >= fd:
            b, dd, fd = dd, c, fc
            c = b - gr * (b - a)
            fc = _phi_ratio(c, p)
        else:
            a, c, fc = c, dd, fd
            dd = a + gr * (b - a)
            fd = _phi_ratio(dd, p)
    peak = _phi_ratio(0.5 * (a + b), p)
    return max(float(vals.max()), peak)


def scalar_inequalities(n_samples, *, p_over=3.0, p_under=1.5, seed=0, out_dir="."):
    """Pointwise inequalities on random scalar pairs; returns one report each.

    - parallelogram-type power bound at p >= 2,
    - odd-power difference bound with the (p-1)-weighted constant at p > 2,
    - odd-power difference bound |phi(a)-phi(b)| <= C |a-b|^(p-1) at p < 2,
      with C the measured sup of the scaled one-variable ratio.
    """
    rng = np.random.default_rng(seed)
    a = rng.uniform(-10.0, 10.0, size=n_samples)
    b = rng.uniform(-10.0, 10.0, size=n_samples)
    reports = []

    def phi(x, p):
        return np.sign(x) * np.abs(x) ** (p - 1.0)

    # |a+b|^p + |a-b|^p <= 2^(p-1) (|a|^p + |b|^p), p >= 2
    p = p_over
    lhs = np.abs(a + b) ** p + np.abs(a - b) ** p
    rhs = 2.0 ** (p - 1.0) * (np.abs(a) ** p + np.abs(b) ** p)
    viol = int(np.sum(lhs > rhs * (1.0 + 1e-12) + 1e-300))
    ratio = np.where(rhs > 0.0, lhs / rhs, 0.0)
    rows = [(j, _hash([a[j], b[j]]), lhs[j], rhs[j], ratio[j])
            for j in range(0, n_samples, max(1, n_samples // 2000))]
    path = _write_rows(out_dir, "scalar_power_mean", rows)
    reports.append(ScanReport("scalar_power_mean", n_samples,
                              float(ratio.max()), 1.0, viol, path))

    # |phi(a) - phi(b)| <= (p-1)(|a|^(p-2) + |b|^(p-2)) |a-b|, p > 2
    lhs = np.abs(phi(a, p) - phi(b, p))
    rhs = (p - 1.0) * (np.abs(a) ** (p - 2.0) + np.abs(b) ** (p - 2.0)) * np.abs(a - b)
    viol = int(np.sum(lhs > rhs * (1.0 + 1e-12) + 1e-300))
    ratio = np.where(rhs > 0.0, lhs / rhs, 0.0)
    rows = [(j, _hash([a[j], b[j]]), lhs[j], rhs[j], ratio[j])
            for j in range(0, n_samples, max(1, n_samples // 2000))]
    path = _write_rows(out_dir, "scalar_difference_bound", rows)
    reports.append(ScanReport("scalar_difference_bound", n_samples,
                              float(ratio.max()), 1.0, viol, path))

    # |phi(a) - phi(b)| <= C |a-b|^(p-1), p in (1, 2), C measured
    p = p_under
    c_star = _sup_phi(p)
    lhs = np.abs(phi(a, p) - phi(b, p))
    rhs = (c_star + 1e-12) * np.abs(a - b) ** (p - 1.0)
    mask = np.abs(a - b) > 0.0
    viol = int(np.sum(lhs[mask] > rhs[mask]))
    ratio = np.where(mask, lhs / np.maximum(rhs, 1e-300), 0.0)
    rows = [(j, _hash([a[j], b[j]]), lhs[j], rhs[j], ratio[j])
            for j in range(0, n_samples, max(1, n_samples // 2000))]
    path = _write_rows(out_dir, "scalar_subquadratic_bound", rows)
    lim_inf = _phi_ratio(1e9, p), _phi_ratio(-1e9, p)
    lim_zero = _phi_ratio(1e-9, p), _phi_ratio(-1e-9, p)
    reports.append(ScanReport(
        "scalar_subquadratic_bound", n_samples, float(ratio.max()), 1.0, viol,
        path,
        extra={
            "c_star": c_star,
            "limit_inf_err": max(abs(v - 1.0) for v in lim_inf),
            "limit_zero_err": max(abs(v) for v in lim_zero),
        },
    ))
    return reports


def limit_consistency(d, p, u=None, *, s_low=1e-3, s_high=(0.9, 0.99, 0.999),
                      out_dir="."):
    """Order limits: seminorm approaches its closed-form s -> 0 value.

    The s -> 0 limit of the normalized seminorm is the Lebesgue norm scaled
    by low_order_limit_factor(dim, p)^(1/p); the measured value at s_low
    must sit within 5% of it.  The approach toward the gradient norm as
    s -> 1 is reported as a trend, not asserted at fixed h.
    """
    from .kernel import low_order_limit_factor

    if u is None:
        u = test_function("bump", d)
    leb = lp_norm(d, u, p) * low_order_limit_factor(d.dim, p) ** (1.0 / p)
    rows = []
    low_val = seminorm_pow(d, u, table_for(d, s_low, p)) ** (1.0 / p)
    rel = abs(low_val - leb) / leb
    violations = int(rel > 0.05)
    rows.append((0, _hash(u, [s_low]), low_val, leb, rel))
    grad = seminorm_pow(d, u, table_for(d, 1.0, p)) ** (1.0 / p)
    trend = []
    for k, s in enumerate(s_high, start=1):
        val = seminorm_pow(d, u, table_for(d, s, p)) ** (1.0 / p)
        trend.append(val)
        rows.append((k, _hash(u, [s]), val, grad, val / grad))
    path = _write_rows(out_dir, "limit_consistency", rows)
    return ScanReport("limit_consistency", len(rows), rel, 0.05, violations, path,
                      extra={"toward_gradient": trend, "gradient_norm": grad})


def growth_conditions_scan(prob, n_samples, *, seed=0, out_dir="."):
    """Critical-potential growth: vanishing order at zero and the Hoelder floor.

    F(tu)/rho(tu)^p must vanish as t -> 0 (checked along a decreasing scale
    ladder) and F(u) >= (beta/q)(p J_p(u))^(q/p) with q the critical power
    and beta = |Omega|^(-(q-p)/p) must hold exactly.
    """
    q = prob.require_critical()
    d = prob.domain
    p = prob.p
    beta = volume(d) ** (-(q - p) / p)
    rng = np.random.default_rng(seed)
    rows, worst, violations = [], 0.0, 0
    k = 0
    for j in range(n_samples):
        u = _sample(d, rng, j)
        crit = d.cell * float(np.sum(np.abs(u) ** q))
        lebp = d.cell * float(np.sum(np.abs(u) ** p))
        f_val = crit / q
        floor = (beta / q) * lebp ** (q / p)
        ratio = floor / f_val if f_val > 0.0 else 0.0
        if f_val + 1e-300 < floor * (1.0 - 1e-12):
            violations += 1
        worst = max(worst, ratio)
        rows.append((k, _hash(u), f_val, floor, ratio))
        k += 1
        # vanishing order: small-ball ratios decrease strictly along t -> 0
        rp = rho_pow(u, prob)
        if rp > 0.0:
            prev = math.inf
            for t in (1.0, 0.5, 0.25, 0.125, 0.0625):
                val = (t**q * crit / q) / (t**p * rp)
                if val >= prev * (1.0 + 1e-12):
                    violations += 1
                prev = val
            rows.append((k, _hash(u, [0.0625]), prev, 0.0, prev))
            k += 1
    path = _write_rows(out_dir, "growth_conditions", rows)
    return ScanReport("growth_conditions", k, worst, 1.0, violations, path)
