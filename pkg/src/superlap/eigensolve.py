"""First eigenpair, heuristic second eigenvalue, Sobolev constant, thresholds.

The principal eigenvalue is the minimum of the Rayleigh quotient

    R(u) = rho_p(u)^p / ||u||_p^p

over nonzero zero-extended functions; it is found by projected gradient
descent from a positive start, which for this class of operators converges
to the positive ground state uniformly in p.  The Sobolev constant uses the
same descent with the critical-norm constraint.  Both quotients are
0-homogeneous, so line searches act on rays and normalization is only for
conditioning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import lp_norm, test_function, volume
from .operators import dual_Ap, rho_pow, _phi

__all__ = [
    "EigenReport",
    "ThresholdReport",
    "lambda1",
    "lambda2_estimate",
    "sobolev_constant",
    "thresholds",
]


@dataclass
class EigenReport:
    lambda1: float
    u1: np.ndarray
    iterations: int
    rayleigh_history: list
    converged: bool


def _rayleigh_descent(prob, u0, weight_expo, *, support=None, constrain=None,
                      max_iter=20000, step0=1.0, armijo=1e-4, window=20,
                      rtol=1e-12):
    """Minimize rho_pow(u) / (sum |u|^q cell)^(p/q) by projected descent.

    weight_expo q is p for the eigenvalue and p_star for the Sobolev
    constant.  ``support`` restricts iterates (and gradients) to a cell
    subset; ``constrain`` is an optional linear projector applied to both.
    Returns (value, u, history, converged, iterations).
    """
    d = prob.domain
    p, q = prob.p, float(weight_expo)
    u = np.array(u0, dtype=np.float64)
    if support is not None:
        u = np.where(support, u, 0.0)
    if constrain is not None:
        u = constrain(u)

    def norm_q(v):
        return float(np.sum(np.abs(v) ** q) * d.cell) ** (1.0 / q)

    def value(v):
        return rho_pow(v, prob) / norm_q(v) ** p

    u /= norm_q(u)
    val = value(u)
    history = [(0, val, 0.0)]
    converged = False
    it = 0
    step_start = step0
    for it in range(1, max_iter + 1):
        dens = dual_Ap(u, prob) / d.cell
        g = dens - val * _phi(u, q)
        if support is not None:
            g = np.where(support, g, 0.0)
        if constrain is not None:
            g = constrain(g)
        slope = p * d.cell * float(np.sum(g * g))
        if slope == 0.0:
            converged = True
            break
        step = step_start
        accepted = False
        for _ in range(60):
            cand = u - step * g
            ncand = norm_q(cand)
            if ncand > 0.0:
                cval = value(cand)
                if cval <= val - armijo * step * slope:
                    u = cand / ncand
                    val = cval
                    accepted = True
                    break
            step *= 0.5
        if accepted:
            # warm-start the next search near the accepted scale
            step_start = min(2.0 * step, step0)
        history.append((it, val, step if accepted else 0.0))
        if not accepted:
            converged = True
            break
        if it >= window:
            past = history[-(window + 1)][1]
            if (past - val) <= rtol * max(abs(val), 1e-300):
                converged = True
                break
    return val, u, history, converged, it


def lambda1(prob, *, max_iter=50000, step0=1.0, window=20, rtol=1e-12, seed=0):
    """Principal eigenvalue and eigenfunction (normalized ||u||_p = 1)."""
    u0 = test_function("eigen-guess", prob.domain, seed)
    val, u, history, converged, it = _rayleigh_descent(
        prob, u0, prob.p, max_iter=max_iter, step0=step0, window=window, rtol=rtol
    )
    u = u / lp_norm(prob.domain, u, prob.p)
    return EigenReport(val, u, it, history, converged)


def _restricted_min(prob, support, seed, **kw):
    u0 = test_function("eigen-guess", prob.domain, seed) * support
    if not np.any(u0 != 0.0):
        u0 = test_function("random-rough", prob.domain, seed) * support
    return _rayleigh_descent(prob, u0, prob.p, support=support, **kw)


def lambda2_estimate(prob, *, splits=9, angle_steps=33, seed=0, max_iter=6000,
                     rtol=1e-10, polish_iter=20000):
    """HEURISTIC second eigenvalue: minimax over sign-split two-bump families.

    For each candidate split of the domain along the first axis, minimize the
    Rayleigh quotient on each side separately and take the worst quotient
    over the span of the side minimizers; the best sign-changing mixture then
    seeds a descent constrained orthogonal to the ground state in the p-power
    pairing (exact deflation at p = 2).  Always at least lambda1: every
    Rayleigh value is.  No spectral certification is attached.
    """
    d = prob.domain
    x0 = prob.domain.centers()[:, 0]
    lo, hi = x0.min(), x0.max()
    cuts = np.linspace(lo, hi, splits + 2)[1:-1]
    p = prob.p

    def quotient(v):
        nq = lp_norm(d, v, p)
        return rho_pow(v, prob) / nq**p

    best = np.inf
    best_mix = None
    for xi in cuts:
        left = x0 < xi
        right = ~left
        if not left.any() or not right.any():
            continue
        valL, uL, *_ = _restricted_min(prob, left, seed, max_iter=max_iter, rtol=rtol)
        valR, uR, *_ = _restricted_min(prob, right, seed, max_iter=max_iter, rtol=rtol)
        span_max = max(valL, valR)
        mix, mix_val = uL - uR, quotient(uL - uR)
        for th in np.linspace(0.0, np.pi, angle_steps, endpoint=False)[1:]:
            w = np.cos(th) * uL - np.sin(th) * uR
            if not np.any(w != 0.0):
                continue
            q = quotient(w)
            span_max = max(span_max, q)
            if q < mix_val:
                mix, mix_val = w, q
        if span_max < best:
            best = span_max
            best_mix = mix
    if best_mix is None:
        return float(best)

    ground = lambda1(prob, seed=seed).u1
    weight = _phi(ground, p)
    denom = float(np.sum(weight * ground))

    def deflate(v):
        return v - (float(np.sum(weight * v)) / denom) * ground

    val, _, _, _, _ = _rayleigh_descent(
        prob, deflate(best_mix), p, max_iter=polish_iter, rtol=rtol,
        constrain=deflate,
    )
    return float(min(best, max(val, 0.0)))


def sobolev_constant(prob, *, n_starts=5, max_iter=20000, rtol=1e-11, seed=0,
                     return_runs=False):
    """Best constant of the critical embedding on the grid (upper surrogate).

    Minimizes the plus-part seminorm power over ||u||_{p_star} = 1 with
    multi-start projected descent; the infimum over grid functions supported
    in Omega upper-bounds the whole-space constant.
    """
    q = prob.require_critical()
    runs = []
    kinds = ["bump", "eigen-guess", "random-smooth", "random-smooth", "random-rough"]
    for k in range(n_starts):
        kind = kinds[k % len(kinds)]
        u0 = test_function(kind, prob.domain, seed + k)
        if not np.any(u0 != 0.0):
            continue
        val, _, hist, conv, it = _rayleigh_descent(
            prob, u0, q, max_iter=max_iter, rtol=rtol
        )
        runs.append((k, kind, val, it, conv))
    best = min(r[2] for r in runs)
    if return_runs:
        return best, runs
    return best


@dataclass
class ThresholdReport:
    """Compactness threshold, admissible window, and window membership."""

    sobolev: float
    c_star: float
    theta0: float
    window_lo: float
    window_hi: float
    lambda_l: float
    lam: float
    in_window: bool
    theta_valid: bool
    gamma_diag: float
    l: int = 1


def thresholds(prob, l, lambda_l, *, sobolev=None, n_starts=5, seed=0):
    """Threshold algebra for a given eigenvalue level lambda_l.

    theta0 = (1 - |Omega|^(s_sharp p / N) (lambda_l - lambda) / S) / 2 and
    c_star = (s_sharp/N) ((1 - theta0) S)^(N/(s_sharp p)).  A lambda outside
    the window makes theta0 leave (0, 1); that is reported, not raised.
    """
    prob.require_critical()
    s_sharp = prob.measure.s_sharp
    n = prob.domain.dim
    S = sobolev if sobolev is not None else sobolev_constant(
        prob, n_starts=n_starts, seed=seed
    )
    vol = volume(prob.domain)
    expo = s_sharp * prob.p / n
    window_lo = lambda_l - S / vol**expo
    theta0 = 0.5 * (1.0 - vol**expo * (lambda_l - prob.lam) / S)
    c_star = (s_sharp / n) * ((1.0 - theta0) * S) ** (n / (s_sharp * prob.p))
    return ThresholdReport(
        sobolev=S,
        c_star=c_star,
        theta0=theta0,
        window_lo=window_lo,
        window_hi=lambda_l,
        lambda_l=lambda_l,
        lam=prob.lam,
        in_window=window_lo < prob.lam < lambda_l,
        theta_valid=0.0 < theta0 < 1.0,
        gamma_diag=prob.measure.gamma,
        l=l,
    )
