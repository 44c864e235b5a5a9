"""Mountain-pass search for nontrivial critical pairs of the critical energy.

Geometry first: along the ray through a unit-norm direction the energy rises
like t^p and falls like t^q (q the critical power), so it has a single peak
and a zero crossing.  ``mountain_pass_path`` locates both.  ``descend`` then
runs Armijo-certified descent with limited quasi-Newton memory; whenever a
ray has the rise-and-fall shape the iterate is rescaled to its ray peak
after each step, which turns the saddle search into a minimization over
peak values and keeps the search from sliding past the critical point.
Solutions come in pairs (u, -u) because the energy is even.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import lp_norm, test_function, volume
from .operators import (
    energy,
    eta_ratio,
    residual,
    residual_dual_norm,
    rho_p,
)

__all__ = [
    "NoCrossing",
    "Diverged",
    "SolveError",
    "SolveReport",
    "peak_bound",
    "mountain_pass_path",
    "descend",
    "find_pair",
]

_R_CAP = 2.0**40


class NoCrossing(RuntimeError):
    """The energy never drops to zero along the search ray."""


class Diverged(RuntimeError):
    """Energy fell below -1e12: lambda or grid misconfigured."""


class SolveError(RuntimeError):
    """A solve finished without meeting its acceptance checks."""


@dataclass
class SolveReport:
    u: np.ndarray
    energy: float
    residual_norm: float
    iterations: int
    ps_trace: list
    below_cstar: bool
    nontrivial: bool
    converged: bool
    eta: float = 0.0
    reliable: bool = True


def peak_bound(prob, lambda_l):
    """Closed-form ceiling for ray peaks from sub-level directions.

    With q the critical power and beta = |Omega|^(-(q-p)/p), rays through
    directions whose Rayleigh quotient is at most lambda_l satisfy
    max_t E(t u) <= (1/p - 1/q) ((lambda_l - lambda) / beta^(p/q))^(q/(q-p)).
    """
    q = prob.require_critical()
    p = prob.p
    beta = volume(prob.domain) ** (-(q - p) / p)
    gap = lambda_l - prob.lam
    if gap <= 0.0:
        return math.inf
    return (1.0 / p - 1.0 / q) * (gap / beta ** (p / q)) ** (q / (q - p))


def _golden_max(f, a, b, iters=100):
    gr = 0.5 * (math.sqrt(5.0) - 1.0)
    c = b - gr * (b - a)
    d = a + gr * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - gr * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + gr * (b - a)
            fd = f(d)
    t = 0.5 * (a + b)
    return t, f(t)


def mountain_pass_path(prob, direction):
    """Scale a direction past its energy zero-crossing and locate the ray peak.

    The direction is normalized to the unit sphere of the energy norm; a
    doubling search finds R with E(R u) <= 0, then a golden-section pass
    maximizes t -> E(t R u) on [0, 1].  Returns (R, t_peak, E_peak).
    """
    direction = np.asarray(direction, dtype=np.float64)
    nrm = rho_p(direction, prob)
    if nrm == 0.0:
        raise ValueError("direction must be nonzero")
    u = direction / nrm

    def e_at(scale):
        return energy(scale * u, prob).total

    r = 1.0
    while e_at(r) > 0.0:
        r *= 2.0
        if r > _R_CAP:
            raise NoCrossing("energy stayed positive along the ray")
    t_peak, e_peak = _golden_max(lambda t: e_at(t * r), 0.0, 1.0)
    return r, t_peak, e_peak


def _nehari_scale(u, prob):
    """Peak scale along the ray through u, or None when the ray has no peak."""
    eb = energy(u, prob)
    a = eb.rho_pow - eb.minus_pow - prob.lam * eb.lp_pow
    if a <= 0.0 or eb.crit_pow <= 0.0:
        return None
    q = prob.p_star
    return (a / eb.crit_pow) ** (1.0 / (q - prob.p))


def _lbfgs_direction(g, mem):
    """Two-loop recursion; falls back to g when the memory is empty."""
    if not mem:
        return g
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(mem):
        a = rho * float(np.sum(s * q))
        alphas.append(a)
        q -= a * y
    s, y, rho = mem[-1]
    q *= float(np.sum(s * y) / np.sum(y * y))
    for (s, y, rho), a in zip(mem, reversed(alphas)):
        b = rho * float(np.sum(y * q))
        q += (a - b) * s
    return q


def descend(prob, u0, tol, *, max_iter=20000, step0=1.0, armijo=1e-4,
            c_star=None, ray_rescale=True, memory=10):
    """Energy descent with Armijo backtracking and per-step ray rescaling.

    Stops when the residual dual norm falls below ``tol`` (or at max_iter).
    ``ray_rescale`` moves each accepted iterate to the peak of its own ray,
    keeping the trace on the set where ray derivatives vanish; the recorded
    energies decrease monotonically (Armijo condition on the rescaled
    point).  Search directions carry limited quasi-Newton memory: plain
    gradient steps flatline near the critical point because their per-step
    energy decrease drops below double-precision resolution of E, so the
    curvature-scaled direction is what reaches tight residual tolerances.
    Raises Diverged when the energy falls below -1e12.
    """
    prob.require_critical()
    d = prob.domain
    u = np.array(u0, dtype=np.float64)
    if lp_norm(d, u, prob.p) <= 1e-300:
        zero = np.zeros(d.n)
        return SolveReport(zero, 0.0, 0.0, 0, [(0, 0.0, 0.0, 0.0)],
                           False, False, True)

    def project(v):
        if not ray_rescale:
            return v
        t = _nehari_scale(v, prob)
        return v if t is None else t * v

    u = project(u)
    eb = energy(u, prob)
    trace = []
    converged = False
    it = 0
    step_used = 0.0
    step_start = step0
    mem = []
    prev_u = prev_g = None
    for it in range(max_iter):
        r = residual(u, prob)
        rn = residual_dual_norm(r, prob)
        trace.append((it, eb.total, rn, step_used))
        if rn <= tol:
            converged = True
            break
        if eb.total < -1e12:
            raise Diverged("energy below -1e12")
        g = r / d.cell
        if prev_u is not None:
            s, y = u - prev_u, g - prev_g
            sy = float(np.sum(s * y))
            if sy > 1e-12 * math.sqrt(float(np.sum(s * s)) * float(np.sum(y * y))):
                mem.append((s, y, 1.0 / sy))
                if len(mem) > memory:
                    mem.pop(0)
        prev_u, prev_g = u, g
        accepted = False
        for direction, start in ((_lbfgs_direction(g, mem), 1.0),
                                 (g, step_start)):
            slope = d.cell * float(np.sum(g * direction))
            if slope <= 0.0:
                continue
            step = start
            for _ in range(60):
                cand = project(u - step * direction)
                ec = energy(cand, prob)
                if ec.total <= eb.total - armijo * step * slope:
                    u, eb = cand, ec
                    accepted = True
                    break
                step *= 0.5
            if accepted:
                break
        if not accepted:
            # terminal regime: energy decrements are below double-precision
            # resolution of E; certify progress on the residual norm instead,
            # holding E within round-off
            floor = eb.total + 1e-14 * max(1.0, abs(eb.total))
            for direction in (_lbfgs_direction(g, mem), g):
                step = 1.0
                for _ in range(60):
                    cand = project(u - step * direction)
                    ec = energy(cand, prob)
                    if (ec.total <= floor
                            and residual_dual_norm(residual(cand, prob), prob)
                            <= 0.999 * rn):
                        u, eb = cand, ec
                        accepted = True
                        break
                    step *= 0.5
                if accepted:
                    break
        step_used = step if accepted else 0.0
        if accepted:
            if direction is g:
                step_start = min(2.0 * step, step0)
        else:
            break
    else:
        it = max_iter
    r = residual(u, prob)
    rn = residual_dual_norm(r, prob)
    eb = energy(u, prob)
    nontrivial = converged and lp_norm(d, u, prob.p) > tol
    below = c_star is not None and 0.0 < eb.total < c_star
    return SolveReport(u, eb.total, rn, it, trace, below, nontrivial, converged)


def find_pair(prob, tol=1e-6, *, eigen=None, thr=None, perturb=0.01, seed=0,
              max_iter=20000, eta_samples=8):
    """Mountain-pass initialization along the ground direction, then descent.

    Returns the (u, -u) pair of reports.  Raises SolveError when the two
    descents disagree in energy beyond round-off or miss the residual
    tolerance.  The measured negative-part ratio eta is attached; eta >= 1
    marks the run unreliable (the negative part is no longer dominated).
    """
    from .eigensolve import lambda1, thresholds  # local import: avoid cycle

    d = prob.domain
    e = eigen if eigen is not None else lambda1(prob)
    report = thr if thr is not None else thresholds(prob, 1, e.lambda1)
    direction = e.u1 / rho_p(e.u1, prob)
    r_scale, t_peak, _ = mountain_pass_path(prob, direction)
    u_peak = t_peak * r_scale * direction
    noise = test_function("random-smooth", d, seed)
    nn = lp_norm(d, noise, prob.p)
    if nn > 0.0:
        u0 = u_peak + perturb * lp_norm(d, u_peak, prob.p) / nn * noise
    else:
        u0 = u_peak
    plus = descend(prob, u0, tol, max_iter=max_iter, c_star=report.c_star)
    minus = descend(prob, -u0, tol, max_iter=max_iter, c_star=report.c_star)

    if abs(plus.energy - minus.energy) > 1e-12 * max(1.0, abs(plus.energy)):
        raise SolveError("pair energies disagree beyond round-off")
    if not (plus.residual_norm <= tol and minus.residual_norm <= tol):
        raise SolveError(
            f"descent missed the residual tolerance "
            f"({plus.residual_norm:.3e}, {minus.residual_norm:.3e} > {tol:.1e})"
        )

    eta = eta_ratio(plus.u, prob)
    for k in range(eta_samples):
        kind = "random-smooth" if k % 2 == 0 else "random-rough"
        eta = max(eta, eta_ratio(test_function(kind, d, seed + 1 + k), prob))
    reliable = eta < 1.0
    for rep in (plus, minus):
        rep.eta = eta
        rep.reliable = reliable
    return plus, minus
