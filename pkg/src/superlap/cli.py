"""Command surface: ``superlap <command> --config FILE [--seed N] [--out DIR]``.

Commands: validate-measure, assemble, eigen, sobolev, thresholds, solve,
verify, sweep.  Every run writes ``summary.json`` plus CSV artifacts into
the output directory; every number in the JSON also appears in
``summary.csv``.  Outputs are reproducible from (config, seed): no
timestamps are emitted.

Exit codes: 0 success, 1 assertion/solve failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import verify as verify_mod
from .backend import backend_name
from .config import (
    ConfigError,
    build_domain,
    build_validated,
    load_config,
    parse_lambda,
)
from .eigensolve import lambda1, lambda2_estimate, sobolev_constant, thresholds
from .grid import volume
from .kernel import assemble as assemble_table, save_table
from .measure import MeasureError
from .operators import CriticalExponentError, Problem, rho_p
from .solve import (
    Diverged,
    NoCrossing,
    SolveError,
    find_pair,
    mountain_pass_path,
    peak_bound,
)

__all__ = ["main"]


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _emit(out, summary):
    items = sorted(summary.items())
    with open(out / "summary.json", "w") as fh:
        json.dump(dict(items), fh, sort_keys=True, indent=2)
        fh.write("\n")
    _write_csv(out / "summary.csv", ["key", "value"], items)


def _cmd_options(cfg):
    cmd = cfg.command
    return {
        "seed": int(cmd.get("seed", "0")),
        "tol": float(cmd.get("tol", "1e-6")),
        "samples": int(cmd.get("samples", "100")),
        "max_iter": int(cmd.get("max_iter", "50000")),
        "rtol": float(cmd.get("rtol", "1e-12")),
        "l": int(cmd.get("l", "1")),
        # the Sobolev surrogate feeds threshold algebra with wide margins;
        # a looser descent moves it by ~1e-8 relative and halves the runtime
        "sobolev_rtol": float(cmd.get("sobolev_rtol", "1e-9")),
        "sobolev_iter": int(cmd.get("sobolev_iter", "8000")),
    }


def _sobolev(prob, opts):
    return sobolev_constant(prob, seed=opts["seed"], rtol=opts["sobolev_rtol"],
                            max_iter=opts["sobolev_iter"])


def _problem(cfg, lam=0.0):
    d = build_domain(cfg)
    vm = build_validated(cfg)
    p = float(cfg.problem.get("p", "2"))
    return Problem.build(d, vm, p, lam)


def _eigen_level(prob, opts):
    """(lambda_l, eigen_report, heuristic_flag) for the configured level l."""
    e = lambda1(prob, max_iter=opts["max_iter"], rtol=opts["rtol"], seed=opts["seed"])
    if opts["l"] <= 1:
        return e.lambda1, e, False
    return lambda2_estimate(prob, seed=opts["seed"]), e, True


def _resolve_lambda(cfg, prob, opts):
    value, factor = parse_lambda(cfg)
    lambda_l, e, heuristic = _eigen_level(prob, opts)
    lam = value if value is not None else factor * e.lambda1
    return prob.with_lambda(lam), lambda_l, e, heuristic


def cmd_validate_measure(cfg, out, opts):
    vm = build_validated(cfg)
    rows = [(a.order, a.weight) for a in vm.atoms]
    _write_csv(out / "atoms.csv", ["order", "weight"], rows)
    return {
        "gamma": vm.gamma,
        "s_sharp": vm.s_sharp,
        "s_bar": vm.s_bar,
        "mass_plus_high": vm.mass_plus_high,
        "mass_minus_low": vm.mass_minus_low,
        "tail_mass": vm.tail_mass,
        "atoms_plus": len(vm.plus_atoms),
        "atoms_minus": len(vm.minus_atoms),
    }, 0


def cmd_assemble(cfg, out, opts):
    d = build_domain(cfg)
    vm = build_validated(cfg)
    p = float(cfg.problem.get("p", "2"))
    rows = []
    n_cached = 0
    for k, s in enumerate(vm.orders):
        if not 0.0 < s < 1.0:
            continue
        t = assemble_table(d, s, p)
        name = f"kernel_{k:03d}.npz"
        save_table(out / name, t)
        n_cached += 1
        rows.append((s, p, t.c, d.n, float(t.weights[t.weights > 0].min()),
                     float(t.weights.max()), float(t.tail.min()),
                     float(t.tail.max()), name))
    _write_csv(out / "tables.csv",
               ["s", "p", "c", "n", "w_min", "w_max", "tail_min", "tail_max", "file"],
               rows)
    return {"tables_cached": n_cached, "cells": d.n, "h": d.h,
            "backend": backend_name()}, 0


def cmd_eigen(cfg, out, opts):
    prob = _problem(cfg)
    e = lambda1(prob, max_iter=opts["max_iter"], rtol=opts["rtol"], seed=opts["seed"])
    _write_csv(out / "rayleigh_history.csv", ["iter", "value", "step"],
               e.rayleigh_history)
    summary = {
        "lambda1": e.lambda1,
        "iterations": e.iterations,
        "converged": e.converged,
        "cells": prob.domain.n,
        "h": prob.domain.h,
        "volume": volume(prob.domain),
        "backend": backend_name(),
    }
    if cfg.command.get("lambda2", "").strip().lower() in ("1", "true", "yes", "on"):
        summary["lambda2_heuristic"] = lambda2_estimate(prob, seed=opts["seed"])
    return summary, 0


def cmd_sobolev(cfg, out, opts):
    prob = _problem(cfg)
    prob.require_critical()
    best, runs = sobolev_constant(prob, seed=opts["seed"], return_runs=True)
    _write_csv(out / "sobolev_runs.csv",
               ["start", "kind", "value", "iterations", "converged"], runs)
    return {"sobolev": best, "p_star": prob.p_star, "starts": len(runs)}, 0


def cmd_thresholds(cfg, out, opts):
    prob = _problem(cfg)
    prob.require_critical()
    prob, lambda_l, e, heuristic = _resolve_lambda(cfg, prob, opts)
    thr = thresholds(prob, opts["l"], lambda_l, sobolev=_sobolev(prob, opts))
    summary = {
        "lambda1": e.lambda1,
        "lambda_l": thr.lambda_l,
        "lambda": thr.lam,
        "level_heuristic": heuristic,
        "sobolev": thr.sobolev,
        "c_star": thr.c_star,
        "theta0": thr.theta0,
        "window_lo": thr.window_lo,
        "window_hi": thr.window_hi,
        "in_window": thr.in_window,
        "theta_valid": thr.theta_valid,
        "gamma_diag": thr.gamma_diag,
        "l": thr.l,
    }
    _write_csv(out / "thresholds.csv", list(summary), [list(summary.values())])
    return summary, 0


def cmd_solve(cfg, out, opts):
    prob = _problem(cfg)
    prob.require_critical()
    prob, lambda_l, e, heuristic = _resolve_lambda(cfg, prob, opts)
    thr = thresholds(prob, opts["l"], lambda_l, sobolev=_sobolev(prob, opts))
    direction = e.u1 / rho_p(e.u1, prob)
    r_scale, t_peak, e_peak = mountain_pass_path(prob, direction)
    bound = peak_bound(prob, lambda_l)
    plus, minus = find_pair(prob, opts["tol"], eigen=e, thr=thr,
                            seed=opts["seed"], max_iter=opts["max_iter"])
    _write_csv(out / "trace.csv", ["iter", "E", "residual_norm", "step_length"],
               plus.ps_trace)
    _write_csv(out / "solution.csv", ["index", "value"],
               list(enumerate(plus.u.tolist())))
    return {
        "lambda1": e.lambda1,
        "lambda_l": lambda_l,
        "lambda": prob.lam,
        "level_heuristic": heuristic,
        "sobolev": thr.sobolev,
        "c_star": thr.c_star,
        "theta0": thr.theta0,
        "in_window": thr.in_window,
        "energy": plus.energy,
        "energy_pair_gap": abs(plus.energy - minus.energy),
        "residual_norm": plus.residual_norm,
        "iterations": plus.iterations,
        "nontrivial": plus.nontrivial,
        "below_cstar": plus.below_cstar,
        "converged": plus.converged,
        "eta": plus.eta,
        "reliable": plus.reliable,
        "ray_scale": r_scale,
        "peak_t": t_peak,
        "peak_energy": e_peak,
        "peak_bound": bound,
        "backend": backend_name(),
    }, 0


def cmd_verify(cfg, out, opts):
    d = build_domain(cfg)
    vm = build_validated(cfg)
    p = float(cfg.problem.get("p", "2"))
    wanted = [tok.strip() for tok in cfg.command.get(
        "scans", "embedding,monotonicity,convexity,scalar,brezis_lieb").split(",")]
    samples = opts["samples"]
    seed = opts["seed"]
    prob = Problem.build(d, vm, p, 0.0)
    reports = []
    skipped = []
    for name in wanted:
        if name == "embedding":
            s_grid = [0.0, 0.25, 0.5, 0.75, 1.0]
            reports.append(verify_mod.embedding_scan(
                d, p, s_grid, samples, seed=seed, out_dir=out))
        elif name == "monotonicity":
            pairs = [(0.0, 0.5), (0.25, 0.75), (0.5, 0.5), (0.0, 1.0)]
            reports.append(verify_mod.monotonicity_scan(
                d, p, pairs, samples, seed=seed, out_dir=out))
        elif name == "convexity":
            eps = float(cfg.command.get("eps", "0.5"))
            reports.append(verify_mod.convexity_modulus(
                prob, [eps], samples, seed=seed, out_dir=out))
        elif name == "scalar":
            reports.extend(verify_mod.scalar_inequalities(
                max(samples, 1000), seed=seed, out_dir=out))
        elif name == "brezis_lieb":
            widths = [8 * d.h, 4 * d.h, 2 * d.h, d.h]
            reports.append(verify_mod.brezis_lieb_check(prob, widths, out_dir=out))
        elif name == "reabsorption":
            if vm.gamma > 0.0:
                reports.append(verify_mod.reabsorption_check(
                    prob, samples, seed=seed, out_dir=out))
            else:
                skipped.append(name)
        elif name == "growth":
            if prob.p_star is not None:
                reports.append(verify_mod.growth_conditions_scan(
                    prob, samples, seed=seed, out_dir=out))
            else:
                skipped.append(name)
        elif name == "limit":
            reports.append(verify_mod.limit_consistency(d, p, out_dir=out))
        else:
            raise ConfigError(f"[command] unknown scan {name!r}")
    summary = {"scans": len(reports), "skipped": ",".join(skipped)}
    violations = 0
    for r in reports:
        summary[f"{r.name}_worst"] = r.worst_ratio
        summary[f"{r.name}_violations"] = r.violations
        violations += r.violations
        for key, val in r.extra.items():
            if isinstance(val, (int, float, bool)):
                summary[f"{r.name}_{key}"] = val
    summary["violations_total"] = violations
    return summary, violations


def _sweep_point(args):
    cfg, lam, point_dir, opts, sobolev_val = args
    point_dir = Path(point_dir)
    point_dir.mkdir(parents=True, exist_ok=True)
    prob = _problem(cfg, lam)
    prob.require_critical()
    row = {"lambda": lam}
    try:
        e = lambda1(prob, max_iter=opts["max_iter"], rtol=opts["rtol"],
                    seed=opts["seed"])
        thr = thresholds(prob, 1, e.lambda1, sobolev=sobolev_val)
        plus, _ = find_pair(prob, opts["tol"], eigen=e, thr=thr,
                            seed=opts["seed"], max_iter=opts["max_iter"])
        _write_csv(point_dir / "trace.csv",
                   ["iter", "E", "residual_norm", "step_length"], plus.ps_trace)
        row.update(status="ok", energy=plus.energy,
                   residual_norm=plus.residual_norm,
                   nontrivial=plus.nontrivial, below_cstar=plus.below_cstar,
                   converged=plus.converged, eta=plus.eta)
    except (SolveError, NoCrossing, Diverged) as exc:
        row.update(status=type(exc).__name__, energy=float("nan"),
                   residual_norm=float("nan"), nontrivial=False,
                   below_cstar=False, converged=False, eta=float("nan"))
    return row


def cmd_sweep(cfg, out, opts):
    prob = _problem(cfg)
    prob.require_critical()
    _, lambda_l, e, _ = _resolve_lambda(cfg, prob, opts)
    s_val = _sobolev(prob.with_lambda(0.0), opts)
    thr = thresholds(prob.with_lambda(0.0), opts["l"], lambda_l, sobolev=s_val)
    points = int(cfg.command.get("points", "5"))
    workers = int(cfg.command.get("workers", "0"))
    lo = max(thr.window_lo, 0.0)
    lams = [lo + (i + 1) / (points + 1) * (lambda_l - lo) for i in range(points)]
    jobs = [(cfg, lam, str(Path(out) / f"point_{i:03d}"), opts, s_val)
            for i, lam in enumerate(lams)]
    if workers > 0:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(job) for job in jobs]
    header = ["lambda", "status", "energy", "residual_norm", "nontrivial",
              "below_cstar", "converged", "eta"]
    _write_csv(out / "sweep.csv", header,
               [[row[k] for k in header] for row in rows])
    ok = sum(1 for row in rows if row["status"] == "ok")
    return {
        "lambda_l": lambda_l,
        "window_lo": thr.window_lo,
        "points": points,
        "solved": ok,
        "nontrivial": sum(1 for r in rows if r.get("nontrivial")),
        "below_cstar": sum(1 for r in rows if r.get("below_cstar")),
    }, 0


COMMANDS = {
    "validate-measure": cmd_validate_measure,
    "assemble": cmd_assemble,
    "eigen": cmd_eigen,
    "sobolev": cmd_sobolev,
    "thresholds": cmd_thresholds,
    "solve": cmd_solve,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def main(argv=None):
    parser = argparse.ArgumentParser(prog="superlap")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default="superlap_out")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.command["seed"] = str(args.seed)
        opts = _cmd_options(cfg)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        summary, violations = COMMANDS[args.command](cfg, out, opts)
    except (ConfigError, MeasureError, CriticalExponentError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (SolveError, NoCrossing, Diverged) as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return 1

    summary["command"] = args.command
    _emit(out, summary)
    if violations:
        print(f"{violations} violation(s); see {out}", file=sys.stderr)
        return 1
    print(json.dumps(summary, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
