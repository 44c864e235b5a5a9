import csv
import math
from pathlib import Path

import numpy as np
import pytest

from superlap.grid import Domain
from superlap.operators import rho_p
from superlap.verify import (
    brezis_lieb_check,
    convexity_delta,
    convexity_modulus,
    embedding_scan,
    growth_conditions_scan,
    limit_consistency,
    monotonicity_scan,
    reabsorption_check,
    scalar_inequalities,
)

from conftest import make_problem


def read_rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_embedding_scan(tmp_path):
    d = Domain.interval(0.0, 1.0, 24)
    s_grid = [round(0.1 * k, 1) for k in range(11)]
    rep = embedding_scan(d, 2.0, s_grid, 500, seed=0, out_dir=tmp_path)
    assert rep.violations == 0
    assert math.isfinite(rep.worst_ratio)
    rows = read_rows(rep.details)
    assert len(rows) == 500 * 11
    assert {"sample", "hash", "lhs", "rhs", "ratio"} <= set(rows[0])
    # s = 0 entries have ratio exactly 1
    for k in range(0, len(rows), 11):
        assert float(rows[k]["ratio"]) == pytest.approx(1.0, rel=1e-12)


def test_embedding_constant_grid_stable():
    d1 = Domain.interval(0.0, 1.0, 24)
    d2 = Domain.interval(0.0, 1.0, 48)
    import tempfile

    with tempfile.TemporaryDirectory() as td:
        r1 = embedding_scan(d1, 2.0, [0.25, 0.5, 0.75], 60, seed=1, out_dir=td)
        r2 = embedding_scan(d2, 2.0, [0.25, 0.5, 0.75], 60, seed=1, out_dir=td)
    assert abs(r2.worst_ratio - r1.worst_ratio) / r1.worst_ratio < 0.20


def test_monotonicity_scan(tmp_path):
    d = Domain.interval(0.0, 1.0, 24)
    rep = monotonicity_scan(d, 2.0, [(0.3, 0.3), (0.0, 1.0), (0.25, 0.75)], 40,
                            seed=0, out_dir=tmp_path)
    assert rep.violations == 0
    rows = read_rows(rep.details)
    for k in range(0, len(rows), 3):  # identity pairs
        assert float(rows[k]["ratio"]) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(ValueError):
        monotonicity_scan(d, 2.0, [(0.8, 0.2)], 5, out_dir=tmp_path)


def test_monotonicity_zero_one_pair_vs_hat_extremizers(tmp_path):
    # the (0, 1) pair measures the norm-to-gradient constant; an independent
    # search over hat functions (all centers and widths) nearly extremizes it
    from superlap.grid import grad_seminorm, lp_norm

    d = Domain.interval(0.0, 1.0, 48)
    rep = monotonicity_scan(d, 2.0, [(0.0, 1.0)], 200, seed=3, out_dir=tmp_path)
    x = d.centers()[:, 0]
    hat_best = 0.0
    for center in np.linspace(0.2, 0.8, 7):
        for width in np.linspace(0.1, 0.5, 9):
            u = np.maximum(0.0, 1.0 - np.abs(x - center) / width)
            if np.any(u > 0.0):
                hat_best = max(hat_best, lp_norm(d, u, 2.0) / grad_seminorm(d, u, 2.0))
    print(f"scan C: {rep.worst_ratio}, hat-family extremizer: {hat_best}")
    assert math.isfinite(rep.worst_ratio)
    assert abs(rep.worst_ratio - hat_best) / hat_best <= 0.30


def test_reabsorption_check(tmp_path):
    d = Domain.interval(0.0, 1.0, 32)
    prob = make_problem(d, [(1.0, 1.0), (0.25, -0.1)], 1.0, 2.0)
    rep = reabsorption_check(prob, 50, seed=0, out_dir=tmp_path)
    assert rep.violations == 0
    assert math.isfinite(rep.worst_ratio)
    assert "eta" in rep.extra
    r1 = read_rows(rep.details)

    sub = tmp_path / "doubled"
    sub.mkdir()
    doubled = make_problem(d, [(1.0, 1.0), (0.25, -0.2)], 1.0, 2.0)
    rep2 = reabsorption_check(doubled, 50, seed=0, out_dir=sub)
    # gamma doubles with the minus mass, so the normalized ratios agree and
    # the raw numerators double
    r2 = read_rows(rep2.details)
    for a, b in zip(r1, r2):
        assert float(b["lhs"]) == pytest.approx(2.0 * float(a["lhs"]), rel=1e-12)
        assert float(b["ratio"]) == pytest.approx(float(a["ratio"]), rel=1e-12)

    with pytest.raises(ValueError):
        reabsorption_check(make_problem(d, [(1.0, 1.0)], 1.0, 2.0), 5,
                           out_dir=tmp_path)


@pytest.mark.parametrize("p", [1.5, 3.0])
def test_convexity_modulus(tmp_path, p):
    d = Domain.interval(0.0, 1.0, 16)
    prob = make_problem(d, [(0.5, 1.0)], 0.5, p)
    rep = convexity_modulus(prob, [0.5], 60, seed=0, out_dir=tmp_path)
    assert rep.violations == 0
    assert rep.worst_ratio <= 1.0 + 1e-12


def test_convexity_equality_edge():
    # v = u: the pair sum has norm exactly 2 and delta(0) = 0, consistent
    d = Domain.interval(0.0, 1.0, 16)
    prob = make_problem(d, [(0.5, 1.0)], 0.5, 2.0)
    u = np.random.default_rng(0).standard_normal(16)
    u = u / rho_p(u, prob)
    assert rho_p(u + u, prob) == pytest.approx(2.0, rel=1e-12)
    for p in (1.5, 2.0, 3.0):
        assert convexity_delta(p, 0.0) == pytest.approx(0.0, abs=1e-14)


def test_brezis_lieb(tmp_path):
    d = Domain.interval(0.0, 1.0, 128)
    prob = make_problem(d, [(0.6, 1.0), (0.25, -0.1)], 0.5, 2.0)
    widths = [8 * d.h, 4 * d.h, 2 * d.h, d.h]
    rep = brezis_lieb_check(prob, widths, out_dir=tmp_path)
    assert rep.violations == 0
    assert rep.extra["final_plus"] <= 1e-2
    assert rep.extra["final_minus"] <= 1e-2
    rows = read_rows(rep.details)
    plus_res = [float(r["ratio"]) for r in rows[:4]]
    print(f"splitting residual decay: {plus_res}")
    assert plus_res[-1] < plus_res[0]
    # zero perturbation leaves the identity exact
    rep0 = brezis_lieb_check(prob, [4 * d.h], amp=0.0, out_dir=tmp_path)
    assert rep0.worst_ratio == 0.0


def test_scalar_inequalities(tmp_path):
    reports = scalar_inequalities(20000, seed=0, out_dir=tmp_path)
    by_name = {r.name: r for r in reports}
    assert set(by_name) == {
        "scalar_power_mean",
        "scalar_difference_bound",
        "scalar_subquadratic_bound",
    }
    for rep in reports:
        assert rep.violations == 0
    sub = by_name["scalar_subquadratic_bound"]
    # the measured constant is the sharp opposite-sign value 2^(2-p)
    assert sub.extra["c_star"] == pytest.approx(2.0 ** (2.0 - 1.5), rel=1e-6)
    assert sub.extra["limit_inf_err"] <= 1e-3
    assert sub.extra["limit_zero_err"] <= 1e-3


def test_scalar_equal_arguments_degenerate():
    reports = scalar_inequalities(10, seed=3, out_dir=".")
    # a = b gives 0 <= 0 in the difference bounds; covered by construction,
    # asserted directly here
    p = 3.0
    a = 1.234
    lhs = abs(abs(a) ** (p - 2) * a - abs(a) ** (p - 2) * a)
    assert lhs == 0.0
    for rep in reports:
        Path(rep.details).unlink()


def test_limit_consistency(tmp_path):
    d = Domain.interval(0.0, 1.0, 256)
    rep = limit_consistency(d, 2.0, out_dir=tmp_path)
    assert rep.violations == 0
    assert rep.worst_ratio <= 0.05
    trend = rep.extra["toward_gradient"]
    print(f"gradient-limit trend at fixed h: {trend}")
    assert len(trend) == 3


def test_growth_conditions(tmp_path):
    d = Domain.interval(0.0, 1.0, 24)
    prob = make_problem(d, [(0.4, 1.0)], 0.4, 2.0)
    rep = growth_conditions_scan(prob, 30, seed=0, out_dir=tmp_path)
    assert rep.violations == 0


def test_scans_deterministic(tmp_path):
    d = Domain.interval(0.0, 1.0, 16)
    a = embedding_scan(d, 2.0, [0.5], 10, seed=42, out_dir=tmp_path)
    blob_a = Path(a.details).read_bytes()
    b = embedding_scan(d, 2.0, [0.5], 10, seed=42, out_dir=tmp_path)
    blob_b = Path(b.details).read_bytes()
    assert blob_a == blob_b
    assert a.worst_ratio == b.worst_ratio
