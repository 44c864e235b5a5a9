"""Cross-module runs on measure/domain combinations the unit tests skip."""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superlap.cli import main
from superlap.grid import Domain
from superlap.eigensolve import lambda1

from conftest import dense_eigs, make_problem


def test_2d_fractional_eigen_matches_dense_oracle():
    d = Domain.disk(((0.0, 1.0), (0.0, 1.0)), 8)
    prob = make_problem(d, [(0.5, 1.0)], 0.5, 2.0)
    rep = lambda1(prob, max_iter=100000)
    oracle = dense_eigs(prob)[0]
    assert rep.converged
    assert abs(rep.lambda1 - oracle) / oracle <= 1e-8


def test_mixed_measure_eigen_monotone():
    # adding a fractional component on top of the gradient atom can only
    # raise the quotient: the numerator grows, the denominator is fixed
    d = Domain.interval(0.0, 1.0, 48)
    base = make_problem(d, [(1.0, 1.0)], 1.0, 2.0)
    mixed = make_problem(d, [(1.0, 1.0), (0.5, 1.0)], 1.0, 2.0)
    l_base = lambda1(base).lambda1
    l_mixed = lambda1(mixed).lambda1
    assert l_mixed > l_base


def test_sign_changing_measure_eigen_below_plus_part():
    d = Domain.interval(0.0, 1.0, 32)
    plus_only = make_problem(d, [(0.8, 1.0)], 0.8, 2.0)
    signed = make_problem(d, [(0.8, 1.0), (0.2, -0.1)], 0.7, 2.0)
    # the quotient uses the plus part only, so lambda1 agrees; the signed
    # problem differs in the energy, not the eigenproblem
    assert lambda1(signed).lambda1 == pytest.approx(
        lambda1(plus_only).lambda1, rel=1e-12
    )


def test_cli_eigen_series_preset(tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text(
        """
[domain]
dim = 1
box = 0, 1
resolution = 24

[measure]
preset = serie1
k = 6

[problem]
p = 2.0
lambda = 0

[command]
seed = 0
"""
    )
    out = tmp_path / "out"
    assert main(["eigen", "--config", str(cfg), "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["lambda1"] > 0.0
    assert summary["converged"] is True


@settings(max_examples=300, deadline=None)
@given(
    a=st.floats(-100.0, 100.0, allow_nan=False),
    b=st.floats(-100.0, 100.0, allow_nan=False),
)
def test_subquadratic_difference_bound_sharp_constant(a, b):
    # |phi(a) - phi(b)| <= 2^(2-p) |a-b|^(p-1) for p in (1, 2), the
    # opposite-sign extremal constant
    p = 1.5
    if a == b:
        return
    phi = lambda x: np.sign(x) * abs(x) ** (p - 1.0)
    lhs = abs(phi(a) - phi(b))
    rhs = 2.0 ** (2.0 - p) * abs(a - b) ** (p - 1.0)
    assert lhs <= rhs * (1.0 + 1e-12)
