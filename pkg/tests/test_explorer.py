import math

import numpy as np
import pytest

from sconvex_ineq.bounds import BOUNDS, derivative_magnitudes, lhs_functional
from sconvex_ineq.core import InequalityParams, Interval, builtin
from sconvex_ineq.explorer import CapExceeded, SweepSpec, golden_section, minimize_bound, sweep

TICKS = [0.0, 1 / 3, 0.5, 2 / 3, 1.0]


def _spec(**kw):
    base = dict(
        function=builtin("power:q=2"),
        interval=Interval(0.0, 1.0),
        s_values=[1.0],
        lambda_values=TICKS,
        mu_values=TICKS,
        r_values=[1.0],
    )
    base.update(kw)
    return SweepSpec(**base)


def test_sweep_size_and_order():
    rows = sweep(_spec())
    assert len(rows) == 25
    keys = [(r.params.lam, r.params.mu) for r in rows]
    assert keys == sorted(keys)
    assert all(r.satisfied for r in rows)


def test_tied_diagonal():
    rows = sweep(_spec(tie_lambda_mu=True))
    assert [r.params.lam for r in rows] == TICKS
    assert all(r.params.lam == r.params.mu for r in rows)
    # lam = mu = 1/3 is Simpson's rule, exact for quadratics
    assert rows[1].lhs == pytest.approx(0.0, abs=1e-15)


def test_both_bounds_put_holder_first():
    rows = sweep(_spec(which="both", p_values=[2.0, 3.0]))
    assert len(rows) == 25 * 2 + 25
    assert all(r.params.p is not None for r in rows[:50])
    assert all(r.params.p is None for r in rows[50:])


def test_empty_grid():
    assert sweep(_spec(s_values=[])) == []


def test_cap():
    with pytest.raises(CapExceeded):
        sweep(_spec(cap=10))


def test_bad_rows_are_recorded_not_raised():
    rows = sweep(_spec(s_values=[1.0, 1.5]))
    assert [r.status.startswith("failed") for r in rows] == [False] * 25 + [True] * 25


def test_hypothesis_annotation():
    # |f'| = 1.5 sqrt(x) is concave, so the s = 1 hypothesis fails
    rows = sweep(_spec(function=builtin("power:q=1.5"), interval=Interval(0.0, 2.0), check_hypothesis=True))
    assert {r.status for r in rows} == {"hypothesis_failed"}


def test_parallel_matches_serial():
    spec = _spec(which="both", p_values=[2.0], r_values=[1.0, 2.0])
    serial = sweep(spec)
    parallel = sweep(SweepSpec(**{**spec.__dict__, "workers": 4}))
    assert serial == parallel


def test_golden_section_quadratic():
    x, fx, _ = golden_section(lambda t: (t - 0.3) ** 2, 0.0, 1.0, 1e-8)
    assert x == pytest.approx(0.3, abs=1e-7)


OPT_CASES = [
    ("power:q=2", Interval(0.0, 1.0), 1.0, 1.0, "power_mean"),
    ("exp", Interval(0.0, 1.0), 1.0, 2.0, "holder"),
    ("exp", Interval(1.0, 2.0), 0.5, 1.5, "power_mean"),
    ("power:q=3", Interval(0.5, 2.0), 0.75, 3.0, "holder"),
]


def _coarse_min(fn, iv, s, r, which, grid=21):
    du, dv = derivative_magnitudes(fn, iv)
    p = r / (r - 1) if which == "holder" else None
    ticks = np.linspace(0, 1, grid)
    return min(BOUNDS[which](iv.width, du, dv, InequalityParams(s, float(a), float(b), p, r)) for a in ticks for b in ticks)


@pytest.mark.parametrize("sel, iv, s, r, which", OPT_CASES)
def test_optimizer_dominates_grid_and_bounds_lhs(sel, iv, s, r, which):
    fn = builtin(sel)
    opt = minimize_bound(fn, iv, s, r, which)
    assert opt.best_rhs <= _coarse_min(fn, iv, s, r, which)
    assert opt.best_rhs <= opt.grid_best_rhs
    assert lhs_functional(fn, iv, opt.best_lambda, opt.best_mu) <= opt.best_rhs + 1e-12


@pytest.mark.parametrize("sel, iv, s, r, which", OPT_CASES)
def test_optimizer_is_deterministic(sel, iv, s, r, which):
    a = minimize_bound(builtin(sel), iv, s, r, which)
    b = minimize_bound(builtin(sel), iv, s, r, which)
    assert a.to_dict() == b.to_dict()


def test_symmetric_derivative_gives_symmetric_weights():
    opt = minimize_bound(builtin("abs_shift:c=1"), Interval(0.0, 2.0), 1.0, 1.0, "power_mean")
    assert opt.best_lambda == pytest.approx(opt.best_mu, abs=1e-3)


def test_zero_derivative_picks_first_grid_point():
    opt = minimize_bound(builtin("const:c=3"), Interval(0.0, 1.0), 1.0, 1.0, "power_mean")
    assert (opt.best_lambda, opt.best_mu, opt.best_rhs) == (0.0, 0.0, 0.0)
    assert math.isclose(opt.lhs, 0.0, abs_tol=1e-15)
