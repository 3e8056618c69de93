"""Acceptance gate: one group of tests per criterion, tagged with ``criterion(n)``.

The expected constants below are written out independently of the corollary
catalog so that a typo in either place shows up as a failure.
"""

import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from _fixtures import CONVEX_FAMILY, DOMINANCE_CASES, IDENTITY_FUNCTIONS, IDENTITY_INTERVALS
from sconvex_ineq.bounds import (
    BOUNDS,
    coefficients_by_quadrature,
    coefficients_ELIF,
    derivative_magnitudes,
    lhs_with_error,
    simpson_classical_check,
)
from sconvex_ineq.cli import main
from sconvex_ineq.core import InequalityParams, Interval, builtin
from sconvex_ineq.explorer import derivative_power, minimize_bound
from sconvex_ineq.identities import identity_lhs, identity_rhs, lemma2_closed, lemma2_oracle, relative_gap
from sconvex_ineq.means import inverse_power_reduced, proposition_inverse_power
from sconvex_ineq.sconvexity import check_s_convex, power_of_convex

QUAD_TOL = 1e-10

# ---------------------------------------------------------------- criterion 1

DECIMAL_CONSTANTS = {
    "i": {"prefactor_lambda": "0.351", "prefactor_mu": "0.351", "weight_big": "0.914", "weight_small": "0.625"},
    "ii": {"prefactor_lambda": "0.289", "prefactor_mu": "0.289", "weight_big": "0.862", "weight_small": "0.471"},
    "iii": {"prefactor_lambda": "0.531", "prefactor_mu": "0.531", "weight_big": "0.803", "weight_small": "0.34"},
    "iv": {"prefactor_lambda": "0.468", "prefactor_mu": "0.468", "weight_big": "0.887", "weight_small": "0.541"},
    "v": {"prefactor_lambda": "0.455", "prefactor_mu": "0.455"},
}
FRACTION_CONSTANTS = {
    "vi": {"overall_prefactor_lambda": Fraction(1, 12), "overall_prefactor_mu": Fraction(1, 12),
           "weight_big": Fraction(3, 4), "weight_small": Fraction(1, 4)},
}


def _round_half_up(x: float, text: str) -> str:
    from decimal import ROUND_HALF_UP, Decimal

    places = len(text.split(".")[1])
    return str(Decimal(repr(x)).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP))


def _corollary_rows(capsys, cid):
    start = time.perf_counter()
    code = main(["verify", "corollary", "--id", cid])
    elapsed = time.perf_counter() - start
    out, _ = capsys.readouterr()
    return code, {r["name"]: r for r in json.loads(out)["reports"]}, elapsed


@pytest.mark.criterion(1)
@pytest.mark.parametrize("cid", sorted(DECIMAL_CONSTANTS))
def test_c1_decimal_constants(capsys, cid):
    code, rows, elapsed = _corollary_rows(capsys, cid)
    assert elapsed < 1.0
    for name, printed in DECIMAL_CONSTANTS[cid].items():
        computed = rows[name]["computed"]
        assert _round_half_up(computed, printed) == printed, f"{cid}/{name}: {computed!r} does not round to {printed}"
    assert code == 0


@pytest.mark.criterion(1)
def test_c1_fraction_constants(capsys):
    code, rows, elapsed = _corollary_rows(capsys, "vi")
    assert elapsed < 1.0
    for name, exact in FRACTION_CONSTANTS["vi"].items():
        assert abs(rows[name]["computed"] - float(exact)) <= 1e-12
    assert code == 0


# ---------------------------------------------------------------- criterion 2


@pytest.mark.criterion(2)
def test_c2_identity_family():
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst = 0.0
    count = 0
    for sel, iv in itertools.product(IDENTITY_FUNCTIONS, IDENTITY_INTERVALS):
        fn = builtin(sel)
        for lam, mu in rng.uniform(-1.0, 2.0, size=(50, 2)):
            gap = abs(identity_lhs(fn, iv, lam, mu, QUAD_TOL) - identity_rhs(fn, iv, lam, mu, QUAD_TOL))
            worst = max(worst, gap)
            count += 1
    elapsed = time.perf_counter() - start
    print(f"identity: {count} cases, worst gap {worst:.3g}, {elapsed:.2f}s")
    assert count >= 5 * 3 * 50
    assert worst <= 100 * QUAD_TOL
    assert elapsed < 30.0


# ---------------------------------------------------------------- criterion 3


@pytest.mark.criterion(3)
@pytest.mark.parametrize("x", [0.3, 0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("y", [k / 10 for k in range(11)])
def test_c3_moment_oracle(y, x):
    closed = lemma2_closed(y, x)
    quad, _ = lemma2_oracle(y, x)
    assert relative_gap(closed.m0, quad.m0) <= 1e-9
    assert relative_gap(closed.m1, quad.m1) <= 1e-9


# ---------------------------------------------------------------- criterion 4

WEIGHTS = [0.0, 1 / 3, 0.5, 2 / 3, 1.0]


@pytest.mark.criterion(4)
@pytest.mark.parametrize("s, lam, mu", list(itertools.product([0.3, 0.5, 0.75, 1.0], WEIGHTS, WEIGHTS)))
def test_c4_coefficient_oracle(s, lam, mu):
    closed = coefficients_ELIF(s, lam, mu)
    quad = coefficients_by_quadrature(s, lam, mu)
    for name in "ELIF":
        assert relative_gap(getattr(closed, name), getattr(quad, name)) <= 1e-9, name
    # exchange identities, exactly
    assert coefficients_ELIF(s, mu, mu).I == coefficients_ELIF(s, mu, mu).L
    assert coefficients_ELIF(s, mu, mu).F == coefficients_ELIF(s, mu, mu).E


@pytest.mark.criterion(4)
@pytest.mark.parametrize(
    "lam, e, l", [(0.0, 4.0, 2.0), (1 / 3, 61 / 27, 29 / 27), (1.0, 5.0, 1.0)]
)
def test_c4_spot_values(lam, e, l):
    c = coefficients_ELIF(1.0, lam, lam)
    assert c.E == pytest.approx(e, rel=1e-14)
    assert c.L == pytest.approx(l, rel=1e-14)


# ---------------------------------------------------------------- criterion 5

C5_S = [0.25, 0.5, 1.0]
C5_P = [1.5, 2.0, 4.0]
C5_R = [1.0, 1.5, 2.0, 3.0]


def _dominance_tuples():
    for (sel, iv), s in itertools.product(DOMINANCE_CASES, C5_S):
        for p in C5_P:
            yield sel, iv, "holder", s, p, p / (p - 1)
        for r in C5_R:
            yield sel, iv, "power_mean", s, None, r


@pytest.mark.criterion(5)
def test_c5_bound_dominance():
    hypothesis_cache = {}
    lhs_cache = {}
    checked = skipped = 0
    violations = []
    for sel, iv, which, s, p, r in _dominance_tuples():
        fn = builtin(sel)
        key = (sel, iv, s, r)
        if key not in hypothesis_cache:
            hypothesis_cache[key] = check_s_convex(derivative_power(fn, r), s, iv).passes
        du, dv = derivative_magnitudes(fn, iv)
        for lam, mu in itertools.product(WEIGHTS, WEIGHTS):
            if not hypothesis_cache[key]:
                skipped += 1
                continue
            if (sel, iv, lam, mu) not in lhs_cache:
                lhs_cache[(sel, iv, lam, mu)] = lhs_with_error(fn, iv, lam, mu, QUAD_TOL)
            lhs, err = lhs_cache[(sel, iv, lam, mu)]
            rhs = BOUNDS[which](iv.width, du, dv, InequalityParams(s, lam, mu, p, r))
            checked += 1
            if lhs > rhs + err:
                violations.append((sel, iv, which, s, p, r, lam, mu, lhs, rhs))
    print(f"dominance: {checked} tuples checked, {skipped} filtered out, {len(violations)} violations")
    assert checked >= 2000
    assert violations == []


# ---------------------------------------------------------------- criterion 6


@pytest.mark.criterion(6)
def test_c6_square_hand_values():
    fn, iv = builtin("power:q=2"), Interval(0.0, 1.0)
    lhs, _ = lhs_with_error(fn, iv, 1.0, 1.0, QUAD_TOL)
    rhs = BOUNDS["power_mean"](iv.width, *derivative_magnitudes(fn, iv), InequalityParams(1.0, 1.0, 1.0, None, 1.0))
    assert abs(lhs - 1 / 6) <= 1e-12
    assert abs(rhs - 1 / 4) <= 1e-12


@pytest.mark.criterion(6)
def test_c6_simpson_quartic():
    iv = Interval(0.0, 1.0)
    rep = simpson_classical_check(builtin("power:q=4", iv), iv)
    assert abs(rep.lhs - 1 / 120) <= 1e-12
    assert rep.rhs == pytest.approx(24 / 1280, rel=1e-15)
    assert rep.satisfied


# ---------------------------------------------------------------- criterion 7

C7_PAIRS = [(0.5, 1.0), (1.0, 2.0), (1.0, 1.5), (2.0, 3.0), (0.1, 0.2), (1.0, 10.0), (3.0, 3.01), (0.25, 4.0),
            (5.0, 7.5), (0.9, 1.1)]


@pytest.mark.criterion(7)
@pytest.mark.parametrize("u, v", C7_PAIRS)
def test_c7_reduction(u, v):
    third = 1 / 3
    rep = proposition_inverse_power(u, v, InequalityParams(1.0, third, third, None, 1.0))
    closed = (v - u) * 5 / 36 * (u**-2 + v**-2) / 2
    assert abs(rep.rhs - closed) <= 1e-12
    assert abs(inverse_power_reduced(u, v) - closed) <= 1e-12
    assert rep.satisfied


@pytest.mark.criterion(7)
def test_c7_unit_example():
    third = 1 / 3
    rep = proposition_inverse_power(1.0, 2.0, InequalityParams(1.0, third, third, None, 1.0))
    assert round(rep.lhs, 4) == 0.0013
    assert round(rep.rhs, 4) == 0.0868
    assert rep.lhs <= rep.rhs


# ---------------------------------------------------------------- criterion 8


@pytest.mark.criterion(8)
def test_c8_members_and_non_members():
    assert check_s_convex(lambda x: x**2, 1.0, Interval(0.0, 2.0)).passes
    assert check_s_convex(np.sqrt, 0.5, Interval(0.0, 4.0)).passes
    bad = check_s_convex(lambda x: -(x**2), 1.0, Interval(0.0, 2.0))
    assert not bad.passes
    assert bad.witness is not None


@pytest.mark.criterion(8)
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("name", sorted(CONVEX_FAMILY))
def test_c8_criterion_closure(name, s):
    assert check_s_convex(power_of_convex(CONVEX_FAMILY[name], s), s, Interval(0.0, 3.0)).passes


# ---------------------------------------------------------------- criterion 9

C9_CASES = [
    ("power:q=2", Interval(0.0, 1.0), 1.0, 1.0, "power_mean"),
    ("exp", Interval(0.0, 2.0), 0.5, 2.0, "power_mean"),
    ("exp", Interval(1.0, 2.0), 1.0, 2.0, "holder"),
    ("power:q=3", Interval(0.5, 2.0), 0.75, 3.0, "holder"),
    ("xlnx", Interval(1.0, 3.0), 1.0, 1.5, "power_mean"),
]


@pytest.mark.criterion(9)
@pytest.mark.parametrize("sel, iv, s, r, which", C9_CASES)
def test_c9_optimizer(sel, iv, s, r, which):
    fn = builtin(sel)
    first = minimize_bound(fn, iv, s, r, which)
    second = minimize_bound(fn, iv, s, r, which)
    assert first == second
    assert json.dumps(first.to_dict()) == json.dumps(second.to_dict())

    du, dv = derivative_magnitudes(fn, iv)
    p = r / (r - 1) if which == "holder" else None
    ticks = np.linspace(0.0, 1.0, 21)
    coarse = [BOUNDS[which](iv.width, du, dv, InequalityParams(s, float(a), float(b), p, r)) for a in ticks for b in ticks]
    assert first.best_rhs <= min(coarse)

    lhs, err = lhs_with_error(fn, iv, first.best_lambda, first.best_mu, QUAD_TOL)
    assert lhs <= first.best_rhs + err
    assert math.isfinite(first.best_rhs)
