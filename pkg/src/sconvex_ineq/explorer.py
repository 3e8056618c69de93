"""Parameter sweeps over both bounds and a (lambda, mu) optimiser for the RHS."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds import BOUND_ALIASES, BOUNDS, derivative_magnitudes
from .core import (
    BoundReport,
    FunctionSpec,
    InequalityParams,
    Interval,
    SConvexError,
    evaluate,
    validate_params,
)
from .identities import mean_value, weighted_combination
from .quadrature import DEFAULT_TOL
from .sconvexity import check_s_convex

DEFAULT_CAP = 10**6
INV_PHI = (math.sqrt(5) - 1) / 2


class CapExceeded(SConvexError, ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """Grids to sweep for one function on one interval.

    For the Hoelder bound the exponent grid is ``p_values`` (r is the
    conjugate); for the power-mean bound it is ``r_values``. With
    ``tie_lambda_mu`` only the diagonal mu = lambda is swept and
    ``mu_values`` is ignored.
    """

    function: FunctionSpec
    interval: Interval
    s_values: Sequence[float] = ()
    lambda_values: Sequence[float] = ()
    mu_values: Sequence[float] = ()
    r_values: Sequence[float] = ()
    p_values: Sequence[float] = ()
    which: str = "power_mean"
    tol: float = DEFAULT_TOL
    check_hypothesis: bool = False
    cap: int = DEFAULT_CAP
    workers: int = 1
    tie_lambda_mu: bool = False

    def bounds(self) -> list[str]:
        if self.which == "both":
            return ["holder", "power_mean"]
        return [BOUND_ALIASES[self.which]]

    def _pairs(self) -> list[tuple[float, float]]:
        if self.tie_lambda_mu:
            return [(lam, lam) for lam in self.lambda_values]
        return list(itertools.product(self.lambda_values, self.mu_values))

    def tuples(self) -> list[tuple[str, InequalityParams]]:
        """Every parameter tuple in lexicographic grid order, Hoelder rows first."""
        rows = []
        pairs = self._pairs()
        for bound in self.bounds():
            exponents = self.p_values if bound == "holder" else self.r_values
            for s, (lam, mu), e in itertools.product(self.s_values, pairs, exponents):
                if bound == "holder":
                    rows.append((bound, InequalityParams.holder(s, lam, mu, e)))
                else:
                    rows.append((bound, InequalityParams(s, lam, mu, None, e)))
        return rows

    def size(self) -> int:
        n = 0
        pairs = len(self.lambda_values) * (1 if self.tie_lambda_mu else len(self.mu_values))
        base = len(self.s_values) * pairs
        for bound in self.bounds():
            n += base * len(self.p_values if bound == "holder" else self.r_values)
        return n


def derivative_power(fn: FunctionSpec, r: float) -> Callable:
    """``x -> |f'(x)|**r``, the function whose s-convexity both bounds assume."""
    return lambda x: np.abs(evaluate(fn.f_prime, x)) ** r


def sweep(spec: SweepSpec) -> list[BoundReport]:
    """One BoundReport per parameter tuple, in deterministic order.

    A row whose evaluation raises is kept with status ``failed: ...``. With
    ``check_hypothesis`` a row whose ``|f'|**r`` fails the s-convexity grid
    test gets status ``hypothesis_failed`` (it is still evaluated).
    """
    if spec.size() > spec.cap:
        raise CapExceeded(f"sweep has {spec.size()} tuples, cap is {spec.cap}")
    rows = spec.tuples()
    if not rows:
        return []

    fn, iv = spec.function, spec.interval
    mean = mean_value(fn, iv, spec.tol)
    du, dv = derivative_magnitudes(fn, iv)
    hypothesis: dict[tuple[float, float], bool] = {}

    def hypothesis_holds(s: float, r: float) -> bool:
        key = (s, r)
        if key not in hypothesis:
            hypothesis[key] = check_s_convex(derivative_power(fn, r), s, iv).passes
        return hypothesis[key]

    if spec.check_hypothesis:
        # fill the cache up front so worker threads only read it
        for _, prm in rows:
            try:
                hypothesis_holds(prm.s, prm.r)
            except SConvexError:
                hypothesis[(prm.s, prm.r)] = False

    def one(row: tuple[str, InequalityParams]) -> BoundReport:
        bound, prm = row
        try:
            validate_params(prm, "bound")
            rhs = BOUNDS[bound](iv.width, du, dv, prm)
            lhs = abs(weighted_combination(fn, iv, prm.lam, prm.mu) - mean.value)
        except (SConvexError, ArithmeticError, ValueError) as exc:
            return BoundReport.failed(prm, iv, str(exc))
        status = "ok"
        if spec.check_hypothesis and not hypothesis[(prm.s, prm.r)]:
            status = "hypothesis_failed"
        return BoundReport.build(lhs, rhs, mean.error_estimate, prm, iv, status=status)

    if spec.workers > 1:
        with ThreadPoolExecutor(spec.workers) as pool:
            return list(pool.map(one, rows))
    return [one(row) for row in rows]


# --- optimiser -------------------------------------------------------------------


@dataclass(frozen=True)
class Optimum:
    best_lambda: float
    best_mu: float
    best_p: float | None
    best_rhs: float
    lhs: float
    iterations: int
    grid_best_rhs: float = field(default=math.nan)

    def to_dict(self) -> dict:
        return {
            "best_lambda": self.best_lambda,
            "best_mu": self.best_mu,
            "best_p": self.best_p,
            "best_rhs": self.best_rhs,
            "lhs": self.lhs,
            "iterations": self.iterations,
            "grid_best_rhs": self.grid_best_rhs,
        }


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-4) -> tuple[float, float, int]:
    """Minimise a unimodal ``f`` on [a, b]; returns (x, f(x), evaluations)."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    return (c, fc, evals) if fc <= fd else (d, fd, evals)


def minimize_bound(
    fn: FunctionSpec,
    iv: Interval,
    s: float,
    r: float,
    which: str,
    *,
    grid: int = 21,
    xtol: float = 1e-4,
    tol: float = DEFAULT_TOL,
) -> Optimum:
    """Smallest RHS over (lambda, mu) in [0, 1]**2 for fixed s and r.

    A ``grid x grid`` scan picks the start (ties go to the smaller lambda, then
    the smaller mu); golden-section search then refines lambda and mu in turn
    inside one grid cell either side. A refined point replaces the incumbent
    only when strictly better, so the result never exceeds the grid minimum.
    """
    bound = BOUND_ALIASES[which]
    rhs_fn = BOUNDS[bound]
    p = r / (r - 1) if bound == "holder" else None
    du, dv = derivative_magnitudes(fn, iv)

    def objective(lam: float, mu: float) -> float:
        prm = InequalityParams(s, lam, mu, p, r)
        return rhs_fn(iv.width, du, dv, prm)

    evals = 0
    ticks = np.linspace(0.0, 1.0, grid)
    best = (math.inf, 0.0, 0.0)
    for lam in ticks:
        for mu in ticks:
            val = objective(float(lam), float(mu))
            evals += 1
            if val < best[0]:
                best = (val, float(lam), float(mu))
    grid_best, lam, mu = best
    step = 1.0 / (grid - 1)
    best_val = grid_best

    for coord in ("lambda", "mu"):
        centre = lam if coord == "lambda" else mu
        lo, hi = max(0.0, centre - step), min(1.0, centre + step)
        if coord == "lambda":
            x, fx, n = golden_section(lambda t: objective(t, mu), lo, hi, xtol)
        else:
            x, fx, n = golden_section(lambda t: objective(lam, t), lo, hi, xtol)
        evals += n
        if fx < best_val:
            best_val = fx
            if coord == "lambda":
                lam = x
            else:
                mu = x

    mean = mean_value(fn, iv, tol)
    lhs = abs(weighted_combination(fn, iv, lam, mu) - mean.value)
    return Optimum(lam, mu, p, best_val, lhs, evals, grid_best)
