"""Special means of two positive numbers and the inequalities they satisfy.

The propositions instantiate the two bounds at ``f(x) = x**s`` and
``f(x) = x**(-s)``; their left sides are written with closed-form means
instead of quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bounds import holder_rhs, power_mean_rhs
from .core import BoundReport, InequalityParams, Interval, MissingExponent, RangeError, validate_params


def _check_positive(u: float, v: float) -> None:
    if not (u > 0 and v > 0):
        raise RangeError("u, v", f"means need u, v > 0, got u={u}, v={v}")


def mean_arithmetic(u: float, v: float) -> float:
    _check_positive(u, v)
    return 0.5 * (u + v)


def mean_logarithmic(u: float, v: float) -> float:
    """``(v-u)/(ln v - ln u)``, continuously extended by ``u`` on the diagonal."""
    _check_positive(u, v)
    if u == v:
        return u
    if u > v:
        u, v = v, u
    return (v - u) / math.log1p((v - u) / u)


def mean_identric(u: float, v: float) -> float:
    """``(1/e) (v**v / u**u)**(1/(v-u))``, the p -> 0 limit of L_p."""
    _check_positive(u, v)
    if u == v:
        return u
    return math.exp((v * math.log(v) - u * math.log(u)) / (v - u) - 1)


def power_average(u: float, v: float, q: float) -> float:
    """Mean value of ``x**q`` over [u, v], i.e. ``L_q(u, v)**q``.

    ``q = -1`` gives ``1/L(u, v)`` and ``q = 0`` gives 1.
    """
    _check_positive(u, v)
    if u == v:
        return u**q
    if u > v:
        u, v = v, u
    if q == 0:
        return 1.0
    t = math.log1p((v - u) / u)  # ln(v/u)
    if q == -1:
        return t / (v - u)
    # v**(q+1) - u**(q+1) without cancellation for nearby u, v
    return u ** (q + 1) * math.expm1((q + 1) * t) / ((q + 1) * (v - u))


def mean_generalized_log(u: float, v: float, p: float) -> float:
    """``L_p(u, v)``, extended to p = -1 (logarithmic), p = 0 (identric) and u = v."""
    _check_positive(u, v)
    if u == v:
        return u
    if p == -1:
        return mean_logarithmic(u, v)
    if p == 0:
        return mean_identric(u, v)
    return power_average(u, v, p) ** (1 / p)


@dataclass(frozen=True)
class MeanValues:
    arithmetic: float
    logarithmic: float
    generalized_log: float
    p_exponent: float

    def to_dict(self) -> dict:
        return {
            "arithmetic": self.arithmetic,
            "logarithmic": self.logarithmic,
            "generalized_log": self.generalized_log,
            "p_exponent": self.p_exponent,
        }


def mean_values(u: float, v: float, p: float = 1.0) -> MeanValues:
    return MeanValues(mean_arithmetic(u, v), mean_logarithmic(u, v), mean_generalized_log(u, v, p), p)


# --- propositions ---------------------------------------------------------------


def _prepare(u: float, v: float, params: InequalityParams) -> Interval:
    _check_positive(u, v)
    iv = Interval(u, v)
    validate_params(params, "bound")
    return iv


def _lhs(u: float, v: float, params: InequalityParams, q: float) -> float:
    lam, mu = params.lam, params.mu
    a = mean_arithmetic(u, v)
    combo = 0.5 * (lam * u**q + mu * v**q) + 0.5 * (2 - lam - mu) * a**q
    return abs(combo - power_average(u, v, q))


def proposition_xs_holder(u: float, v: float, params: InequalityParams) -> BoundReport:
    """Hoelder bound applied to ``x**s`` on [u, v].

    ``rhs`` uses ``|f'|**r = s**r x**(r(s-1))``, so the factor s sits outside
    the r-th root. ``extras['paper_variant_rhs']`` keeps the printed form with
    a single s inside the root, i.e. ``s**(1/r)`` outside; it is never smaller.
    """
    iv = _prepare(u, v, params)
    if params.p is None:
        raise MissingExponent("the Hoelder proposition needs p")
    s, r = params.s, params.r
    du, dv = s * u ** (s - 1), s * v ** (s - 1)
    rhs = holder_rhs(v - u, du, dv, params)
    unit = holder_rhs(v - u, u ** (s - 1), v ** (s - 1), params)
    lhs = _lhs(u, v, params, s)
    return BoundReport.build(lhs, rhs, 0.0, params, iv, paper_variant_rhs=s ** (1 / r) * unit)


def xs_powermean_reduced(u: float, v: float, s: float) -> float:
    """The lam = mu = 1, r = 1 bound for ``x**s`` in closed form.

    Substituting E = 1 + s 2**(s+1) and L = 1 gives
    ``s (1 + s 2**s) (v-u) A(u**(s-1), v**(s-1)) / (2**s (s+1)(s+2))``.
    """
    return s * (1 + s * 2**s) * (v - u) * mean_arithmetic(u ** (s - 1), v ** (s - 1)) / (2**s * (s + 1) * (s + 2))


def proposition_xs_powermean(u: float, v: float, params: InequalityParams) -> BoundReport:
    """Power-mean bound applied to ``x**s`` on [u, v].

    At lam = mu = 1 and r = 1 the extras carry the reduced closed form and
    the printed reduction, which has ``s**2`` in place of ``s``.
    """
    iv = _prepare(u, v, params)
    s = params.s
    rhs = power_mean_rhs(v - u, s * u ** (s - 1), s * v ** (s - 1), params)
    extras = {}
    if params.lam == 1 and params.mu == 1 and params.r == 1:
        reduced = xs_powermean_reduced(u, v, s)
        extras = {"reduced_rhs": reduced, "paper_variant_rhs": s * reduced}
    lhs = _lhs(u, v, params, s)
    return BoundReport.build(lhs, rhs, 0.0, params, iv, **extras)


def inverse_power_reduced(u: float, v: float) -> float:
    """``(v-u) (5/36) A(u**-2, v**-2)``: the s = r = 1, lam = mu = 1/3 bound for 1/x."""
    return (v - u) * 5 / 36 * mean_arithmetic(u**-2, v**-2)


def proposition_inverse_power(u: float, v: float, params: InequalityParams) -> BoundReport:
    """Power-mean bound applied to ``x**(-s)`` on [u, v]."""
    iv = _prepare(u, v, params)
    s = params.s
    rhs = power_mean_rhs(v - u, s * u ** (-s - 1), s * v ** (-s - 1), params)
    extras = {}
    third = 1 / 3
    if s == 1 and params.r == 1 and math.isclose(params.lam, third) and math.isclose(params.mu, third):
        extras = {"reduced_rhs": inverse_power_reduced(u, v)}
    lhs = _lhs(u, v, params, -s)
    return BoundReport.build(lhs, rhs, 0.0, params, iv, **extras)


PROPOSITIONS = {
    "p1": proposition_xs_holder,
    "p2": proposition_xs_powermean,
    "p3": proposition_inverse_power,
}
