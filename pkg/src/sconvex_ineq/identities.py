"""The weighted midpoint/endpoint integral identity and the absolute moments.

For real ``lam`` and ``mu`` the combination

    (lam*f(u) + mu*f(v))/2 + (2 - lam - mu)/2 * f((u+v)/2) - mean of f on [u, v]

equals

    (v-u)/4 * int_0^1 [(1-lam-a) f'(a*u + (1-a)*m) + (mu-a) f'(a*m + (1-a)*v)] da

with ``m = (u+v)/2``. Both sides are evaluated independently here so that
the equality itself can be checked numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import FunctionSpec, Interval, RangeError, evaluate
from .quadrature import DEFAULT_TOL, QuadResult, integrate

# The source prints "(1 - t)" in the first derivative argument although the
# integration variable is alpha everywhere else; it is read as (1 - alpha).
ALPHA_READING_NOTE = "first derivative argument taken as a*u + (1-a)*(u+v)/2"


@dataclass(frozen=True)
class MomentPair:
    """``m0 = int_0^1 |y-a|^x da`` and ``m1 = int_0^1 a |y-a|^x da``."""

    m0: float
    m1: float


def _check_moment_domain(y: float, x: float) -> None:
    if not 0 <= y <= 1:
        raise RangeError("y", f"must lie in [0, 1], got {y}")
    if not x > 0:
        raise RangeError("x", f"must be > 0, got {x}")


def lemma2_closed(y: float, x: float) -> MomentPair:
    """Closed forms of the two absolute moments of ``|y - a|`` on [0, 1]."""
    _check_moment_domain(y, x)
    m0 = (y ** (x + 1) + (1 - y) ** (x + 1)) / (x + 1)
    m1 = (y ** (x + 2) + (x + 1 + y) * (1 - y) ** (x + 1)) / ((x + 1) * (x + 2))
    return MomentPair(m0, m1)


def lemma2_oracle(y: float, x: float, tol: float = 1e-13) -> tuple[MomentPair, float]:
    """The same moments by adaptive quadrature, split at the kink ``a = y``.

    Returns the pair and the larger of the two error estimates.
    """
    _check_moment_domain(y, x)
    r0 = integrate(lambda a: abs(y - a) ** x, 0.0, 1.0, tol, points=[y])
    r1 = integrate(lambda a: a * abs(y - a) ** x, 0.0, 1.0, tol, points=[y])
    return MomentPair(r0.value, r1.value), max(r0.error_estimate, r1.error_estimate)


def weighted_combination(fn: FunctionSpec, iv: Interval, lam: float, mu: float) -> float:
    """``(lam f(u) + mu f(v))/2 + (2-lam-mu)/2 f(m)``, the quadrature-free part."""
    fu, fv, fm = (float(v) for v in evaluate(fn.f, [iv.u, iv.v, iv.midpoint]))
    return 0.5 * (lam * fu + mu * fv) + 0.5 * (2 - lam - mu) * fm


def mean_value(fn: FunctionSpec, iv: Interval, tol: float = DEFAULT_TOL) -> QuadResult:
    res = integrate(fn.f, iv.u, iv.v, tol * iv.width, points=fn.kinks)
    return QuadResult(res.value / iv.width, res.error_estimate / iv.width, res.subdivisions)


def identity_lhs_with_error(
    fn: FunctionSpec, iv: Interval, lam: float, mu: float, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    mean = mean_value(fn, iv, tol)
    return weighted_combination(fn, iv, lam, mu) - mean.value, mean.error_estimate


def identity_lhs(fn: FunctionSpec, iv: Interval, lam: float, mu: float, tol: float = DEFAULT_TOL) -> float:
    return identity_lhs_with_error(fn, iv, lam, mu, tol)[0]


def identity_rhs_with_error(
    fn: FunctionSpec, iv: Interval, lam: float, mu: float, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    u, v, m = iv.u, iv.v, iv.midpoint
    fp = fn.f_prime

    def integrand(a):
        return (1 - lam - a) * evaluate(fp, a * u + (1 - a) * m) + (mu - a) * evaluate(fp, a * m + (1 - a) * v)

    # alpha values where either derivative argument crosses a kink of f'
    breaks = [(m - c) / (m - u) for c in fn.kinks] + [(v - c) / (v - m) for c in fn.kinks]
    scale = 0.25 * iv.width
    # tolerance on the scaled result, not on the raw integral
    res = integrate(integrand, 0.0, 1.0, tol / scale, points=breaks)
    return scale * res.value, scale * res.error_estimate


def identity_rhs(fn: FunctionSpec, iv: Interval, lam: float, mu: float, tol: float = DEFAULT_TOL) -> float:
    return identity_rhs_with_error(fn, iv, lam, mu, tol)[0]


def identity_residual(
    fn: FunctionSpec, iv: Interval, lam: float, mu: float, tol: float = DEFAULT_TOL
) -> dict:
    """Both sides, their difference and the summed quadrature error."""
    lhs, e_lhs = identity_lhs_with_error(fn, iv, lam, mu, tol)
    rhs, e_rhs = identity_rhs_with_error(fn, iv, lam, mu, tol)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "difference": abs(lhs - rhs),
        "quad_error": e_lhs + e_rhs,
        "note": ALPHA_READING_NOTE,
    }


def relative_gap(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


__all__ = [
    "ALPHA_READING_NOTE",
    "MomentPair",
    "identity_lhs",
    "identity_residual",
    "identity_rhs",
    "lemma2_closed",
    "lemma2_oracle",
    "mean_value",
    "relative_gap",
    "weighted_combination",
]
