"""Upper bounds for the weighted midpoint/endpoint functional.

Both bounds control

    | (lam f(u) + mu f(v))/2 + (2-lam-mu)/2 f(m) - mean of f on [u, v] |

in terms of ``|f'(u)|`` and ``|f'(v)|`` when ``|f'|**r`` is s-convex. The
Hoelder route needs conjugate exponents p, r > 1; the power-mean route
works for any r >= 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Callable

from .core import (
    BoundReport,
    FunctionSpec,
    InequalityParams,
    Interval,
    MissingBound,
    MissingExponent,
    RangeError,
    UnknownId,
    evaluate,
    validate_params,
)
from .identities import lemma2_closed, mean_value, weighted_combination
from .quadrature import DEFAULT_TOL, integrate


@dataclass(frozen=True)
class CoefficientSet:
    E: float
    L: float
    I: float
    F: float
    s: float
    lam: float
    mu: float


# --- closed forms ---------------------------------------------------------------


def holder_weights(s: float) -> tuple[float, float]:
    """The (big, small) weights bounding the mean of an s-convex |f'|**r on a half interval."""
    denom = 2**s * (s + 1)
    return (2 ** (s + 1) - 1) / denom, 1 / denom


def holder_prefactor(t: float, p: float) -> float:
    """``(int_0^1 |t - a|**p da)**(1/p)``; symmetric under t -> 1 - t."""
    return lemma2_closed(t, p).m0 ** (1 / p)


def _E(s: float, t: float) -> float:
    return 2 * (2 - t) ** (s + 2) + (t - 1) * (s + 2 ** (s + 2) + 2) + 2 ** (s + 1) * s * t - 1


def _L(s: float, t: float) -> float:
    return 2 * t ** (s + 2) + s * (1 - t) - 2 * t + 1


def coefficients_ELIF(s: float, lam: float, mu: float) -> CoefficientSet:
    if not 0 < s <= 1:
        raise RangeError("s", f"must lie in (0, 1], got {s}")
    for name, t in (("lambda", lam), ("mu", mu)):
        if not 0 <= t <= 1:
            raise RangeError(name, f"must lie in [0, 1], got {t}")
    return CoefficientSet(E=_E(s, lam), L=_L(s, lam), I=_L(s, mu), F=_E(s, mu), s=s, lam=lam, mu=mu)


def coefficients_by_quadrature(s: float, lam: float, mu: float, tol: float = 1e-13) -> CoefficientSet:
    """The four coefficients from their defining integrals (independent of the closed forms)."""
    k = (s + 1) * (s + 2)
    y = 1 - lam

    def q(g):
        return k * integrate(g, 0.0, 1.0, tol, points=[y, mu]).value

    return CoefficientSet(
        E=q(lambda a: abs(y - a) * (1 + a) ** s),
        L=q(lambda a: abs(y - a) * (1 - a) ** s),
        I=q(lambda a: abs(mu - a) * a**s),
        F=q(lambda a: abs(mu - a) * (2 - a) ** s),
        s=s,
        lam=lam,
        mu=mu,
    )


def holder_rhs(width: float, du: float, dv: float, params: InequalityParams) -> float:
    """Hoelder-type bound from the derivative magnitudes ``du = |f'(u)|``, ``dv = |f'(v)|``."""
    if params.p is None:
        raise MissingExponent("the Hoelder bound needs a conjugate exponent p > 1")
    validate_params(params, "bound")
    p, r = params.p, params.r
    big, small = holder_weights(params.s)
    au, av = du**r, dv**r
    left = holder_prefactor(1 - params.lam, p) * (big * au + small * av) ** (1 / r)
    right = holder_prefactor(params.mu, p) * (small * au + big * av) ** (1 / r)
    return 0.25 * width * (left + right)


def power_mean_rhs(width: float, du: float, dv: float, params: InequalityParams) -> float:
    """Power-mean-type bound from the derivative magnitudes."""
    validate_params(params, "bound")
    s, r, lam, mu = params.s, params.r, params.lam, params.mu
    c = coefficients_ELIF(s, lam, mu)
    au, av = du**r, dv**r
    scale = (1 / (2 ** (s - 1) * (s + 1) * (s + 2))) ** (1 / r)
    left = (2 * lam**2 - 2 * lam + 1) ** (1 - 1 / r) * (c.E * au + c.L * av) ** (1 / r)
    right = (2 * mu**2 - 2 * mu + 1) ** (1 - 1 / r) * (c.I * au + c.F * av) ** (1 / r)
    return width / 8 * scale * (left + right)


def derivative_magnitudes(fn: FunctionSpec, iv: Interval) -> tuple[float, float]:
    du, dv = evaluate(fn.f_prime, [iv.u, iv.v])
    return abs(float(du)), abs(float(dv))


def holder_bound(fn: FunctionSpec, iv: Interval, params: InequalityParams) -> float:
    return holder_rhs(iv.width, *derivative_magnitudes(fn, iv), params)


def power_mean_bound(fn: FunctionSpec, iv: Interval, params: InequalityParams) -> float:
    return power_mean_rhs(iv.width, *derivative_magnitudes(fn, iv), params)


# --- left-hand side and reports ---------------------------------------------------


def lhs_with_error(
    fn: FunctionSpec, iv: Interval, lam: float, mu: float, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    mean = mean_value(fn, iv, tol)
    return abs(weighted_combination(fn, iv, lam, mu) - mean.value), mean.error_estimate


def lhs_functional(fn: FunctionSpec, iv: Interval, lam: float, mu: float, tol: float = DEFAULT_TOL) -> float:
    return lhs_with_error(fn, iv, lam, mu, tol)[0]


BOUNDS: dict[str, Callable[[float, float, float, InequalityParams], float]] = {
    "holder": holder_rhs,
    "power_mean": power_mean_rhs,
}
# command-line aliases for the two theorems
BOUND_ALIASES = {"t0": "holder", "t1": "power_mean", "holder": "holder", "power_mean": "power_mean"}


def evaluate_bound(
    fn: FunctionSpec,
    iv: Interval,
    params: InequalityParams,
    which: str,
    tol: float = DEFAULT_TOL,
) -> BoundReport:
    """LHS, the chosen bound and the comparison, packed into a BoundReport."""
    rhs_fn = BOUNDS[BOUND_ALIASES[which]]
    rhs = rhs_fn(iv.width, *derivative_magnitudes(fn, iv), params)
    lhs, err = lhs_with_error(fn, iv, params.lam, params.mu, tol)
    return BoundReport.build(lhs, rhs, err, params, iv)


def hermite_hadamard_check(
    fn: FunctionSpec, iv: Interval, tol: float = DEFAULT_TOL
) -> tuple[bool, bool, tuple[float, float, float]]:
    """Midpoint value <= mean <= endpoint average, each side allowing the quadrature error."""
    mean = mean_value(fn, iv, tol)
    fu, fv, fm = (float(x) for x in evaluate(fn.f, [iv.u, iv.v, iv.midpoint]))
    slack = mean.error_estimate + 1e-12 * max(1.0, abs(mean.value))
    trapezoid = 0.5 * (fu + fv)
    return fm <= mean.value + slack, mean.value <= trapezoid + slack, (fm, mean.value, trapezoid)


def simpson_classical_check(fn: FunctionSpec, iv: Interval, tol: float = DEFAULT_TOL) -> BoundReport:
    """Simpson's rule error against ``||f''''|| (v-u)**4 / 1280``."""
    if fn.fourth_deriv_bound is None:
        raise MissingBound(f"{fn.label or 'function'} has no fourth-derivative bound")
    third = 1 / 3
    # Simpson's functional is the lam = mu = 1/3 member of the family
    lhs, err = lhs_with_error(fn, iv, third, third, tol)
    rhs = fn.fourth_deriv_bound * iv.width**4 / 1280
    return BoundReport.build(lhs, rhs, err, InequalityParams(s=1.0, lam=third, mu=third), iv)


# --- printed corollary constants ------------------------------------------------


@dataclass(frozen=True)
class PrintedConstant:
    """A constant as printed (``text``) with the function that recomputes it."""

    name: str
    text: str
    compute: Callable[[InequalityParams], float]

    @property
    def exact(self) -> bool:
        return "/" in self.text

    @property
    def decimals(self) -> int:
        return 0 if self.exact else len(self.text.partition(".")[2])

    @property
    def value(self) -> float:
        return float(Fraction(self.text))

    def matches(self, computed: float) -> bool:
        if self.exact:
            return abs(computed - self.value) <= 1e-12
        return round_half_up(computed, self.decimals) == Decimal(self.text)


@dataclass(frozen=True)
class Corollary:
    id: str
    params: InequalityParams
    constants: tuple[PrintedConstant, ...]
    notes: tuple[str, ...] = ()
    # printed closed-form prefactor as a function of p, checked against the
    # general bound for several p when the entry is a whole family
    printed_prefactor: Callable[[float], float] | None = field(default=None, compare=False)


def round_half_up(x: float, decimals: int) -> Decimal:
    return Decimal(repr(x)).quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP)


def _pre_lam(prm: InequalityParams) -> float:
    return holder_prefactor(1 - prm.lam, prm.p)


def _pre_mu(prm: InequalityParams) -> float:
    return holder_prefactor(prm.mu, prm.p)


def _big(prm: InequalityParams) -> float:
    return holder_weights(prm.s)[0]


def _small(prm: InequalityParams) -> float:
    return holder_weights(prm.s)[1]


def _numeric(prefactor: str, big: str, small: str) -> tuple[PrintedConstant, ...]:
    return (
        PrintedConstant("prefactor_lambda", prefactor, _pre_lam),
        PrintedConstant("prefactor_mu", prefactor, _pre_mu),
        PrintedConstant("weight_big", big, _big),
        PrintedConstant("weight_small", small, _small),
    )


def _s1_family() -> tuple[PrintedConstant, ...]:
    return (
        PrintedConstant("weight_big", "3/4", _big),
        PrintedConstant("weight_small", "1/4", _small),
    )


def _catalog() -> dict[str, Corollary]:
    e = math.e
    third, two_thirds = 1 / 3, 2 / 3
    outer = "outer bracket exponent printed as {printed}; computed as 1/r = {computed}"
    return {
        "i": Corollary("i", InequalityParams.holder(0.3, 0.3, 0.3, 2.0), _numeric("0.351", "0.914", "0.625")),
        "ii": Corollary("ii", InequalityParams.holder(0.5, 0.5, 0.5, 2.0), _numeric("0.289", "0.862", "0.471")),
        "iii": Corollary(
            "iii",
            InequalityParams.holder(0.75, 0.3, 0.7, 10.0),
            _numeric("0.531", "0.803", "0.34"),
            (outer.format(printed="9/10", computed="9/10"),),
        ),
        "iv": Corollary("iv", InequalityParams.holder(0.4, 0.2, 0.8, 3.0), _numeric("0.468", "0.887", "0.541")),
        "v": Corollary(
            "v",
            InequalityParams.holder(0.4, 0.2, 0.8, e),
            _numeric("0.455", "0.887", "0.541"),
            (outer.format(printed="e/(e-1)", computed="(e-1)/e"),),
        ),
        "vi": Corollary(
            "vi",
            InequalityParams.holder(1.0, third, two_thirds, 2.0),
            (
                PrintedConstant("overall_prefactor_lambda", "1/12", lambda prm: _pre_lam(prm) / 4),
                PrintedConstant("overall_prefactor_mu", "1/12", lambda prm: _pre_mu(prm) / 4),
                PrintedConstant("weight_big", "3/4", _big),
                PrintedConstant("weight_small", "1/4", _small),
            ),
        ),
        "s1_half": Corollary(
            "s1_half",
            InequalityParams.holder(1.0, 0.5, 0.5, 2.0),
            _s1_family(),
            ("(v-u)/(8 (p+1)^(1/p) 4^(1/r)) * [(3a+b)^(1/r) + (a+3b)^(1/r)], a=|f'(u)|^r, b=|f'(v)|^r",),
            printed_prefactor=lambda p: 1 / (8 * (p + 1) ** (1 / p) * 4 ** (1 - 1 / p)),
        ),
        "s1_twothirds": Corollary(
            "s1_twothirds",
            InequalityParams.holder(1.0, two_thirds, two_thirds, 2.0),
            _s1_family(),
            ("|(f(u)+f(v)+f(m))/3 - mean| <= (v-u)/4^(1+1/r) ((1+2^(p+1))/(3^(p+1)(p+1)))^(1/p) [...]",),
            printed_prefactor=lambda p: ((1 + 2 ** (p + 1)) / (3 ** (p + 1) * (p + 1))) ** (1 / p)
            / 4 ** (2 - 1 / p),
        ),
        "s1_third": Corollary(
            "s1_third",
            InequalityParams.holder(1.0, third, third, 2.0),
            _s1_family(),
            ("Simpson functional; same prefactor as lambda = mu = 2/3 by the t -> 1-t symmetry",),
            printed_prefactor=lambda p: ((1 + 2 ** (p + 1)) / (3 ** (p + 1) * (p + 1))) ** (1 / p)
            / 4 ** (2 - 1 / p),
        ),
        "midpoint_trapezoid": Corollary(
            "midpoint_trapezoid",
            InequalityParams.holder(1.0, 0.5, 0.5, 2.0),
            (),
            (
                "hypothesis: (f(u)+f(v))/2 = f((u+v)/2); then the trapezoid and midpoint deviations "
                "share the bound (v-u)/(8 (p+1)^(1/p)) [(B a + S b)^(1/r) + (S a + B b)^(1/r)]",
            ),
            printed_prefactor=lambda p: 1 / (8 * (p + 1) ** (1 / p)),
        ),
    }


CATALOG = _catalog()


def corollary_catalog(id: str) -> Corollary:
    try:
        return CATALOG[id]
    except KeyError:
        raise UnknownId(f"unknown corollary id {id!r}; choose from {sorted(CATALOG)}") from None


def family_prefactor(cor: Corollary, p: float) -> float:
    """The overall prefactor the general bound yields for ``cor``'s lambda at exponent ``p``.

    The s = 1 families fold the 1/4 weight out of the bracket, hence the
    extra ``(1/4)**(1/r)``; the midpoint/trapezoid entry keeps the weights.
    """
    prm = InequalityParams.holder(cor.params.s, cor.params.lam, cor.params.mu, p)
    base = 0.25 * holder_prefactor(1 - prm.lam, p)
    if cor.id == "midpoint_trapezoid":
        return base
    return base * 0.25 ** (1 / prm.r)


def reproduce_corollary(id: str) -> list[dict]:
    """Recompute each printed constant of a corollary and compare at printed precision."""
    cor = corollary_catalog(id)
    rows = []
    for const in cor.constants:
        computed = const.compute(cor.params)
        rows.append(
            {
                "id": cor.id,
                "name": const.name,
                "printed": const.text,
                "computed": computed,
                "rounded": str(round_half_up(computed, const.decimals)) if not const.exact else None,
                "match": const.matches(computed),
            }
        )
    if cor.printed_prefactor is not None:
        for p in (1.5, 2.0, 3.0, math.e, 10.0):
            computed = family_prefactor(cor, p)
            printed = cor.printed_prefactor(p)
            rows.append(
                {
                    "id": cor.id,
                    "name": f"prefactor(p={p:g})",
                    "printed": printed,
                    "computed": computed,
                    "rounded": None,
                    "match": abs(computed - printed) <= 1e-12 * max(1.0, abs(printed)),
                }
            )
    return rows
