"""Shared domain types, parameter validation and small numeric helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Literal

import numpy as np

ScalarMap = Callable[[float], float]

CONJUGACY_TOL = 1e-12
DERIVATIVE_RTOL = 1e-6
CLOSED_FORM_RTOL = 1e-9
SATISFIED_SLACK = 1e-12


class SConvexError(Exception):
    """Base class for every error raised by this package."""


class RangeError(SConvexError, ValueError):
    """A parameter lies outside its admissible range."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class ConjugacyError(RangeError):
    def __init__(self, p: float, r: float):
        super().__init__("p", f"1/p + 1/r = {1 / p + 1 / r!r} is not 1 (p={p}, r={r})")


class DomainError(SConvexError, ValueError):
    pass


class MissingExponent(SConvexError, ValueError):
    pass


class MissingBound(SConvexError, ValueError):
    pass


class UnknownId(SConvexError, KeyError):
    pass


class DerivativeMismatch(SConvexError, ValueError):
    pass


def evaluate(f: ScalarMap, x) -> np.ndarray:
    """Evaluate ``f`` on an array, vectorised when ``f`` supports numpy input."""
    x = np.asarray(x, dtype=float)
    try:
        with np.errstate(all="ignore"):
            y = np.asarray(f(x), dtype=float)
        if y.shape == x.shape:
            return y
        if y.ndim == 0:
            return np.full(x.shape, float(y))
    except (TypeError, ValueError):
        pass
    flat = [float(f(float(xi))) for xi in x.ravel()]
    return np.asarray(flat, dtype=float).reshape(x.shape)


@dataclass(frozen=True)
class Interval:
    u: float
    v: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise RangeError("interval", f"endpoints must be finite, got [{self.u}, {self.v}]")
        if not self.u < self.v:
            raise RangeError("interval", f"need u < v, got u={self.u}, v={self.v}")

    @property
    def width(self) -> float:
        return self.v - self.u

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.u + self.v)

    def require_nonnegative(self) -> "Interval":
        if self.u < 0:
            raise DomainError(f"s-convexity lives on [0, inf); got u={self.u}")
        return self

    def grid(self, n: int) -> np.ndarray:
        return np.linspace(self.u, self.v, n)


@dataclass(frozen=True)
class FunctionSpec:
    """A scalar function together with its first derivative.

    ``fourth_deriv_bound`` is the sup norm of the fourth derivative on the
    interval of interest, when known; only the classical Simpson check needs it.
    ``kinks`` lists points where ``f_prime`` jumps; integrators split there.
    """

    f: ScalarMap
    f_prime: ScalarMap
    fourth_deriv_bound: float | None = None
    label: str = ""
    kinks: tuple[float, ...] = ()

    def __post_init__(self):
        b = self.fourth_deriv_bound
        if b is not None and not b >= 0:
            raise RangeError("fourth_deriv_bound", f"must be >= 0, got {b}")

    def check_derivative(self, iv: Interval, n: int = 1000, rtol: float = DERIVATIVE_RTOL) -> None:
        """Compare ``f_prime`` with a central difference of ``f`` on an ``n``-point grid.

        Raises DerivativeMismatch at the first grid point where the two
        disagree by more than ``rtol * max(1, |f_prime|)``.
        """
        x = iv.grid(n)
        h = np.cbrt(np.finfo(float).eps) * np.maximum(np.abs(x), 1.0)
        # keep the stencil inside the interval
        h = np.minimum(h, 0.5 * iv.width)
        centre = np.clip(x, iv.u + h, iv.v - h)
        fd = (evaluate(self.f, centre + h) - evaluate(self.f, centre - h)) / (2 * h)
        fp = evaluate(self.f_prime, centre)
        err = np.abs(fd - fp)
        bad = np.flatnonzero(~(err <= rtol * np.maximum(1.0, np.abs(fp))))
        if bad.size:
            i = bad[0]
            raise DerivativeMismatch(
                f"{self.label or 'f'}: f_prime({centre[i]:.6g}) = {fp[i]:.10g} but "
                f"finite difference gives {fd[i]:.10g}"
            )


@dataclass(frozen=True)
class InequalityParams:
    """Parameters shared by the two bounds.

    ``p`` is the Hoelder exponent and is absent when only the power-mean bound
    applies (that bound allows r = 1, for which no finite conjugate exists).
    """

    s: float
    lam: float
    mu: float
    p: float | None = None
    r: float = 1.0

    @classmethod
    def holder(cls, s: float, lam: float, mu: float, p: float) -> "InequalityParams":
        return cls(s=s, lam=lam, mu=mu, p=p, r=p / (p - 1))

    def as_dict(self) -> dict:
        return {"s": self.s, "lambda": self.lam, "mu": self.mu, "p": self.p, "r": self.r}

    @classmethod
    def from_dict(cls, d: dict) -> "InequalityParams":
        return cls(s=d["s"], lam=d["lambda"], mu=d["mu"], p=d.get("p"), r=d.get("r", 1.0))


def validate_params(params: InequalityParams, mode: Literal["identity", "bound"]) -> InequalityParams:
    """Check ``params`` against the invariants of ``mode``; return them unchanged."""
    if mode not in ("identity", "bound"):
        raise ValueError(f"unknown mode {mode!r}")
    for name in ("s", "lam", "mu", "r"):
        value = getattr(params, name)
        if not math.isfinite(value):
            raise RangeError(name, f"must be finite, got {value}")
    if not 0 < params.s <= 1:
        raise RangeError("s", f"must lie in (0, 1], got {params.s}")
    if params.r < 1:
        raise RangeError("r", f"must be >= 1, got {params.r}")
    if params.p is not None:
        if not params.p > 1:
            raise RangeError("p", f"must be > 1, got {params.p}")
        if not params.r > 1:
            raise RangeError("r", f"must be > 1 when p is given, got {params.r}")
        if abs(1 / params.p + 1 / params.r - 1) > CONJUGACY_TOL:
            raise ConjugacyError(params.p, params.r)
    if mode == "bound":
        if not 0 <= params.lam <= 1:
            raise RangeError("lambda", f"must lie in [0, 1], got {params.lam}")
        if not 0 <= params.mu <= 1:
            raise RangeError("mu", f"must lie in [0, 1], got {params.mu}")
    return params


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float
    margin: float
    ratio: float
    quad_error: float
    satisfied: bool
    params: InequalityParams
    interval: Interval
    status: str = "ok"
    extras: dict = field(default_factory=dict, compare=True, hash=False)

    @classmethod
    def build(
        cls,
        lhs: float,
        rhs: float,
        quad_error: float,
        params: InequalityParams,
        interval: Interval,
        status: str = "ok",
        **extras: float,
    ) -> "BoundReport":
        if rhs == 0:
            ratio = 0.0 if lhs == 0 else math.inf
        else:
            ratio = lhs / rhs
        return cls(
            lhs=lhs,
            rhs=rhs,
            margin=rhs - lhs,
            ratio=ratio,
            quad_error=quad_error,
            satisfied=bool(lhs <= rhs + quad_error + SATISFIED_SLACK),
            params=params,
            interval=interval,
            status=status,
            extras=dict(extras),
        )

    @classmethod
    def failed(cls, params: InequalityParams, interval: Interval, reason: str) -> "BoundReport":
        nan = math.nan
        return cls(nan, nan, nan, nan, nan, False, params, interval, status=f"failed: {reason}")

    @property
    def violated(self) -> bool:
        """True only for an evaluated row whose hypotheses hold and whose bound fails."""
        return self.status == "ok" and not self.satisfied

    def to_dict(self) -> dict:
        d = {
            **self.params.as_dict(),
            "u": self.interval.u,
            "v": self.interval.v,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "ratio": self.ratio,
            "satisfied": self.satisfied,
            "quad_error": self.quad_error,
            "status": self.status,
        }
        if self.extras:
            d["extras"] = dict(self.extras)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BoundReport":
        return cls(
            lhs=d["lhs"],
            rhs=d["rhs"],
            margin=d["margin"],
            ratio=d["ratio"],
            quad_error=d["quad_error"],
            satisfied=d["satisfied"],
            params=InequalityParams.from_dict(d),
            interval=Interval(d["u"], d["v"]),
            status=d.get("status", "ok"),
            extras=dict(d.get("extras", {})),
        )


# --- built-in function family -------------------------------------------------


def power(q: float) -> FunctionSpec:
    """x**q with derivative q*x**(q-1)."""
    if q == 0:
        return constant(1.0)
    return FunctionSpec(
        f=lambda x, q=q: np.power(x, q),
        f_prime=lambda x, q=q: q * np.power(x, q - 1),
        label=f"power:q={q:g}",
    )


def inverse_power(s: float) -> FunctionSpec:
    """x**(-s), the function behind the reciprocal-power mean inequality."""
    return FunctionSpec(
        f=lambda x, s=s: np.power(x, -s),
        f_prime=lambda x, s=s: -s * np.power(x, -s - 1),
        label=f"invpower:s={s:g}",
    )


def exponential() -> FunctionSpec:
    return FunctionSpec(f=np.exp, f_prime=np.exp, label="exp")


def x_log_x() -> FunctionSpec:
    return FunctionSpec(
        f=lambda x: x * np.log(x),
        f_prime=lambda x: np.log(x) + 1.0,
        label="xlnx",
    )


def abs_shift(c: float) -> FunctionSpec:
    return FunctionSpec(
        f=lambda x, c=c: np.abs(x - c),
        f_prime=lambda x, c=c: np.sign(x - c),
        label=f"abs_shift:c={c:g}",
        kinks=(c,),
    )


def constant(c: float) -> FunctionSpec:
    return FunctionSpec(
        f=lambda x, c=c: np.full_like(np.asarray(x, dtype=float), c),
        f_prime=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        fourth_deriv_bound=0.0,
        label=f"const:c={c:g}",
    )


def fourth_derivative_sup(name: str, params: dict, iv: Interval) -> float | None:
    """Sup of |f''''| over ``iv`` for the built-ins, or None when unbounded/unknown."""
    u, v = iv.u, iv.v
    if name == "power":
        q = params["q"]
        if float(q).is_integer() and 0 <= q <= 3:
            return 0.0
        c = abs(q * (q - 1) * (q - 2) * (q - 3))
        if u <= 0 and q < 4:
            return None
        return c * max(abs(u) ** (q - 4), abs(v) ** (q - 4))
    if name == "invpower":
        s = params["s"]
        if u <= 0:
            return None
        return s * (s + 1) * (s + 2) * (s + 3) * u ** (-s - 4)
    if name == "exp":
        return math.exp(v)
    if name == "xlnx":
        return None if u <= 0 else 2.0 / u**3
    if name == "const":
        return 0.0
    return None


BUILTINS: dict[str, Callable[..., FunctionSpec]] = {
    "power": lambda q: power(q),
    "invpower": lambda s: inverse_power(s),
    "exp": lambda: exponential(),
    "xlnx": lambda: x_log_x(),
    "abs_shift": lambda c: abs_shift(c),
    "const": lambda c=1.0: constant(c),
}


def parse_selector(selector: str) -> tuple[str, dict[str, float]]:
    """Split ``name[:key=value,...]`` into the name and a dict of float arguments."""
    name, _, rest = selector.strip().partition(":")
    args: dict[str, float] = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq or not key.strip():
                raise ValueError(f"malformed argument {item!r} in selector {selector!r}")
            args[key.strip()] = float(value)
    if name not in BUILTINS:
        raise ValueError(f"unknown builtin function {name!r}; choose from {sorted(BUILTINS)}")
    return name, args


def builtin(selector: str, iv: Interval | None = None) -> FunctionSpec:
    """Build a FunctionSpec from a selector such as ``power:q=2`` or ``exp``.

    When ``iv`` is given the fourth-derivative sup over it is attached.
    """
    name, args = parse_selector(selector)
    try:
        spec = BUILTINS[name](**args)
    except TypeError as exc:
        raise ValueError(f"bad arguments for {name!r}: {exc}") from None
    if iv is not None and spec.fourth_deriv_bound is None:
        bound = fourth_derivative_sup(name, args, iv)
        spec = replace(spec, fourth_deriv_bound=bound)
    return spec


__all__ = [
    "BoundReport",
    "ConjugacyError",
    "DerivativeMismatch",
    "DomainError",
    "FunctionSpec",
    "InequalityParams",
    "Interval",
    "MissingBound",
    "MissingExponent",
    "RangeError",
    "SConvexError",
    "UnknownId",
    "abs_shift",
    "builtin",
    "constant",
    "evaluate",
    "exponential",
    "inverse_power",
    "parse_selector",
    "power",
    "validate_params",
    "x_log_x",
]
