"""Membership tests for the class of s-convex functions in the second sense.

A function f on [0, inf) belongs to the class when

    f(a*x + (1-a)*y) <= a**s * f(x) + (1-a)**s * f(y)

for all x, y >= 0 and a in [0, 1]. Nothing here is a proof: membership is
probed on a dense grid of (a, x, y) triples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import Interval, RangeError, SConvexError, evaluate

DEFAULT_GRID = 50
VIOLATION_RTOL = 1e-9


class NegativeValue(SConvexError, ValueError):
    pass


@dataclass(frozen=True)
class SConvexityReport:
    s: float
    max_violation: float
    witness: tuple[float, float, float] | None  # (alpha, x, y)
    grid_size: int
    threshold: float

    @property
    def passes(self) -> bool:
        return self.max_violation <= self.threshold

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "max_violation": self.max_violation,
            "threshold": self.threshold,
            "passes": self.passes,
            "witness": None if self.witness is None else dict(zip(("alpha", "x", "y"), self.witness)),
            "grid_size": self.grid_size,
        }


def check_s_convex(f: Callable, s: float, domain: Interval, n: int = DEFAULT_GRID) -> SConvexityReport:
    """Worst signed violation of the defining inequality over an n**3 grid.

    ``x`` and ``y`` range over ``n`` equispaced points of ``domain`` and ``a``
    over ``n`` equispaced points of [0, 1]. The check passes when the worst
    violation is at most ``1e-9 * (1 + max|f|)`` on the grid.
    """
    domain.require_nonnegative()
    if n < 2:
        raise RangeError("n", f"grid needs at least 2 points, got {n}")
    if not 0 < s <= 1:
        raise RangeError("s", f"must lie in (0, 1], got {s}")

    pts = domain.grid(n)
    alpha = np.linspace(0.0, 1.0, n)
    fx = evaluate(f, pts)
    a = alpha[:, None, None]
    z = a * pts[None, :, None] + (1 - a) * pts[None, None, :]
    fz = evaluate(f, z)
    with np.errstate(invalid="ignore"):
        bound = a**s * fx[None, :, None] + (1 - a) ** s * fx[None, None, :]
        gap = fz - bound
    if not np.all(np.isfinite(gap)):
        gap = np.where(np.isnan(gap), np.inf, gap)

    scale = float(np.max(np.abs(fx))) if np.all(np.isfinite(fx)) else np.inf
    threshold = VIOLATION_RTOL * (1.0 + scale)
    idx = np.unravel_index(int(np.argmax(gap)), gap.shape)
    worst = float(gap[idx])
    witness = None
    if worst > threshold:
        witness = (float(alpha[idx[0]]), float(pts[idx[1]]), float(pts[idx[2]]))
    return SConvexityReport(s=s, max_violation=worst, witness=witness, grid_size=n, threshold=threshold)


def power_of_convex(g: Callable, s: float) -> Callable:
    """``x -> g(x)**s``; s-convex whenever ``g`` is non-negative and convex.

    Raises NegativeValue on evaluation if ``g`` goes negative.
    """
    if not 0 < s <= 1:
        raise RangeError("s", f"must lie in (0, 1], got {s}")

    def composed(x):
        gx = evaluate(g, x)
        if np.any(gx < 0):
            bad = np.asarray(x, dtype=float).ravel()[np.flatnonzero(gx.ravel() < 0)[0]] if np.ndim(x) else x
            raise NegativeValue(f"g({bad!r}) is negative")
        out = gx**s
        return out if np.ndim(x) else float(out)

    return composed


def estimate_max_s(f: Callable, domain: Interval, n: int = DEFAULT_GRID, tol: float = 1e-3) -> float:
    """Largest s in (0, 1] for which the grid check passes (empirical).

    s = 1 is tried first. Otherwise the pass set is assumed to be an interval
    (0, s*], which holds for non-negative f, and s* is bracketed by bisection
    down to ``tol``. Returns 0 when even ``s = tol`` fails.
    """
    if check_s_convex(f, 1.0, domain, n).passes:
        return 1.0
    if not check_s_convex(f, tol, domain, n).passes:
        return 0.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if check_s_convex(f, mid, domain, n).passes:
            lo = mid
        else:
            hi = mid
    return max(lo, tol)


def second_differences_convex(f: Callable, domain: Interval, n: int = DEFAULT_GRID) -> bool:
    """Ordinary convexity on the grid: every second divided difference >= -1e-9*scale."""
    x = domain.grid(n)
    y = evaluate(f, x)
    # h**2 times the second divided difference
    dd = y[2:] - 2 * y[1:-1] + y[:-2]
    scale = 1.0 + float(np.max(np.abs(y)))
    return bool(np.all(dd >= -VIOLATION_RTOL * scale))
