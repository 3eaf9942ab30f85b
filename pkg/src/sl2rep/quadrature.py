"""Thin wrapper around adaptive Gauss-Kronrod quadrature.

All integrands in this package are smooth away from explicitly listed
split points, so QUADPACK's globally adaptive rule with its embedded
error estimate is used directly.  A result is only returned when the
reported error estimate meets the requested absolute tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from scipy.integrate import quad

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value + other.value, self.error + other.error)

    def __neg__(self) -> "QuadResult":
        return QuadResult(-self.value, self.error)


def integrate(
    fn: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-10,
    split_points: Optional[Sequence[float]] = None,
) -> QuadResult:
    """Integrate fn over [a, b], certifying the error estimate.

    The certificate is absolute tolerance `tol` with a relative floor of
    1e-12 * |value| (the rule's estimate cannot beat machine-relative
    accuracy on large results).
    """
    if a == b:
        return QuadResult(0.0, 0.0)
    pts = None
    if split_points:
        pts = sorted(p for p in split_points if a < p < b)
        pts = pts or None
    value, err = quad(fn, a, b, epsabs=tol, epsrel=1e-12, limit=400, points=pts)
    if err > max(tol, 1e-12 * abs(value), 1e-14):
        raise QuadratureError(
            f"error estimate {err:.3e} exceeds requested tolerance {tol:.3e}"
        )
    return QuadResult(value, err)
