"""Characters and orbital integrals on the rotation and split tori.

The test-function family is K-bi-invariant by construction: a smooth
compactly supported radial profile h is evaluated on the point-pair
invariant u(g.i, i), which reduces to the closed form
(a - d)^2 + (b + c)^2 in the matrix entries.

Character normalization on the rotation torus, with D = e^{i theta} -
e^{-i theta}:

    Theta_n^{+}(k(theta)) = -e^{+i n theta} / D
    Theta_n^{-}(k(theta)) = -e^{-i n theta} / D

the unique exponential-quotient choice (up to a global sign fixed by
Theta_1^+ - Theta_1^- = -1) whose difference has numerator
-(e^{i n theta} - e^{-i n theta}).  Consequences worth noting: the
packets swap with a sign under theta -> -theta
(Theta_n^{+-}(-theta) = -Theta_n^{-+}(theta)), and the quotient-form
stable value is odd in theta.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, SingularPointError
from .matrix_core import GroupElement
from .quadrature import QuadResult, integrate

_ANGLE_TOL = 1e-12


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class RadialTestFunction:
    """Smooth compactly supported K-bi-invariant function on the group.

    The profile is the standard bump exp(-1/(1 - s^2)) with
    s = (u - center) / width, supported on |s| < 1, evaluated on the
    point-pair invariant u of (g.i, i).  center = 0 gives the bump
    exp(-1/(1 - (u/R)^2)) on u < R with R = width.
    """

    center: float = 0.0
    width: float = 4.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.width <= 0.0:
            raise DomainError("bump width must be positive")
        if self.center < 0.0:
            raise DomainError("bump center must be >= 0 (u is nonnegative)")

    @property
    def support_radius(self) -> float:
        """u beyond this value gives f = 0."""
        return self.center + self.width

    def profile(self, u: float) -> float:
        s = (u - self.center) / self.width
        if abs(s) >= 1.0:
            return 0.0
        return self.amplitude * math.exp(-1.0 / (1.0 - s * s))

    def __call__(self, g: GroupElement) -> float:
        u = (g.a - g.d) ** 2 + (g.b + g.c) ** 2
        return self.profile(u)

    def on_unipotent(self, x: float) -> float:
        """f([[1, x], [0, 1]]) = profile(x^2)."""
        return self.profile(x * x)


def unipotent_integral(f: RadialTestFunction, tol: float = 1e-10) -> QuadResult:
    """Integral of f over the unipotent subgroup, int_R f(n(u)) du."""
    r = math.sqrt(f.support_radius)
    half = integrate(f.on_unipotent, 0.0, r, tol=tol / 2.0)
    return QuadResult(2.0 * half.value, 2.0 * half.error)


def half_unipotent_integral(f: RadialTestFunction, tol: float = 1e-10) -> QuadResult:
    """int_0^infty f(n(u)) du, the coefficient of the |lambda|^-1 pole."""
    r = math.sqrt(f.support_radius)
    return integrate(f.on_unipotent, 0.0, r, tol=tol)


# ---------------------------------------------------------------------------
# characters


def so3_character(n: int, theta: float) -> float:
    """sin((2n-1) theta) / sin(theta), with removable singularities filled.

    Evaluated as the degree-(2n-2) Chebyshev polynomial of the second
    kind at cos(theta), which is the same function with no singular
    points and value 2n-1 at every multiple of pi.
    """
    if n < 1:
        raise DomainError("index must be a positive integer")
    x = math.cos(theta)
    # U_0, U_1, ..., U_{2n-2} by recurrence
    u_prev, u = 1.0, 2.0 * x
    if n == 1:
        return u_prev
    for _ in range(2 * n - 3):
        u_prev, u = u, 2.0 * x * u - u_prev
    return u


def so3_conjugacy_angle(R: np.ndarray, tol: float = 1e-10) -> float:
    """Rotation angle in [0, pi] of a 3x3 special orthogonal matrix."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3):
        raise DomainError("expected a 3x3 matrix")
    if np.max(np.abs(R.T @ R - np.eye(3))) > tol:
        raise DomainError("matrix is not orthogonal within tolerance")
    if abs(np.linalg.det(R) - 1.0) > tol:
        raise DomainError("matrix is not special orthogonal within tolerance")
    cos_theta = (float(np.trace(R)) - 1.0) / 2.0
    return math.acos(max(-1.0, min(1.0, cos_theta)))


def _check_regular_angle(theta: float) -> None:
    if abs(math.sin(theta)) <= _ANGLE_TOL:
        raise SingularPointError(
            f"theta = {theta!r} is a multiple of pi; the torus element is singular"
        )


@dataclass(frozen=True)
class CharacterValue:
    """Discrete-series character value on the rotation torus."""

    weight: int
    parity: int  # 0 for the + member of the packet, 1 for the - member
    theta: float
    value: complex


def ds_character_K(n: int, sign: int, theta: float) -> CharacterValue:
    """Theta_n^{+-} restricted to k(theta); sign is +1 or -1."""
    if n < 1:
        raise DomainError("weight must be a positive integer")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    _check_regular_angle(theta)
    denom = cmath.exp(1j * theta) - cmath.exp(-1j * theta)
    value = -cmath.exp(sign * 1j * n * theta) / denom
    return CharacterValue(n, 0 if sign == 1 else 1, theta, value)


def character_packet_difference(n: int, theta: float) -> complex:
    """Theta_n^+ - Theta_n^-  =  -(e^{in theta} - e^{-in theta}) / D."""
    plus = ds_character_K(n, 1, theta).value
    minus = ds_character_K(n, -1, theta).value
    return plus - minus


@dataclass(frozen=True)
class StableCharacterValue:
    """Both published readings of the stable character, never reconciled.

    quotient      (Theta_n^+ - Theta_n^-) / (e^{i theta} - e^{-i theta})
    alt_product   -2i sin(theta) (e^{in theta} - e^{-in theta})
    ratio         alt_product / quotient, recorded as a diagnostic
    """

    weight: int
    theta: float
    quotient: complex
    alt_product: complex
    ratio: Optional[complex]


def stable_character(n: int, theta: float) -> StableCharacterValue:
    _check_regular_angle(theta)
    denom = cmath.exp(1j * theta) - cmath.exp(-1j * theta)
    quotient = character_packet_difference(n, theta) / denom
    alt = -2j * math.sin(theta) * (cmath.exp(1j * n * theta) - cmath.exp(-1j * n * theta))
    ratio = alt / quotient if abs(quotient) > 1e-14 else None
    return StableCharacterValue(n, theta, quotient, alt, ratio)


def kappa_orbital(n: int, theta: float) -> complex:
    """Signed Weyl-sum form of the kappa-orbital integral of a
    pseudo-coefficient: Theta_n^+(k(-theta)) - Theta_n^-(k(-theta))."""
    _check_regular_angle(theta)
    return character_packet_difference(n, -theta)


# ---------------------------------------------------------------------------
# orbital integrals


@dataclass(frozen=True)
class OrbitalResult:
    value: float
    error: float
    parametrization: str
    parameter: float
    substitution_difference: Optional[float] = None  # hyperbolic dual route


def _hyperbolic_window(f: RadialTestFunction, gap: float) -> float:
    """Half-width of the x-window where (gap^2)(1 + x^2) <= support radius."""
    R = f.support_radius
    g2 = gap * gap
    if g2 >= R:
        return 0.0
    return math.sqrt(R / g2 - 1.0)


def orbital_hyperbolic(
    f: RadialTestFunction, a: float, tol: float = 1e-10
) -> OrbitalResult:
    """Orbit integral of f over the conjugacy class of diag(a, 1/a).

    Computed in the unipotent-conjugation parametrization
    int_R f(n(x)^{-1} diag(a, 1/a) n(x)) dx and cross-checked against
    the substituted upper-triangular form
    |a - 1/a|^{-1} int_R f([[a, u], [0, 1/a]]) du; the difference of the
    two quadratures is recorded on the result.
    """
    if a <= 0.0:
        raise DomainError("split parameter must be positive")
    if abs(a - 1.0) <= 1e-14:
        raise SingularPointError("a = 1 is singular for the bare orbital integral")
    gap = abs(a - 1.0 / a)
    xmax = _hyperbolic_window(f, gap)
    if xmax == 0.0:
        return OrbitalResult(0.0, 0.0, "hyperbolic", a, substitution_difference=0.0)

    def integrand_conj(x: float) -> float:
        return f.profile(gap * gap * (1.0 + x * x))

    half = integrate(integrand_conj, 0.0, xmax, tol=tol / 2.0)
    primary = QuadResult(2.0 * half.value, 2.0 * half.error)

    umax = math.sqrt(max(f.support_radius - gap * gap, 0.0))

    def integrand_tri(u: float) -> float:
        return f.profile(gap * gap + u * u)

    half_alt = integrate(integrand_tri, 0.0, umax, tol=tol / 2.0)
    alt = (2.0 * half_alt.value) / gap
    return OrbitalResult(
        primary.value,
        primary.error,
        "hyperbolic",
        a,
        substitution_difference=abs(primary.value - alt),
    )


def elliptic_time_window(f: RadialTestFunction, theta: float) -> Tuple[float, float]:
    """[t_-, t_+] outside of which the elliptic integrand vanishes."""
    s = abs(math.sin(theta))
    w = math.sqrt(f.support_radius) / s
    t_plus = 0.5 * (w + math.sqrt(w * w + 4.0))
    return 1.0 / t_plus, t_plus


def orbital_elliptic(
    f: RadialTestFunction, theta: float, tol: float = 1e-10
) -> OrbitalResult:
    """int_0^infty sgn(t - 1) f([[cos, t sin], [-sin/t, cos]]) dt.

    The quadrature is split at the sign jump t = 1 and truncated to the
    window where compact support forces the integrand to vanish.
    """
    _check_regular_angle(theta)
    lam2 = math.sin(theta) ** 2

    def integrand(t: float) -> float:
        gap = t - 1.0 / t
        return f.profile(lam2 * gap * gap)

    t_lo, t_hi = elliptic_time_window(f, theta)
    upper = integrate(integrand, 1.0, t_hi, tol=tol / 2.0)
    lower = integrate(integrand, t_lo, 1.0, tol=tol / 2.0)
    return OrbitalResult(
        upper.value - lower.value, upper.error + lower.error, "elliptic", theta
    )


@dataclass(frozen=True)
class StableOrbitalResult:
    """Stable combination with the transfer factor kept separate."""

    theta: float
    so_value: float  # O_{k(theta)} - O_{k(-theta)}
    delta_factor: complex  # -2i sin(theta)
    transferred: complex  # delta_factor * so_value
    plus: OrbitalResult
    minus: OrbitalResult


def stable_orbital_elliptic(
    f: RadialTestFunction, theta: float, tol: float = 1e-10
) -> StableOrbitalResult:
    plus = orbital_elliptic(f, theta, tol=tol)
    minus = orbital_elliptic(f, -theta, tol=tol)
    so = plus.value - minus.value
    delta = -2j * math.sin(theta)
    return StableOrbitalResult(theta, so, delta, delta * so, plus, minus)


def transfer_hyperbolic(f: RadialTestFunction, a: float, tol: float = 1e-10) -> float:
    """|a - 1/a| * orbital integral, extended through a = 1.

    At a = 1 the continuous extension is the unipotent integral
    int_R f(n(u)) du; elsewhere the product of the transfer factor with
    the conjugation-parametrized quadrature is returned.
    """
    if a <= 0.0:
        raise DomainError("split parameter must be positive")
    if abs(a - 1.0) <= 1e-14:
        return unipotent_integral(f, tol=tol).value
    gap = abs(a - 1.0 / a)
    return gap * orbital_hyperbolic(f, a, tol=tol).value


# ---------------------------------------------------------------------------
# behaviour of the elliptic integral near the singular angle


@dataclass(frozen=True)
class SingularExpansion:
    """Least-squares profile of F(lambda) = elliptic orbital at sin(theta)=lambda.

    The fitted model is  F ~ A/|lambda| + const + B * lambda*ln(1/lambda);
    A is compared against the independently quadratured half-line
    unipotent integral.  All residual fields are sums of squared
    residuals, the objective the fit minimizes.  For this radial
    bi-invariant family F is even in lambda, so H vanishes and the
    logarithmic regressor acts as a proxy for the |lambda| correction
    term; the nested with/without comparison quantifies how much of the
    post-pole structure it captures.  G and H are the symmetrized
    combinations with their even-polynomial fit residuals.
    """

    lambda_grid: Tuple[float, ...]
    F_values: Tuple[float, ...]
    A_fit: float
    const_fit: float
    B_logfit_coeff: float
    residual_with_log: float
    residual_without_log: float
    log_improvement: float
    a_direct: float
    g_values: Tuple[float, ...]
    h_values: Tuple[float, ...]
    g_fit_residual: float
    h_fit_residual: float

    @property
    def a_relative_error(self) -> float:
        if self.a_direct == 0.0:
            return abs(self.A_fit)
        return abs(self.A_fit - self.a_direct) / abs(self.a_direct)


def _lstsq_residual(design: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, float]:
    """Least-squares coefficients and the sum of squared residuals."""
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    return coef, float(np.sum((design @ coef - y) ** 2))


def singular_expansion(
    f: RadialTestFunction, lambda_grid: Sequence[float], tol: float = 1e-8
) -> SingularExpansion:
    lam = np.asarray(list(lambda_grid), dtype=float)
    if lam.size < 8:
        raise DomainError("need at least 8 grid points for a stable fit")
    if np.any(lam <= 0.0) or np.any(lam > 0.3):
        raise DomainError("grid must lie in (0, 0.3]")
    if np.any(np.diff(lam) >= 0.0):
        raise DomainError("grid must be strictly decreasing")

    F = np.array(
        [orbital_elliptic(f, math.asin(l), tol=tol).value for l in lam]
    )
    F_neg = np.array(
        [orbital_elliptic(f, -math.asin(l), tol=tol).value for l in lam]
    )

    with_log = np.column_stack([1.0 / lam, np.ones_like(lam), lam * np.log(1.0 / lam)])
    coef, res_with = _lstsq_residual(with_log, F)
    _, res_without = _lstsq_residual(with_log[:, :2], F)
    improvement = res_without / res_with if res_with > 0 else math.inf

    a_direct = half_unipotent_integral(f, tol=1e-12).value

    G = lam * (F + F_neg)
    H = lam * (F - F_neg)
    g_design = np.column_stack([1.0 / lam, np.ones_like(lam), lam, lam**2])
    _, g_res = _lstsq_residual(g_design, G)
    h_design = np.column_stack([np.ones_like(lam), lam**2])
    _, h_res = _lstsq_residual(h_design, H)

    return SingularExpansion(
        tuple(lam),
        tuple(F),
        float(coef[0]),
        float(coef[1]),
        float(coef[2]),
        res_with,
        res_without,
        improvement,
        a_direct,
        tuple(G),
        tuple(H),
        g_res,
        h_res,
    )
