"""Exact q-expansions, evaluation on the upper half-plane, the lift to
the group, averaged point-pair kernels, and cusp-form dimensions.

Series coefficients are exact integers (Python ints); all ring
operations stay exact and the discriminant identity
1728 * Delta = E4^3 - E6^2 is an integer identity up to the truncation
order.  Evaluation returns a certified geometric tail bound.

The lift of a weight-k form evaluates the form at the orbit point
g.i of the Iwasawa coordinates; with the rotation convention of
`matrix_core` the function y^{k/2} e^{i k theta} f(g.i) is invariant
under the modular group on the left and transforms by e^{i k theta'}
under right rotation, and both properties are tested rather than
assumed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .char_orbital import RadialTestFunction
from .errors import (
    ConfigurationError,
    DomainError,
    IllConditionedError,
    TruncationError,
)
from .matrix_core import (
    GroupElement,
    iwasawa_decompose,
    mobius_act,
    point_pair_invariant,
    reduce_to_fundamental_domain,
)

DEFAULT_Y_MIN = 0.2


# ---------------------------------------------------------------------------
# exact q-series


@dataclass(frozen=True)
class QExpansion:
    """Truncated power series in q with exact integer coefficients."""

    weight: int
    coeffs: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise ConfigurationError("cannot add series of different weights")
        M = min(self.order, other.order)
        return QExpansion(
            self.weight,
            tuple(a + b for a, b in zip(self.coeffs[: M + 1], other.coeffs[: M + 1])),
        )

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        if self.weight != other.weight:
            raise ConfigurationError("cannot subtract series of different weights")
        M = min(self.order, other.order)
        return QExpansion(
            self.weight,
            tuple(a - b for a, b in zip(self.coeffs[: M + 1], other.coeffs[: M + 1])),
        )

    def __mul__(self, other: "QExpansion") -> "QExpansion":
        M = min(self.order, other.order)
        out = [0] * (M + 1)
        for i, a in enumerate(self.coeffs[: M + 1]):
            if a == 0:
                continue
            for j in range(0, M + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return QExpansion(self.weight + other.weight, tuple(out))

    def __pow__(self, exponent: int) -> "QExpansion":
        if exponent < 1:
            raise ConfigurationError("only positive integer powers are supported")
        result = self
        for _ in range(exponent - 1):
            result = result * self
        return result

    def scale(self, factor: int) -> "QExpansion":
        return QExpansion(self.weight, tuple(factor * a for a in self.coeffs))

    def exact_divide(self, divisor: int) -> "QExpansion":
        out = []
        for a in self.coeffs:
            q, r = divmod(a, divisor)
            if r:
                raise ConfigurationError(
                    f"coefficient {a} is not divisible by {divisor}"
                )
            out.append(q)
        return QExpansion(self.weight, tuple(out))


def divisor_power_sums(power: int, M: int) -> List[int]:
    """sigma_power(n) for n = 0..M (index 0 unused, set to 0)."""
    sums = [0] * (M + 1)
    for d in range(1, M + 1):
        dp = d**power
        for n in range(d, M + 1, d):
            sums[n] += dp
    return sums


def eisenstein_q(k: int, M: int) -> QExpansion:
    """E4 or E6 to order M, with the exact integer coefficients
    1 - (2k / B_k) sum sigma_{k-1}(n) q^n."""
    if M < 1:
        raise ConfigurationError("truncation order must be at least 1")
    if k == 4:
        factor = 240
    elif k == 6:
        factor = -504
    else:
        raise ConfigurationError(f"unsupported Eisenstein weight {k}")
    sigma = divisor_power_sums(k - 1, M)
    coeffs = [1] + [factor * sigma[n] for n in range(1, M + 1)]
    return QExpansion(k, tuple(coeffs))


def delta_q(M: int) -> QExpansion:
    """The discriminant cusp form (E4^3 - E6^2) / 1728, exactly."""
    if M < 1:
        raise ConfigurationError("truncation order must be at least 1")
    e4 = eisenstein_q(4, M)
    e6 = eisenstein_q(6, M)
    num = (e4**3) - (e6**2)
    delta = num.exact_divide(1728)
    if delta.coeffs[0] != 0 or delta.coeffs[1] != 1:
        raise AssertionError("discriminant normalization failed")
    return delta


def qexp_to_text(f: QExpansion) -> str:
    """Serialize as plain-text lines 'n coefficient' (base 10 integers)."""
    lines = [f"{n} {a}" for n, a in enumerate(f.coeffs)]
    return "\n".join(lines) + "\n"


def qexp_from_text(text: str, weight: int) -> QExpansion:
    coeffs: Dict[int, int] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ConfigurationError(f"malformed coefficient line: {raw!r}")
        n, a = int(parts[0]), int(parts[1])
        if n in coeffs:
            raise ConfigurationError(f"duplicate index {n}")
        coeffs[n] = a
    if not coeffs or sorted(coeffs) != list(range(max(coeffs) + 1)):
        raise ConfigurationError("coefficient indices must be 0..M without gaps")
    return QExpansion(weight, tuple(coeffs[n] for n in range(max(coeffs) + 1)))


# ---------------------------------------------------------------------------
# evaluation with a certified tail


@dataclass(frozen=True)
class EvalResult:
    value: complex
    tail_bound: float
    terms_used: int

    def __complex__(self) -> complex:
        return self.value


def eval_modular(
    f: QExpansion,
    z: complex,
    y_min: float = DEFAULT_Y_MIN,
    reduce_first: bool = False,
) -> EvalResult:
    """Sum the truncated series at q = exp(2 pi i z) with a tail bound.

    The tail is bounded geometrically under the coefficient envelope
    |a_n| <= A n^weight (true for holomorphic forms; A is read off the
    computed coefficients); the truncation is rejected unless the
    beyond-order term ratio has decayed below 1/2.  With
    ``reduce_first`` the argument is moved to the fundamental domain
    and the slash cocycle is applied (valid for level-one forms), which
    keeps |q| small for low points.
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise DomainError("evaluation point must lie in the upper half-plane")
    if reduce_first:
        w, gamma = reduce_to_fundamental_domain(z)
        inner = eval_modular(f, w, y_min=y_min, reduce_first=False)
        j = gamma.c * z + gamma.d
        return EvalResult(j ** (-f.weight) * inner.value, inner.tail_bound, inner.terms_used)
    if z.imag < y_min:
        raise TruncationError(
            f"Im z = {z.imag!r} below the evaluation region floor {y_min}"
        )
    q = cmath.exp(2j * math.pi * z)
    absq = abs(q)
    value = 0.0 + 0.0j
    qn = 1.0 + 0.0j
    for a in f.coeffs:
        value += a * qn
        qn *= q
    # geometric domination under the envelope |a_n| <= A * n^p with
    # p = weight, which holds for holomorphic forms; beyond the
    # truncation order the term ratio is then at most
    # |q| * ((M+2)/(M+1))^p and must have dropped below 1/2.
    p = max(f.weight, 0)
    log_A = max(
        (math.log(abs(a)) - p * math.log(max(n, 1)) for n, a in enumerate(f.coeffs) if a),
        default=-math.inf,
    )
    M = f.order
    rho = absq * ((M + 2) / (M + 1)) ** p
    if not rho <= 0.5:
        raise TruncationError(
            f"tail not geometrically dominated at order {M} (ratio {rho:.3f})"
        )
    log_tail = (
        log_A + p * math.log(M + 1) + (M + 1) * math.log(absq) - math.log(1.0 - rho)
    )
    tail = math.exp(log_tail) if log_tail > -700.0 else 0.0
    return EvalResult(value, tail, len(f.coeffs))


def slash_action(f: QExpansion, gamma: GroupElement, z: complex) -> complex:
    """(c z + d)^{-k} f(gamma.z); equals f(z) for level-one forms."""
    w = mobius_act(gamma, z)
    j = gamma.c * z + gamma.d
    return j ** (-f.weight) * eval_modular(f, w).value


# ---------------------------------------------------------------------------
# the lift to the group


@dataclass(frozen=True)
class AutomorphicValue:
    g: GroupElement
    value: complex
    weight: int
    tail_bound: float


def lift_automorphic(
    f: QExpansion, k: int, g: GroupElement, reduce_first: bool = True
) -> AutomorphicValue:
    """y^{k/2} e^{i k theta} f(g.i) from the Iwasawa data of g.

    g.i = x sqrt(y) + i y in the chart of `matrix_core`; evaluating the
    form at the orbit point (rather than at x + i y literally) is what
    makes the lift left-invariant under the modular group, and that
    invariance is exercised by the tests.
    """
    if k != f.weight:
        raise ConfigurationError("declared weight does not match the series")
    co = iwasawa_decompose(g)
    z = mobius_act(g, 1j)
    ev = eval_modular(f, z, reduce_first=reduce_first)
    phase = co.y ** (k / 2.0) * cmath.exp(1j * k * co.theta)
    return AutomorphicValue(g, phase * ev.value, k, abs(phase) * ev.tail_bound)


# ---------------------------------------------------------------------------
# averaged point-pair kernels


@dataclass(frozen=True)
class HeckeKernelValue:
    z: complex
    z_prime: complex
    value: float
    terms_used: int
    tail_bound: float
    complete: bool


def _coprime_pairs_in_range(c_max: int, d_bound_fn) -> Iterable[Tuple[int, int]]:
    for c in range(-c_max, c_max + 1):
        lo, hi = d_bound_fn(c)
        for d in range(lo, hi + 1):
            if gcd(abs(c), abs(d)) == 1 or (c == 0 and abs(d) == 1):
                yield c, d


def hecke_kernel(
    profile: RadialTestFunction,
    z: complex,
    z_prime: complex,
    height_bound: float = 64.0,
) -> HeckeKernelValue:
    """Sum of profile(u(z, gamma z')) over integer gamma of determinant one.

    The compact support of the profile makes the sum finite: candidates
    are enumerated by bottom row (c, d) and translation index, using the
    window that the invariant height of gamma z' must lie in.  Matrices
    with an entry beyond ``height_bound`` are excluded from the sum and
    accumulated into the tail; the result is flagged complete when
    nothing was excluded.
    """
    z, zp = complex(z), complex(z_prime)
    if not (z.imag > 0.0 and zp.imag > 0.0):
        raise DomainError("kernel points must lie in the upper half-plane")
    U = profile.support_radius
    y, yp = z.imag, zp.imag
    # u >= (y - v)^2 / (y v) for v = Im(gamma z'), so contributions need
    # v in [v_lo, v_hi] with (2 + U) y = v + y^2/v at the endpoints
    s = 2.0 + U
    v_hi = y * (s + math.sqrt(s * s - 4.0)) / 2.0
    v_lo = y * (s - math.sqrt(s * s - 4.0)) / 2.0
    # |c z' + d|^2 = y'/v <= y'/v_lo bounds both c and d
    denom_sq_max = yp / v_lo
    c_max = int(math.floor(math.sqrt(denom_sq_max) / yp))

    def d_bounds(c: int) -> Tuple[int, int]:
        rem = denom_sq_max - (c * yp) ** 2
        if rem < 0.0:
            return 1, 0
        half = math.sqrt(rem)
        centre = -c * zp.real
        return int(math.ceil(centre - half)), int(math.floor(centre + half))

    total = 0.0
    excluded = 0.0
    terms = 0
    complete = True
    for c, d in _coprime_pairs_in_range(c_max, d_bounds):
        denom = complex(c * zp.real + d, c * yp)
        v = yp / abs(denom) ** 2
        if not (v_lo - 1e-12 <= v <= v_hi + 1e-12):
            continue
        # base solution of a d - b c = 1, then a -> a + t c, b -> b + t d
        if c == 0:
            a0, b0 = (1, 0) if d == 1 else (-1, 0)
        else:
            g0, s0, t0 = _extended_gcd(d, c)
            a0, b0 = s0, -t0
            if a0 * d - b0 * c != 1:
                a0, b0 = -a0, -b0
        w0 = (a0 * zp + b0) / (c * zp + d)
        # u(z, w0 + t) <= U constrains the translation index t
        disc = U * y * v - (y - v) ** 2
        if disc < 0.0:
            continue
        half_t = math.sqrt(disc)
        centre_t = z.real - w0.real
        t_lo = int(math.ceil(centre_t - half_t - 1e-12))
        t_hi = int(math.floor(centre_t + half_t + 1e-12))
        for t in range(t_lo, t_hi + 1):
            a, b = a0 + t * c, b0 + t * d
            u = point_pair_invariant(z, w0 + t)
            val = profile.profile(u)
            if val == 0.0:
                continue
            if max(abs(a), abs(b), abs(c), abs(d)) > height_bound:
                excluded += abs(val)
                complete = False
                continue
            total += val
            terms += 1
    return HeckeKernelValue(z, zp, total, terms, excluded, complete)


def _extended_gcd(x: int, y: int) -> Tuple[int, int, int]:
    """g, s, t with s*x + t*y = g = gcd(x, y)."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qt = old_r // r
        old_r, r = r, old_r - qt * r
        old_s, s = s, old_s - qt * s
        old_t, t = t, old_t - qt * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


# ---------------------------------------------------------------------------
# invariant Laplacian check


@dataclass(frozen=True)
class CasimirCheck:
    measured: complex
    expected: float
    ratio: Optional[complex]  # None for the formal weight-0 case
    step: float
    paper_parametrizations: Tuple[Tuple[str, float], ...]


def casimir_eigen_check(
    f: QExpansion, k: int, g: GroupElement, h_step: float = 1e-3
) -> CasimirCheck:
    """Finite-difference weight-k Laplacian applied to F = y^{k/2} f(z).

    The operator is Delta_k = -y^2 (d_xx + d_yy) + i k y d_x, for which
    F is an exact eigenfunction with eigenvalue (k/2)(1 - k/2).  The
    displayed variant with an extra i*k*y*(i d_y) term does not
    annihilate holomorphic lifts and is not used.  The s-parameter
    readings lambda = s(s-1)/4 at s = k and s = k/2 are attached for
    reference, not asserted.
    """
    if not 1e-4 <= h_step <= 1e-2:
        raise ConfigurationError("step must lie in [1e-4, 1e-2]")
    if k != f.weight:
        raise ConfigurationError("declared weight does not match the series")
    z0 = mobius_act(g, 1j)

    def F(z: complex) -> complex:
        return z.imag ** (k / 2.0) * eval_modular(f, z).value

    f0 = F(z0)
    if abs(f0) < 1e-12:
        raise IllConditionedError("lift magnitude too small for a stable ratio")
    h = h_step
    fxp, fxm = F(z0 + h), F(z0 - h)
    fyp, fym = F(z0 + 1j * h), F(z0 - 1j * h)
    d_xx = (fxp - 2.0 * f0 + fxm) / (h * h)
    d_yy = (fyp - 2.0 * f0 + fym) / (h * h)
    d_x = (fxp - fxm) / (2.0 * h)
    y = z0.imag
    applied = -(y * y) * (d_xx + d_yy) + 1j * k * y * d_x
    measured = applied / f0
    expected = (k / 2.0) * (1.0 - k / 2.0)
    ratio = measured / expected if expected != 0.0 else None
    readings = (
        ("s(s-1)/4 at s=k", k * (k - 1) / 4.0),
        ("s(s-1)/4 at s=k/2", (k / 2.0) * (k / 2.0 - 1.0) / 4.0),
    )
    return CasimirCheck(measured, expected, ratio, h, readings)


# ---------------------------------------------------------------------------
# dimensions


def dim_cusp_forms(k: int) -> int:
    """Dimension of the level-one cusp space in weight k.

    Zero for odd or small weights; otherwise floor(k/12) with the
    k = 2 (mod 12) correction.
    """
    if k % 2 != 0 or k < 12:
        return 0
    if k % 12 == 2:
        return k // 12 - 1
    return k // 12


def dim_cusp_forms_basis_count(k: int) -> int:
    """Independent oracle: count the monomial basis of the cusp space.

    Monomials D^a E4^b E6^c with a >= 1, b >= 0, c in {0, 1} and
    12a + 4b + 6c = k are linearly independent and span, so counting
    the exponent solutions gives the dimension.
    """
    if k % 2 != 0 or k < 12:
        return 0
    count = 0
    for a in range(1, k // 12 + 1):
        for c in (0, 1):
            rem = k - 12 * a - 6 * c
            if rem >= 0 and rem % 4 == 0:
                count += 1
    return count


def cusp_monomial_qexps(k: int, order: int) -> List[QExpansion]:
    """q-expansions of the monomial basis of the weight-k cusp space."""
    if k % 2 != 0 or k < 12:
        return []
    delta = delta_q(order)
    e4 = eisenstein_q(4, order)
    e6 = eisenstein_q(6, order)
    out = []
    for a in range(1, k // 12 + 1):
        for c in (0, 1):
            rem = k - 12 * a - 6 * c
            if rem < 0 or rem % 4:
                continue
            b = rem // 4
            series = delta if a == 1 else delta**a
            if b:
                series = series * (e4**b)
            if c:
                series = series * e6
            out.append(series)
    return out
