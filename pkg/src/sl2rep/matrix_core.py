"""Arithmetic of real 2x2 unimodular matrices.

Provides the Mobius action on the upper half-plane, the ANK (Iwasawa)
coordinate chart, the closed-form one-parameter subgroups, the
classification of centralizers of semisimple elements, and reduction to
the standard fundamental domain of the modular group.

Conventions
-----------
The compact factor is the rotation family

    k(theta) = [[cos theta, sin theta], [-sin theta, cos theta]]
             = exp(theta * (X - Y)),

and the coordinate chart writes g = A(y) N(x) k(theta) with
A(y) = diag(sqrt(y), 1/sqrt(y)) and N(x) = [[1, x/sqrt(y)], [0, 1]].
In this chart g acts on i by g.i = x*sqrt(y) + i*y, so the horocycle
coordinate of the orbit point is x*sqrt(y), not x itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DomainError, NotRegularSemisimpleError

_DET_TOL = 1e-6
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class GroupElement:
    """Real 2x2 matrix with determinant 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not abs(det - 1.0) <= _DET_TOL:
            raise DomainError(f"matrix is not unimodular: det = {det!r}")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> float:
        return self.a + self.d

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "GroupElement":
        # adjugate; det is 1
        return GroupElement(self.d, -self.b, -self.c, self.a)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    def max_abs_diff(self, other: "GroupElement") -> float:
        return max(
            abs(self.a - other.a),
            abs(self.b - other.b),
            abs(self.c - other.c),
            abs(self.d - other.d),
        )

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, theta: float) -> "GroupElement":
        """k(theta) = exp(theta (X - Y))."""
        ct, st = math.cos(theta), math.sin(theta)
        return cls(ct, st, -st, ct)

    @classmethod
    def translation(cls, x: float) -> "GroupElement":
        return cls(1.0, x, 0.0, 1.0)

    @classmethod
    def diagonal_torus(cls, t: float) -> "GroupElement":
        """exp(t H) = diag(e^t, e^-t)."""
        return cls(math.exp(t), 0.0, 0.0, math.exp(-t))

    @classmethod
    def boost(cls, t: float) -> "GroupElement":
        """exp(t (X + Y)) = [[cosh t, sinh t], [sinh t, cosh t]]."""
        ch, sh = math.cosh(t), math.sinh(t)
        return cls(ch, sh, sh, ch)


#: generators of the modular group
S = GroupElement(0.0, -1.0, 1.0, 0.0)
T = GroupElement(1.0, 1.0, 0.0, 1.0)


@dataclass(frozen=True)
class IwasawaCoords:
    """Chart (x, y, theta, sign) of the ANK factorization.

    y > 0, theta normalized to [0, 2pi).  The sign records the sheet of
    the compact factor: the composed rotation block is sign * k(theta).
    Decomposition always returns the canonical sheet sign = +1 (theta
    alone covers SO(2)); sign = -1 coordinates compose to the same group
    element as (x, y, theta + pi mod 2pi, +1).
    """

    x: float
    y: float
    theta: float
    sign: int = 1

    def __post_init__(self):
        if not self.y > 0.0:
            raise DomainError(f"height must be positive, got y = {self.y!r}")
        if self.sign not in (1, -1):
            raise DomainError(f"sheet sign must be +-1, got {self.sign!r}")
        object.__setattr__(self, "theta", self.theta % _TWO_PI)

    def canonical(self) -> "IwasawaCoords":
        if self.sign == 1:
            return self
        return IwasawaCoords(self.x, self.y, (self.theta + math.pi) % _TWO_PI, 1)


def mobius_act(g: GroupElement, z: complex) -> complex:
    """Apply g to a point of the upper half-plane."""
    z = complex(z)
    if not z.imag > 0.0:
        raise DomainError(f"point must have positive imaginary part, got {z!r}")
    return (g.a * z + g.b) / (g.c * z + g.d)


def iwasawa_decompose(g: GroupElement) -> IwasawaCoords:
    """Coordinates (x, y, theta) with g = A(y) N(x) k(theta).

    y = 1 / (c^2 + d^2).  The chart coordinate x is recovered from the
    product identity x = sqrt(y) * (a c + b d), which is total (no
    division by c).
    """
    y = 1.0 / (g.c * g.c + g.d * g.d)
    sqrt_y = math.sqrt(y)
    theta = math.atan2(-g.c, g.d) % _TWO_PI
    x = sqrt_y * (g.a * g.c + g.b * g.d)
    return IwasawaCoords(x, y, theta, 1)


def iwasawa_compose(coords: IwasawaCoords) -> GroupElement:
    """Product A(y) N(x) k(theta) of the three factors, times the sheet sign."""
    sqrt_y = math.sqrt(coords.y)
    ct = math.cos(coords.theta) * coords.sign
    st = math.sin(coords.theta) * coords.sign
    # A*N = [[sqrt(y), x], [0, 1/sqrt(y)]]
    return GroupElement(
        sqrt_y * ct - coords.x * st,
        sqrt_y * st + coords.x * ct,
        -st / sqrt_y,
        ct / sqrt_y,
    )


_ONE_PARAM = {
    "H": GroupElement.diagonal_torus,
    "X-Y": GroupElement.rotation,
    "X+Y": GroupElement.boost,
}


def one_param(gen: str, t: float) -> GroupElement:
    """Closed-form one-parameter subgroup exp(t * gen), gen in {H, X-Y, X+Y}."""
    try:
        return _ONE_PARAM[gen](t)
    except KeyError:
        raise DomainError(f"unknown one-parameter generator {gen!r}") from None


_LIE_GENERATORS = {
    "H": np.array([[1, 0], [0, -1]]),
    "X": np.array([[0, 1], [0, 0]]),
    "Y": np.array([[0, 0], [1, 0]]),
    "X-Y": np.array([[0, 1], [-1, 0]]),
    "X+Y": np.array([[0, 1], [1, 0]]),
}


@dataclass(frozen=True)
class LieGenerator:
    """Named traceless 2x2 generator (integer entries, not unimodular)."""

    name: str

    @property
    def matrix(self) -> np.ndarray:
        return _LIE_GENERATORS[self.name].copy()


def lie_generator(name: str) -> np.ndarray:
    """2x2 integer matrix of a standard generator."""
    try:
        return _LIE_GENERATORS[name].copy()
    except KeyError:
        raise DomainError(f"unknown generator {name!r}") from None


def lie_bracket(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


class EndoscopyTag(Enum):
    FULL_GROUP = "FullGroup"
    SPLIT_TORUS = "SplitTorus"
    COMPACT_TORUS = "CompactTorus"
    CENTER = "Center"


@dataclass(frozen=True)
class EndoscopyClass:
    """Identity component of the centralizer, with its classifying datum."""

    tag: EndoscopyTag
    eigenvalue: Optional[float] = None  # split case: eigenvalue with |lambda| >= 1
    angle: Optional[float] = None  # compact case: theta in (0, pi)
    centralizer_dim: int = 0  # dimension of the commutant algebra in M_2(R)


def commutant_dimension(g: GroupElement, tol: float = 1e-9) -> int:
    """Dimension of {X in M_2(R) : gX = Xg}, by solving the linear system."""
    M = g.as_array()
    rows = []
    for i in range(2):
        for j in range(2):
            E = np.zeros((2, 2))
            E[i, j] = 1.0
            rows.append((M @ E - E @ M).ravel())
    L = np.array(rows).T  # maps vec(X) to vec(gX - Xg)
    svals = np.linalg.svd(L, compute_uv=False)
    scale = max(1.0, float(svals[0]))
    return int(np.sum(svals <= tol * scale))


_CENTRAL_TOL = 1e-12
_PARABOLIC_TOL = 1e-10


def classify_endoscopy(g: GroupElement) -> EndoscopyClass:
    """Classify the identity component of the centralizer of g.

    +-identity gives the full group; real distinct eigenvalues give the
    split torus through g; complex conjugate eigenvalues give the
    compact torus (rotation subgroup conjugate).  Parabolic elements
    (trace +-2, g != +-I) are rejected.
    """
    dim = commutant_dimension(g)
    is_central = (
        g.max_abs_diff(GroupElement.identity()) <= _CENTRAL_TOL
        or g.max_abs_diff(GroupElement(-1.0, 0.0, 0.0, -1.0)) <= _CENTRAL_TOL
    )
    if is_central:
        if dim != 4:
            raise AssertionError("central element must commute with everything")
        return EndoscopyClass(EndoscopyTag.FULL_GROUP, centralizer_dim=dim)
    t = g.trace
    if abs(t) > 2.0 + _PARABOLIC_TOL:
        disc = math.sqrt(t * t - 4.0)
        lam = (t + disc) / 2.0 if t > 0 else (t - disc) / 2.0  # |lam| > 1 branch
        return EndoscopyClass(EndoscopyTag.SPLIT_TORUS, eigenvalue=lam, centralizer_dim=dim)
    if abs(t) < 2.0 - _PARABOLIC_TOL:
        theta = math.acos(max(-1.0, min(1.0, t / 2.0)))
        return EndoscopyClass(EndoscopyTag.COMPACT_TORUS, angle=theta, centralizer_dim=dim)
    raise NotRegularSemisimpleError(
        f"matrix with trace {t!r} is parabolic and has no reductive centralizer class"
    )


def point_pair_invariant(z: complex, w: complex) -> float:
    """u(z, w) = |z - w|^2 / (Im z * Im w), invariant under the diagonal action."""
    z, w = complex(z), complex(w)
    if not (z.imag > 0.0 and w.imag > 0.0):
        raise DomainError("both points must lie in the upper half-plane")
    return abs(z - w) ** 2 / (z.imag * w.imag)


def reduce_to_fundamental_domain(
    z: complex, tie_tol: float = 1e-12, max_steps: int = 10_000
) -> "tuple[complex, GroupElement]":
    """Reduce z to the standard fundamental domain of the modular group.

    Returns (z', gamma) with z' = gamma.z, |Re z'| <= 1/2 and |z'| >= 1,
    gamma an integer matrix built from the S/T generators.  Boundary
    ties are resolved toward the Re z' >= 0 representative.
    """
    z = complex(z)
    if not z.imag > 0.0:
        raise DomainError(f"point must lie in the upper half-plane, got {z!r}")
    # track gamma with exact integer entries
    ga, gb, gc, gd = 1, 0, 0, 1
    w = z
    for _ in range(max_steps):
        n = math.floor(w.real + 0.5)
        if n != 0:
            w = w - n
            ga, gb = ga - n * gc, gb - n * gd
        if abs(w) < 1.0 - tie_tol:
            w = -1.0 / w
            ga, gb, gc, gd = -gc, -gd, ga, gb
            continue
        break
    else:
        raise RuntimeError("fundamental-domain reduction did not terminate")
    # tie-breaking: prefer the representative with Re >= 0
    if w.real <= -(0.5 - tie_tol):
        w = w + 1.0
        ga, gb = ga + gc, gb + gd
    if abs(abs(w) - 1.0) <= tie_tol and w.real < -tie_tol:
        w = -1.0 / w
        ga, gb, gc, gd = -gc, -gd, ga, gb
    gamma = GroupElement(float(ga), float(gb), float(gc), float(gd))
    return mobius_act(gamma, z), gamma
