"""Weight-n holomorphic discrete-series model on truncated monomials.

The model realizes the generators as first-order differential operators
acting on span{z^m : 0 <= m <= N}:

    H_hat       = 2 z d/dz + (n + 1)                 (diagonal)
    (X-Y)_hat   = -(1 + z^2) d/dz - (n + 1) z
    (X+Y)_hat   = (1 - z^2) d/dz - (n + 1) z
    X_hat       = ((X-Y)_hat + (X+Y)_hat) / 2        (raising)
    Y_hat       = ((X+Y)_hat - (X-Y)_hat) / 2        (lowering)

Operators raise the degree by at most one, so matrix products are exact
on rows 0..N-1; assertions about quadratic expressions are made on the
interior block only.  An exact path over Fractions is available for
small truncations.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .errors import ConfigurationError

_GENERATOR_NAMES = ("H", "X-Y", "X+Y", "X", "Y")


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix of an operator on the monomial basis z^m, m = 0..N.

    The last row is contaminated by truncation for any operator with a
    degree-raising part; consumers restrict quadratic checks to
    ``interior(pad)``.
    """

    entries: np.ndarray
    weight: int
    truncation: int
    basis_label: str = "monomial z^m"

    @property
    def dim(self) -> int:
        return self.truncation + 1

    @property
    def is_exact(self) -> bool:
        return self.entries.dtype == object

    def interior(self, pad: int) -> np.ndarray:
        """Block unaffected by truncation for products of `pad` factors."""
        k = self.dim - pad
        if k <= 0:
            raise ConfigurationError(
                f"truncation {self.truncation} too small for pad {pad}"
            )
        return self.entries[:k, :k]

    def _like(self, entries: np.ndarray) -> "OperatorMatrix":
        return OperatorMatrix(entries, self.weight, self.truncation, self.basis_label)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_compatible(self, other)
        return self._like(self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_compatible(self, other)
        return self._like(self.entries - other.entries)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        _check_compatible(self, other)
        return self._like(self.entries.dot(other.entries))

    def scaled(self, factor) -> "OperatorMatrix":
        return self._like(self.entries * factor)


def _check_compatible(A: OperatorMatrix, B: OperatorMatrix) -> None:
    if A.entries.shape != B.entries.shape:
        raise ConfigurationError(
            f"shape mismatch: {A.entries.shape} vs {B.entries.shape}"
        )
    if A.weight != B.weight or A.basis_label != B.basis_label:
        raise ConfigurationError("operators live in different models")


def _zeros(dim: int, exact: bool) -> np.ndarray:
    if exact:
        M = np.empty((dim, dim), dtype=object)
        M[:] = Fraction(0)
        return M
    return np.zeros((dim, dim), dtype=complex)


def generator_matrix(gen: str, n: int, N: int, exact: bool = False) -> OperatorMatrix:
    """Matrix of a model generator at weight n, truncation order N.

    Column m holds the expansion of the generator applied to z^m.  With
    ``exact=True`` entries are Fractions and all identities below hold
    with no rounding.
    """
    if gen not in _GENERATOR_NAMES:
        raise ConfigurationError(f"unknown generator {gen!r}")
    if n < 1:
        raise ConfigurationError(f"weight must be a positive integer, got {n}")
    if N < 2:
        raise ConfigurationError(f"truncation must be at least 2, got {N}")
    dim = N + 1
    M = _zeros(dim, exact)
    one = Fraction(1) if exact else 1.0
    for m in range(dim):
        if gen == "H":
            M[m, m] = (2 * m + n + 1) * one
        elif gen == "X":
            if m + 1 <= N:
                M[m + 1, m] = -(m + n + 1) * one
        elif gen == "Y":
            if m >= 1:
                M[m - 1, m] = m * one
        elif gen == "X-Y":
            if m >= 1:
                M[m - 1, m] = -m * one
            if m + 1 <= N:
                M[m + 1, m] = -(m + n + 1) * one
        elif gen == "X+Y":
            if m >= 1:
                M[m - 1, m] = m * one
            if m + 1 <= N:
                M[m + 1, m] = -(m + n + 1) * one
    return OperatorMatrix(M, n, N)


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> OperatorMatrix:
    """A B - B A.  Trustworthy on interior rows/cols 0..N-2 only."""
    return (A @ B) - (B @ A)


def interior_residual(M: OperatorMatrix, pad: int) -> float:
    """Max absolute entry of the interior block."""
    block = M.interior(pad)
    if M.is_exact:
        return float(max((abs(v) for v in block.ravel()), default=0))
    return float(np.max(np.abs(block))) if block.size else 0.0


def cartan_relation_residuals(n: int, N: int, exact: bool = False) -> dict:
    """Interior residuals of the three bracket relations of the model."""
    H = generator_matrix("H", n, N, exact)
    X = generator_matrix("X", n, N, exact)
    Y = generator_matrix("Y", n, N, exact)
    return {
        "[H,X]-2X": interior_residual(commutator(H, X) - X.scaled(2), 2),
        "[H,Y]+2Y": interior_residual(commutator(H, Y) + Y.scaled(2), 2),
        "[X,Y]-H": interior_residual(commutator(X, Y) - H, 2),
    }


def casimir_scalar(n: int) -> Fraction:
    """Scalar by which the Casimir acts on the weight-n model: (n^2 - 1)/4."""
    return Fraction(n * n - 1, 4)


def casimir_forms(n: int, N: int, exact: bool = False) -> dict:
    """The Casimir built by two equivalent routes, plus a diagnostic.

    ``quadratic``   -1/4 * ((X-Y)^2 - (X+Y)^2 - H^2), assembled from the
                    one-parameter generator matrices.
    ``cartan``      1/4 * (H^2 + 2 X Y + 2 Y X), the symmetrized form.
    ``short``       1/4 * (H^2 + 4 X Y).  This drops the -H/2 reordering
                    term, is NOT scalar on the model, and is returned
                    for diagnostic comparison only.
    """
    if N < 4:
        raise ConfigurationError("casimir checks need truncation >= 4")
    H = generator_matrix("H", n, N, exact)
    X = generator_matrix("X", n, N, exact)
    Y = generator_matrix("Y", n, N, exact)
    U1 = generator_matrix("X-Y", n, N, exact)
    U2 = generator_matrix("X+Y", n, N, exact)
    quarter = Fraction(1, 4) if exact else 0.25
    quadratic = ((U1 @ U1) - (U2 @ U2) - (H @ H)).scaled(-1).scaled(quarter)
    cartan = ((H @ H) + (X @ Y).scaled(2) + (Y @ X).scaled(2)).scaled(quarter)
    short = ((H @ H) + (X @ Y).scaled(4)).scaled(quarter)
    return {"quadratic": quadratic, "cartan": cartan, "short": short}


def casimir_matrix(n: int, N: int, exact: bool = False) -> OperatorMatrix:
    """Casimir operator of the weight-n model (symmetrized form).

    The interior block is casimir_scalar(n) times the identity,
    independently of N.
    """
    return casimir_forms(n, N, exact)["cartan"]


@dataclass(frozen=True)
class WeightDecomposition:
    """H_hat eigenvalues with multiplicities, plus ladder-check residuals."""

    weights: Tuple[Tuple[int, int], ...]  # (eigenvalue, multiplicity)
    raising_residual: float
    lowering_residual: float
    bottom_annihilated: float  # |Y_hat applied to the constant|

    @property
    def multiplicities_all_one(self) -> bool:
        return all(mult == 1 for _, mult in self.weights)


def weight_decomposition(n: int, N: int) -> WeightDecomposition:
    """Spectrum of H_hat on the truncated model with ladder verification.

    Weights are the arithmetic progression n+1, n+3, ..., n+1+2N, each
    of multiplicity one.  X_hat sends a weight-m eigenvector to weight
    m+2 and Y_hat lowers by 2, annihilating the bottom vector.
    """
    H = generator_matrix("H", n, N).entries.real
    X = generator_matrix("X", n, N).entries
    Y = generator_matrix("Y", n, N).entries
    eigvals = np.linalg.eigvalsh(H)
    counts = Counter(int(round(v)) for v in eigvals)
    weights = tuple(sorted(counts.items()))

    raise_res = 0.0
    lower_res = 0.0
    for m in range(N):  # basis vector e_m has weight 2m+n+1
        w = 2 * m + n + 1
        e = np.zeros(N + 1, dtype=complex)
        e[m] = 1.0
        up = X @ e
        raise_res = max(raise_res, float(np.max(np.abs(H @ up - (w + 2) * up))))
        if m >= 1:
            down = Y @ e
            lower_res = max(lower_res, float(np.max(np.abs(H @ down - (w - 2) * down))))
    e0 = np.zeros(N + 1, dtype=complex)
    e0[0] = 1.0
    bottom = float(np.max(np.abs(Y @ e0)))
    return WeightDecomposition(weights, raise_res, lower_res, bottom)
