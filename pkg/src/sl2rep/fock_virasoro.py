"""Truncated bosonic Fock space and Virasoro generators.

A single free-boson oscillator family alpha_j (j a nonzero integer,
[alpha_i, alpha_j] = i * delta_{i+j,0}, alpha_j |0> = 0 for j > 0)
realizes the loop-field modes; the Virasoro generators are the
normal-ordered quadratics

    L_m = 1/2 sum_j :alpha_{m-j} alpha_j:

on the space spanned by partition states of total degree <= N.  This is
the minimal realization with a one-dimensional mode algebra and has
central charge c = 1.

Matrix elements are computed exactly (states above the degree cutoff
are only projected out at the end), so L_m equals P L_m P entrywise and
adjointness L_m^T = L_{-m} holds on the whole truncated space.
Commutators formed from truncated products are trusted only on states
of degree <= N - |m| - |n|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError

CENTRAL_CHARGE = 1.0


# ---------------------------------------------------------------------------
# exponential (graded) vectors


@dataclass(frozen=True)
class FockVector:
    """Coefficients in the normalized graded basis e_n = z^n / sqrt(n!).

    The basis is orthonormal for the standard sesquilinear pairing, so a
    square-summable power-series coefficient sequence embeds isometrically
    by identifying the n-th series coefficient with the e_n coordinate.
    """

    coeffs: Tuple[complex, ...]

    @property
    def norm_squared(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.coeffs))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared)

    def __add__(self, other: "FockVector") -> "FockVector":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0.0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0.0] * (n - len(other.coeffs))
        return FockVector(tuple(complex(x + y) for x, y in zip(a, b)))


def fock_embed(series_coeffs: Sequence[complex]) -> FockVector:
    """Isometric re-coordinatization of a finite power-series tail."""
    return FockVector(tuple(complex(c) for c in series_coeffs))


# ---------------------------------------------------------------------------
# loop fields


@dataclass(frozen=True)
class LoopField:
    """Finitely supported Laurent modes c_n of a one-dimensional field."""

    modes: Tuple[Tuple[int, float], ...]

    @classmethod
    def from_dict(cls, modes: Dict[int, float]) -> "LoopField":
        return cls(tuple(sorted((int(k), float(v)) for k, v in modes.items())))

    def mode(self, n: int) -> float:
        for k, v in self.modes:
            if k == n:
                return v
        return 0.0


def loop_modes_to_virasoro(field: LoopField, N: int) -> Dict[int, float]:
    """Contour extraction (1/2pi i) * contour integral of z^{n+1} T(z) dz.

    For T(z) = sum c_k z^k the residue picks out k = -n - 2, so the
    generator of index n receives exactly the mode c_{-n-2}.  Returns
    the contributions for |n| <= N.
    """
    return {n: field.mode(-n - 2) for n in range(-N, N + 1)}


# ---------------------------------------------------------------------------
# partition basis


def _partitions(total: int, largest: int) -> Iterable[Tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in _partitions(total - first, first):
            yield (first,) + rest


@dataclass(frozen=True)
class FockBasis:
    """Partition states of total degree <= N, ordered by degree then lex."""

    cutoff: int
    states: Tuple[Tuple[int, ...], ...]
    degrees: np.ndarray
    index: Dict[Tuple[int, ...], int]

    def degree_mask(self, max_degree: int) -> np.ndarray:
        return self.degrees <= max_degree

    @property
    def size(self) -> int:
        return len(self.states)


@lru_cache(maxsize=None)
def fock_basis(N: int) -> FockBasis:
    states: List[Tuple[int, ...]] = []
    for k in range(N + 1):
        states.extend(sorted(_partitions(k, k)))
    degrees = np.array([sum(s) for s in states], dtype=int)
    index = {s: i for i, s in enumerate(states)}
    return FockBasis(N, tuple(states), degrees, index)


def partition_count(k: int) -> int:
    """p(k) by the pentagonal-number recurrence (independent of the basis)."""
    p = [1] + [0] * k
    for n in range(1, k + 1):
        total, j = 0, 1
        while True:
            g1 = j * (3 * j - 1) // 2
            g2 = j * (3 * j + 1) // 2
            if g1 > n and g2 > n:
                break
            sign = -1 if j % 2 == 0 else 1
            if g1 <= n:
                total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            j += 1
        p[n] = total
    return p[k]


# ---------------------------------------------------------------------------
# oscillator action and Virasoro matrices


def _apply_alpha(state: Tuple[int, ...], j: int) -> Tuple[float, Tuple[int, ...]]:
    """alpha_j on a normalized partition state; returns (amplitude, state).

    j > 0 removes a part j with amplitude sqrt(j * k_j); j < 0 adds a
    part |j| with amplitude sqrt(|j| * (k_j + 1)).  Zero amplitude is
    signalled by (0.0, ()).
    """
    if j > 0:
        k = state.count(j)
        if k == 0:
            return 0.0, ()
        out = list(state)
        out.remove(j)
        return math.sqrt(j * k), tuple(out)
    p = -j
    k = state.count(p)
    out = tuple(sorted(state + (p,), reverse=True))
    return math.sqrt(p * (k + 1)), out


@dataclass(frozen=True)
class VirasoroOperator:
    """Sparse matrix of L_m on the degree-truncated Fock basis."""

    index: int
    matrix: sp.csr_matrix
    basis: FockBasis
    central_charge: float = CENTRAL_CHARGE


@lru_cache(maxsize=None)
def virasoro_generator(m: int, N: int) -> VirasoroOperator:
    """L_m = 1/2 sum_j :alpha_{m-j} alpha_j: projected to degree <= N."""
    if abs(m) > N:
        raise ConfigurationError(f"mode index |{m}| exceeds truncation {N}")
    basis = fock_basis(N)
    rows: List[int] = []
    cols: List[int] = []
    vals: List[float] = []
    for col, state in enumerate(basis.states):
        acc: Dict[Tuple[int, ...], float] = {}
        for j in range(-(N + abs(m)), N + abs(m) + 1):
            if j == 0 or m - j == 0:
                continue
            # normal ordering: apply the annihilator first when the pair
            # is mixed; commuting factors make the order immaterial
            # whenever m != 0.
            first, second = (j, m - j) if j > 0 or (m - j) < 0 else (m - j, j)
            amp1, s1 = _apply_alpha(state, first)
            if amp1 == 0.0:
                continue
            amp2, s2 = _apply_alpha(s1, second)
            if amp2 == 0.0:
                continue
            if sum(s2) > N:
                continue  # final projection, intermediates kept exact
            acc[s2] = acc.get(s2, 0.0) + 0.5 * amp1 * amp2
        for out_state, val in acc.items():
            if val != 0.0:
                rows.append(basis.index[out_state])
                cols.append(col)
                vals.append(val)
    mat = sp.csr_matrix(
        (vals, (rows, cols)), shape=(basis.size, basis.size), dtype=float
    )
    return VirasoroOperator(m, mat, basis)


def _interior_max_abs(mat: sp.spmatrix, basis: FockBasis, max_degree: int) -> float:
    mask = basis.degree_mask(max_degree)
    sub = mat.tocsr()[np.flatnonzero(mask)][:, np.flatnonzero(mask)]
    return float(abs(sub).max()) if sub.nnz else 0.0


@dataclass(frozen=True)
class BracketCheck:
    """Residuals of [L_m, L_n] against both index conventions."""

    m: int
    n: int
    truncation: int
    residual: float  # (m - n) L_{m+n} + (c/12)(m^3 - m) delta_{m+n,0}
    residual_swapped: float  # the (n - m) variant with matching central sign
    convention: str


def virasoro_bracket_check(m: int, n: int, N: int) -> BracketCheck:
    """Interior residual of the bracket relation for the built operators.

    Evaluates both index conventions and records which one the
    constructed generators satisfy; the primary residual is against
    (m - n) L_{m+n} + (c/12)(m^3 - m) delta_{m+n,0} I with c = 1.
    """
    if max(abs(m), abs(n), abs(m + n)) > N // 2:
        raise ConfigurationError("truncation too small for this bracket")
    Lm = virasoro_generator(m, N)
    Ln = virasoro_generator(n, N)
    basis = Lm.basis
    comm = Lm.matrix @ Ln.matrix - Ln.matrix @ Lm.matrix
    Lmn = virasoro_generator(m + n, N).matrix
    eye = sp.identity(basis.size, format="csr")
    c = CENTRAL_CHARGE
    central = (c / 12.0) * (m**3 - m) if m + n == 0 else 0.0
    central_sw = (c / 12.0) * (n**3 - n) if m + n == 0 else 0.0
    interior = basis.cutoff - abs(m) - abs(n)
    res = _interior_max_abs(comm - (m - n) * Lmn - central * eye, basis, interior)
    res_sw = _interior_max_abs(comm - (n - m) * Lmn - central_sw * eye, basis, interior)
    if res <= res_sw:
        convention = "[L_m,L_n] = (m-n) L_{m+n} + (c/12)(m^3-m) delta_{m+n,0}"
    else:
        convention = "[L_m,L_n] = (n-m) L_{m+n} + (c/12)(n^3-n) delta_{m+n,0}"
    return BracketCheck(m, n, N, res, res_sw, convention)


def vacuum_central_sequence(m_max: int, N: int) -> List[float]:
    """<0|[L_m, L_{-m}]|0> - 2m <0|L_0|0> for m = 1..m_max.

    Equals (c/12)(m^3 - m) with c = 1 for the free-boson construction.
    """
    basis = fock_basis(N)
    vac = basis.index[()]
    out = []
    for m in range(1, m_max + 1):
        Lm = virasoro_generator(m, N).matrix
        Lneg = virasoro_generator(-m, N).matrix
        comm = Lm @ Lneg - Lneg @ Lm
        L0_vac = virasoro_generator(0, N).matrix[vac, vac]
        out.append(float(comm[vac, vac] - 2 * m * L0_vac))
    return out


def l0_multiplicities(N: int) -> Dict[int, int]:
    """Multiplicity of each L_0 eigenvalue on the truncated space."""
    L0 = virasoro_generator(0, N)
    off_diag = L0.matrix - sp.diags(L0.matrix.diagonal())
    if off_diag.nnz and abs(off_diag).max() > 0:
        raise AssertionError("L_0 must be diagonal on the graded basis")
    eigs = np.rint(L0.matrix.diagonal()).astype(int)
    out: Dict[int, int] = {}
    for v in eigs:
        out[int(v)] = out.get(int(v), 0) + 1
    return out


def hermiticity_residual(m: int, N: int) -> float:
    """Max |L_m^T - L_{-m}| entrywise (exact adjointness on the cutoff space)."""
    Lm = virasoro_generator(m, N).matrix
    Lneg = virasoro_generator(-m, N).matrix
    diff = Lm.transpose() - Lneg
    return float(abs(diff).max()) if diff.nnz else 0.0
