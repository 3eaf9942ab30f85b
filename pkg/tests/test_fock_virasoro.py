import math

import numpy as np
import pytest
import scipy.sparse as sp

from sl2rep.errors import ConfigurationError
from sl2rep.fock_virasoro import (
    FockVector,
    LoopField,
    fock_basis,
    fock_embed,
    hermiticity_residual,
    l0_multiplicities,
    loop_modes_to_virasoro,
    partition_count,
    vacuum_central_sequence,
    virasoro_bracket_check,
    virasoro_generator,
)


class TestFockEmbedding:
    def test_vacuum(self):
        v = fock_embed([1.0])
        assert v.norm() == 1.0

    def test_geometric_norm_matches_closed_form(self):
        r, N = 0.5, 32
        v = fock_embed([r**n for n in range(N + 1)])
        # sum_{n<=N} r^{2n} = (1 - r^{2(N+1)}) / (1 - r^2)
        want = (1.0 - r ** (2 * (N + 1))) / (1.0 - r**2)
        assert v.norm_squared == pytest.approx(want, rel=1e-14)
        assert v.norm_squared == pytest.approx(4.0 / 3.0, abs=2.0 * r ** (2 * N))

    def test_linearity(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=6) + 1j * rng.normal(size=6)
        b = rng.normal(size=6) + 1j * rng.normal(size=6)
        lhs = fock_embed(a + b)
        rhs = fock_embed(a) + fock_embed(b)
        assert np.allclose(lhs.coeffs, rhs.coeffs)


def contour_mode_extraction(field: LoopField, n: int, samples: int = 512) -> complex:
    """Numerical oracle: (1/2pi i) * integral of z^{n+1} T(z) dz over the
    unit circle by the trapezoid rule (exact for Laurent polynomials
    once the sample count clears the bandwidth)."""
    ts = np.arange(samples) * (2.0 * math.pi / samples)
    z = np.exp(1j * ts)
    Tz = sum(c * z**k for k, c in field.modes)
    integrand = z ** (n + 1) * Tz * (1j * z)  # dz = iz dt
    return complex(np.mean(integrand) / 1j)


class TestLoopModes:
    def test_single_mode_targets_one_generator(self):
        n = 3
        field = LoopField.from_dict({-n - 2: 1.0})
        contrib = loop_modes_to_virasoro(field, 6)
        for idx, val in contrib.items():
            assert val == (1.0 if idx == n else 0.0)

    def test_against_contour_integration(self):
        rng = np.random.default_rng(8)
        modes = {int(k): float(rng.normal()) for k in rng.integers(-9, 9, size=6)}
        field = LoopField.from_dict(modes)
        contrib = loop_modes_to_virasoro(field, 6)
        for n in range(-6, 7):
            oracle = contour_mode_extraction(field, n)
            assert contrib[n] == pytest.approx(oracle.real, abs=1e-12)
            assert abs(oracle.imag) <= 1e-12

    def test_zero_field_and_linearity(self):
        zero = LoopField.from_dict({})
        assert all(v == 0.0 for v in loop_modes_to_virasoro(zero, 5).values())
        f1 = LoopField.from_dict({-4: 1.5, 0: 2.0})
        f2 = LoopField.from_dict({-4: -0.5, 3: 1.0})
        fsum = LoopField.from_dict({-4: 1.0, 0: 2.0, 3: 1.0})
        c1 = loop_modes_to_virasoro(f1, 5)
        c2 = loop_modes_to_virasoro(f2, 5)
        cs = loop_modes_to_virasoro(fsum, 5)
        for n in cs:
            assert cs[n] == pytest.approx(c1[n] + c2[n], abs=1e-15)


def oscillator_lowering_norm(m: int) -> float:
    """Hand oracle: ||L_{-m}|0>||^2 by explicit creator-pair algebra.

    L_{-m}|0> = 1/2 sum_{p=1}^{m-1} alpha_{-p} alpha_{-(m-p)} |0>; states
    {p, m-p} with p != m-p get amplitude sqrt(p(m-p)) (the two orderings
    add), the p = m/2 state gets 1/2 * sqrt(m/2) * sqrt(2 * m/2).
    """
    total = 0.0
    seen = set()
    for p in range(1, m):
        q = m - p
        key = (min(p, q), max(p, q))
        if key in seen:
            continue
        seen.add(key)
        if p != q:
            total += (math.sqrt(p) * math.sqrt(q)) ** 2
        else:
            total += (0.5 * math.sqrt(p) * math.sqrt(2 * p)) ** 2
    return total


class TestVirasoro:
    def test_l0_is_the_grading(self):
        op = virasoro_generator(0, 10)
        assert np.allclose(op.matrix.diagonal(), op.basis.degrees)
        off = op.matrix - sp.diags(op.matrix.diagonal())
        assert off.nnz == 0 or abs(off).max() == 0.0

    def test_l1_annihilates_vacuum(self):
        op = virasoro_generator(1, 10)
        vac = op.basis.index[()]
        assert op.matrix[:, vac].nnz == 0

    def test_lowering_raises_degree_and_is_adjoint(self):
        N = 12
        op = virasoro_generator(-1, N)
        basis = op.basis
        mat = op.matrix.tocoo()
        for r, c in zip(mat.row, mat.col):
            assert basis.degrees[r] == basis.degrees[c] + 1
        assert hermiticity_residual(1, N) <= 1e-12

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_hermiticity(self, m):
        assert hermiticity_residual(m, 14) <= 1e-12

    def test_bracket_l1_lm1(self):
        chk = virasoro_bracket_check(1, -1, 16)
        assert chk.residual <= 1e-12
        assert "(m-n)" in chk.convention

    def test_bracket_no_central_term_off_diagonal(self):
        chk = virasoro_bracket_check(2, 1, 16)
        assert chk.residual <= 1e-12

    def test_central_vacuum_expectation(self):
        # <0|[L_2, L_-2]|0> = c/2 = 0.5 for c = 1
        seq = vacuum_central_sequence(4, 12)
        assert seq[1] == pytest.approx(0.5, abs=1e-12)
        for m, got in enumerate(seq, start=1):
            assert got == pytest.approx((m**3 - m) / 12.0, abs=1e-10)
            # independent oscillator-algebra oracle
            assert got == pytest.approx(oscillator_lowering_norm(m), abs=1e-10)

    def test_swapped_convention_is_rejected_by_construction(self):
        chk = virasoro_bracket_check(2, -2, 16)
        assert chk.residual <= 1e-10
        assert chk.residual_swapped > 1.0

    def test_jacobi_identity(self):
        N = 18
        idx = [-2, 1, 3]
        ops = {m: virasoro_generator(m, N).matrix for m in set(idx) | {-3, -1, 2}}
        a, b, c = idx
        comm = lambda A, B: A @ B - B @ A
        total = (
            comm(comm(ops[a], ops[b]), ops[c])
            + comm(comm(ops[b], ops[c]), ops[a])
            + comm(comm(ops[c], ops[a]), ops[b])
        )
        basis = fock_basis(N)
        mask = np.flatnonzero(basis.degree_mask(N - abs(a) - abs(b) - abs(c)))
        sub = total.tocsr()[mask][:, mask]
        resid = abs(sub).max() if sub.nnz else 0.0
        assert resid <= 1e-10

    def test_l0_multiplicities_are_partition_numbers(self):
        mult = l0_multiplicities(12)
        for k in range(13):
            assert mult[k] == partition_count(k)

    def test_mode_beyond_truncation_rejected(self):
        with pytest.raises(ConfigurationError):
            virasoro_generator(9, 8)
        with pytest.raises(ConfigurationError):
            virasoro_bracket_check(4, 4, 10)


def test_partition_count_small_values():
    table = {0: 1, 1: 1, 2: 2, 3: 3, 4: 5, 5: 7, 10: 42, 20: 627, 24: 1575}
    for k, want in table.items():
        assert partition_count(k) == want
