import math

import numpy as np
import pytest

from sl2rep.errors import DomainError, NotRegularSemisimpleError
from sl2rep.matrix_core import (
    EndoscopyTag,
    GroupElement,
    IwasawaCoords,
    S,
    T,
    classify_endoscopy,
    commutant_dimension,
    iwasawa_compose,
    iwasawa_decompose,
    lie_bracket,
    lie_generator,
    mobius_act,
    one_param,
    point_pair_invariant,
    reduce_to_fundamental_domain,
)

I2 = GroupElement.identity()


def random_unimodular(rng, scale=1.0):
    """Random entries, rejected until the determinant is safely positive,
    then rescaled to det = 1."""
    while True:
        a, b, c, d = rng.normal(0.0, scale, size=4)
        det = a * d - b * c
        if det > 0.1:
            s = math.sqrt(det)
            return GroupElement(a / s, b / s, c / s, d / s)


class TestMobius:
    def test_identity_fixes_i(self):
        assert mobius_act(I2, 1j) == 1j

    def test_diagonal_action(self):
        # direct formula: (2i + 0) / (0 + 1/2) = 4i
        g = GroupElement(2.0, 0.0, 0.0, 0.5)
        assert mobius_act(g, 1j) == pytest.approx(4j)

    def test_s_fixes_i(self):
        assert mobius_act(S, 1j) == pytest.approx(1j)

    def test_lower_half_plane_rejected(self):
        with pytest.raises(DomainError):
            mobius_act(S, 1.0 - 2j)
        with pytest.raises(DomainError):
            mobius_act(S, 1.0 + 0j)

    def test_associativity_and_cocycle(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            g1 = random_unimodular(rng)
            g2 = random_unimodular(rng)
            z = complex(rng.normal(), abs(rng.normal()) + 0.1)
            lhs = mobius_act(g1 @ g2, z)
            rhs = mobius_act(g1, mobius_act(g2, z))
            assert lhs == pytest.approx(rhs, abs=1e-10)
            # Im(gz) = Im z / |cz + d|^2
            denom = abs(g1.c * z + g1.d) ** 2
            assert mobius_act(g1, z).imag == pytest.approx(z.imag / denom, rel=1e-12)
            assert mobius_act(g1, z).imag > 0.0


class TestIwasawa:
    def test_identity_chart(self):
        co = iwasawa_decompose(I2)
        assert (co.x, co.y, co.theta, co.sign) == (0.0, 1.0, 0.0, 1)

    def test_translation_chart(self):
        co = iwasawa_decompose(T)
        assert co.x == pytest.approx(1.0)
        assert co.y == pytest.approx(1.0)
        assert co.theta == pytest.approx(0.0)
        # multiply the three factors back
        assert iwasawa_compose(co).max_abs_diff(T) <= 1e-15

    def test_rotation_height(self):
        # c = 1, d = 0 so y = 1/(c^2 + d^2) = 1; theta on the chosen branch
        co = iwasawa_decompose(S)
        assert co.y == pytest.approx(1.0)
        assert iwasawa_compose(co).max_abs_diff(S) <= 1e-15

    def test_compose_examples(self):
        assert iwasawa_compose(IwasawaCoords(0.0, 1.0, 0.0)).max_abs_diff(I2) == 0.0
        assert iwasawa_compose(IwasawaCoords(1.0, 1.0, 0.0)).max_abs_diff(T) == 0.0
        got = iwasawa_compose(IwasawaCoords(0.0, 4.0, 0.0))
        assert got.max_abs_diff(GroupElement(2.0, 0.0, 0.0, 0.5)) <= 1e-15

    def test_round_trip_random(self):
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(10_000):
            g = random_unimodular(rng)
            co = iwasawa_decompose(g)
            worst = max(worst, iwasawa_compose(co).max_abs_diff(g))
            assert co.y > 0.0 and 0.0 <= co.theta < 2.0 * math.pi
            # independent height formula
            assert co.y == pytest.approx(1.0 / (g.c**2 + g.d**2), rel=1e-12)
        assert worst <= 1e-12

    def test_chart_round_trip_on_canonical_coords(self):
        rng = np.random.default_rng(5)
        for _ in range(500):
            co = IwasawaCoords(
                rng.normal(), abs(rng.normal()) + 0.05, rng.uniform(0, 2 * math.pi)
            )
            back = iwasawa_decompose(iwasawa_compose(co))
            assert back.x == pytest.approx(co.x, abs=1e-10)
            assert back.y == pytest.approx(co.y, rel=1e-10)
            assert math.remainder(back.theta - co.theta, 2 * math.pi) == pytest.approx(
                0.0, abs=1e-10
            )

    def test_sheet_sign_composes_to_opposite_rotation(self):
        co = IwasawaCoords(0.3, 2.0, 1.0, sign=-1)
        flipped = co.canonical()
        assert flipped.sign == 1
        assert iwasawa_compose(co).max_abs_diff(iwasawa_compose(flipped)) <= 1e-15

    def test_nonpositive_height_rejected(self):
        with pytest.raises(DomainError):
            IwasawaCoords(0.0, 0.0, 0.0)
        with pytest.raises(DomainError):
            IwasawaCoords(0.0, -1.0, 0.0)


class TestOneParam:
    def test_h_at_zero(self):
        assert one_param("H", 0.0).max_abs_diff(I2) == 0.0

    def test_rotation_quarter_turn(self):
        got = one_param("X-Y", math.pi / 2.0)
        assert got.max_abs_diff(GroupElement(0.0, 1.0, -1.0, 0.0)) <= 1e-15

    def test_boost_closed_form(self):
        t = 0.83
        got = one_param("X+Y", t)
        want = GroupElement(math.cosh(t), math.sinh(t), math.sinh(t), math.cosh(t))
        assert got.max_abs_diff(want) == 0.0

    @pytest.mark.parametrize("gen", ["H", "X-Y", "X+Y"])
    def test_homomorphism_law(self, gen):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            s, t = rng.uniform(-2.0, 2.0, size=2)
            lhs = one_param(gen, s + t)
            rhs = one_param(gen, s) @ one_param(gen, t)
            assert lhs.max_abs_diff(rhs) <= 1e-12

    def test_unknown_generator(self):
        with pytest.raises(DomainError):
            one_param("Z", 1.0)


class TestLieAlgebra:
    def test_bracket_relations_exact(self):
        H, X, Y = lie_generator("H"), lie_generator("X"), lie_generator("Y")
        assert np.array_equal(lie_bracket(H, X), 2 * X)
        assert np.array_equal(lie_bracket(H, Y), -2 * Y)
        assert np.array_equal(lie_bracket(X, Y), H)

    def test_combination_generators(self):
        X, Y = lie_generator("X"), lie_generator("Y")
        assert np.array_equal(lie_generator("X-Y"), X - Y)
        assert np.array_equal(lie_generator("X+Y"), X + Y)


class TestEndoscopy:
    def test_identity_is_full_group(self):
        cls = classify_endoscopy(I2)
        assert cls.tag is EndoscopyTag.FULL_GROUP
        assert cls.centralizer_dim == 4

    def test_minus_identity_is_full_group(self):
        cls = classify_endoscopy(GroupElement(-1.0, 0.0, 0.0, -1.0))
        assert cls.tag is EndoscopyTag.FULL_GROUP

    def test_rotation_is_compact_torus(self):
        cls = classify_endoscopy(GroupElement.rotation(math.pi / 3.0))
        assert cls.tag is EndoscopyTag.COMPACT_TORUS
        assert cls.angle == pytest.approx(math.pi / 3.0)
        assert cls.centralizer_dim == 2

    def test_diagonal_is_split_torus(self):
        cls = classify_endoscopy(GroupElement(2.0, 0.0, 0.0, 0.5))
        assert cls.tag is EndoscopyTag.SPLIT_TORUS
        assert cls.eigenvalue == pytest.approx(2.0)
        assert cls.centralizer_dim == 2

    def test_negative_split_eigenvalue_branch(self):
        cls = classify_endoscopy(GroupElement(-2.0, 0.0, 0.0, -0.5))
        assert cls.tag is EndoscopyTag.SPLIT_TORUS
        assert cls.eigenvalue == pytest.approx(-2.0)

    def test_unipotent_rejected(self):
        with pytest.raises(NotRegularSemisimpleError):
            classify_endoscopy(T)
        with pytest.raises(NotRegularSemisimpleError):
            classify_endoscopy(GroupElement(-1.0, 3.0, 0.0, -1.0))

    def test_commutant_dimension_by_linear_solve(self):
        assert commutant_dimension(I2) == 4
        assert commutant_dimension(GroupElement(2.0, 0.0, 0.0, 0.5)) == 2
        assert commutant_dimension(GroupElement.rotation(0.4)) == 2
        assert commutant_dimension(T) == 2

    def test_conjugation_invariance_of_tag(self):
        rng = np.random.default_rng(99)
        samples = [
            GroupElement.rotation(0.7),
            GroupElement(3.0, 0.0, 0.0, 1.0 / 3.0),
            GroupElement.boost(0.9),
            I2,
        ]
        for g in samples:
            base = classify_endoscopy(g).tag
            for _ in range(50):
                h = random_unimodular(rng)
                conj = h @ g @ h.inv()
                assert classify_endoscopy(conj).tag is base


class TestFundamentalDomain:
    def test_already_reduced(self):
        z, gamma = reduce_to_fundamental_domain(1j)
        assert z == pytest.approx(1j)
        assert gamma.max_abs_diff(I2) == 0.0

    def test_translation_reduction(self):
        z, gamma = reduce_to_fundamental_domain(1j + 5.0)
        assert z == pytest.approx(1j)
        # inverse fifth power of T
        assert gamma.max_abs_diff(GroupElement(1.0, -5.0, 0.0, 1.0)) == 0.0

    def test_small_point(self):
        z0 = 0.1 + 0.1j
        z, gamma = reduce_to_fundamental_domain(z0)
        assert abs(z) >= 1.0 - 1e-12
        assert abs(z.real) <= 0.5 + 1e-12
        # gamma is an integer matrix of determinant one moving z0 to z
        for entry in (gamma.a, gamma.b, gamma.c, gamma.d):
            assert entry == round(entry)
        assert mobius_act(gamma, z0) == pytest.approx(z)

    def test_random_points(self):
        rng = np.random.default_rng(31)
        for _ in range(500):
            z0 = complex(rng.uniform(-8, 8), rng.uniform(0.02, 4.0))
            z, gamma = reduce_to_fundamental_domain(z0)
            assert abs(z) >= 1.0 - 1e-9
            assert abs(z.real) <= 0.5 + 1e-9
            assert mobius_act(gamma, z0) == pytest.approx(z, abs=1e-9)

    def test_boundary_tie_prefers_nonnegative_real_part(self):
        z, _ = reduce_to_fundamental_domain(-0.5 + 1.3j)
        assert z.real == pytest.approx(0.5)
        w, _ = reduce_to_fundamental_domain(math.cos(2.2) + 1j * math.sin(2.2))
        assert w.real >= -1e-12


class TestPointPairInvariant:
    def test_symmetry_and_invariance(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            z = complex(rng.normal(), abs(rng.normal()) + 0.1)
            w = complex(rng.normal(), abs(rng.normal()) + 0.1)
            g = random_unimodular(rng)
            u = point_pair_invariant(z, w)
            assert u == pytest.approx(point_pair_invariant(w, z), rel=1e-12)
            gu = point_pair_invariant(mobius_act(g, z), mobius_act(g, w))
            assert gu == pytest.approx(u, rel=1e-9, abs=1e-11)
