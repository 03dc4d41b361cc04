"""Structure matrices, derivation/group actions, Lefschetz, type projectors."""

import numpy as np
import pytest
from scipy.linalg import expm

from qhodge.exterior import DEGREE, Multivector, N_BLADES, VOL, wedge
from qhodge.quaternionic import (
    AD,
    GROUP,
    I,
    J,
    K,
    INVARIANT_PROJECTOR,
    Quaternion,
    ad_action,
    ad_matrix,
    group_action,
    group_matrix,
    invariance_defect,
    kahler_form,
    left_matrix,
    lefschetz,
    lefschetz_dual,
    rotor_matrix,
    structure_matrix,
    type_projector,
    type_projector_matrix,
)

RNG_SEED = 20240601


def rand_mv(rng, degree=None):
    c = rng.standard_normal(N_BLADES) + 1j * rng.standard_normal(N_BLADES)
    if degree is not None:
        c = c * (DEGREE == degree)
    return Multivector(c)


class TestMatrices:
    def test_quaternion_relations_exact(self):
        eye = np.eye(4)
        assert np.array_equal(I @ I, -eye)
        assert np.array_equal(J @ J, -eye)
        assert np.array_equal(K @ K, -eye)
        assert np.array_equal(I @ J @ K, -eye)
        assert np.array_equal(I @ J, K)

    def test_orthogonal(self):
        for m in (I, J, K):
            assert np.array_equal(m @ m.T, np.eye(4))

    def test_left_matrix_is_homomorphism(self):
        rng = np.random.default_rng(RNG_SEED)
        x = Quaternion.from_components(rng.standard_normal(4))
        y = Quaternion.from_components(rng.standard_normal(4))
        assert np.allclose(left_matrix(x) @ left_matrix(y), left_matrix(x * y))

    def test_sphere_combination_squares_to_minus_one(self):
        rng = np.random.default_rng(RNG_SEED + 1)
        for _ in range(20):
            s = rng.standard_normal(3)
            s /= np.linalg.norm(s)
            c = structure_matrix(s)
            assert np.allclose(c @ c, -np.eye(4), atol=1e-14)


class TestAdAction:
    def test_kills_scalars(self):
        for n in "IJK":
            assert ad_action(n, Multivector.scalar(1.0)).norm() == 0.0

    def test_su2_commutators(self):
        assert np.abs(AD["I"] @ AD["J"] - AD["J"] @ AD["I"] - 2 * AD["K"]).max() <= 1e-12
        assert np.abs(AD["J"] @ AD["K"] - AD["K"] @ AD["J"] - 2 * AD["I"]).max() <= 1e-12
        assert np.abs(AD["K"] @ AD["I"] - AD["I"] @ AD["K"] - 2 * AD["J"]).max() <= 1e-12

    def test_commutator_on_random_fiber(self):
        rng = np.random.default_rng(RNG_SEED + 2)
        for _ in range(50):
            a = rand_mv(rng)
            lhs = ad_action("I", ad_action("J", a)) - ad_action("J", ad_action("I", a))
            rhs = 2 * ad_action("K", a)
            assert (lhs - rhs).norm() <= 1e-12 * a.norm()

    def test_type_eigenvalue(self):
        # a (p,q) form w.r.t. I satisfies ad_I a = i(p-q) a
        rng = np.random.default_rng(RNG_SEED + 3)
        for p in range(3):
            for q in range(3):
                a = type_projector("I", p, q, rand_mv(rng, p + q))
                if a.norm() < 1e-9:
                    continue
                assert (ad_action("I", a) - 1j * (p - q) * a).norm() <= 1e-12 * a.norm()

    def test_leibniz_rule(self):
        rng = np.random.default_rng(RNG_SEED + 4)
        for _ in range(50):
            a, b = rand_mv(rng), rand_mv(rng)
            lhs = ad_action("J", wedge(a, b))
            rhs = wedge(ad_action("J", a), b) + wedge(a, ad_action("J", b))
            assert (lhs - rhs).norm() <= 1e-12 * a.norm() * b.norm()


class TestGroupAction:
    def test_definition_on_two_blade(self):
        a = Multivector.blade(0b0001)  # dxi^1
        b = Multivector.blade(0b0010)  # dxi^2
        lhs = group_action("I", wedge(a, b))
        rhs = wedge(Multivector.one_form(I[:, 0]), Multivector.one_form(I[:, 1]))
        assert np.allclose(lhs.c, rhs.c)

    def test_eigenvalue_on_pq_form(self):
        rng = np.random.default_rng(RNG_SEED + 5)
        for p, q in [(1, 0), (2, 0), (1, 1), (2, 1), (0, 2)]:
            a = type_projector("I", p, q, rand_mv(rng, p + q))
            assert a.norm() > 1e-9
            assert (group_action("I", a) - 1j ** (p - q) * a).norm() <= 1e-12 * a.norm()

    def test_unit_rotor_preserves_vol(self):
        rng = np.random.default_rng(RNG_SEED + 6)
        for _ in range(20):
            u = Quaternion.from_components(rng.standard_normal(4)).normalized()
            rot = rotor_matrix(u)
            assert np.abs(rot @ VOL.c - VOL.c).max() <= 1e-12

    def test_fourth_power_is_identity(self):
        for n in "IJK":
            assert np.abs(np.linalg.matrix_power(GROUP[n], 4) - np.eye(16)).max() <= 1e-12

    def test_group_equals_exponential(self):
        assert np.allclose(GROUP["I"], expm(np.pi / 2 * AD["I"]), atol=1e-12)

    def test_multiplicativity(self):
        rng = np.random.default_rng(RNG_SEED + 7)
        a, b = rand_mv(rng), rand_mv(rng)
        lhs = group_action("J", wedge(a, b))
        rhs = wedge(group_action("J", a), group_action("J", b))
        assert (lhs - rhs).norm() <= 1e-12 * a.norm() * b.norm()


class TestLefschetz:
    def test_on_scalar(self):
        out = lefschetz("I", Multivector.scalar(1.0))
        assert np.allclose(out.c, kahler_form("I").c)

    def test_dual_on_omega(self):
        # <omega_I, omega_I> = 2 for the unit-coefficient construction
        om = kahler_form("I")
        assert om.inner(om) == pytest.approx(2.0, abs=1e-14)
        out = lefschetz_dual("I", om)
        assert np.allclose(out.c, Multivector.scalar(2.0).c)

    def test_top_degree_relation(self):
        # Lambda_C^2 (psi vol) = 2 psi
        for n in "IJK":
            out = lefschetz_dual(n, lefschetz_dual(n, VOL))
            assert np.allclose(out.c, Multivector.scalar(2.0).c, atol=1e-13)

    def test_ko2_conjugation(self):
        # J Lambda_I J^{-1} = -Lambda_I as fiber operators
        rng = np.random.default_rng(RNG_SEED + 8)
        gj = GROUP["J"]
        gj_inv = np.linalg.inv(gj)
        for _ in range(20):
            a = rand_mv(rng)
            lhs = group_action("J", lefschetz_dual("I", Multivector(gj_inv @ a.c)))
            rhs = -1.0 * lefschetz_dual("I", a)
            assert (lhs - rhs).norm() <= 1e-12 * a.norm()

    def test_ko2_l_operator(self):
        from qhodge.quaternionic import lefschetz_matrix

        gj = GROUP["J"]
        li = lefschetz_matrix("I")
        assert np.abs(gj @ li @ np.linalg.inv(gj) + li).max() <= 1e-12


class TestTypeProjectors:
    def test_omega_I_is_11(self):
        om = kahler_form("I")
        assert (type_projector("I", 1, 1, om) - om).norm() <= 1e-13
        assert ad_action("I", om).norm() <= 1e-13

    def test_canonical_20_form(self):
        omega = (kahler_form("J") - 1j * kahler_form("K")) * 0.25
        assert (type_projector("I", 2, 0, omega) - omega).norm() <= 1e-13
        assert type_projector("I", 0, 2, omega).norm() <= 1e-13

    def test_idempotent_and_complete(self):
        for k in range(5):
            pairs = [(p, k - p) for p in range(max(0, k - 2), min(k, 2) + 1)]
            total = sum(type_projector_matrix("I", p, q) for p, q in pairs)
            assert np.abs(total - np.diag((DEGREE == k).astype(float))).max() <= 1e-12
            for p, q in pairs:
                proj = type_projector_matrix("I", p, q)
                assert np.abs(proj @ proj - proj).max() <= 1e-12

    def test_commutes_with_degree(self):
        rng = np.random.default_rng(RNG_SEED + 9)
        a = rand_mv(rng)
        out = type_projector("J", 1, 1, a)
        assert out.degrees(tol=1e-12) in ([], [2])


class TestInvariance:
    def test_vol_invariant(self):
        assert invariance_defect(VOL) == 0.0

    def test_scalar_invariant(self):
        assert invariance_defect(Multivector.scalar(3.7 + 1j)) == 0.0

    def test_one_form_not_invariant(self):
        d1 = Multivector.blade(0b0001)
        # ad_I(dxi^1) = I(dxi^1), a unit covector
        assert invariance_defect(d1) == pytest.approx(1.0, abs=1e-14)

    def test_invariant_projector(self):
        # joint kernel of the three derivations: scalars, ASD 2-forms, vol
        assert INVARIANT_PROJECTOR.shape == (16, 16)
        assert np.trace(INVARIANT_PROJECTOR) == pytest.approx(5.0, abs=1e-10)
        rng = np.random.default_rng(RNG_SEED + 10)
        a = Multivector(INVARIANT_PROJECTOR @ rand_mv(rng).c)
        assert invariance_defect(a) <= 1e-12

    def test_omega_span_is_ad_invariant(self):
        omegas = [kahler_form(n).c for n in "IJK"]
        basis = np.stack(omegas, axis=1)
        for n in "IJK":
            for om in omegas:
                image = AD[n] @ om
                coeff, *_ = np.linalg.lstsq(basis, image, rcond=None)
                assert np.linalg.norm(basis @ coeff - image) <= 1e-12
