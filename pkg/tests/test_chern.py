from fractions import Fraction

import pytest

from torcycle import tautring as tr
from torcycle.chern import (
    HodgeExpression,
    c1_log_cotangent_Abar4,
    c1_tangent,
    ch_log_cotangent,
    ch_structure_sheaves,
    ch_tangent,
    ch_tangent_Ag,
    chern_tangent_moduli,
)
from torcycle.tautring import (
    ModuliSpec,
    TautClass,
    boundary_gen,
    delta_total,
    kappa,
    kappa1_expand,
    lam,
    multiply,
    psi,
    psi_total,
)

F = Fraction

M4 = ModuliSpec(4, ())


def expected_c1(space):
    return 2 * delta_total(space) - 13 * lam(space) - psi_total(space)


class TestLogCotangent:
    def test_kappa_coefficient_m1(self):
        c = ch_log_cotangent(M4, 1)
        assert c.coefficient(tr._trivial_gen(M4, kappa_mon=[(1, 1)])) == F(13, 12)

    def test_m2_is_half_kappa2_plus_boundary(self):
        # B_3(1) = 0 kills psi and boundary pieces of the log part
        c = ch_log_cotangent(M4, 2)
        assert c == F(1, 2) * kappa(M4, 2)

    def test_m1_delta_coefficient(self):
        c = ch_log_cotangent(M4, 1)
        boundary = c - F(13, 12) * kappa(M4, 1)
        assert boundary == F(1, 12) * delta_total(M4)

    def test_structure_sheaf_m1_is_delta(self):
        assert ch_structure_sheaves(M4, 1) == delta_total(M4)

    def test_structure_sheaf_m0(self):
        assert ch_structure_sheaves(M4, 0).is_zero()

    def test_structure_sheaf_m2(self):
        c = ch_structure_sheaves(M4, 2)
        genB = boundary_gen(M4, 2, (), exps=(1, 0))
        genA1 = boundary_gen(M4, 1, (), exps=(1, 0))
        genA3 = boundary_gen(M4, 1, (), exps=(0, 1))
        expect = (
            F(1, 2) * TautClass(M4, {genA1: F(1)})
            + F(1, 2) * TautClass(M4, {genA3: F(1)})
            + F(1, 2) * TautClass(M4, {genB: F(1)})  # 1/2 Aut x (1/2+1/2) folds
        )
        assert c == expect


class TestTangentChernClasses:
    @pytest.mark.parametrize(
        "g,n",
        [(1, 1), (2, 0), (2, 1), (3, 1), (3, 2), (4, 0), (5, 0)],
    )
    def test_c1_closed_form_ct(self, g, n):
        space = ModuliSpec(g, tuple(f"m{i}" for i in range(n)))
        assert c1_tangent(space) == expected_c1(space)

    def test_c1_full_grid(self):
        # the closed form holds across every stable (g, n) with g <= 5,
        # n <= 2, not only at the quoted pairs
        for g in range(1, 6):
            for n in range(0, 3):
                if 2 * g - 2 + n <= 0:
                    continue
                space = ModuliSpec(g, tuple(f"m{i}" for i in range(n)))
                assert c1_tangent(space) == expected_c1(space), (g, n)

    def test_c1_two_routes_agree(self):
        # negated (log minus structure sheaves) at m=1, kappa_1 expanded
        space = ModuliSpec(3, ("p",))
        route1 = c1_tangent(space)
        route2 = kappa1_expand(
            -1 * (ch_log_cotangent(space, 1) - ch_structure_sheaves(space, 1))
        )
        assert route1 == route2

    def test_c2_genus4_closed_form(self):
        cs = chern_tangent_moduli(M4, 2)
        c2 = cs[1]
        d = 13 * lam(M4) - 2 * delta_total(M4)
        genA = boundary_gen(M4, 1, (), exps=(1, 0))
        genA2 = boundary_gen(M4, 1, (), exps=(0, 1))
        genB = boundary_gen(M4, 2, (), exps=(1, 0))
        expect = (
            F(-1, 2) * kappa(M4, 2)
            + F(1, 2) * multiply(d, d)
            + F(1, 2) * (TautClass(M4, {genA: F(1)}) + TautClass(M4, {genA2: F(1)}))
            + F(1, 2) * TautClass(M4, {genB: F(1)})  # 1/4 x (psi x 1 + 1 x psi) folds
        )
        assert c2 == expect

    def test_c2_kappa2_coefficient(self):
        c2 = chern_tangent_moduli(M4, 2)[1]
        coeff = c2.coefficient(tr._trivial_gen(M4, kappa_mon=[(2, 1)]))
        assert coeff == F(-1, 2)
        assert coeff != F(-1, 3)

    def test_ch2_interior(self):
        space = ModuliSpec(5, ())
        assert ch_tangent(space, 2).interior() == F(1, 2) * kappa(space, 2)

    def test_ch3_interior(self):
        space = ModuliSpec(5, ())
        assert ch_tangent(space, 3).interior() == F(-119, 720) * kappa(space, 3)


class TestAbelianSide:
    def test_ch1(self):
        for g in range(2, 7):
            assert ch_tangent_Ag(g, 1) == F(-(g + 1)) * HodgeExpression.lam(g, 1)

    def test_ch2_raw(self):
        g = 5
        raw = ch_tangent_Ag(g, 2)
        expect = HodgeExpression.from_dict(
            g, {(1, 1): F(g + 3, 2), (2,): F(-(g + 2))}
        )
        assert raw == expect

    def test_ch2_reduced(self):
        for g in range(2, 7):
            assert ch_tangent_Ag(g, 2, reduced=True) == HodgeExpression.lam(g, 2)

    def test_ch3_raw_genus5(self):
        raw = ch_tangent_Ag(5, 3)
        expect = HodgeExpression.from_dict(
            5,
            {(1, 1, 1): F(-12, 6), (1, 2): F(33, 6), (3,): F(-27, 6)},
        )
        assert raw == expect

    def test_reduction_lies_in_even_power_sum_ideal(self):
        # raw - reduced must vanish after reduction, and reduced forms of
        # even characters carry no pure lambda_1 power
        for g in range(2, 7):
            for m in range(1, 5):
                raw = ch_tangent_Ag(g, m)
                red = ch_tangent_Ag(g, m, reduced=True)
                assert (raw - red).reduce().is_zero()
                if m % 2 == 0:
                    assert red.coefficient((1,) * m) == 0

    def test_squarefree_normal_form(self):
        g = 6
        sq = HodgeExpression.from_dict(g, {(2, 2): F(1)})
        red = sq.reduce()
        assert red == HodgeExpression.from_dict(g, {(1, 3): F(2), (4,): F(-2)})

    def test_reduce_idempotent(self):
        g = 5
        e = ch_tangent_Ag(g, 4)
        assert e.reduce() == e.reduce().reduce()


class TestToroidal:
    def test_value(self):
        c = c1_log_cotangent_Abar4()
        assert (c.lambda1, c.boundary) == (F(5), F(-1))

    def test_pullback(self):
        space = ModuliSpec(4, (), "stable")
        pulled = c1_log_cotangent_Abar4().pullback_to_curves(space)
        from torcycle.tautring import delta_irr

        assert pulled == 5 * lam(space) - delta_irr(space)

    def test_tangent_negation(self):
        c = -c1_log_cotangent_Abar4()
        assert (c.lambda1, c.boundary) == (F(-5), F(1))
