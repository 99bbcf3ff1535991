import math

import numpy as np
import pytest

from torcycle import period as P
from torcycle.period import (
    BASE_CURVE_1,
    BASE_CURVE_2,
    EllipseContour,
    HyperellipticCurve,
    PathClearanceError,
    PeriodConfig,
    cauchy_kernel_coeffs,
    compute_D,
    compute_G,
    contour_integrate,
    normalized_basis,
    period_matrix,
    rho4,
    standard_contours,
    y_on_path,
)


class TestCurve:
    def test_y_squared_at_base(self):
        # (-1)(-2)(-3)(-4)(-5)(-6) = 720, upper branch positive
        y0 = BASE_CURVE_1.y_upper(0.0)
        assert abs(y0 * y0 - 720) < 1e-9
        assert y0.real > 0

    def test_second_curve(self):
        y0 = BASE_CURVE_2.y_upper(0.0)
        assert abs(y0 * y0 - 840) < 1e-9

    def test_bad_roots(self):
        with pytest.raises(ValueError):
            HyperellipticCurve((1, 1, 2, 3, 4, 5))

    def test_taylor_consistency(self):
        y0, y1, y2 = BASE_CURVE_1.y_taylor0()
        h = 1e-5
        num = (BASE_CURVE_1.y_upper(h) - BASE_CURVE_1.y_upper(-h)) / (2 * h)
        assert abs(num - y1) < 1e-5


class TestSheetTracking:
    def test_monodromy_one_root(self):
        loop = EllipseContour(0.5, 1.5, 0.2, +1, "one-root")
        ys = y_on_path(BASE_CURVE_1, loop, 128)
        # continuation around a single branch point negates Y
        assert abs(ys[0][1] + ys[-1][1]) < 0.1 * abs(ys[0][1])

    def test_monodromy_two_roots(self):
        loop = EllipseContour(0.5, 2.5, 0.4, +1, "two-root")
        ys = y_on_path(BASE_CURVE_1, loop, 128)
        assert abs(ys[0][1] - ys[-1][1]) < 0.1 * abs(ys[0][1])

    def test_clearance(self):
        with pytest.raises(PathClearanceError):
            EllipseContour(1.0 + 1e-9, 2.5, 0.3).check(BASE_CURVE_1)


class TestQuadrature:
    def test_residue_theorem(self):
        # dz/z around the unit-ish circle: 2 pi i (counterclockwise)
        circle = EllipseContour(-0.3, 0.3, 0.3, +1, "unit")
        curve = HyperellipticCurve((5, 6, 7, 8, 9, 10))  # far away
        val, err = contour_integrate(lambda z, y: 1.0 / z, curve, circle, 1e-12)
        assert abs(val - 2j * math.pi) < 1e-12
        assert err < 1e-10

    def test_exact_differential(self):
        circle = EllipseContour(-0.3, 0.3, 0.3, +1, "unit")
        curve = HyperellipticCurve((5, 6, 7, 8, 9, 10))
        val, _ = contour_integrate(lambda z, y: z, curve, circle, 1e-12)
        assert abs(val) < 1e-12

    def test_cross_rule_agreement(self):
        fn = lambda z, y: 1.0 / y
        contours = standard_contours(BASE_CURVE_1)
        for name in ("A1", "A2", "B1", "B2"):
            v1, _ = P._cycle_integral(BASE_CURVE_1, contours, name, fn, 1e-10)
            v2, _ = P.SEGMENT_RULES[name](BASE_CURVE_1, fn)
            assert abs(v1 - v2) <= 1e-8 * max(1.0, abs(v1)), name


class TestPeriodMatrix:
    @pytest.mark.parametrize("curve", [BASE_CURVE_1, BASE_CURVE_2])
    def test_riemann_relations(self, curve):
        tau, _ = period_matrix(curve)
        assert abs(tau[0][1] - tau[1][0]) < 1e-8
        im = np.array([[tau[i][j].imag for j in range(2)] for i in range(2)])
        eig = np.linalg.eigvalsh(im)
        assert eig[0] > 0 and eig[1] > 0

    def test_contour_deformation_independence(self):
        tau1, _ = period_matrix(BASE_CURVE_1)
        # perturb the contour heights by 20 percent
        base = standard_contours(BASE_CURVE_1)
        fat = {
            k: EllipseContour(c.left, c.right, 1.2 * c.height, c.upper_sign, k)
            for k, c in base.items()
        }
        nb = normalized_basis(BASE_CURVE_1)
        tau2 = [[0j, 0j], [0j, 0j]]
        for i, name in enumerate(("B1", "B2")):
            for j, (al, be) in enumerate(((nb.a, nb.b), (nb.c, nb.d))):
                fn = (lambda A, B: (lambda z, y: (A + B * z) / y))(al, be)
                tau2[i][j], _ = P._cycle_integral(BASE_CURVE_1, fat, name, fn, 1e-10)
        diff = max(
            abs(tau1[i][j] - tau2[i][j]) for i in range(2) for j in range(2)
        )
        assert diff < 1e-6


class TestNormalizedBasis:
    @pytest.mark.parametrize("curve", [BASE_CURVE_1, BASE_CURVE_2])
    def test_duality_residual(self, curve):
        nb = normalized_basis(curve)
        assert nb.residual < 1e-8

    def test_invertible(self):
        nb = normalized_basis(BASE_CURVE_1)
        assert abs(nb.det()) > 1e-6

    def test_contour_stability(self):
        nb1 = normalized_basis(BASE_CURVE_1)
        # independent route: A-periods via segment quadrature
        fn0 = lambda z, y: 1.0 / y
        fn1 = lambda z, y: z / y
        M = [[0j, 0j], [0j, 0j]]
        for i, rule in enumerate((P.a1_period_segments, P.a2_period_segments)):
            M[i][0], _ = rule(BASE_CURVE_1, fn0)
            M[i][1], _ = rule(BASE_CURVE_1, fn1)
        a, b = P._solve2(M, (1.0, 0.0))
        c, d = P._solve2(M, (0.0, 1.0))
        for x, y in ((a, nb1.a), (b, nb1.b), (c, nb1.c), (d, nb1.d)):
            assert abs(x - y) < 1e-6 * max(1.0, abs(y))


class TestKernel:
    def test_normalization_residual(self):
        kc = cauchy_kernel_coeffs(BASE_CURVE_1)
        assert kc.residual < 1e-8

    def test_taylor_vs_circle(self):
        exact = cauchy_kernel_coeffs(BASE_CURVE_1, eps=None)
        circ = cauchy_kernel_coeffs(BASE_CURVE_1, eps=0.05)
        for a, b in zip(exact.alpha, circ.alpha):
            assert abs(a - b) < 1e-9
        assert abs(exact.h[2] - circ.h[2]) < 1e-8
        assert abs(exact.k[2] - circ.k[2]) < 1e-8

    def test_radius_independence(self):
        c1 = cauchy_kernel_coeffs(BASE_CURVE_1, eps=0.05)
        c2 = cauchy_kernel_coeffs(BASE_CURVE_1, eps=0.1)
        assert abs(c1.h[2] - c2.h[2]) < 1e-6 * max(1.0, abs(c1.h[2]))
        assert abs(c1.k[2] - c2.k[2]) < 1e-6 * max(1.0, abs(c1.k[2]))


class TestG:
    def test_inner_residue_vs_circle(self):
        # at fixed outer points the inner integral of the kernel against
        # z1^(-3) over a small circle must match 2 pi i times the series
        # coefficient that the residue route uses
        import cmath
        import math

        curve = BASE_CURVE_1
        kc = cauchy_kernel_coeffs(curve)
        fn = P.g_integrand(kc)
        eps = 0.05
        n = 600
        contour = standard_contours(curve)["B1"]
        for t in (0.1, 0.3, 0.6, 0.85):
            z = contour.point(t)
            y = contour.sheet_sign(curve, t) * curve.y_upper(z)
            total = 0j
            for k in range(n):
                s = (k + 0.5) / n
                z1 = eps * cmath.exp(2j * math.pi * s)
                y1 = curve.y_upper(z1)
                kernel = (
                    (y1 + y) / (2 * (z - z1) * y)
                    + (kc.h[0] + kc.h[1] * z1 + kc.h[2] * z1 * z1) / y
                    + (kc.k[0] + kc.k[1] * z1 + kc.k[2] * z1 * z1) * z / y
                )
                total += kernel / z1**3 * (2j * math.pi * z1) / n
            residue_route = 2j * math.pi * (fn(z, y) + 1 / (2 * z**3))
            assert abs(total - residue_route) < 1e-8 * max(1.0, abs(total))

    def test_rule_agreement(self):
        for i in (1, 2):
            gc, _ = compute_G(BASE_CURVE_1, i, rule="contour")
            gs, _ = compute_G(BASE_CURVE_1, i, rule="segments")
            assert abs(gc - gs) < 1e-8 * max(1.0, abs(gc))

    def test_eps_independence(self):
        for i in (1, 2):
            g1, _ = compute_G(BASE_CURVE_1, i, eps=0.05)
            g2, _ = compute_G(BASE_CURVE_1, i, eps=0.1)
            assert abs(g1 - g2) < 1e-6 * max(1.0, abs(g1))


class TestD:
    def test_values_finite_nonzero(self):
        (d1, d2), nb = compute_D(BASE_CURVE_2)
        assert abs(d1) > 1e-6 and abs(d2) > 1e-6

    def test_zero_locus_formula(self):
        (d1, _), nb = compute_D(BASE_CURVE_2)
        y0, y1, _ = BASE_CURVE_2.y_taylor0()
        assert abs(d1 * y0 - (nb.a * y1 - nb.b)) < 1e-9

    def test_sheet_covariance(self):
        # normalizing the basis against the opposite branch negates
        # (a, b, c, d) and hence both constants
        (d1, d2), _ = compute_D(BASE_CURVE_2, sheet=+1)
        (f1, f2), _ = compute_D(BASE_CURVE_2, sheet=-1)
        assert abs(f1 + d1) < 1e-9
        assert abs(f2 + d2) < 1e-9


class TestRho4:
    def test_certificate(self):
        cert = rho4()
        assert cert.passed
        assert abs(cert.value) > 10 * cert.quadrature_error

    def test_resolution_ladder(self):
        c1 = rho4(PeriodConfig(tol=1e-8))
        c2 = rho4(PeriodConfig(tol=1e-11))
        assert abs(c1.value - c2.value) < 1e-6 * abs(c2.value)

    def test_eps_independence(self):
        c1 = rho4(PeriodConfig(eps=0.05))
        c2 = rho4(PeriodConfig(eps=0.1))
        assert abs(c1.value - c2.value) < 1e-6 * abs(c1.value)

    def test_table_complete(self):
        cert = rho4()
        keys = {k for k, _ in cert.table}
        assert {"a", "b", "c", "d", "h2", "k2", "G1", "G2", "D1", "D2"} <= keys

    def test_deterministic(self):
        c1 = rho4()
        c2 = rho4()
        assert c1.value == c2.value and c1.quadrature_error == c2.quadrature_error
