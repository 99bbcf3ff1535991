"""Numerical period integrals on genus-2 hyperelliptic curves and the
nonvanishing certificate for the second-order period expansion coefficient.

Geometry.  A curve Y^2 = prod (x - r_i) with six real increasing branch
points carries branch cuts [r0,r1], [r2,r3], [r4,r5] (where the sextic is
negative).  The homology basis:

* A1, A2: clockwise loops around the first and second cut;
* B1: a closed contour crossing the real axis inside cut 1 and inside cut
  3 (upper arc on the upper branch, return arc on the other branch);
* B2: the same between cut 2 and cut 3.

With these crossings B1 meets only A1 and B2 only A2, so the basis is
symplectic; the computed period matrix is symmetric with positive definite
imaginary part, which the tests assert rather than assume.

Branch tracking.  The reference value Yref(z) = prod principal-sqrt(z-r_i)
is continuous on each open half plane; analytic continuation along a path
only changes sign when the path crosses the real axis at a point with an
odd number of branch points to its right (exactly the cut criterion for
real branch points).  Contours are ellipses crossing the axis at two known
points, so the sheet bookkeeping is exact, not heuristic.  The "upper
branch" is fixed by Y(0) = +sqrt(f(0)) continued along paths in the closed
upper half plane, giving Y_up(z) = -Yref(z) there.

Quadrature.  Two independent deterministic rules: the midpoint-trapezoid
rule on closed contours (spectrally accurate for analytic integrands) and
composite Gauss-Legendre on branch-point segments after the substitution
x = m - h cos(theta), which removes the inverse square-root endpoint
singularities.  Segment decompositions of the cycle integrals:

    A1(cw):  integral = +2 int_{r0}^{r1} g/Y_up dx   (odd integrands)
    B1(ccw): integral = -2 [int over the f>0 gaps between the crossings]

Error estimates come from node doubling; everything is bitwise
deterministic for fixed configuration.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np


class QuadratureError(RuntimeError):
    """Adaptive refinement failed to reach the tolerance."""


class PathClearanceError(ValueError):
    """A path runs too close to a branch point."""


#: minimum allowed distance between any path point and a branch point
BRANCH_CLEARANCE = 1e-3


# --------------------------------------------------------------------------
# curve and sheet bookkeeping


@dataclass(frozen=True)
class HyperellipticCurve:
    """Six real increasing branch points; cuts pair them consecutively."""

    roots: tuple[float, ...]

    def __post_init__(self):
        if len(self.roots) != 6:
            raise ValueError("exactly six branch points")
        rs = tuple(float(r) for r in self.roots)
        object.__setattr__(self, "roots", rs)
        if any(rs[i] >= rs[i + 1] for i in range(5)):
            raise ValueError("branch points must be strictly increasing")

    @property
    def cuts(self) -> tuple[tuple[float, float], ...]:
        r = self.roots
        return ((r[0], r[1]), (r[2], r[3]), (r[4], r[5]))

    def f(self, z: complex) -> complex:
        out = 1.0 + 0.0j
        for r in self.roots:
            out *= z - r
        return out

    def f_prime(self, z: complex) -> complex:
        out = 0.0 + 0.0j
        for i in range(6):
            term = 1.0 + 0.0j
            for j, r in enumerate(self.roots):
                if j != i:
                    term *= z - r
            out += term
        return out

    def f_second(self, z: complex) -> complex:
        out = 0.0 + 0.0j
        for i in range(6):
            for j in range(6):
                if j == i:
                    continue
                term = 1.0 + 0.0j
                for k, r in enumerate(self.roots):
                    if k != i and k != j:
                        term *= z - r
                out += term
        return out

    def y_ref(self, z: complex) -> complex:
        """Product of principal square roots; continuous off the real axis."""
        out = 1.0 + 0.0j
        for r in self.roots:
            out *= cmath.sqrt(z - r)
        return out

    def y_upper(self, z: complex) -> complex:
        """The upper branch: +sqrt(f(0)) at the base point, continued
        through the closed upper half plane."""
        return -self.y_ref(z)

    def in_cut(self, x: float) -> bool:
        return any(a < x < b for (a, b) in self.cuts)

    def axis_flip(self, x: float) -> bool:
        """Does Yref jump when a path crosses the real axis at x?  True iff
        an odd number of branch points lies to the right."""
        if any(abs(x - r) < BRANCH_CLEARANCE for r in self.roots):
            raise PathClearanceError(f"crossing {x} too close to a branch point")
        return sum(1 for r in self.roots if r > x) % 2 == 1

    def y_taylor0(self) -> tuple[complex, complex, complex]:
        """Taylor coefficients (Y(0), Y'(0), Y''(0)/2) of the upper branch
        at the base point z = 0."""
        y0 = self.y_upper(0.0)
        f1 = self.f_prime(0.0)
        f2 = self.f_second(0.0)
        y1 = f1 / (2 * y0)
        y2 = (f2 - 2 * y1 * y1) / (2 * y0)
        return y0, y1, y2 / 2


#: The two base curves: the second differs only in its last branch point.
BASE_CURVE_1 = HyperellipticCurve((1, 2, 3, 4, 5, 6))
BASE_CURVE_2 = HyperellipticCurve((1, 2, 3, 4, 5, 7))


@dataclass(frozen=True)
class EllipseContour:
    """Closed contour crossing the real axis exactly at x = left and
    x = right, traversed counterclockwise starting at the right crossing.
    ``upper_sign`` is the sheet sign on the upper arc (the value of Y there
    is upper_sign * Y_up)."""

    left: float
    right: float
    height: float
    upper_sign: int = +1
    label: str = ""

    @property
    def center(self) -> float:
        return (self.left + self.right) / 2

    @property
    def halfwidth(self) -> float:
        return (self.right - self.left) / 2

    def point(self, t: float) -> complex:
        ang = 2 * math.pi * t
        return complex(
            self.center + self.halfwidth * math.cos(ang),
            self.height * math.sin(ang),
        )

    def derivative(self, t: float) -> complex:
        ang = 2 * math.pi * t
        return 2 * math.pi * complex(
            -self.halfwidth * math.sin(ang), self.height * math.cos(ang)
        )

    def sheet_sign(self, curve: HyperellipticCurve, t: float) -> int:
        """Sign s(t) with Y(t) = s(t) * Y_up(z(t)): constant on each half
        arc, flipping at crossings where Yref jumps."""
        t = t % 1.0
        if t < 0.5:
            return self.upper_sign
        flip = -1 if curve.axis_flip(self.left) else 1
        return self.upper_sign * flip

    def check(self, curve: HyperellipticCurve) -> None:
        # closure: the two crossings must flip consistently
        fl = curve.axis_flip(self.left)
        fr = curve.axis_flip(self.right)
        if fl != fr:
            raise ValueError(f"contour {self.label}: inconsistent sheet closure")
        for t in np.linspace(0, 1, 720, endpoint=False):
            z = self.point(float(t))
            if min(abs(z - r) for r in curve.roots) < BRANCH_CLEARANCE:
                raise PathClearanceError(
                    f"contour {self.label} within clearance of a branch point"
                )


def standard_contours(curve: HyperellipticCurve) -> dict[str, EllipseContour]:
    """A1, A2 around cuts 1, 2 (crossings in the f > 0 gaps); B1 through
    cuts 1 and 3; B2 through cuts 2 and 3."""
    r = curve.roots
    left_out = r[0] - (r[1] - r[0]) / 2
    m12 = (r[1] + r[2]) / 2
    m34 = (r[3] + r[4]) / 2
    c1 = (r[0] + r[1]) / 2
    c2 = (r[2] + r[3]) / 2
    c3 = (r[4] + r[5]) / 2
    contours = {
        "A1": EllipseContour(left_out, m12, 0.55 * (m12 - left_out) / 2, +1, "A1"),
        "A2": EllipseContour(m12, m34, 0.55 * (m34 - m12) / 2, +1, "A2"),
        "B1": EllipseContour(c1, c3, 0.40 * (c3 - c1) / 2, +1, "B1"),
        "B2": EllipseContour(c2, c3, 0.55 * (c3 - c2) / 2, +1, "B2"),
    }
    for c in contours.values():
        c.check(curve)
    return contours


# --------------------------------------------------------------------------
# quadrature engines


def y_on_path(
    curve: HyperellipticCurve, contour: EllipseContour, samples: int = 256
) -> list[tuple[complex, complex]]:
    """Branch-consistent samples (z, Y) along the contour."""
    out = []
    for k in range(samples):
        t = (k + 0.5) / samples
        z = contour.point(t)
        out.append((z, contour.sheet_sign(curve, t) * curve.y_upper(z)))
    return out


def contour_integrate(fn, curve, contour, tol=1e-10, n0=64, nmax=65536):
    """Midpoint-trapezoid integral of fn(z, Y) dz over the closed contour,
    doubling nodes until two refinements agree within tol (relative)."""

    def level(n):
        total = 0j
        for k in range(n):
            t = (k + 0.5) / n
            z = contour.point(t)
            y = contour.sheet_sign(curve, t) * curve.y_upper(z)
            total += fn(z, y) * contour.derivative(t)
        return total / n

    prev = level(n0)
    n = 2 * n0
    while n <= nmax:
        cur = level(n)
        err = abs(cur - prev)
        scale = max(abs(cur), 1.0)
        if err <= tol * scale:
            return cur, err
        prev = cur
        n *= 2
    raise QuadratureError(f"contour {contour.label}: no convergence at {nmax} nodes")


def gauss_segment(fn, curve, a, b, n):
    """Gauss-Legendre integral of fn(x, Y_up(x)) dx over the root-to-root
    segment [a, b] after x = m - h cos(theta)."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    m = (a + b) / 2
    h = (b - a) / 2
    total = 0j
    for u, w in zip(nodes, weights):
        theta = (u + 1) * math.pi / 2
        x = m - h * math.cos(theta)
        dx = h * math.sin(theta) * math.pi / 2
        total += fn(x, curve.y_upper(x)) * dx * w
    return total


def segment_integrate(fn, curve, a, b, tol=1e-10, n0=48, nmax=3072):
    prev = gauss_segment(fn, curve, a, b, n0)
    n = 2 * n0
    while n <= nmax:
        cur = gauss_segment(fn, curve, a, b, n)
        err = abs(cur - prev)
        if err <= tol * max(abs(cur), 1.0):
            return cur, err
        prev = cur
        n *= 2
    raise QuadratureError(f"segment [{a},{b}]: no convergence at {nmax} nodes")


# --------------------------------------------------------------------------
# periods and the normalized basis


def _cycle_integral(curve, contours, name, fn, tol):
    """All cycles are traversed clockwise (the ellipses are parameterized
    counterclockwise, hence the global sign): the A-loops run clockwise
    around their cuts and the upper arcs of the B-contours run from the
    lower cut to cut 3.  This orientation renders tau symmetric with
    positive definite imaginary part."""
    val, err = contour_integrate(fn, curve, contours[name], tol)
    return -val, err


def a_period_matrix(curve, tol=1e-10):
    """M[i][j] = integral over A_i of z^j dz/Y for j = 0, 1."""
    contours = standard_contours(curve)
    M = [[0j, 0j], [0j, 0j]]
    E = [[0.0, 0.0], [0.0, 0.0]]
    for i, name in enumerate(("A1", "A2")):
        for j in range(2):
            fn = (lambda p: (lambda z, y: z**p / y))(j)
            M[i][j], E[i][j] = _cycle_integral(curve, contours, name, fn, tol)
    return M, E


def _solve2(M, rhs):
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    if abs(det) < 1e-14:
        raise ZeroDivisionError("singular A-period matrix")
    x0 = (rhs[0] * M[1][1] - rhs[1] * M[0][1]) / det
    x1 = (M[0][0] * rhs[1] - M[1][0] * rhs[0]) / det
    return x0, x1


@dataclass(frozen=True)
class NormalizedBasis:
    """v1 = (a + b z) dz/Y, v2 = (c + d z) dz/Y with A-period duality."""

    a: complex
    b: complex
    c: complex
    d: complex
    residual: float

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c


def normalized_basis(curve: HyperellipticCurve, tol=1e-10) -> NormalizedBasis:
    M, E = a_period_matrix(curve, tol)
    a, b = _solve2(M, (1.0, 0.0))
    c, d = _solve2(M, (0.0, 1.0))
    # duality residual, re-evaluated
    res = 0.0
    for i in range(2):
        for (al, be, target) in ((a, b, 1.0 if i == 0 else 0.0),
                                 (c, d, 1.0 if i == 1 else 0.0)):
            val = al * M[i][0] + be * M[i][1]
            res = max(res, abs(val - target))
    basis = NormalizedBasis(a, b, c, d, res)
    if abs(basis.det()) < 1e-12:
        raise ZeroDivisionError("degenerate normalized basis")
    return basis


def period_matrix(curve: HyperellipticCurve, tol=1e-10):
    """tau[i][j] = integral over B_i of v_j, A-normalized."""
    nb = normalized_basis(curve, tol)
    contours = standard_contours(curve)
    tau = [[0j, 0j], [0j, 0j]]
    err = 0.0
    for i, name in enumerate(("B1", "B2")):
        for j, (al, be) in enumerate(((nb.a, nb.b), (nb.c, nb.d))):
            fn = (lambda A, B: (lambda z, y: (A + B * z) / y))(al, be)
            v, e = _cycle_integral(curve, contours, name, fn, tol)
            tau[i][j] = v
            err = max(err, e)
    return tau, err


# segment decompositions (the independent quadrature route) -----------------


def a1_period_segments(curve, fn, tol=1e-10):
    """Clockwise A1 period of an odd integrand via 2 int_{r0}^{r1}."""
    r = curve.roots
    val, err = segment_integrate(fn, curve, r[0], r[1], tol)
    return 2 * val, 2 * err


def a2_period_segments(curve, fn, tol=1e-10):
    r = curve.roots
    val, err = segment_integrate(fn, curve, r[2], r[3], tol)
    return 2 * val, 2 * err


def b1_period_segments(curve, fn, tol=1e-10):
    """Clockwise B1 period of an odd integrand: twice the sum over the
    f > 0 gap segments between the axis crossings (the cut portions cancel
    between the two arcs, the gaps double)."""
    r = curve.roots
    v1, e1 = segment_integrate(fn, curve, r[1], r[2], tol)
    v2, e2 = segment_integrate(fn, curve, r[3], r[4], tol)
    return 2 * (v1 + v2), 2 * (e1 + e2)


def b2_period_segments(curve, fn, tol=1e-10):
    r = curve.roots
    v, e = segment_integrate(fn, curve, r[3], r[4], tol)
    return 2 * v, 2 * e


SEGMENT_RULES = {
    "A1": a1_period_segments,
    "A2": a2_period_segments,
    "B1": b1_period_segments,
    "B2": b2_period_segments,
}


# --------------------------------------------------------------------------
# Cauchy kernel coefficients and the double integrals


@dataclass(frozen=True)
class KernelCoefficients:
    """z1-Taylor data of the A-normalized kernel at the base point: h and k
    coefficient pairs per order, plus the Y-Taylor coefficients used."""

    h: tuple[complex, ...]
    k: tuple[complex, ...]
    alpha: tuple[complex, complex, complex]
    residual: float


def y_taylor_by_circle(curve, eps, n=512):
    """Taylor coefficients of the upper branch at 0 from the eps-circle
    (trapezoid; the circle crosses the axis outside every cut, so the sheet
    is constant on it)."""
    if any(abs(r) <= 2 * eps for r in curve.roots):
        raise PathClearanceError("eps-circle too close to a branch point")
    coeffs = []
    for order in range(3):
        total = 0j
        for k in range(n):
            t = (k + 0.5) / n
            z = eps * cmath.exp(2j * math.pi * t)
            total += curve.y_upper(z) / z ** (order + 1) * (
                2j * math.pi * z
            )
        val = total / n / (2j * math.pi)
        coeffs.append(val)
    return tuple(coeffs)


def cauchy_kernel_coeffs(
    curve: HyperellipticCurve, tol=1e-10, eps: float | None = None
) -> KernelCoefficients:
    """Solve the A-normalization of the kernel order by order in the second
    argument around 0.

    The kernel is (y1 + y) dz / (2 (z - z1) y) + h(z1) dz/y + k(z1) z dz/y;
    the pure 1/(2 (z - z1)) part has zero A-periods (the contours do not
    enclose the base point), so each order is a 2x2 solve against the
    A-period matrix with right side from the expanded y1/(2(z-z1)) term.
    """
    alpha = (
        y_taylor_by_circle(curve, eps) if eps is not None else curve.y_taylor0()
    )
    M, _ = a_period_matrix(curve, tol)
    contours = standard_contours(curve)
    # inverse power A-periods: P[i][k] = integral over A_i of z^-k dz/Y
    P = [[0j] * 4, [0j] * 4]
    for i, name in enumerate(("A1", "A2")):
        for k in range(1, 4):
            fn = (lambda p: (lambda z, y: 1.0 / (z**p * y)))(k)
            P[i][k], _ = _cycle_integral(curve, contours, name, fn, tol)
    hs = []
    ks = []
    residual = 0.0
    for order in range(3):
        rhs = []
        for i in range(2):
            acc = 0j
            for j in range(order + 1):
                acc += alpha[j] * P[i][order + 1 - j]
            rhs.append(-acc / 2)
        h, k = _solve2(M, rhs)
        hs.append(h)
        ks.append(k)
        for i in range(2):
            residual = max(residual, abs(h * M[i][0] + k * M[i][1] - rhs[i]))
    return KernelCoefficients(tuple(hs), tuple(ks), alpha, residual)


def g_integrand(kc: KernelCoefficients):
    """Outer integrand of the double integral after the inner residue: the
    z1^2 coefficient of the kernel, odd part (the even 1/(2 z^3) dz piece
    integrates to zero over cycles that do not enclose the base point)."""
    a0, a1, a2 = kc.alpha
    h2, k2 = kc.h[2], kc.k[2]

    def fn(z, y):
        return (a2 / z + a1 / z**2 + a0 / z**3) / (2 * y) + (h2 + k2 * z) / y

    return fn


def compute_G(
    curve: HyperellipticCurve,
    i: int,
    eps: float = 0.05,
    tol: float = 1e-10,
    rule: str = "contour",
    kc: KernelCoefficients | None = None,
):
    """G_i: the B_i integral of 2 pi i times the z1^2 coefficient of the
    kernel.  ``rule`` picks the quadrature route."""
    if i not in (1, 2):
        raise ValueError("cycle index is 1 or 2")
    if kc is None:
        kc = cauchy_kernel_coeffs(curve, tol, eps)
    fn = g_integrand(kc)
    name = f"B{i}"
    if rule == "contour":
        contours = standard_contours(curve)
        val, err = _cycle_integral(curve, contours, name, fn, tol)
    elif rule == "segments":
        val, err = SEGMENT_RULES[name](curve, fn, tol)
    else:
        raise ValueError(f"unknown rule {rule!r}")
    tau_factor = 2j * math.pi
    return tau_factor * val, abs(tau_factor) * err


def compute_D(curve2: HyperellipticCurve, tol=1e-10, sheet: int = +1):
    """The two constants from the second-order term of the glued
    differentials: (a Y'(0) - b)/Y(0) and (c Y'(0) - d)/Y(0) with the
    normalized-basis constants of the second curve and its upper branch.

    ``sheet`` = -1 normalizes the basis against the opposite branch while
    keeping the node coordinate fixed; the constants then flip sign."""
    nb = normalized_basis(curve2, tol)
    if sheet == -1:
        nb = NormalizedBasis(-nb.a, -nb.b, -nb.c, -nb.d, nb.residual)
    y0, y1, _ = curve2.y_taylor0()
    if abs(y0) < 1e-12:
        raise ZeroDivisionError("Y(0) below the numerical floor")
    d1 = (nb.a * y1 - nb.b) / y0
    d2 = (nb.c * y1 - nb.d) / y0
    return (d1, d2), nb


# --------------------------------------------------------------------------
# the certificate


@dataclass(frozen=True)
class PeriodConfig:
    eps: float = 0.05
    tol: float = 1e-10
    margin: float = 10.0
    curve1: HyperellipticCurve = BASE_CURVE_1
    curve2: HyperellipticCurve = BASE_CURVE_2


@dataclass(frozen=True)
class Rho4Certificate:
    value: complex
    quadrature_error: float
    margin: float
    table: tuple[tuple[str, complex], ...] = field(default=())

    @property
    def passed(self) -> bool:
        return abs(self.value) > self.margin * self.quadrature_error

    def table_dict(self):
        return dict(self.table)


def rho4(config: PeriodConfig = PeriodConfig()) -> Rho4Certificate:
    """The combination  -(c1 G1 - a1 G2)(c2 D1 - a2 D2)  whose
    nonvanishing certifies the nonreduced structure: a..d from the first
    curve normalize the kernel side, the primed constants from the second
    curve feed the D quotients."""
    c1curve, c2curve = config.curve1, config.curve2
    tol = config.tol

    nb1 = normalized_basis(c1curve, tol)
    kc = cauchy_kernel_coeffs(c1curve, tol, config.eps)
    G1, e1 = compute_G(c1curve, 1, config.eps, tol, "contour", kc)
    G2, e2 = compute_G(c1curve, 2, config.eps, tol, "contour", kc)
    (D1, D2), nb2 = compute_D(c2curve, tol)

    left = nb1.c * G1 - nb1.a * G2
    right = nb2.c * D1 - nb2.a * D2
    value = -left * right

    e_left = abs(nb1.c) * e1 + abs(nb1.a) * e2 + abs(left) * nb1.residual
    e_right = abs(right) * (nb2.residual + kc.residual + 1e-15)
    err = abs(right) * e_left + abs(left) * e_right + 1e-15

    table = (
        ("a", nb1.a), ("b", nb1.b), ("c", nb1.c), ("d", nb1.d),
        ("a'", nb2.a), ("b'", nb2.b), ("c'", nb2.c), ("d'", nb2.d),
        ("h2", kc.h[2]), ("k2", kc.k[2]),
        ("G1", G1), ("G2", G2), ("D1", D1), ("D2", D2),
    )
    return Rho4Certificate(value, err, config.margin, table)
