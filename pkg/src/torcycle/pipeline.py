"""End-to-end assembly of the headline divisor classes.

* genus 4: the pullback of the Torelli cycle decomposes into the canonical
  top-Chern contributions of the diagonal, (1,3) and (2,2) components plus
  multiplicity-weighted intersection and nonreduced loci; everything
  cancels to 16 lambda_1.
* genus 5: the interior restriction; the normal-bundle Chern characters
  live in the interior ring spanned by lambda and kappa classes, degree 3
  collapses onto kappa_3, and the hyperelliptic locus enters with
  multiplicity -20.
* the rank <= 1 toroidal extension in genus 4: bookkeeping of the
  irreducible boundary contributions gives 16 lambda_1 - 2 delta_irr on the
  curve side.

Every multiplicity is produced by the excess module; the only imported
literal is the hyperelliptic locus class in genus 5 (tagged as such in the
constants table).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from . import chern, ctp, excess
from .algebra import bernoulli_number, chern_from_ch
from .tautring import (
    Gen,
    ModuliSpec,
    ProductClass,
    TautClass,
    boundary_gen,
    delta_irr,
    delta_sep,
    delta_total,
    glue_spaces,
    kappa,
    lam,
    monomial,
    one,
    psi,
    pullback_forgetful,
    pullback_gluing,
    pushforward_forgetful,
    pushforward_gluing,
    zero,
)

M4 = ModuliSpec(4, ())
M4_STABLE = ModuliSpec(4, (), "stable")
M5 = ModuliSpec(5, ())


class PipelineMismatch(AssertionError):
    """A cross-checked intermediate disagreed with its expected value."""


@dataclass(frozen=True)
class LedgerEntry:
    source: str
    description: str
    multiplicity: Fraction
    value: TautClass


@dataclass(frozen=True)
class ContributionLedger:
    entries: tuple[LedgerEntry, ...]

    def total(self) -> TautClass:
        out = None
        for e in self.entries:
            piece = e.multiplicity * e.value
            out = piece if out is None else out + piece
        return out

    def lines(self) -> list[str]:
        out = []
        for e in self.entries:
            body = "; ".join(str(e.value).splitlines())
            out.append(f"{e.source:14s} x{e.multiplicity}  {e.description}: {body}")
        return out


# --------------------------------------------------------------------------
# marking renames and pair-space helpers


def rename_marking(c: TautClass, old: str, new: str) -> TautClass:
    space = ModuliSpec(
        c.space.genus,
        tuple(new if m == old else m for m in c.space.markings),
        c.space.policy,
    )
    terms = {}
    for g, coeff in c.terms.items():
        legs = tuple((new if lab == old else lab, v, e) for (lab, v, e) in g.legs)
        terms[Gen(g.genera, g.edges, tuple(sorted(legs)), g.kappa, g.lam)] = coeff
    return TautClass(space, terms)


def _rename_factor(pc: ProductClass, i: int, old: str, new: str) -> ProductClass:
    return pc.map_factor(i, lambda cls: rename_marking(cls, old, new))


def _push_pair(pc: ProductClass, pushers: dict[int, object]) -> ProductClass:
    """Pushforward several factors of a product class at once.  A term dies
    outright when any pushed factor carries a degree-0 generator (the
    fundamental class pushes to zero), which also keeps unsupported shapes
    in doomed terms from ever being pushed."""
    spaces = list(pc.spaces)
    new_spaces = list(spaces)
    for i, fn in pushers.items():
        new_spaces[i] = fn(zero(spaces[i])).space
    acc: dict = {}
    for gens, coeff in pc.terms.items():
        if any(gens[i].degree() == 0 for i in pushers):
            continue
        pieces = [[(g, Fraction(1))] for g in gens]
        for i, fn in pushers.items():
            cls = fn(TautClass(spaces[i], {gens[i]: Fraction(1)}))
            pieces[i] = list(cls.terms.items())
        import itertools as _it

        for combo in _it.product(*pieces):
            key = tuple(g for g, _ in combo)
            c = coeff
            for _, w in combo:
                c *= w
            acc[key] = acc.get(key, Fraction(0)) + c
    return ProductClass(new_spaces, acc)


# --------------------------------------------------------------------------
# genus 4: the (1,3) component pipeline


def _a_component_contribution() -> TautClass:
    """Push-pull through the (1,3) gluing: the parametrizing product is
    genus-1 with marking p times genus-3 with markings q, y; the first
    projection glues p to q after forgetting y, the second glues p to y
    after forgetting q."""
    graph = boundary_gen(M4, 1, ())
    spaces = glue_spaces(M4, graph)
    slot1 = [m for m in spaces[0].markings if m.startswith("__e")][0]
    slot3 = [m for m in spaces[1].markings if m.startswith("__e")][0]

    F1 = ModuliSpec(1, ("p",))
    F2 = ModuliSpec(3, ("q", "y"))

    def p1_pull(c: TautClass) -> ProductClass:
        pc = pullback_gluing(c, graph)
        pc = _rename_factor(pc, 0, slot1, "p")
        pc = _rename_factor(pc, 1, slot3, "q")
        return pc.map_factor(1, lambda cls: pullback_forgetful(cls, "y"))

    def p2_pull(c: TautClass) -> ProductClass:
        pc = pullback_gluing(c, graph)
        pc = _rename_factor(pc, 0, slot1, "p")
        pc = _rename_factor(pc, 1, slot3, "y")
        return pc.map_factor(1, lambda cls: pullback_forgetful(cls, "q"))

    def p1_push(pc: ProductClass) -> TautClass:
        pc = _push_pair(pc, {1: lambda cls: pushforward_forgetful(cls, "y")})
        pc = _rename_factor(pc, 0, "p", slot1)
        pc = _rename_factor(pc, 1, "q", slot3)
        return pushforward_gluing(M4, graph, pc)

    c1_m4 = chern.c1_tangent(M4)
    pulled_a4 = Fraction(-5) * lam(M4)

    n_class = (
        p1_pull(pulled_a4)
        - p1_pull(c1_m4)
        - p2_pull(c1_m4)
        + ProductClass.from_factors([chern.c1_tangent(F1), one(F2)])
        + ProductClass.from_factors([one(F1), chern.c1_tangent(F2)])
    )
    return p1_push(n_class)


# --------------------------------------------------------------------------
# genus 4: the (2,2) component pipeline


def _b_component_contribution() -> tuple[TautClass, dict[str, TautClass]]:
    """The three-term expansion on the square of the two-pointed genus-2
    product, halved for the symmetric-group quotient."""
    graph = boundary_gen(M4, 2, ())
    spaces = glue_spaces(M4, graph)
    slot_a = [m for m in spaces[0].markings if m.startswith("__e")][0]
    slot_b = [m for m in spaces[1].markings if m.startswith("__e")][0]

    F1 = ModuliSpec(2, ("p", "x"))
    F2 = ModuliSpec(2, ("q", "y"))

    def p2_pull(c: TautClass) -> ProductClass:
        pc = pullback_gluing(c, graph)
        pc = _rename_factor(pc, 0, slot_a, "x")
        pc = _rename_factor(pc, 1, slot_b, "y")
        pc = pc.map_factor(0, lambda cls: pullback_forgetful(cls, "p"))
        return pc.map_factor(1, lambda cls: pullback_forgetful(cls, "q"))

    def p1_push(pc: ProductClass) -> TautClass:
        pc = _push_pair(
            pc,
            {
                0: lambda cls: pushforward_forgetful(cls, "x"),
                1: lambda cls: pushforward_forgetful(cls, "y"),
            },
        )
        pc = _rename_factor(pc, 0, "p", slot_a)
        pc = _rename_factor(pc, 1, "q", slot_b)
        return pushforward_gluing(M4, graph, pc)

    c1_f1 = chern.c1_tangent(F1)
    c1_f2 = chern.c1_tangent(F2)
    c2_f1 = chern.chern_tangent_moduli(F1, 2)[1]
    c2_f2 = chern.chern_tangent_moduli(F2, 2)[1]
    c1_m4 = chern.c1_tangent(M4)

    # term 1: c2 of the product tangent bundle (the per-factor c2 pieces
    # die under the pushforward; the cross term carries everything)
    c2_tx = (
        ProductClass.from_factors([c1_f1, c1_f2])
        + ProductClass.from_factors([c2_f1, one(F2)])
        + ProductClass.from_factors([one(F1), c2_f2])
    )
    term1 = p1_push(c2_tx)

    # term 2: minus the pullback of c2 of the ambient tangent bundle,
    # pulled in the structured form c2 = c1^2/2 - ch2 (pullback is a ring
    # map; the square is taken upstairs in the product ring)
    p2c1 = p2_pull(c1_m4)
    p2ch2 = p2_pull(chern.ch_tangent(M4, 2))
    term2 = -1 * p1_push(Fraction(1, 2) * (p2c1 * p2c1) - p2ch2)

    # term 3: p2^* c1 (p2^* c1 - c1(TX))
    c1_tx = ProductClass.from_factors([c1_f1, one(F2)]) + ProductClass.from_factors(
        [one(F1), c1_f2]
    )
    term3 = p1_push(p2c1 * (p2c1 - c1_tx))

    pieces = {"product_tangent": term1, "ambient_c2": term2, "cross": term3}
    total = Fraction(1, 2) * (term1 + term2 + term3)
    return total, pieces


# --------------------------------------------------------------------------
# genus 4 headline


def t_pullback_g4() -> tuple[TautClass, ContributionLedger]:
    """The genus-4 pullback of the Torelli cycle with its full ledger.

    Aborts with a diff against the expected intermediate whenever one of
    the cross-checked contributions drifts.
    """
    delta = delta_total(M4)
    delta_a = delta_sep(M4, 1)
    delta_b = delta_sep(M4, 2)

    # diagonal components: c1 of the normal class of the Torelli map
    c1_m4 = chern.c1_tangent(M4)
    diag = Fraction(-5) * lam(M4) - c1_m4
    expect_diag = 8 * lam(M4) - 2 * delta
    if diag != expect_diag:
        raise PipelineMismatch(f"diagonal contribution:\n{diag}\nexpected:\n{expect_diag}")

    a_contrib = _a_component_contribution()
    if a_contrib != 4 * delta_a:
        raise PipelineMismatch(f"(1,3) contribution:\n{a_contrib}\nexpected 4 delta_A")

    b_contrib, b_pieces = _b_component_contribution()
    expected_pieces = {
        "product_tangent": 8 * delta_b,
        "ambient_c2": -24 * delta_b,
        "cross": 32 * delta_b,
    }
    for key, expect in expected_pieces.items():
        if b_pieces[key] != expect:
            raise PipelineMismatch(
                f"(2,2) pipeline piece {key}:\n{b_pieces[key]}\nexpected:\n{expect}"
            )
    if b_contrib != 8 * delta_b:
        raise PipelineMismatch(f"(2,2) contribution:\n{b_contrib}\nexpected 8 delta_B")

    m_aa = excess.multiplicity(excess.ExcessDims(1, 1))
    m_ab = excess.multiplicity(excess.ExcessDims(2, 1))
    _, _, residual_unit = excess.verify_residual_model()
    strata = {z.name: z for z in ctp.one_edge_intersections(4)}
    push = {"delta_A": delta_a, "delta_B": delta_b}

    entries = [
        LedgerEntry("Delta+", "diagonal excess class", Fraction(1), diag),
        LedgerEntry("Delta-", "diagonal excess class", Fraction(1), diag),
        LedgerEntry("A+", "(1,3) excess class", Fraction(1), a_contrib),
        LedgerEntry("A-", "(1,3) excess class", Fraction(1), a_contrib),
        LedgerEntry("B", "(2,2) excess class (S2-halved)", Fraction(1), b_contrib),
    ]
    for name, mult in (("Z1", m_aa), ("Z2", m_aa), ("Z3", m_ab), ("Z4", m_ab)):
        z = strata[name]
        entries.append(
            LedgerEntry(
                name,
                f"{z.first} meets {z.second}, dim {z.dimension}",
                Fraction(mult),
                push[z.pushforward],
            )
        )
    for name in ("Z5", "Z6"):
        entries.append(
            LedgerEntry(
                name,
                "nonreduced locus in the (2,2) component",
                Fraction(residual_unit),
                delta_b,
            )
        )
    ledger = ContributionLedger(tuple(entries))
    final = ledger.total()
    if final != 16 * lam(M4):
        raise PipelineMismatch(f"assembled class:\n{final}\nexpected 16 lambda_1")
    return final, ledger


# --------------------------------------------------------------------------
# the interior ring for genus 5


@dataclass(frozen=True)
class InteriorClass:
    """Polynomial in interior lambda/kappa classes, kappa_1 eliminated as
    12 lambda_1 at ingestion.  Monomials are sorted tuples of generator
    names like ("l1", "l1", "k2")."""

    coeffs: tuple[tuple[tuple[str, ...], Fraction], ...]

    @classmethod
    def from_dict(cls, d: dict) -> "InteriorClass":
        clean: dict = {}
        for mon, c in d.items():
            mon = tuple(sorted(mon))
            c = Fraction(c)
            if c:
                clean[mon] = clean.get(mon, Fraction(0)) + c
        return cls(tuple(sorted((m, c) for m, c in clean.items() if c != 0)))

    @classmethod
    def gen(cls, name: str, coeff=1) -> "InteriorClass":
        return cls.from_dict({(name,): Fraction(coeff)})

    @classmethod
    def zero(cls) -> "InteriorClass":
        return cls.from_dict({})

    def to_dict(self):
        return dict(self.coeffs)

    def __add__(self, other):
        d = self.to_dict()
        for m, c in other.coeffs:
            d[m] = d.get(m, Fraction(0)) + c
        return InteriorClass.from_dict(d)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        s = Fraction(scalar)
        return InteriorClass.from_dict({m: s * c for m, c in self.coeffs})

    def __mul__(self, other):
        if not isinstance(other, InteriorClass):
            return self.__rmul__(other)
        d: dict = {}
        for m1, c1 in self.coeffs:
            for m2, c2 in other.coeffs:
                m = tuple(sorted(m1 + m2))
                d[m] = d.get(m, Fraction(0)) + c1 * c2
        return InteriorClass.from_dict(d)

    def is_zero(self):
        return not self.coeffs

    def coefficient(self, mon):
        return dict(self.coeffs).get(tuple(sorted(mon)), Fraction(0))

    def __str__(self):
        if not self.coeffs:
            return "0"
        names = {"l": "lambda", "k": "kappa"}
        parts = []
        for mon, c in self.coeffs:
            if not mon:
                parts.append(str(c))
                continue
            syms = []
            i = 0
            while i < len(mon):
                j = i
                while j < len(mon) and mon[j] == mon[i]:
                    j += 1
                e = j - i
                base = names[mon[i][0]] + mon[i][1:]
                syms.append(base + (f"^{e}" if e > 1 else ""))
                i = j
            body = "*".join(syms)
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _degree(mon) -> int:
    return sum(int(name[1:]) for name in mon)


def taut_to_interior(c: TautClass) -> InteriorClass:
    """Interior restriction of a boundary-free class in kappa and lambda
    monomials, with kappa_1 rewritten as 12 lambda_1."""
    out = InteriorClass.zero()
    for g, coeff in c.interior().terms.items():
        if any(e for (_, _, e) in g.legs):
            raise ValueError("interior conversion expects unpointed classes")
        factor = InteriorClass.from_dict({(): coeff})
        for (i, e) in g.kappa[0]:
            base = (
                Fraction(12) * InteriorClass.gen("l1")
                if i == 1
                else InteriorClass.gen(f"k{i}")
            )
            for _ in range(e):
                factor = factor * base
        for (i, e) in g.lam[0]:
            for _ in range(e):
                factor = factor * InteriorClass.gen(f"l{i}")
        out = out + factor
    return out


def hodge_to_interior(h: chern.HodgeExpression) -> InteriorClass:
    out = InteriorClass.zero()
    for mon, c in h.coeffs:
        out = out + InteriorClass.from_dict({tuple(f"l{i}" for i in mon): c})
    return out


# -- the socle evaluation used to collapse degree 3 onto kappa_3 ------------


def psi_socle_integral(g: int, exponents: tuple[int, ...]) -> Fraction:
    """Integral of a psi monomial against the product of the top two Chern
    classes of the Hodge bundle, in the classical closed form

        (2g + n - 3)! |B_{2g}| / (2^{2g-1} (2g)! prod (2 d_i - 1)!!).

    This pairing kills all boundary classes, so it computes on the open
    moduli space; it is the normal form used to pin the one-dimensional
    degree-(g-2) interior graded piece.
    """
    n = len(exponents)
    if sum(exponents) != g - 2 + n:
        raise ValueError("wrong total degree for the socle pairing")
    num = factorial(2 * g + n - 3) * abs(bernoulli_number(2 * g))
    den = Fraction(2 ** (2 * g - 1)) * factorial(2 * g)
    for d in exponents:
        den *= _double_factorial(2 * d - 1)
    return Fraction(num) / den


def _double_factorial(m: int) -> int:
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


@lru_cache(maxsize=None)
def kappa_socle_integral(g: int, parts: tuple[int, ...]) -> Fraction:
    """Socle pairing of a kappa monomial, by the exact translation between
    kappa monomials and psi pushforwards: the psi integral equals the sum
    over set partitions of the index multiset of (block size - 1)! times
    the merged kappa integral; invert recursively."""
    parts = tuple(sorted(parts))
    psi_val = psi_socle_integral(g, tuple(a + 1 for a in parts))
    correction = Fraction(0)
    for partition in _set_partitions(len(parts)):
        if all(len(block) == 1 for block in partition):
            continue
        weight = Fraction(1)
        merged = []
        for block in partition:
            weight *= factorial(len(block) - 1)
            merged.append(sum(parts[i] for i in block))
        correction += weight * kappa_socle_integral(g, tuple(sorted(merged)))
    return psi_val - correction


def _set_partitions(n: int):
    if n == 0:
        yield []
        return
    first = 0
    for rest in _set_partitions_of(list(range(1, n))):
        yield [[first]] + rest
        for i, block in enumerate(rest):
            yield rest[:i] + [[first] + block] + rest[i + 1 :]


def _set_partitions_of(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions_of(rest):
        yield [[first]] + part
        for i, block in enumerate(part):
            yield part[:i] + [[first] + block] + part[i + 1 :]


@lru_cache(maxsize=None)
def interior_socle_ratios(g: int) -> dict:
    """Degree-(g-2) reduction table: each kappa monomial of that degree as
    a multiple of kappa_{g-2}."""
    base = kappa_socle_integral(g, (g - 2,))
    out = {}
    for parts in _partitions(g - 2):
        out[parts] = kappa_socle_integral(g, parts) / base
    return out


def _partitions(n: int, mx: int | None = None):
    if mx is None:
        mx = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, mx), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def reduce_interior_degree3_genus5(c: InteriorClass) -> InteriorClass:
    """Collapse a degree-3 interior class on the genus-5 moduli onto
    kappa_3: lambda classes are converted through the Hodge-bundle Chern
    characters (even ones vanish; the odd ones are Bernoulli multiples of
    odd kappas), then kappa monomials through the socle ratios."""
    # lambda -> kappa on the interior:
    #   l1 = k1/12, l2 = l1^2/2, l3 = l1^3/6 - k3/360
    l1 = InteriorClass.gen("l1")
    k3 = InteriorClass.gen("k3")
    subs = {
        "l1": l1,
        "l2": Fraction(1, 2) * (l1 * l1),
        "l3": Fraction(1, 6) * (l1 * l1 * l1) - Fraction(1, 360) * k3,
        "k2": InteriorClass.gen("k2"),
        "k3": k3,
    }
    in_lk = InteriorClass.zero()
    for mon, coeff in c.coeffs:
        if _degree(mon) != 3:
            raise ValueError("reduction defined for homogeneous degree 3")
        factor = InteriorClass.from_dict({(): coeff})
        for name in mon:
            factor = factor * subs[name]
        in_lk = in_lk + factor
    # now a polynomial in l1, k2, k3; rewrite l1 = k1/12 and collapse the
    # kappa monomials by the socle ratios
    ratios = interior_socle_ratios(5)
    total = Fraction(0)
    for mon, coeff in in_lk.coeffs:
        parts = []
        scale = Fraction(1)
        for name in mon:
            if name == "l1":
                parts.append(1)
                scale /= 12
            else:
                parts.append(int(name[1:]))
        key = tuple(sorted(parts, reverse=True))
        total += coeff * scale * ratios[key]
    return InteriorClass.from_dict({("k3",): total})


# --------------------------------------------------------------------------
# genus 5 headline


#: imported literal: the class of the genus-5 hyperelliptic locus in the
#: interior ring (display-only provenance lives in the constants table)
HYPERELLIPTIC_G5 = InteriorClass.from_dict({("k3",): Fraction(31, 30)})


@dataclass(frozen=True)
class Genus5Report:
    ch_moduli: tuple[InteriorClass, ...]
    ch_abelian: tuple[chern.HodgeExpression, ...]
    #: degree-2 entry shown in its reduced normal form (lambda_2), the
    #: others as raw expansions
    ch_abelian_display: tuple[chern.HodgeExpression, ...]
    ch_normal: tuple[InteriorClass, ...]
    two_c3: InteriorClass
    multiplicity: int
    hyperelliptic: InteriorClass
    final: InteriorClass


def t_pullback_g5() -> tuple[InteriorClass, Genus5Report]:
    """Interior restriction of the genus-5 pullback: twice the third Chern
    class of the Torelli normal class plus the multiplicity-weighted
    hyperelliptic locus."""
    ch_m = tuple(
        taut_to_interior(chern.ch_tangent(M5, m).interior()) for m in (1, 2, 3)
    )
    expected_m = (
        InteriorClass.from_dict({("l1",): Fraction(-13)}),
        InteriorClass.from_dict({("k2",): Fraction(1, 2)}),
        InteriorClass.from_dict({("k3",): Fraction(-119, 720)}),
    )
    if ch_m != expected_m:
        raise PipelineMismatch(f"moduli characters {ch_m}")

    ch_a = tuple(chern.ch_tangent_Ag(5, m) for m in (1, 2, 3))
    ch_a_display = (ch_a[0], chern.ch_tangent_Ag(5, 2, reduced=True), ch_a[2])
    ch_n = tuple(hodge_to_interior(a) - m_ for a, m_ in zip(ch_a, ch_m))

    c3 = chern_from_ch(list(ch_n), 3)[2]
    two_c3 = reduce_interior_degree3_genus5(Fraction(2) * c3)
    if two_c3 != InteriorClass.from_dict({("k3",): Fraction(454, 15)}):
        raise PipelineMismatch(f"2 c3(N) = {two_c3}")

    m = excess.multiplicity(excess.ExcessDims(3, 3))
    final = two_c3 + Fraction(m) * HYPERELLIPTIC_G5
    if final != InteriorClass.from_dict({("k3",): Fraction(48, 5)}):
        raise PipelineMismatch(f"final class {final}")
    report = Genus5Report(
        ch_m, ch_a, ch_a_display, ch_n, two_c3, m, HYPERELLIPTIC_G5, final
    )
    return final, report


# --------------------------------------------------------------------------
# the toroidal rank <= 1 extension in genus 4


def _to_stable(c: TautClass) -> TautClass:
    return TautClass(M4_STABLE, dict(c.terms))


@dataclass(frozen=True)
class Abar4Report:
    curve_side: TautClass
    delta_irr_coeff_in_c1: Fraction
    pic_conclusion: str


def t_pushforward_Abar4() -> tuple[TautClass, Abar4Report]:
    """Curve-side bookkeeping for the extension over rank <= 1
    degenerations: each diagonal contributes an extra -delta_irr, so the
    interior answer 16 lambda_1 becomes 16 lambda_1 - 2 delta_irr; in the
    lambda/boundary basis upstairs this reads 16 lambda_1 - 2 D."""
    c1_stable = chern.c1_tangent(M4_STABLE)
    expect = 2 * delta_total(M4_STABLE) - 13 * lam(M4_STABLE)
    if c1_stable != expect:
        raise PipelineMismatch("stable-policy first Chern class drifted")
    dirr = delta_irr(M4_STABLE)
    irr_gen = next(iter(dirr.terms))
    coeff_in_c1 = c1_stable.terms[irr_gen] / dirr.terms[irr_gen]

    pulled_tangent = (-chern.c1_log_cotangent_Abar4()).pullback_to_curves(M4_STABLE)
    diag_stable = pulled_tangent - c1_stable

    interior16, _ = t_pullback_g4()
    interior_diag = Fraction(-5) * lam(M4) - chern.c1_tangent(M4)
    correction = 2 * (diag_stable - _to_stable(interior_diag))

    curve_side = _to_stable(interior16) + correction
    if curve_side != 16 * lam(M4_STABLE) - 2 * dirr:
        raise PipelineMismatch(f"curve side {curve_side}")
    report = Abar4Report(
        curve_side,
        coeff_in_c1,
        "16*lambda1 - 2*D",
    )
    return curve_side, report


# --------------------------------------------------------------------------
# dimensions


def torelli_dimension(g: int) -> tuple[Fraction, str]:
    """Expected dimension (-g^2 + 11 g - 12)/2 of the pullback cycle, with
    the vanishing verdict for large genus."""
    if g < 2:
        raise ValueError("genus must be >= 2")
    dim = Fraction(-g * g + 11 * g - 12, 2)
    if dim < 0:
        verdict = "vanishes (negative dimension)"
    elif g == 8:
        verdict = "vanishes (known interior socle bound, not recomputed here)"
    else:
        verdict = "possibly nonzero"
    return dim, verdict
