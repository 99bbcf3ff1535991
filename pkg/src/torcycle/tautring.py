"""Decorated stable graphs and the divisor-level tautological calculus on
moduli of curves: forgetful pullback/pushforward, gluing pullback and
pushforward, and multiplication by divisor classes.

Representation
--------------
A generator ("Gen") is a genus-labeled graph with

* ``genera[v]``: vertex genera,
* ``edges``: tuples ``(v, w, av, aw)`` where ``av``/``aw`` are psi exponents
  at the two half-edges,
* ``legs``: tuples ``(label, v, exp)`` carrying marking labels and psi
  exponents,
* ``kappa[v]`` / ``lam[v]``: sorted ``(index, exp)`` monomials per vertex.

The generator denotes the pushforward, under the gluing map of the graph, of
the decoration monomial.  No automorphism factor is baked in: the boundary
divisor class of a one-edge graph with a 2-element automorphism group is
*half* the generator (see ``delta_B`` usage downstream), which matches how
gluing maps are manipulated directly in the genus-4 pipelines.

A ``TautClass`` is a Fraction-linear combination of canonicalized generators
on a fixed ambient ``ModuliSpec``.  Two classes are equal iff their canonical
term maps coincide; no completeness of tautological relations is claimed.
Terms whose decoration degree exceeds a vertex moduli dimension are pruned
(they vanish in the Chow ring of the vertex factor).

Unsupported pushforward/product shapes raise ``UnsupportedOperation`` instead
of approximating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence


class UnsupportedOperation(ValueError):
    """An operation outside the implemented calculus was requested."""


class UnstableGraphError(ValueError):
    """A graph violating stability, naming the offending vertex."""


# --------------------------------------------------------------------------
# ambient spaces and generators


@dataclass(frozen=True, order=True)
class ModuliSpec:
    """A moduli space of curves: genus, marking labels, boundary policy.

    ``policy`` is ``"ct"`` (compact type: tree dual graphs, no self edges)
    or ``"stable"`` (all stable curves; self edges allowed).
    """

    genus: int
    markings: tuple[str, ...]
    policy: str = "ct"

    def __post_init__(self):
        # marking order is semantically irrelevant (legs match by label);
        # keep it sorted so equal spaces compare equal
        object.__setattr__(
            self, "markings", tuple(sorted(str(m) for m in self.markings))
        )
        if self.policy not in ("ct", "stable"):
            raise ValueError(f"unknown policy {self.policy!r}")
        if len(set(self.markings)) != len(self.markings):
            raise ValueError("duplicate marking labels")
        if 2 * self.genus - 2 + len(self.markings) <= 0:
            raise ValueError(f"unstable ambient ({self.genus}, {self.markings})")

    @property
    def n(self) -> int:
        return len(self.markings)

    @property
    def dim(self) -> int:
        return 3 * self.genus - 3 + self.n

    def with_extra_marking(self, x: str) -> "ModuliSpec":
        if x in self.markings:
            raise ValueError(f"marking {x!r} already present")
        return ModuliSpec(self.genus, self.markings + (x,), self.policy)

    def without_marking(self, x: str) -> "ModuliSpec":
        if x not in self.markings:
            raise ValueError(f"marking {x!r} not present")
        return ModuliSpec(
            self.genus, tuple(m for m in self.markings if m != x), self.policy
        )


@dataclass(frozen=True)
class Gen:
    """A decorated-graph generator; see the module docstring."""

    genera: tuple[int, ...]
    edges: tuple[tuple[int, int, int, int], ...]
    legs: tuple[tuple[str, int, int], ...]
    kappa: tuple[tuple[tuple[int, int], ...], ...]
    lam: tuple[tuple[tuple[int, int], ...], ...]

    def degree(self) -> int:
        d = len(self.edges)
        d += sum(av + aw for (_, _, av, aw) in self.edges)
        d += sum(e for (_, _, e) in self.legs)
        d += sum(i * e for kv in self.kappa for (i, e) in kv)
        d += sum(i * e for lv in self.lam for (i, e) in lv)
        return d

    def n_vertices(self) -> int:
        return len(self.genera)

    def valence(self, v: int) -> int:
        ends = sum((e[0] == v) + (e[1] == v) for e in self.edges)
        return ends + sum(1 for (_, lv, _) in self.legs if lv == v)

    def vertex_decoration_degree(self, v: int) -> int:
        d = sum(i * e for (i, e) in self.kappa[v])
        d += sum(i * e for (i, e) in self.lam[v])
        d += sum(e for (_, lv, e) in self.legs if lv == v)
        for (a, b, av, aw) in self.edges:
            if a == v:
                d += av
            if b == v:
                d += aw
        return d

    def is_trivial_graph(self) -> bool:
        return len(self.genera) == 1 and not self.edges

    def total_genus(self) -> int:
        b1 = len(self.edges) - len(self.genera) + 1
        return sum(self.genera) + b1

    def leg_vertex(self, label: str) -> int:
        for (lab, v, _) in self.legs:
            if lab == label:
                return v
        raise KeyError(label)


def _norm_monomial(mon: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    acc: dict[int, int] = {}
    for i, e in mon:
        if e < 0 or i < 0:
            raise ValueError("negative decoration exponent/index")
        if e:
            acc[i] = acc.get(i, 0) + e
    return tuple(sorted(acc.items()))


def make_gen(
    genera: Sequence[int],
    edges: Sequence[tuple] = (),
    legs: Sequence[tuple] = (),
    kappa: Mapping[int, Iterable[tuple[int, int]]] | None = None,
    lam: Mapping[int, Iterable[tuple[int, int]]] | None = None,
) -> Gen:
    """Build a generator from loose data.  Edge tuples are ``(v, w)`` or
    ``(v, w, av, aw)``; leg tuples ``(label, v)`` or ``(label, v, exp)``."""
    nv = len(genera)
    e_out = []
    for e in edges:
        v, w = e[0], e[1]
        av = e[2] if len(e) > 2 else 0
        aw = e[3] if len(e) > 3 else 0
        if not (0 <= v < nv and 0 <= w < nv):
            raise ValueError("edge endpoint out of range")
        if (w, aw) < (v, av):
            v, w, av, aw = w, v, aw, av
        e_out.append((v, w, av, aw))
    l_out = []
    for leg in legs:
        lab, v = leg[0], leg[1]
        ex = leg[2] if len(leg) > 2 else 0
        if not 0 <= v < nv:
            raise ValueError("leg vertex out of range")
        l_out.append((str(lab), v, ex))
    kap = tuple(_norm_monomial((kappa or {}).get(v, ())) for v in range(nv))
    lm = tuple(_norm_monomial((lam or {}).get(v, ())) for v in range(nv))
    return Gen(tuple(genera), tuple(sorted(e_out)), tuple(sorted(l_out)), kap, lm)


def check_stability(gen: Gen, policy: str) -> None:
    """Stability of every vertex; compact type additionally demands a tree
    with no self edges.  Raises ``UnstableGraphError`` naming a violator."""
    for v, g in enumerate(gen.genera):
        if g < 0:
            raise UnstableGraphError(f"vertex {v} has negative genus")
        if 2 * g - 2 + gen.valence(v) <= 0:
            raise UnstableGraphError(
                f"vertex {v} (genus {g}, valence {gen.valence(v)}) is unstable"
            )
    if policy == "ct":
        if any(v == w for (v, w, _, _) in gen.edges):
            raise UnstableGraphError("self edge not allowed on compact type")
        if len(gen.edges) != gen.n_vertices() - 1 or not _is_connected(gen):
            raise UnstableGraphError("compact type dual graph must be a tree")
    elif not _is_connected(gen):
        raise UnstableGraphError("graph must be connected")


def _is_connected(gen: Gen) -> bool:
    nv = gen.n_vertices()
    if nv == 1:
        return True
    adj: dict[int, set[int]] = {v: set() for v in range(nv)}
    for (v, w, _, _) in gen.edges:
        adj[v].add(w)
        adj[w].add(v)
    seen = {0}
    stack = [0]
    while stack:
        for u in adj[stack.pop()]:
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == nv


# --------------------------------------------------------------------------
# canonical labeling


def _apply_perm(gen: Gen, perm: Sequence[int]) -> Gen:
    nv = gen.n_vertices()
    genera = [0] * nv
    kap: list = [()] * nv
    lm: list = [()] * nv
    for v in range(nv):
        genera[perm[v]] = gen.genera[v]
        kap[perm[v]] = gen.kappa[v]
        lm[perm[v]] = gen.lam[v]
    edges = []
    for (v, w, av, aw) in gen.edges:
        p, q, a, b = perm[v], perm[w], av, aw
        if (q, b) < (p, a):
            p, q, a, b = q, p, b, a
        edges.append((p, q, a, b))
    legs = tuple(sorted((lab, perm[v], e) for (lab, v, e) in gen.legs))
    return Gen(tuple(genera), tuple(sorted(edges)), legs, tuple(kap), tuple(lm))


def _gen_sort_key(gen: Gen):
    return (gen.genera, gen.edges, gen.legs, gen.kappa, gen.lam)


def _halfedge_factor(gen: Gen) -> int:
    """Edge-level symmetries fixing all vertices: identical parallel edges
    permute, a self edge with equal psi exponents may swap its ends."""
    factor = 1
    counts: dict = {}
    for e in gen.edges:
        counts[e] = counts.get(e, 0) + 1
    for e, c in counts.items():
        for k in range(2, c + 1):
            factor *= k
        v, w, av, aw = e
        if v == w and av == aw:
            factor *= 2**c
    return factor


@lru_cache(maxsize=200000)
def canonicalize(gen: Gen) -> tuple[Gen, int]:
    """Canonical representative of the isomorphism class and the order of
    the decoration-preserving automorphism group (counted on half-edges, so
    a symmetric self edge contributes a factor 2).

    Tie-breaking: vertices are grouped by (genus, half-edge decorations, leg
    data, vertex decorations, neighbor data); the minimal lexicographic
    encoding over the remaining within-group permutations wins.
    """
    nv = gen.n_vertices()
    base = []
    for v in range(nv):
        legs_v = tuple(sorted((lab, e) for (lab, lv, e) in gen.legs if lv == v))
        ends = []
        for (a, b, av, aw) in gen.edges:
            if a == v:
                ends.append(av)
            if b == v:
                ends.append(aw)
        base.append(
            (gen.genera[v], tuple(sorted(ends)), legs_v, gen.kappa[v], gen.lam[v])
        )
    adj: dict[int, list[int]] = {v: [] for v in range(nv)}
    for (a, b, _, _) in gen.edges:
        adj[a].append(b)
        adj[b].append(a)
    inv = [(base[v], tuple(sorted(base[u] for u in adj[v]))) for v in range(nv)]

    groups: dict = {}
    for v in range(nv):
        groups.setdefault(inv[v], []).append(v)
    ordered = sorted(groups.items(), key=lambda kv: kv[0])
    perm = [0] * nv
    plan = []
    next_index = 0
    for _, vs in ordered:
        plan.append((vs, list(range(next_index, next_index + len(vs)))))
        next_index += len(vs)

    best: Gen | None = None
    best_key = None
    aut = 0

    def rec(gi: int):
        nonlocal best, best_key, aut
        if gi == len(plan):
            cand = _apply_perm(gen, perm)
            key = _gen_sort_key(cand)
            if best_key is None or key < best_key:
                best, best_key = cand, key
                aut = _halfedge_factor(cand)
            elif key == best_key:
                aut += _halfedge_factor(cand)
            return
        vs, idxs = plan[gi]
        for assignment in itertools.permutations(idxs):
            for v, i in zip(vs, assignment):
                perm[v] = i
            rec(gi + 1)

    rec(0)
    assert best is not None
    return best, aut


def aut_order(gen: Gen) -> int:
    return canonicalize(gen)[1]


# --------------------------------------------------------------------------
# tautological classes


def _prunable(gen: Gen) -> bool:
    for v, g in enumerate(gen.genera):
        if gen.vertex_decoration_degree(v) > 3 * g - 3 + gen.valence(v):
            return True
    return False


class TautClass:
    """Fraction-linear combination of canonical generators on one ambient."""

    __slots__ = ("space", "terms")

    def __init__(self, space: ModuliSpec, terms: Mapping[Gen, Fraction] | None = None):
        self.space = space
        acc: dict[Gen, Fraction] = {}
        for gen, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            check_stability(gen, space.policy)
            if gen.total_genus() != space.genus:
                raise ValueError("generator genus does not match ambient")
            if tuple(sorted(lab for (lab, _, _) in gen.legs)) != tuple(
                sorted(space.markings)
            ):
                raise ValueError("generator markings do not match ambient")
            cgen, _ = canonicalize(gen)
            if _prunable(cgen):
                continue
            acc[cgen] = acc.get(cgen, Fraction(0)) + coeff
        self.terms = {g: c for g, c in acc.items() if c != 0}

    def __add__(self, other: "TautClass") -> "TautClass":
        if self.space != other.space:
            raise ValueError("ambient mismatch")
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, Fraction(0)) + c
        return TautClass(self.space, out)

    def __sub__(self, other: "TautClass") -> "TautClass":
        return self + (-1) * other

    def __neg__(self) -> "TautClass":
        return (-1) * self

    def __rmul__(self, scalar) -> "TautClass":
        s = Fraction(scalar)
        return TautClass(self.space, {g: s * c for g, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, TautClass):
            return multiply(self, other)
        return self.__rmul__(other)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TautClass)
            and self.space == other.space
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.space, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {g.degree() for g in self.terms}

    def graded_piece(self, d: int) -> "TautClass":
        return TautClass(
            self.space, {g: c for g, c in self.terms.items() if g.degree() == d}
        )

    def interior(self) -> "TautClass":
        """Drop all boundary terms (excision to the open moduli space)."""
        return TautClass(
            self.space, {g: c for g, c in self.terms.items() if not g.edges}
        )

    def scalar_part(self) -> Fraction:
        for g, c in self.terms.items():
            if g.degree() == 0:
                return c
        return Fraction(0)

    def coefficient(self, gen: Gen) -> Fraction:
        cg, _ = canonicalize(gen)
        return self.terms.get(cg, Fraction(0))

    def __str__(self):
        if not self.terms:
            return "0"
        lines = []
        for g in sorted(self.terms, key=_gen_sort_key):
            lines.append(f"{self.terms[g]}\t{gen_to_string(g)}")
        return "\n".join(lines)

    __repr__ = __str__


# -- constructors ----------------------------------------------------------


def zero(space: ModuliSpec) -> TautClass:
    return TautClass(space, {})


def _trivial_gen(
    space: ModuliSpec,
    kappa_mon: Iterable[tuple[int, int]] = (),
    lam_mon: Iterable[tuple[int, int]] = (),
    psi_mon: Mapping[str, int] | None = None,
) -> Gen:
    psi_mon = psi_mon or {}
    return make_gen(
        (space.genus,),
        (),
        [(m, 0, psi_mon.get(m, 0)) for m in space.markings],
        {0: kappa_mon},
        {0: lam_mon},
    )


def one(space: ModuliSpec) -> TautClass:
    return TautClass(space, {_trivial_gen(space): Fraction(1)})


def kappa(space: ModuliSpec, i: int) -> TautClass:
    if i < 0:
        return zero(space)
    if i == 0:
        return Fraction(2 * space.genus - 2 + space.n) * one(space)
    return TautClass(space, {_trivial_gen(space, kappa_mon=[(i, 1)]): Fraction(1)})


def lam(space: ModuliSpec, i: int = 1) -> TautClass:
    return TautClass(space, {_trivial_gen(space, lam_mon=[(i, 1)]): Fraction(1)})


def psi(space: ModuliSpec, label: str, exp: int = 1) -> TautClass:
    if label not in space.markings:
        raise ValueError(f"no marking {label!r}")
    return TautClass(space, {_trivial_gen(space, psi_mon={label: exp}): Fraction(1)})


def psi_total(space: ModuliSpec) -> TautClass:
    out = zero(space)
    for m in space.markings:
        out = out + psi(space, m)
    return out


def monomial(
    space: ModuliSpec,
    kappa_mon: Iterable[tuple[int, int]] = (),
    lam_mon: Iterable[tuple[int, int]] = (),
    psi_mon: Mapping[str, int] | None = None,
) -> TautClass:
    return TautClass(
        space, {_trivial_gen(space, kappa_mon, lam_mon, psi_mon): Fraction(1)}
    )


def one_edge_graphs(space: ModuliSpec) -> list[tuple[Gen, int]]:
    """All one-edge boundary graph types of the ambient, as (canonical
    generator, automorphism order).  Compact type omits the self-edge
    graph."""
    found: dict[Gen, int] = {}
    g, P = space.genus, space.markings
    for g1 in range(g + 1):
        g2 = g - g1
        for r in range(len(P) + 1):
            for S in itertools.combinations(P, r):
                Sc = tuple(m for m in P if m not in S)
                if g1 == 0 and len(S) + 1 < 3:
                    continue
                if g2 == 0 and len(Sc) + 1 < 3:
                    continue
                gen = make_gen(
                    (g1, g2),
                    [(0, 1)],
                    [(m, 0) for m in S] + [(m, 1) for m in Sc],
                )
                cg, aut = canonicalize(gen)
                found[cg] = aut
    if space.policy == "stable" and space.genus >= 1:
        if not (space.genus - 1 == 0 and len(P) + 2 < 3):
            gen = make_gen((g - 1,), [(0, 0)], [(m, 0) for m in P])
            cg, aut = canonicalize(gen)
            found[cg] = aut
    return sorted(found.items(), key=lambda kv: _gen_sort_key(kv[0]))


def boundary_gen(
    space: ModuliSpec,
    g1: int,
    markings_on_first: Sequence[str],
    exps: tuple[int, int] = (0, 0),
) -> Gen:
    """One-edge separating generator: genus-g1 vertex carrying the listed
    markings joined to the complementary vertex; ``exps`` are the psi
    exponents at the (first, second) half edge."""
    S = tuple(str(m) for m in markings_on_first)
    Sc = tuple(m for m in space.markings if m not in S)
    return make_gen(
        (g1, space.genus - g1),
        [(0, 1, exps[0], exps[1])],
        [(m, 0) for m in S] + [(m, 1) for m in Sc],
    )


def delta_sep(
    space: ModuliSpec, g1: int, markings_on_first: Sequence[str] = ()
) -> TautClass:
    """Class of one separating boundary divisor: (1/|Aut|) x generator."""
    gen = boundary_gen(space, g1, markings_on_first)
    cg, aut = canonicalize(gen)
    return TautClass(space, {cg: Fraction(1, aut)})


def delta_irr(space: ModuliSpec) -> TautClass:
    """Irreducible (self-edge) boundary divisor class; stable policy only."""
    if space.policy != "stable":
        raise UnsupportedOperation("delta_irr lives on the stable policy")
    gen = make_gen((space.genus - 1,), [(0, 0)], [(m, 0) for m in space.markings])
    cg, aut = canonicalize(gen)
    return TautClass(space, {cg: Fraction(1, aut)})


def delta_total(space: ModuliSpec) -> TautClass:
    """Total boundary divisor: sum over one-edge graphs of 1/|Aut| times the
    undecorated generator."""
    return TautClass(
        space, {cg: Fraction(1, aut) for cg, aut in one_edge_graphs(space)}
    )


def delta_zero_pair(space: ModuliSpec, p: str, x: str) -> TautClass:
    """Divisor of curves where markings p, x sit on a rational tail."""
    return TautClass(space, {boundary_gen(space, 0, (p, x)): Fraction(1)})


# --------------------------------------------------------------------------
# vertex-level plumbing


def _vertex_space(gen: Gen, v: int, policy: str) -> tuple[ModuliSpec, list[str], dict]:
    """Moduli spec of a vertex factor.  Edge ends become synthetic markings
    ``__e{i}a`` / ``__e{i}b``.  Returns (spec, labels, psi exps on them)."""
    labels: list[str] = []
    exps: dict[str, int] = {}
    for (lab, lv, e) in gen.legs:
        if lv == v:
            labels.append(lab)
            exps[lab] = e
    for i, (a, b, av, aw) in enumerate(gen.edges):
        if a == v:
            labels.append(f"__e{i}a")
            exps[f"__e{i}a"] = av
        if b == v:
            labels.append(f"__e{i}b")
            exps[f"__e{i}b"] = aw
    return ModuliSpec(gen.genera[v], tuple(labels), policy), labels, exps


def _blank_vertex(gen: Gen, v: int) -> Gen:
    """gen with all decorations at vertex v removed (they move into the
    vertex class during expansion)."""
    kap = {u: gen.kappa[u] for u in range(gen.n_vertices())}
    lm = {u: gen.lam[u] for u in range(gen.n_vertices())}
    kap[v] = ()
    lm[v] = ()
    legs = [(lab, lv, 0 if lv == v else e) for (lab, lv, e) in gen.legs]
    edges = []
    for (a, b, av, aw) in gen.edges:
        edges.append((a, b, 0 if a == v else av, 0 if b == v else aw))
    return make_gen(gen.genera, edges, legs, kap, lm)


def _vertex_monomial_gen(gen: Gen, v: int, policy: str) -> tuple[ModuliSpec, Gen]:
    """Decoration at vertex v as a trivial-graph generator on the vertex
    moduli."""
    spec, labels, exps = _vertex_space(gen, v, policy)
    tgen = make_gen(
        (gen.genera[v],),
        (),
        [(lab, 0, exps[lab]) for lab in labels],
        {0: gen.kappa[v]},
        {0: gen.lam[v]},
    )
    return spec, tgen


def _substitute_vertex(gen: Gen, v: int, sub: Gen) -> Gen:
    """Replace (blanked) vertex v by the graph ``sub``.  sub's legs must
    cover v's slot labels (original legs and ``__e{i}a/b`` markers); legs of
    sub outside those slots become new legs of the result."""
    if gen.kappa[v] or gen.lam[v]:
        raise AssertionError("substitute into a blanked vertex only")
    old_nv = gen.n_vertices()
    keep = [u for u in range(old_nv) if u != v]
    remap = {u: i for i, u in enumerate(keep)}
    offset = len(keep)

    slot_to: dict[str, tuple[int, int]] = {}
    extra_legs = []
    own_labels = {lab for (lab, lv, _) in gen.legs if lv == v}
    for (lab, sv, e) in sub.legs:
        if lab.startswith("__e") or lab in own_labels:
            slot_to[lab] = (offset + sv, e)
        else:
            extra_legs.append((lab, offset + sv, e))

    genera = [gen.genera[u] for u in keep] + list(sub.genera)
    kappa = {remap[u]: gen.kappa[u] for u in keep}
    lam = {remap[u]: gen.lam[u] for u in keep}
    for sv in range(sub.n_vertices()):
        kappa[offset + sv] = sub.kappa[sv]
        lam[offset + sv] = sub.lam[sv]

    edges = []
    for i, (a, b, av, aw) in enumerate(gen.edges):
        if a == v:
            na, extra = slot_to[f"__e{i}a"]
            av = extra  # blanked: av == 0
        else:
            na = remap[a]
        if b == v:
            nb, extra = slot_to[f"__e{i}b"]
            aw = extra
        else:
            nb = remap[b]
        edges.append((na, nb, av, aw))
    for (a, b, av, aw) in sub.edges:
        edges.append((offset + a, offset + b, av, aw))

    legs = []
    for (lab, lv, e) in gen.legs:
        if lv == v:
            nv_, extra = slot_to[lab]
            legs.append((lab, nv_, extra))
        else:
            legs.append((lab, remap[lv], e))
    legs.extend(extra_legs)
    return make_gen(genera, edges, legs, kappa, lam)


def _expand_vertex(
    space: ModuliSpec, blank: Gen, v: int, vertex_class: TautClass
) -> TautClass:
    out = zero(space)
    for sgen, coeff in vertex_class.terms.items():
        out = out + TautClass(space, {_substitute_vertex(blank, v, sgen): coeff})
    return out


def _undecorated(gen: Gen) -> Gen:
    edges = tuple(sorted((a, b, 0, 0) for (a, b, _, _) in gen.edges))
    legs = tuple(sorted((lab, v, 0) for (lab, v, _) in gen.legs))
    blank = ((),) * gen.n_vertices()
    return Gen(gen.genera, edges, legs, blank, blank)


def _contract_edge(gen: Gen, edge_index: int) -> Gen:
    """Contract a non-self, psi-free edge, merging its endpoints."""
    (a, b, av, aw) = gen.edges[edge_index]
    if a == b:
        raise UnsupportedOperation("cannot contract a self edge")
    if av or aw:
        raise UnsupportedOperation("contracting a psi-decorated edge")
    keep = [u for u in range(gen.n_vertices()) if u != b]
    remap = {u: i for i, u in enumerate(keep)}

    def m(u):
        return remap[a] if u == b else remap[u]

    genera = [gen.genera[u] for u in keep]
    genera[remap[a]] = gen.genera[a] + gen.genera[b]
    edges = [
        (m(p), m(q), x, y)
        for i, (p, q, x, y) in enumerate(gen.edges)
        if i != edge_index
    ]
    legs = [(lab, m(lv), e) for (lab, lv, e) in gen.legs]
    kappa = {remap[u]: list(gen.kappa[u]) for u in keep}
    lam = {remap[u]: list(gen.lam[u]) for u in keep}
    kappa[remap[a]] = list(gen.kappa[a]) + list(gen.kappa[b])
    lam[remap[a]] = list(gen.lam[a]) + list(gen.lam[b])
    return make_gen(genera, edges, legs, kappa, lam)


def _isomorphisms(gen_from: Gen, gen_to: Gen) -> list[list[int]]:
    nv = gen_from.n_vertices()
    target = _gen_sort_key(gen_to)
    return [
        list(p)
        for p in itertools.permutations(range(nv))
        if _gen_sort_key(_apply_perm(gen_from, list(p))) == target
    ]


# --------------------------------------------------------------------------
# multiplication by divisor classes


def multiply(d: TautClass, c: TautClass) -> TautClass:
    """Product of a divisor-span class with an arbitrary class.

    Supported divisor terms after kappa_1 expansion: degree-0 scalars, free
    lambda_i / psi_p / kappa_i factors of degree 1, and undecorated one-edge
    boundary generators.  Boundary x boundary products use the self-excess
    rule (-psi - psibar per identification) plus the transverse vertex-split
    components; the normalization reproduces the gluing-pullback table row
    for the total boundary.
    """
    if d.space != c.space:
        raise ValueError("ambient mismatch")
    if any(g.degree() > 1 for g in d.terms):
        if all(g.degree() <= 1 for g in c.terms):
            d, c = c, d
        else:
            raise UnsupportedOperation("one factor must be a divisor-span class")
    if any(
        any(i == 1 for (i, _) in g.kappa[v])
        for g in d.terms
        for v in range(g.n_vertices())
    ):
        return multiply(kappa1_expand(d), c)

    space = d.space
    out = zero(space)
    for dg, dc in d.terms.items():
        for cg, cc in c.terms.items():
            out = out + (dc * cc) * _mul_term(space, dg, cg)
    return out


def _mul_term(space: ModuliSpec, dg: Gen, cg: Gen) -> TautClass:
    if dg.degree() == 0:
        return TautClass(space, {cg: Fraction(1)})
    if dg.is_trivial_graph():
        return _mul_free_divisor(space, dg, cg)
    if len(dg.edges) != 1 or dg.degree() != 1:
        raise UnsupportedOperation(f"unsupported divisor term: {gen_to_string(dg)}")
    if cg.is_trivial_graph():
        return _distribute_free_onto_graph(space, cg, dg)
    return _boundary_times_graph(space, dg, cg)


def _mul_free_divisor(space: ModuliSpec, dg: Gen, cg: Gen) -> TautClass:
    kap = dg.kappa[0]
    lm = dg.lam[0]
    psis = [(lab, e) for (lab, _, e) in dg.legs if e]
    if cg.is_trivial_graph():
        dpsi = {lab: e for (lab, _, e) in dg.legs}
        merged = make_gen(
            cg.genera,
            cg.edges,
            [(lab, v, e + dpsi[lab]) for (lab, v, e) in cg.legs],
            {0: list(cg.kappa[0]) + list(kap)},
            {0: list(cg.lam[0]) + list(lm)},
        )
        return TautClass(space, {merged: Fraction(1)})
    if psis:
        lab = psis[0][0]
        legs = tuple(
            (l, lv, e + (1 if l == lab else 0)) for (l, lv, e) in cg.legs
        )
        return TautClass(
            space, {Gen(cg.genera, cg.edges, legs, cg.kappa, cg.lam): Fraction(1)}
        )
    if lm:
        ((i, _),) = lm
        out = zero(space)
        for v in range(cg.n_vertices()):
            lam_v = list(cg.lam)
            lam_v[v] = _norm_monomial(list(lam_v[v]) + [(i, 1)])
            out = out + TautClass(
                space,
                {Gen(cg.genera, cg.edges, cg.legs, cg.kappa, tuple(lam_v)): Fraction(1)},
            )
        return out
    if kap:
        ((i, _),) = kap
        out = zero(space)
        for v in range(cg.n_vertices()):
            kap_v = list(cg.kappa)
            kap_v[v] = _norm_monomial(list(kap_v[v]) + [(i, 1)])
            out = out + TautClass(
                space,
                {Gen(cg.genera, cg.edges, cg.legs, tuple(kap_v), cg.lam): Fraction(1)},
            )
        return out
    raise UnsupportedOperation("empty divisor term")


def _mul_term_class(space: ModuliSpec, dgen: Gen, cls: TautClass) -> TautClass:
    out = zero(space)
    for cg, cc in cls.terms.items():
        out = out + cc * _mul_term(space, dgen, cg)
    return out


def _distribute_free_onto_graph(space: ModuliSpec, free: Gen, graph: Gen) -> TautClass:
    """xi_{Gamma*}(xi_Gamma^* monomial . dec): table-row distribution of a
    free monomial over a boundary term, factor by factor.  No kappa_1
    rewriting happens here."""
    out = TautClass(space, {graph: Fraction(1)})
    for (i, e) in free.kappa[0]:
        dgen = _trivial_gen(space, kappa_mon=[(i, 1)])
        for _ in range(e):
            out = _mul_term_class(space, dgen, out)
    for (i, e) in free.lam[0]:
        dgen = _trivial_gen(space, lam_mon=[(i, 1)])
        for _ in range(e):
            out = _mul_term_class(space, dgen, out)
    for (lab, _, e) in free.legs:
        dgen = _trivial_gen(space, psi_mon={lab: 1})
        for _ in range(e):
            out = _mul_term_class(space, dgen, out)
    return out


def _structure_perms(gen: Gen) -> list[list[int]]:
    und = _undecorated(gen)
    return _isomorphisms(und, und)


def _boundary_times_graph(space: ModuliSpec, dg: Gen, cg: Gen) -> TautClass:
    """Projection formula xi_{Gamma*}(dec) . [Gamma']:

      xi_Gamma^*[Gamma'] = [Gamma' = Gamma] |Aut Gamma| (-psi_h - psi_hbar)
        + |Aut Gamma'| sum over one-edge splits s of vertices of Gamma whose
          old-edge contraction is Gamma', weighted 1/|Aut s|.
    """
    if len(cg.edges) != 1:
        raise UnsupportedOperation(
            "boundary products implemented against one-edge or free terms"
        )
    if space.policy == "stable":
        raise UnsupportedOperation(
            "boundary x boundary products implemented on compact type only"
        )
    d_undec, d_aut = canonicalize(dg)
    c_undec, _ = canonicalize(_undecorated(cg))
    out = zero(space)
    if d_undec == c_undec:
        for sym in _structure_perms(cg):
            sg = _apply_perm(cg, sym)
            (a, b, av, aw) = sg.edges[0]
            for bump in ((1, 0), (0, 1)):
                e2 = (a, b, av + bump[0], aw + bump[1])
                out = out - TautClass(
                    space,
                    {Gen(sg.genera, (e2,), sg.legs, sg.kappa, sg.lam): Fraction(1)},
                )
    for v in range(cg.n_vertices()):
        vspec, _, _ = _vertex_space(cg, v, space.policy)
        _, vmon = _vertex_monomial_gen(cg, v, space.policy)
        blank = _blank_vertex(cg, v)
        for sgen, saut in one_edge_graphs(vspec):
            probe = _substitute_vertex(_undecorated(blank), v, sgen)
            contracted = _contract_many(probe, _old_edge_indices(probe, sgen))
            if contracted is None or canonicalize(contracted)[0] != d_undec:
                continue
            vclass = _distribute_free_onto_graph(vspec, vmon, sgen)
            out = out + Fraction(d_aut, saut) * _expand_vertex(space, blank, v, vclass)
    return out


# --------------------------------------------------------------------------
# kappa_1 expansion


def kappa1_expand(c: TautClass) -> TautClass:
    """Replace every kappa_1 factor by 12 lambda_1 + sum psi - delta
    (vertex-level for boundary terms); idempotent."""
    space = c.space
    out = zero(space)
    for gen, coeff in c.terms.items():
        target = None
        for v in range(gen.n_vertices()):
            if any(i == 1 for (i, _) in gen.kappa[v]):
                target = v
                break
        if target is None:
            out = out + TautClass(space, {gen: coeff})
            continue
        stripped = _strip_one_kappa1(gen, target)
        if gen.is_trivial_graph():
            rel = Fraction(12) * lam(space) + psi_total(space) - delta_total(space)
            prod = multiply(rel, TautClass(space, {stripped: Fraction(1)}))
        else:
            vspec, _, _ = _vertex_space(gen, target, space.policy)
            rel_v = Fraction(12) * lam(vspec) + psi_total(vspec) - delta_total(vspec)
            _, vmon = _vertex_monomial_gen(stripped, target, space.policy)
            vclass = multiply(rel_v, TautClass(vspec, {vmon: Fraction(1)}))
            blank = _blank_vertex(stripped, target)
            prod = _expand_vertex(space, blank, target, vclass)
        out = out + coeff * kappa1_expand(prod)
    return out


def _strip_one_kappa1(gen: Gen, v: int) -> Gen:
    kap = list(gen.kappa)
    mon = dict(kap[v])
    mon[1] -= 1
    kap[v] = _norm_monomial(mon.items())
    return Gen(gen.genera, gen.edges, gen.legs, tuple(kap), gen.lam)


# --------------------------------------------------------------------------
# forgetful pullback


def pullback_forgetful(c: TautClass, x: str) -> TautClass:
    """Pullback along the map forgetting a new marking x: lambda untouched,
    kappa_i -> kappa_i - psi_x^i, psi_p -> psi_p - D_px, one-edge generators
    distribute x over vertices with rational-tail corrections on decorated
    half edges."""
    up = c.space.with_extra_marking(x)
    out = zero(up)
    for gen, coeff in c.terms.items():
        out = out + coeff * _pull_term_forgetful(up, gen, x)
    return out


def _pull_term_forgetful(up: ModuliSpec, gen: Gen, x: str) -> TautClass:
    if gen.is_trivial_graph():
        return _pull_free_forgetful(up, gen, x)
    out = zero(up)
    for v in range(gen.n_vertices()):
        vspec, _, _ = _vertex_space(gen, v, up.policy)
        _, vmon = _vertex_monomial_gen(gen, v, up.policy)
        vclass = _pull_free_forgetful(vspec.with_extra_marking(x), vmon, x)
        blank = _blank_vertex(gen, v)
        out = out + _expand_vertex(up, blank, v, vclass)
    return out


def _pull_free_forgetful(up: ModuliSpec, gen: Gen, x: str) -> TautClass:
    base = [(lab, 0, 0) for lab in up.markings]
    acc = TautClass(up, {make_gen((up.genus,), (), base): Fraction(1)})
    for (i, e) in gen.lam[0]:
        for _ in range(e):
            acc = _mul_poly(lam(up, i), acc)
    for (i, e) in gen.kappa[0]:
        factor = kappa(up, i) - psi(up, x, i) if i > 0 else kappa(up, 0)
        for _ in range(e):
            acc = _mul_poly(factor, acc)
    for (lab, _, b) in gen.legs:
        if b == 0 or lab == x:
            continue
        main = psi(up, lab, b)
        tail = TautClass(up, {boundary_gen(up, 0, (lab, x), exps=(0, b - 1)): Fraction(1)})
        acc = _mul_poly(main - tail, acc)
    return acc


def _mul_poly(a: TautClass, b: TautClass) -> TautClass:
    """Product used inside the forgetful conversion: free monomials and
    rational tails through the new marking."""
    space = a.space
    out = zero(space)
    for ga, ca in a.terms.items():
        for gb, cb in b.terms.items():
            out = out + (ca * cb) * _mul_general_pair(space, ga, gb)
    return out


def _rational_tail_data(gen: Gen):
    if len(gen.edges) != 1 or gen.n_vertices() != 2:
        return None
    for v in (0, 1):
        if gen.genera[v] == 0 and gen.valence(v) == 3:
            labs = tuple(lab for (lab, lv, _) in gen.legs if lv == v)
            if len(labs) == 2:
                return v, labs
    return None


def _mul_general_pair(space: ModuliSpec, ga: Gen, gb: Gen) -> TautClass:
    if ga.is_trivial_graph() and gb.is_trivial_graph():
        apsi = {lab: e for (lab, _, e) in ga.legs}
        merged = make_gen(
            ga.genera,
            (),
            [(lab, 0, e + apsi[lab]) for (lab, _, e) in gb.legs],
            {0: list(ga.kappa[0]) + list(gb.kappa[0])},
            {0: list(ga.lam[0]) + list(gb.lam[0])},
        )
        return TautClass(space, {merged: Fraction(1)})
    if gb.is_trivial_graph():
        ga, gb = gb, ga
    if ga.is_trivial_graph():
        data = _rational_tail_data(gb)
        if data is None:
            raise UnsupportedOperation("free x boundary product outside tail shape")
        _, labs = data
        if any(e and lab in labs for (lab, _, e) in ga.legs):
            return zero(space)  # psi at a 3-pointed rational vertex
        return _distribute_free_onto_graph(space, ga, gb)
    da = _rational_tail_data(ga)
    db = _rational_tail_data(gb)
    if da is None or db is None:
        raise UnsupportedOperation("boundary x boundary outside tail shapes")
    if set(da[1]) != set(db[1]):
        if set(da[1]) & set(db[1]):
            return zero(space)  # tails sharing a marking are disjoint
        raise UnsupportedOperation("independent tail product not needed/implemented")
    if ga.degree() != 1 and gb.degree() != 1:
        raise UnsupportedOperation("tail product needs a divisor factor")
    if gb.degree() != 1:
        ga, gb = gb, ga
    (a, b, av, aw) = gb.edges[0]
    zero_v = _rational_tail_data(gb)[0]
    e2 = (a, b, av + (0 if a == zero_v else 1), aw + (0 if b == zero_v else 1))
    return -1 * TautClass(
        space, {Gen(gb.genera, (e2,), gb.legs, gb.kappa, gb.lam): Fraction(1)}
    )


# --------------------------------------------------------------------------
# forgetful pushforward


def pushforward_forgetful(c: TautClass, x: str) -> TautClass:
    """Pushforward along forgetting marking x.  Free monomials are rewritten
    via kappa_i = pull kappa_i + psi_x^i and psi_p = pull psi_p + D_px, then
    integrated with pull.push = 0, psi_x^(a+1) -> kappa_a (kappa_0 = 2g-2+n
    downstairs), D_px -> 1.  Graph terms push vertex-wise; rational tails
    through x contract."""
    down = c.space.without_marking(x)
    out = zero(down)
    for gen, coeff in c.terms.items():
        out = out + coeff * _push_term_forgetful(down, c.space, gen, x)
    return out


def _push_term_forgetful(
    down: ModuliSpec, up: ModuliSpec, gen: Gen, x: str
) -> TautClass:
    if gen.is_trivial_graph():
        return _push_free_forgetful(down, gen, x)
    v = gen.leg_vertex(x)
    if 2 * gen.genera[v] - 2 + (gen.valence(v) - 1) > 0:
        vspec, _, _ = _vertex_space(gen, v, up.policy)
        _, vmon = _vertex_monomial_gen(gen, v, up.policy)
        pushed = _push_free_forgetful(vspec.without_marking(x), vmon, x)
        blank = _strip_leg(_blank_vertex(gen, v), x)
        return _expand_vertex(down, blank, v, pushed)
    legs_at_v = [lab for (lab, lv, _) in gen.legs if lv == v]
    ends_at_v = sum((a == v) + (b == v) for (a, b, _, _) in gen.edges)
    if gen.genera[v] == 0 and legs_at_v == [x] and ends_at_v == 2:
        return _contract_node_bubble(down, gen, v, x)
    if gen.genera[v] == 0 and len(legs_at_v) == 2 and ends_at_v == 1:
        # rational tail through x: contraction moves the other marking
        # onto the adjacent component
        p = next(lab for lab in legs_at_v if lab != x)
        if gen.kappa[v] or gen.lam[v]:
            raise UnsupportedOperation("decorated rational tail pushforward")
        if any(e for (lab, lv, e) in gen.legs if lv == v):
            return zero(down)  # psi on the contracted 3-pointed vertex
        edge_idx = next(
            i for i, (a, b, _, _) in enumerate(gen.edges) if v in (a, b)
        )
        (a, b, av, aw) = gen.edges[edge_idx]
        tail_exp, core_exp = (av, aw) if a == v else (aw, av)
        if tail_exp:
            return zero(down)
        other = b if a == v else a
        keep = [u for u in range(gen.n_vertices()) if u != v]
        remap = {u: i for i, u in enumerate(keep)}
        genera = [gen.genera[u] for u in keep]
        edges = [
            (remap[p_], remap[q_], x_, y_)
            for i, (p_, q_, x_, y_) in enumerate(gen.edges)
            if i != edge_idx
        ]
        legs = [
            (lab, remap[lv], e) for (lab, lv, e) in gen.legs if lv != v
        ]
        legs.append((p, remap[other], core_exp))
        kappa = {remap[u]: gen.kappa[u] for u in keep}
        lam = {remap[u]: gen.lam[u] for u in keep}
        new = make_gen(genera, edges, legs, kappa, lam)
        return TautClass(down, {new: Fraction(1)})
    raise UnsupportedOperation(
        f"pushforward of {gen_to_string(gen)} along forgetting {x!r}"
    )


def _contract_node_bubble(down: ModuliSpec, gen: Gen, v: int, x: str) -> TautClass:
    """Forget x sitting alone on a genus-0 vertex with two edges: the
    bubble contracts and the two edges merge into one node."""
    if gen.kappa[v] or gen.lam[v]:
        raise UnsupportedOperation("decorated bubble pushforward")
    if any(e for (lab, lv, e) in gen.legs if lv == v):
        return zero(down)
    far = []  # (far vertex, far exp) of the two bubble edges
    edge_idxs = []
    for i, (a, b, av, aw) in enumerate(gen.edges):
        if a == v or b == v:
            edge_idxs.append(i)
            near_exp = av if a == v else aw
            if near_exp:
                return zero(down)  # psi at the 3-pointed bubble vanishes
            far.append((b, aw) if a == v else (a, av))
    keep = [u for u in range(gen.n_vertices()) if u != v]
    remap = {u: i for i, u in enumerate(keep)}
    genera = [gen.genera[u] for u in keep]
    edges = [
        (remap[p_], remap[q_], x_, y_)
        for i, (p_, q_, x_, y_) in enumerate(gen.edges)
        if i not in edge_idxs
    ]
    (u1, e1), (u2, e2) = far
    edges.append((remap[u1], remap[u2], e1, e2))
    legs = [(lab, remap[lv], e) for (lab, lv, e) in gen.legs if lv != v]
    kappa = {remap[u]: gen.kappa[u] for u in keep}
    lam = {remap[u]: gen.lam[u] for u in keep}
    new = make_gen(genera, edges, legs, kappa, lam)
    return TautClass(down, {new: Fraction(1)})


def _strip_leg(gen: Gen, x: str) -> Gen:
    legs = tuple((lab, v, e) for (lab, v, e) in gen.legs if lab != x)
    return Gen(gen.genera, gen.edges, legs, gen.kappa, gen.lam)


def _push_free_forgetful(down: ModuliSpec, gen: Gen, x: str) -> TautClass:
    a_x = 0
    psis = []
    for (lab, _, e) in gen.legs:
        if lab == x:
            a_x = e
        elif e:
            psis.append((lab, e))
    kaps = list(gen.kappa[0])
    lams = list(gen.lam[0])

    kap_choices = [[(i, j, e - j) for j in range(e + 1)] for (i, e) in kaps]
    psi_choices = [[(lab, j, e - j) for j in range(e + 1)] for (lab, e) in psis]

    out = zero(down)
    for kchoice in itertools.product(*kap_choices) if kap_choices else [()]:
        for pchoice in itertools.product(*psi_choices) if psi_choices else [()]:
            coeff = Fraction(1)
            psi_x_power = a_x
            pulled_kappa = []
            for (i, j, rest) in kchoice:
                coeff *= comb(j + rest, j)
                if j:
                    pulled_kappa.append((i, j))
                psi_x_power += i * rest
            pulled_psi: dict[str, int] = {}
            d_powers: dict[str, int] = {}
            for (lab, j, rest) in pchoice:
                coeff *= comb(j + rest, j)
                if j:
                    pulled_psi[lab] = j
                if rest:
                    d_powers[lab] = rest
            out = out + coeff * _integrate_fiber(
                down, pulled_kappa, lams, pulled_psi, d_powers, psi_x_power
            )
    return out


def _integrate_fiber(down, pulled_kappa, lams, pulled_psi, d_powers, psi_x_power):
    """pi_*( pull(monomial) . psi_x^j . prod D_p^(k_p) )."""
    if len(d_powers) >= 2:
        return zero(down)  # tails through x sharing x are disjoint
    if d_powers:
        if psi_x_power:
            return zero(down)  # psi_x restricted to the tail vanishes
        ((p, k),) = d_powers.items()
        sign = Fraction((-1) ** (k - 1))
        psi_mon = dict(pulled_psi)
        if k - 1:
            psi_mon[p] = psi_mon.get(p, 0) + k - 1
        return sign * monomial(down, pulled_kappa, lams, psi_mon)
    if psi_x_power == 0:
        return zero(down)
    j = psi_x_power - 1
    if j == 0:
        return Fraction(2 * down.genus - 2 + down.n) * monomial(
            down, pulled_kappa, lams, pulled_psi
        )
    return monomial(down, list(pulled_kappa) + [(j, 1)], lams, pulled_psi)


# --------------------------------------------------------------------------
# gluing maps


class ProductClass:
    """Class on a product of moduli factors: Fraction combination of tuples
    of per-factor generators."""

    __slots__ = ("spaces", "terms")

    def __init__(self, spaces: Sequence[ModuliSpec], terms=None):
        self.spaces = tuple(spaces)
        acc: dict[tuple[Gen, ...], Fraction] = {}
        for gens, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            canon = []
            keep = True
            for g in gens:
                cg, _ = canonicalize(g)
                if _prunable(cg):
                    keep = False
                    break
                canon.append(cg)
            if not keep:
                continue
            key = tuple(canon)
            acc[key] = acc.get(key, Fraction(0)) + coeff
        self.terms = {k: v for k, v in acc.items() if v != 0}

    @classmethod
    def from_factors(cls, factors: Sequence[TautClass]) -> "ProductClass":
        spaces = [f.space for f in factors]
        terms: dict = {}
        for combo in itertools.product(*(f.terms.items() for f in factors)):
            gens = tuple(g for g, _ in combo)
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            terms[gens] = terms.get(gens, Fraction(0)) + coeff
        return cls(spaces, terms)

    def __add__(self, other: "ProductClass") -> "ProductClass":
        if self.spaces != other.spaces:
            raise ValueError("factor mismatch")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return ProductClass(self.spaces, out)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar) -> "ProductClass":
        s = Fraction(scalar)
        return ProductClass(self.spaces, {k: s * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, ProductClass):
            return self.__rmul__(other)
        if self.spaces != other.spaces:
            raise ValueError("factor mismatch")
        out = ProductClass(self.spaces, {})
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                factors = []
                for sp, ga, gb in zip(self.spaces, ka, kb):
                    ta = TautClass(sp, {ga: Fraction(1)})
                    tb = TautClass(sp, {gb: Fraction(1)})
                    if ga.degree() <= 1 or gb.degree() <= 1:
                        factors.append(multiply(ta, tb))
                    else:
                        factors.append(_mul_poly(ta, tb))
                out = out + (va * vb) * ProductClass.from_factors(factors)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, ProductClass)
            and self.spaces == other.spaces
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.spaces, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def map_factor(self, i: int, fn) -> "ProductClass":
        """Apply a linear TautClass -> TautClass map to factor i."""
        new_space = fn(zero(self.spaces[i])).space
        acc: dict = {}
        for gens, coeff in self.terms.items():
            cls = fn(TautClass(self.spaces[i], {gens[i]: Fraction(1)}))
            for g2, c2 in cls.terms.items():
                key = gens[:i] + (g2,) + gens[i + 1 :]
                acc[key] = acc.get(key, Fraction(0)) + coeff * c2
        spaces = self.spaces[:i] + (new_space,) + self.spaces[i + 1 :]
        return ProductClass(spaces, acc)

    def __str__(self):
        if not self.terms:
            return "0"
        lines = []
        for gens in sorted(self.terms, key=lambda gs: tuple(map(_gen_sort_key, gs))):
            body = "  (x)  ".join(gen_to_string(g) for g in gens)
            lines.append(f"{self.terms[gens]}\t{body}")
        return "\n".join(lines)

    __repr__ = __str__


def glue_spaces(space: ModuliSpec, graph: Gen) -> list[ModuliSpec]:
    return [
        _vertex_space(graph, v, space.policy)[0] for v in range(graph.n_vertices())
    ]


def product_one(spaces: Sequence[ModuliSpec]) -> ProductClass:
    return ProductClass.from_factors([one(sp) for sp in spaces])


def pushforward_gluing(space: ModuliSpec, graph: Gen, pc: ProductClass) -> TautClass:
    """xi_{Gamma*} of a product class on the vertex factors of Gamma.  No
    automorphism factor is applied; callers building delta-type sums supply
    1/|Aut| themselves."""
    expected = glue_spaces(space, graph)
    if list(pc.spaces) != expected:
        raise ValueError("product factors do not match the gluing graph")
    out = zero(space)
    for gens, coeff in pc.terms.items():
        out = out + TautClass(space, {_assemble_glued(graph, gens): coeff})
    return out


def _assemble_glued(graph: Gen, gens: Sequence[Gen]) -> Gen:
    """Disjoint union of the factor generators, wired together along the
    gluing graph's edges via the slot labels."""
    offsets = []
    total = 0
    for g in gens:
        offsets.append(total)
        total += g.n_vertices()
    genera: list[int] = []
    kappa: dict[int, list] = {}
    lam: dict[int, list] = {}
    edges: list[tuple] = []
    legs: list[tuple] = []
    slot_at: dict[str, tuple[int, int]] = {}
    for v, g in enumerate(gens):
        off = offsets[v]
        genera.extend(g.genera)
        for sv in range(g.n_vertices()):
            kappa[off + sv] = list(g.kappa[sv])
            lam[off + sv] = list(g.lam[sv])
        for (a, b, av, aw) in g.edges:
            edges.append((off + a, off + b, av, aw))
        for (lab, lv, e) in g.legs:
            if lab.startswith("__e"):
                slot_at[lab] = (off + lv, e)
            else:
                legs.append((lab, off + lv, e))
    for i, (a, b, av, aw) in enumerate(graph.edges):
        va, ea = slot_at[f"__e{i}a"]
        vb, eb = slot_at[f"__e{i}b"]
        edges.append((va, vb, av + ea, aw + eb))
    return make_gen(genera, edges, legs, kappa, lam)


def pullback_gluing(c: TautClass, graph: Gen) -> ProductClass:
    """xi_Gamma^*: free monomials by the table rows (lambda and kappa sum
    over vertices, psi restricts, total boundary gives vertex boundaries
    minus psi at the glued half edges); one-edge generators by self-excess
    plus transverse vertex splits."""
    space = c.space
    spaces = glue_spaces(space, graph)
    out = ProductClass(spaces, {})
    for gen, coeff in c.terms.items():
        if gen.is_trivial_graph():
            piece = _pull_free_gluing(spaces, graph, gen)
        else:
            piece = _pull_boundary_gluing(spaces, graph, gen)
        out = out + coeff * piece
    return out


def _pull_free_gluing(spaces, graph: Gen, gen: Gen) -> ProductClass:
    out = product_one(spaces)
    for (i, e) in gen.lam[0]:
        single = ProductClass(spaces, {})
        for v in range(len(spaces)):
            factors = [one(sp) for sp in spaces]
            factors[v] = lam(spaces[v], i)
            single = single + ProductClass.from_factors(factors)
        for _ in range(e):
            out = out * single
    for (i, e) in gen.kappa[0]:
        single = ProductClass(spaces, {})
        for v in range(len(spaces)):
            factors = [one(sp) for sp in spaces]
            factors[v] = kappa(spaces[v], i)
            single = single + ProductClass.from_factors(factors)
        for _ in range(e):
            out = out * single
    for (lab, _, e) in gen.legs:
        if not e:
            continue
        v = graph.leg_vertex(lab)
        factors = [one(sp) for sp in spaces]
        factors[v] = psi(spaces[v], lab, e)
        out = out * ProductClass.from_factors(factors)
    return out


def _halfedge_slots(graph: Gen):
    slots = []
    for i, (a, b, _, _) in enumerate(graph.edges):
        slots.append((a, f"__e{i}a"))
        slots.append((b, f"__e{i}b"))
    return slots


def _decoration_to_factors(spaces, moved: Gen) -> list[Gen]:
    """moved carries the gluing graph's structure; read its decorations as
    per-vertex trivial generators on the factor spaces."""
    factors = []
    for v, sp in enumerate(spaces):
        exps: dict[str, int] = {}
        for (lab, lv, e) in moved.legs:
            if lv == v:
                exps[lab] = e
        for i, (a, b, av, aw) in enumerate(moved.edges):
            if a == v:
                exps[f"__e{i}a"] = av
            if b == v:
                exps[f"__e{i}b"] = aw
        factors.append(
            make_gen(
                (sp.genus,),
                (),
                [(m, 0, exps.get(m, 0)) for m in sp.markings],
                {0: moved.kappa[v]},
                {0: moved.lam[v]},
            )
        )
    return factors


def _pull_boundary_gluing(spaces, graph: Gen, gen: Gen) -> ProductClass:
    if len(gen.edges) != 1 or len(graph.edges) != 1:
        raise UnsupportedOperation("gluing pullback for one-edge graphs only")
    out = ProductClass(spaces, {})
    g_undec = _undecorated(graph)
    c_undec, c_aut = canonicalize(_undecorated(gen))
    if canonicalize(g_undec)[0] == c_undec:
        for ident in _isomorphisms(_undecorated(gen), g_undec):
            moved = _apply_perm(gen, ident)
            base_factors = _decoration_to_factors(spaces, moved)
            for v_end, lab_end in _halfedge_slots(graph):
                factors = [
                    TautClass(sp, {g: Fraction(1)})
                    for sp, g in zip(spaces, base_factors)
                ]
                factors[v_end] = multiply(psi(spaces[v_end], lab_end), factors[v_end])
                out = out - ProductClass.from_factors(factors)
    # transverse vertex splits
    if any(sp.policy == "stable" for sp in spaces):
        raise UnsupportedOperation(
            "boundary gluing pullback implemented on compact type only"
        )
    for v in range(len(spaces)):
        vspec = spaces[v]
        for sgen, saut in one_edge_graphs(vspec):
            probe = _substitute_vertex(g_undec, v, sgen)
            contracted = _contract_many(probe, _old_edge_indices(probe, sgen))
            if contracted is None or canonicalize(contracted)[0] != c_undec:
                continue
            for decorated in _transport_tail_decoration(gen, sgen, g_undec, v):
                factors = [
                    _trivial_gen(sp) if w != v else decorated
                    for w, sp in enumerate(spaces)
                ]
                out = out + Fraction(c_aut, saut) * ProductClass(
                    spaces, {tuple(factors): Fraction(1)}
                )
    return out


def _old_edge_indices(big: Gen, sgen: Gen) -> list[int]:
    nv = big.n_vertices()
    news = set(range(nv - sgen.n_vertices(), nv))
    return [
        i for i, (a, b, _, _) in enumerate(big.edges) if not (a in news and b in news)
    ]


def _contract_many(gen: Gen, indices) -> Gen | None:
    if len(indices) != 1:
        return None  # only one-edge graphs are split here
    try:
        return _contract_edge(gen, indices[0])
    except UnsupportedOperation:
        return None


def _transport_tail_decoration(
    gen: Gen, sgen: Gen, g_undec: Gen, v: int
) -> list[Gen]:
    """Decorate the split generator's edge with gen's half-edge psi
    exponents, keeping every orientation whose old-edge contraction
    reproduces the decorated gen."""
    if any(gen.kappa) or any(gen.lam) or any(e for (_, _, e) in gen.legs):
        raise UnsupportedOperation("transverse transport outside psi-edge span")
    (_, _, xa, xb) = gen.edges[0]
    (p, q, bp, bq) = sgen.edges[0]
    target = canonicalize(gen)[0]
    kept = []
    for (ea, eb) in sorted({(xa, xb), (xb, xa)}):
        trial = make_gen(
            sgen.genera,
            [(p, q, bp + ea, bq + eb)],
            sgen.legs,
            dict(enumerate(sgen.kappa)),
            dict(enumerate(sgen.lam)),
        )
        big = _substitute_vertex(g_undec, v, trial)
        con = _contract_many(big, _old_edge_indices(big, trial))
        if con is not None and canonicalize(con)[0] == target:
            kept.append(trial)
    return kept


# --------------------------------------------------------------------------
# serialization


def gen_to_string(gen: Gen) -> str:
    parts = ["V " + " ".join(str(g) for g in gen.genera)]
    if gen.edges:
        parts.append("E " + " ".join(f"{a}-{b}" for (a, b, _, _) in gen.edges))
    if gen.legs:
        parts.append("L " + " ".join(f"{lab}@{v}" for (lab, v, _) in gen.legs))
    decor = []
    for v in range(gen.n_vertices()):
        for (i, e) in gen.kappa[v]:
            decor.append(f"v{v}:kappa{i}^{e}")
        for (i, e) in gen.lam[v]:
            decor.append(f"v{v}:lambda{i}^{e}")
    for (lab, v, e) in gen.legs:
        if e:
            decor.append(f"l{lab}:psi^{e}")
    for i, (a, b, av, aw) in enumerate(gen.edges):
        if av:
            decor.append(f"e{i}a:psi^{av}")
        if aw:
            decor.append(f"e{i}b:psi^{aw}")
    if decor:
        parts.append("decor " + " ".join(decor))
    return "; ".join(parts)


def class_to_string(c: TautClass) -> str:
    return str(c)


def parse_gen(text: str) -> Gen:
    """Parse the ``V ...; E ...; L ...; decor ...`` format."""
    genera: list[int] = []
    edges: list[list[int]] = []
    legs: list[list] = []
    decor: list[str] = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        tag, _, rest = chunk.partition(" ")
        items = rest.split()
        if tag == "V":
            genera = [int(t) for t in items]
        elif tag == "E":
            for t in items:
                a, _, b = t.partition("-")
                edges.append([int(a), int(b), 0, 0])
        elif tag == "L":
            for t in items:
                lab, _, v = t.partition("@")
                legs.append([lab, int(v), 0])
        elif tag == "decor":
            decor = items
        else:
            raise ValueError(f"unknown section {tag!r}")
    kappa: dict[int, list] = {}
    lam_: dict[int, list] = {}
    for item in decor:
        where, _, what = item.partition(":")
        sym, _, exp = what.partition("^")
        e = int(exp) if exp else 1
        if where.startswith("v"):
            v = int(where[1:])
            if sym.startswith("kappa"):
                kappa.setdefault(v, []).append((int(sym[5:]), e))
            elif sym.startswith("lambda"):
                lam_.setdefault(v, []).append((int(sym[6:]), e))
            else:
                raise ValueError(f"unknown vertex symbol {sym!r}")
        elif where.startswith("e"):
            idx = int(where[1:-1])
            side = where[-1]
            if side == "a":
                edges[idx][2] = e
            else:
                edges[idx][3] = e
        elif where.startswith("l"):
            lab = where[1:]
            for leg in legs:
                if leg[0] == lab:
                    leg[2] = e
        else:
            raise ValueError(f"unknown decor target {where!r}")
    return make_gen(
        genera, [tuple(e) for e in edges], [tuple(l) for l in legs], kappa, lam_
    )
