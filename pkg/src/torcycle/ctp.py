"""Component-level combinatorics of the Torelli self-fiber product:
genus-labeled stable trees, components (tree pairs with a genus-preserving
vertex pairing and sign data), the dimension formula, the bipartite
half-edge-pairing admissibility check, and the one-edge intersection
strata in genus 4.

A component is a tuple (T1, T2, nu, sigma) where T1, T2 are trees with all
vertex genera positive, nu is a genus-preserving vertex bijection, and
sigma assigns +, - or +- to vertices of genus >= 2 (+- exactly for genus
2, where hyperellipticity makes both automorphisms of the polarized factor
available).  Two neighboring genus-1 vertices of T1 may not map to
neighbors of T2 (such strata lie in the closure of a genus-2 merger).

Component counts are anchored against known lists at genus 2, 4 and 5
(divisor level); counts this module produces for other inputs are new
data, not cross-checked against an external source.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .tautring import (
    Gen,
    _apply_perm,
    _gen_sort_key,
    canonicalize,
    make_gen,
    parse_gen,
)

PLUS, MINUS, BOTH = "+", "-", "+-"

#: Hard cap on unbounded tree enumeration (vertices); beyond this the caller
#: must pass max_edges.
UNBOUNDED_GENUS_LIMIT = 8


# --------------------------------------------------------------------------
# stable trees


def _labeled_trees(n: int) -> list[tuple[tuple[int, int], ...]]:
    """All labeled trees on n vertices via reverse Pruefer decoding."""
    if n == 1:
        return [()]
    if n == 2:
        return [((0, 1),)]
    out = []
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for s in seq:
            degree[s] += 1
        edges = []
        ptr = list(seq)
        leaves = sorted(i for i in range(n) if degree[i] == 1)
        import heapq

        heapq.heapify(leaves)
        deg = degree[:]
        for s in seq:
            leaf = heapq.heappop(leaves)
            edges.append((leaf, s))
            deg[s] -= 1
            if deg[s] == 1:
                heapq.heappush(leaves, s)
        u = heapq.heappop(leaves)
        v = heapq.heappop(leaves)
        edges.append((u, v))
        out.append(tuple(edges))
    return out


@lru_cache(maxsize=64)
def _labeled_trees_cached(n: int):
    return _labeled_trees(n)


def _tree_stable(genera, edges, allow_single_genus1: bool) -> bool:
    n = len(genera)
    deg = [0] * n
    for (a, b) in edges:
        deg[a] += 1
        deg[b] += 1
    for v in range(n):
        if genera[v] == 0 and deg[v] < 3:
            return False
        if genera[v] == 1 and deg[v] < 1:
            if not (allow_single_genus1 and n == 1):
                return False
    return True


def enumerate_stable_trees(
    g: int, positive_only: bool = True, max_edges: int | None = None
) -> list[Gen]:
    """Duplicate-free list of genus-labeled stable trees of total genus g,
    up to isomorphism.  ``positive_only`` excludes genus-0 vertices.  The
    one-vertex genus-1 tree is admitted at g = 1 (the moduli of a single
    unpointed genus-1 factor inside a fiber-product parametrization).
    """
    if g < 1:
        raise ValueError("genus must be >= 1")
    if max_edges is None:
        if g > UNBOUNDED_GENUS_LIMIT:
            raise ValueError(
                f"unbounded enumeration capped at genus {UNBOUNDED_GENUS_LIMIT}; "
                "pass max_edges"
            )
        max_n = g if positive_only else 3 * g  # crude stability bound
    else:
        max_n = max_edges + 1
    found: dict = {}
    for n in range(1, max_n + 1):
        min_genus = 1 if positive_only else 0
        for genera in itertools.product(range(min_genus, g + 1), repeat=n):
            if sum(genera) != g:
                continue
            for edges in _labeled_trees_cached(n):
                if not _tree_stable(genera, edges, allow_single_genus1=True):
                    continue
                gen = make_gen(genera, edges)
                cg, _ = canonicalize(gen)
                found[cg] = True
    return sorted(found.keys(), key=_gen_sort_key)


# --------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class Component:
    """Irreducible component datum (T1, T2, nu, sigma) in canonical form.

    ``nu[v]`` is the T2-vertex paired with T1-vertex v; ``sigma[v]`` is
    "+", "-", "+-" for genus >= 2 vertices and None below.
    """

    t1: Gen
    t2: Gen
    nu: tuple[int, ...]
    sigma: tuple[str | None, ...]

    def dimension(self) -> int:
        return component_dimension(self)

    def label(self) -> str:
        shape = ",".join(str(x) for x in sorted(self.t1.genera))
        signs = "".join(s for s in self.sigma if s) or ""
        return f"({shape})" + (f"[{signs}]" if signs else "")

    def swap(self) -> "Component":
        inv = [0] * len(self.nu)
        for v, w in enumerate(self.nu):
            inv[w] = v
        sigma2 = [None] * len(self.nu)
        for v, w in enumerate(self.nu):
            sigma2[w] = self.sigma[v]
        return canonical_component(self.t2, self.t1, tuple(inv), tuple(sigma2))

    def to_string(self) -> str:
        from .tautring import gen_to_string

        nu = " ".join(f"{v}>{w}" for v, w in enumerate(self.nu))
        sig = " ".join(
            f"{v}:{s}" for v, s in enumerate(self.sigma) if s is not None
        )
        return (
            f"T1 {gen_to_string(self.t1)} | T2 {gen_to_string(self.t2)} | "
            f"nu: {nu} | sigma: {sig}"
        )

    @classmethod
    def from_string(cls, text: str) -> "Component":
        parts = [p.strip() for p in text.split("|")]
        data = {}
        for p in parts:
            tag, _, rest = p.partition(" ")
            data[tag.rstrip(":")] = rest.strip()
        t1 = parse_gen(data["T1"])
        t2 = parse_gen(data["T2"])
        nu = [0] * t1.n_vertices()
        for item in data["nu"].split():
            v, _, w = item.partition(">")
            nu[int(v)] = int(w)
        sigma: list = [None] * t1.n_vertices()
        for item in data.get("sigma", "").split():
            if not item:
                continue
            v, _, s = item.partition(":")
            sigma[int(v)] = s
        return canonical_component(t1, t2, tuple(nu), tuple(sigma))


def _graph_autos(gen: Gen) -> list[list[int]]:
    nv = gen.n_vertices()
    key = _gen_sort_key(gen)
    return [
        list(p)
        for p in itertools.permutations(range(nv))
        if _gen_sort_key(_apply_perm(gen, list(p))) == key
    ]


def canonical_component(t1: Gen, t2: Gen, nu, sigma) -> Component:
    """Canonical representative under simultaneous relabeling of both
    trees (nu and sigma ride along as vertex colors)."""
    c1, _ = canonicalize(t1)
    c2, _ = canonicalize(t2)
    iso1 = _isos(t1, c1)
    iso2 = _isos(t2, c2)
    best = None
    for p1 in iso1:
        for p2 in iso2:
            nu2 = [0] * len(nu)
            sig2: list = [None] * len(nu)
            for v in range(len(nu)):
                nu2[p1[v]] = p2[nu[v]]
                sig2[p1[v]] = sigma[v]
            key = (tuple(nu2), tuple(x or "" for x in sig2))
            if best is None or key < best:
                best = key
                chosen = (tuple(nu2), tuple(sig2))
    return Component(c1, c2, chosen[0], chosen[1])


def _isos(gen_from: Gen, gen_to: Gen) -> list[list[int]]:
    nv = gen_from.n_vertices()
    target = _gen_sort_key(gen_to)
    return [
        list(p)
        for p in itertools.permutations(range(nv))
        if _gen_sort_key(_apply_perm(gen_from, list(p))) == target
    ]


def _elliptic_pairs_ok(t1: Gen, t2: Gen, nu) -> bool:
    e2 = {(min(a, b), max(a, b)) for (a, b, _, _) in t2.edges}
    for (a, b, _, _) in t1.edges:
        if t1.genera[a] == 1 and t1.genera[b] == 1:
            img = (min(nu[a], nu[b]), max(nu[a], nu[b]))
            if img in e2:
                return False
    return True


def enumerate_components(g: int, max_edges: int | None = None) -> list[Component]:
    """All components (T1, T2, nu, sigma) of the genus-g fiber product up
    to simultaneous relabeling.  ``max_edges`` defaults to 1 for g >= 4
    (divisor-level scope)."""
    if g < 2:
        raise ValueError("component enumeration needs genus >= 2")
    if max_edges is None and g >= 4:
        max_edges = 1
    trees = enumerate_stable_trees(g, positive_only=True, max_edges=max_edges)
    out: dict = {}
    for t1 in trees:
        for t2 in trees:
            if sorted(t1.genera) != sorted(t2.genera):
                continue
            for nu in _genus_preserving_bijections(t1, t2):
                if not _elliptic_pairs_ok(t1, t2, nu):
                    continue
                for sigma in _sign_choices(t1):
                    comp = canonical_component(t1, t2, nu, sigma)
                    out[comp] = True
    return sorted(
        out.keys(),
        key=lambda c: (_gen_sort_key(c.t1), _gen_sort_key(c.t2), c.nu,
                       tuple(s or "" for s in c.sigma)),
    )


def _genus_preserving_bijections(t1: Gen, t2: Gen):
    by_genus: dict[int, list[int]] = {}
    for w, gw in enumerate(t2.genera):
        by_genus.setdefault(gw, []).append(w)
    slots = [by_genus[gv] for gv in t1.genera]
    for choice in itertools.product(*slots):
        if len(set(choice)) == len(choice):
            yield tuple(choice)


def _sign_choices(t1: Gen):
    options = []
    for gv in t1.genera:
        if gv >= 3:
            options.append((PLUS, MINUS))
        elif gv == 2:
            options.append((BOTH,))
        else:
            options.append((None,))
    yield from itertools.product(*options)


def component_dimension(comp: Component) -> int:
    """sum over T1 vertices of 3g(v) - 3 + 2 d(v) - [g(v) = 1]."""
    t1 = comp.t1
    total = 0
    for v, gv in enumerate(t1.genera):
        total += 3 * gv - 3 + 2 * t1.valence(v) - (1 if gv == 1 else 0)
    return total


# --------------------------------------------------------------------------
# bipartite half-edge pairings


class MalformedPairingError(ValueError):
    pass


@dataclass(frozen=True)
class HalfEdgePairing:
    """Bipartite multigraph on the half edges at a paired vertex: blue
    edges record the identity-side pairing, red ones the involution side."""

    genus: int
    left: int
    right: int
    blue: tuple[tuple[int, int], ...] = ()
    red: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        for (color, edges) in (("blue", self.blue), ("red", self.red)):
            seen_l: set[int] = set()
            seen_r: set[int] = set()
            for (i, j) in edges:
                if not (0 <= i < self.left and 0 <= j < self.right):
                    raise MalformedPairingError("half-edge index out of range")
                if i in seen_l or j in seen_r:
                    raise MalformedPairingError(
                        f"vertex with two {color} edges"
                    )
                seen_l.add(i)
                seen_r.add(j)

    def nodes(self):
        return [("L", i) for i in range(self.left)] + [
            ("R", j) for j in range(self.right)
        ]

    def colored_edges(self):
        return [(("L", i), ("R", j), "b") for (i, j) in self.blue] + [
            (("L", i), ("R", j), "r") for (i, j) in self.red
        ]


@dataclass(frozen=True)
class PairingVerdict:
    ok: bool
    reason: str = ""

    def __bool__(self):
        return self.ok


def _components_of(p: HalfEdgePairing):
    """Connected components as (vertex set, edge list)."""
    adj: dict = {v: [] for v in p.nodes()}
    for (u, v, c) in p.colored_edges():
        adj[u].append((v, c))
        adj[v].append((u, c))
    seen: set = set()
    comps = []
    for start in p.nodes():
        if start in seen:
            continue
        stack = [start]
        seen.add(start)
        verts = {start}
        edges = set()
        while stack:
            u = stack.pop()
            for (v, c) in adj[u]:
                edges.add((tuple(sorted((u, v))), c))
                if v not in seen:
                    seen.add(v)
                    verts.add(v)
                    stack.append(v)
        comps.append((verts, edges))
    return comps


def check_pairing(p: HalfEdgePairing) -> PairingVerdict:
    """Admissibility: every cycle has length 2 or 4, every path length at
    most 3, and at most 2g+2 cycles of length 2 (those pin Weierstrass
    points)."""
    two_cycles = 0
    for verts, edges in _components_of(p):
        ne, nv = len(edges), len(verts)
        if ne == nv:  # cycle
            if ne == 2:
                two_cycles += 1
            elif ne != 4:
                return PairingVerdict(False, f"cycle of length {ne}")
        elif ne == nv - 1:  # path (possibly a single vertex)
            if ne > 3:
                return PairingVerdict(False, f"path of length {ne}")
        else:
            return PairingVerdict(False, "component is neither path nor cycle")
    bound = 2 * p.genus + 2
    if two_cycles > bound:
        return PairingVerdict(
            False, f"{two_cycles} two-cycles exceed the bound {bound}"
        )
    return PairingVerdict(True)


def completion(p: HalfEdgePairing) -> frozenset:
    """Close every length-3 path into a 4-cycle (two edges of each color);
    the completed edge set is the equivalence-class invariant."""
    edges = set()
    for (u, v, c) in p.colored_edges():
        edges.add((tuple(sorted((u, v))), c))
    for verts, comp_edges in _components_of(p):
        if len(comp_edges) == 3 and len(verts) == 4:
            degree: dict = {}
            colors: dict = {}
            for (pair, c) in comp_edges:
                for x in pair:
                    degree[x] = degree.get(x, 0) + 1
                    colors.setdefault(x, []).append(c)
            ends = [x for x in verts if degree.get(x, 0) == 1]
            assert len(ends) == 2
            # the closing edge takes the color missing at the endpoints
            used = set(colors[ends[0]])
            close_color = "r" if used == {"b"} else "b"
            edges.add((tuple(sorted(ends)), close_color))
    return frozenset(edges)


def pairing_equivalent(p: HalfEdgePairing, q: HalfEdgePairing) -> bool:
    if not check_pairing(p) or not check_pairing(q):
        raise ValueError("equivalence is defined for admissible pairings")
    if (p.left, p.right, p.genus) != (q.left, q.right, q.genus):
        return False
    return completion(p) == completion(q)


# --------------------------------------------------------------------------
# intersections at the divisor level, genus 4


@dataclass(frozen=True)
class IntersectionStratum:
    name: str
    first: str
    second: str
    dimension: int
    divisorial: bool
    pushforward: str
    note: str = ""


def _find_g4_components():
    comps = enumerate_components(4, max_edges=1)
    named = {}
    for c in comps:
        genera = sorted(c.t1.genera)
        if genera == [4]:
            named["Delta+" if c.sigma[0] == PLUS else "Delta-"] = c
        elif genera == [1, 3]:
            s = next(x for x in c.sigma if x)
            named["A+" if s == PLUS else "A-"] = c
        elif genera == [2, 2]:
            named["B"] = c
    return named


def one_edge_intersections(g: int = 4) -> list[IntersectionStratum]:
    """The divisor-level intersection strata of the genus-4 fiber product:
    Z1..Z4 of dimension 8 (full half-edge pairing added to the one-edge
    components, matching signs), plus the hyperelliptic-supported
    Delta+ . Delta- overlap flagged as non-divisorial."""
    if g != 4:
        raise ValueError("one-edge intersection table implemented for genus 4")
    named = _find_g4_components()
    for key in ("Delta+", "Delta-", "A+", "A-", "B"):
        if key not in named:
            raise RuntimeError("genus-4 component enumeration incomplete")

    out = []
    # Delta^s meets A^s: pair the half edges at the genus-3 vertices with
    # the pairing colored by the sign; dimensions 1 + (9 - 3 + 1 + 1 - 1)
    for sign, d_name, a_name, zname in (
        (PLUS, "Delta+", "A+", "Z1"),
        (MINUS, "Delta-", "A-", "Z2"),
    ):
        pairing = HalfEdgePairing(
            genus=3, left=1, right=1,
            blue=(((0, 0),) if sign == PLUS else ()),
            red=(((0, 0),) if sign == MINUS else ()),
        )
        assert check_pairing(pairing)
        dim = _paired_dimension_13(named[a_name], m_g3=1)
        out.append(
            IntersectionStratum(
                zname, d_name, a_name, dim, dim == 8, "delta_A",
                "full half-edge pairing at the genus-3 factor",
            )
        )
    # Delta^s meets B: blue (resp. red) pairing at both genus-2 vertices
    for sign, d_name, zname in ((PLUS, "Delta+", "Z3"), (MINUS, "Delta-", "Z4")):
        pairing = HalfEdgePairing(
            genus=2, left=1, right=1,
            blue=(((0, 0),) if sign == PLUS else ()),
            red=(((0, 0),) if sign == MINUS else ()),
        )
        assert check_pairing(pairing)
        dim = _paired_dimension_22()
        out.append(
            IntersectionStratum(
                zname, d_name, "B", dim, dim == 8, "delta_B",
                "matching node identification on both genus-2 factors",
            )
        )
    # Delta+ meets Delta-: supported on hyperelliptic curves, codim >= 2
    out.append(
        IntersectionStratum(
            "Delta+Delta-", "Delta+", "Delta-", 2 * 4 - 1, False, "",
            "hyperelliptic-supported; excluded from the divisor ledger",
        )
    )
    return out


def _paired_dimension_13(a_comp: Component, m_g3: int) -> int:
    """(1,3)-component with m matched half-edge pairs at the genus-3
    vertices: genus-1 factor keeps d + d' - 1, the genus-3 factor drops one
    modulus per matched pair."""
    total = 0
    for v, gv in enumerate(a_comp.t1.genera):
        d1 = a_comp.t1.valence(v)
        d2 = a_comp.t2.valence(a_comp.nu[v])
        if gv == 1:
            total += d1 + d2 - 1
        else:
            total += 3 * gv - 3 + d1 + d2 - m_g3
    return total


def _paired_dimension_22() -> int:
    """(2,2)-component with one matched pair at each vertex: per genus-2
    vertex the bipartite graph has one non-2-cycle component, so the factor
    is (2g-1) + 1 = 4 dimensional."""
    return 2 * ((2 * 2 - 1) + 1)
