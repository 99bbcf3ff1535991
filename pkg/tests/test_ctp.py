import random

import pytest

from torcycle.ctp import (
    BOTH,
    MINUS,
    PLUS,
    Component,
    HalfEdgePairing,
    MalformedPairingError,
    check_pairing,
    completion,
    component_dimension,
    enumerate_components,
    enumerate_stable_trees,
    one_edge_intersections,
    pairing_equivalent,
)


class TestTrees:
    def test_genus1(self):
        trees = enumerate_stable_trees(1, positive_only=True)
        assert len(trees) == 1
        assert trees[0].genera == (1,)

    def test_genus2(self):
        trees = enumerate_stable_trees(2, positive_only=True)
        shapes = sorted(tuple(sorted(t.genera)) for t in trees)
        assert shapes == [(1, 1), (2,)]

    def test_genus4_divisor_level(self):
        trees = enumerate_stable_trees(4, positive_only=True, max_edges=1)
        shapes = sorted(tuple(sorted(t.genera)) for t in trees)
        assert shapes == [(1, 3), (2, 2), (4,)]

    def test_guard(self):
        with pytest.raises(ValueError):
            enumerate_stable_trees(9)


class TestComponents:
    def test_genus4_divisor_level(self):
        comps = enumerate_components(4, max_edges=1)
        assert len(comps) == 5
        labels = sorted(c.label() for c in comps)
        assert labels == ["(1,3)[+]", "(1,3)[-]", "(2,2)[+-+-]", "(4)[+]", "(4)[-]"]

    def test_genus5_zero_edges(self):
        comps = enumerate_components(5, max_edges=0)
        assert len(comps) == 2
        assert {c.sigma[0] for c in comps} == {PLUS, MINUS}

    def test_genus2(self):
        comps = enumerate_components(2, max_edges=None)
        # single-vertex [2] forced +-; the 1-1 pairings die by the elliptic
        # pair condition
        assert len(comps) == 1
        assert comps[0].sigma == (BOTH,)

    def test_swap_closure(self):
        comps = enumerate_components(4, max_edges=1)
        swapped = {c.swap() for c in comps}
        assert swapped == set(comps)

    def test_dimensions_genus4(self):
        comps = enumerate_components(4, max_edges=1)
        dims = sorted((c.label(), component_dimension(c)) for c in comps)
        assert dims == [
            ("(1,3)[+]", 9),
            ("(1,3)[-]", 9),
            ("(2,2)[+-+-]", 10),
            ("(4)[+]", 9),
            ("(4)[-]", 9),
        ]

    def test_zero_edge_dimension_is_3g_minus_3(self):
        for g in range(2, 9):
            comps = enumerate_components(g, max_edges=0)
            for c in comps:
                assert component_dimension(c) == 3 * g - 3

    def test_roundtrip_serialization(self):
        comps = enumerate_components(4, max_edges=1)
        for c in comps:
            assert Component.from_string(c.to_string()) == c


class TestPairings:
    def test_single_two_cycle(self):
        p = HalfEdgePairing(2, 1, 1, blue=((0, 0),), red=((0, 0),))
        assert check_pairing(p)

    def test_six_cycle_rejected(self):
        p = HalfEdgePairing(
            5, 3, 3,
            blue=((0, 0), (1, 1), (2, 2)),
            red=((0, 1), (1, 2), (2, 0)),
        )
        verdict = check_pairing(p)
        assert not verdict
        assert "cycle of length 6" in verdict.reason

    def test_two_cycle_bound(self):
        blue = tuple((i, i) for i in range(7))
        red = tuple((i, i) for i in range(7))
        p = HalfEdgePairing(2, 7, 7, blue=blue, red=red)
        verdict = check_pairing(p)
        assert not verdict
        assert "exceed" in verdict.reason

    def test_malformed(self):
        with pytest.raises(MalformedPairingError):
            HalfEdgePairing(2, 2, 1, blue=((0, 0), (1, 0)))

    def test_long_path_rejected(self):
        p = HalfEdgePairing(
            5, 3, 2,
            blue=((0, 0), (1, 1)),
            red=((1, 0), (2, 1)),
        )
        verdict = check_pairing(p)
        assert not verdict
        assert "path of length 4" in verdict.reason

    def test_equivalent_three_paths(self):
        # both are length-3 paths obtained from the same completed 4-cycle
        # by deleting one edge
        p = HalfEdgePairing(3, 2, 2, blue=((0, 0), (1, 1)), red=((1, 0),))
        q = HalfEdgePairing(3, 2, 2, blue=((0, 0),), red=((1, 0), (0, 1)))
        assert pairing_equivalent(p, q)
        assert completion(p) == completion(q)

    def test_inequivalent_complementary_coloring(self):
        p = HalfEdgePairing(3, 2, 2, blue=((0, 0), (1, 1)), red=((1, 0),))
        q = HalfEdgePairing(3, 2, 2, blue=((0, 1),), red=((0, 0), (1, 1)))
        assert not pairing_equivalent(p, q)

    def test_reflexive(self):
        p = HalfEdgePairing(3, 2, 2, blue=((0, 0), (1, 1)), red=((1, 0),))
        assert pairing_equivalent(p, p)

    def test_two_vs_four_cycle(self):
        p = HalfEdgePairing(3, 2, 2, blue=((0, 0), (1, 1)), red=((0, 0), (1, 1)))
        q = HalfEdgePairing(3, 2, 2, blue=((0, 0), (1, 1)), red=((0, 1), (1, 0)))
        assert not pairing_equivalent(p, q)


def random_pairing(rng, max_side=10):
    left = rng.randint(1, max_side)
    right = rng.randint(1, max_side)
    blue = []
    red = []
    for color, acc in (("b", blue), ("r", red)):
        ls = list(range(left))
        rs = list(range(right))
        rng.shuffle(ls)
        rng.shuffle(rs)
        k = rng.randint(0, min(left, right))
        acc.extend(zip(ls[:k], rs[:k]))
    return HalfEdgePairing(rng.randint(2, 5), left, right, tuple(blue), tuple(red))


def oracle_check(p: HalfEdgePairing):
    """Independent union-find decomposition."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    nodes = p.nodes()
    for v in nodes:
        parent[v] = v
    edges = p.colored_edges()
    for (u, v, _) in edges:
        union(u, v)
    comp_edges: dict = {}
    comp_verts: dict = {}
    for v in nodes:
        comp_verts.setdefault(find(v), set()).add(v)
    for (u, v, c) in edges:
        comp_edges.setdefault(find(u), []).append((u, v, c))
    two_cycles = 0
    for root, verts in comp_verts.items():
        ne = len(comp_edges.get(root, []))
        nv = len(verts)
        if ne == nv:
            if ne == 2:
                two_cycles += 1
            elif ne != 4:
                return False
        elif ne == nv - 1:
            if ne > 3:
                return False
        else:
            return False
    return two_cycles <= 2 * p.genus + 2


class TestPairingOracle:
    def test_vs_bruteforce_10k(self):
        rng = random.Random(424242)
        for _ in range(10_000):
            p = random_pairing(rng)
            assert bool(check_pairing(p)) == oracle_check(p)

    def test_equivalence_laws(self):
        rng = random.Random(777)
        valid = []
        while len(valid) < 60:
            p = random_pairing(rng, max_side=5)
            if check_pairing(p):
                valid.append(p)
        for p in valid:
            assert pairing_equivalent(p, p)
        for p in valid:
            for q in valid:
                assert pairing_equivalent(p, q) == pairing_equivalent(q, p)
        for p in valid:
            for q in valid:
                for r in valid:
                    if pairing_equivalent(p, q) and pairing_equivalent(q, r):
                        assert pairing_equivalent(p, r)


class TestIntersections:
    def test_z_table(self):
        table = {z.name: z for z in one_edge_intersections(4)}
        for name in ("Z1", "Z2", "Z3", "Z4"):
            assert table[name].dimension == 8
            assert table[name].divisorial

    def test_pushforwards(self):
        table = {z.name: z for z in one_edge_intersections(4)}
        assert table["Z1"].pushforward == "delta_A"
        assert table["Z2"].pushforward == "delta_A"
        assert table["Z3"].pushforward == "delta_B"
        assert table["Z4"].pushforward == "delta_B"

    def test_diagonal_overlap_flagged(self):
        table = {z.name: z for z in one_edge_intersections(4)}
        dd = table["Delta+Delta-"]
        assert not dd.divisorial
        assert dd.dimension == 7
        assert "hyperelliptic" in dd.note
