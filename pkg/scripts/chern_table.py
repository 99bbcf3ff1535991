#!/usr/bin/env python3
"""Tabulate first and second Chern classes of moduli tangent bundles
across a (genus, markings) grid, plus the abelian-side characters."""

import sys

sys.path.insert(0, "src")

from torcycle import chern
from torcycle.cli import pretty_class
from torcycle.tautring import ModuliSpec


def main():
    print("first Chern class of the tangent bundle (compact type):")
    for g, n in ((1, 1), (2, 0), (2, 1), (3, 1), (3, 2), (4, 0), (5, 0)):
        space = ModuliSpec(g, tuple(f"m{i}" for i in range(n)))
        print(f"  (g,n)=({g},{n}): {pretty_class(chern.c1_tangent(space))}")

    print("\nsecond Chern class at genus 4, no markings:")
    c2 = chern.chern_tangent_moduli(ModuliSpec(4, ()), 2)[1]
    print(f"  {pretty_class(c2)}")

    print("\nabelian-side characters (genus 5):")
    for m in (1, 2, 3):
        raw = chern.ch_tangent_Ag(5, m)
        red = chern.ch_tangent_Ag(5, m, reduced=True)
        print(f"  ch{m}: raw {raw}   reduced {red}")


if __name__ == "__main__":
    main()
