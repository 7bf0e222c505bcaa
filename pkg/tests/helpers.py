"""Shared fixtures-in-spirit: a catalog of small groups and a full
subgroup enumeration (the library itself deliberately ships no subgroup
lattice; tests build it by closure)."""

from __future__ import annotations

from shacalc.groups import FiniteGroup, Subgroup, from_permutations


def catalog() -> dict[str, FiniteGroup]:
    def cyc(n):
        return from_permutations([[(i + 1) % n for i in range(n)]])

    return {
        "Z2": cyc(2),
        "Z3": cyc(3),
        "Z4": cyc(4),
        "Z6": cyc(6),
        "Z8": cyc(8),
        "Z12": cyc(12),
        "V4": from_permutations([[1, 0, 2, 3], [0, 1, 3, 2]]),
        "S3": from_permutations([[1, 0, 2], [1, 2, 0]]),
        "D4": from_permutations([[1, 2, 3, 0], [0, 3, 2, 1]]),
        "Q8": from_permutations([[1, 2, 3, 0, 5, 6, 7, 4], [4, 7, 6, 5, 2, 1, 0, 3]]),
        "Z2xZ4": from_permutations([[1, 0, 2, 3, 4, 5], [0, 1, 3, 4, 5, 2]]),
        "Z2^3": from_permutations(
            [[1, 0, 2, 3, 4, 5], [0, 1, 3, 2, 4, 5], [0, 1, 2, 3, 5, 4]]
        ),
        "A4": from_permutations([[1, 2, 0, 3], [1, 0, 3, 2]]),
    }


def all_subgroups(g: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, by closure saturation (fine for order <= 64)."""
    found = {(0,): g.trivial_subgroup()}
    frontier = [g.trivial_subgroup()]
    while frontier:
        nxt = []
        for sub in frontier:
            for e in range(1, g.order):
                if e in sub.members:
                    continue
                bigger = g.generated_subgroup(list(sub.members) + [e])
                if bigger.members not in found:
                    found[bigger.members] = bigger
                    nxt.append(bigger)
        frontier = nxt
    return [found[k] for k in sorted(found, key=lambda m: (len(m), m))]
