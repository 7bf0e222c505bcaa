"""Finite groups with full multiplication tables.

Groups stand in for finite Galois groups.  They are built from permutation
generators by breadth-first closure from the identity, which fixes a
canonical element order (index 0 is the identity) and hence deterministic
matrices everywhere downstream.  Each element carries one word in the
generators, used to transport generator-level data (module actions) to
arbitrary elements.

The product convention is composition: ``g*h`` acts by "h first, then g",
and ``table[i][j]`` is the index of ``element_i * element_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm
from typing import Callable, Hashable, Iterable, Sequence

from .errors import ResourceError, StructuralError

DEFAULT_ORDER_BOUND = 5000


class FiniteGroup:
    __slots__ = (
        "order",
        "table",
        "generators",
        "element_words",
        "inverse",
        "_elt_order",
    )

    def __init__(
        self,
        table: Sequence[Sequence[int]],
        generators: Sequence[int],
        element_words: Sequence[Sequence[int]],
    ):
        n = len(table)
        self.order = n
        self.table = tuple(tuple(r) for r in table)
        self.generators = tuple(generators)
        self.element_words = tuple(tuple(w) for w in element_words)
        self._check_table()
        inv = [None] * n
        for i in range(n):
            for j in range(n):
                if self.table[i][j] == 0:
                    inv[i] = j
                    break
        if any(v is None for v in inv):
            raise StructuralError("multiplication table has an element without inverse")
        self.inverse = tuple(inv)  # type: ignore[arg-type]
        self._elt_order: tuple[int, ...] | None = None

    def _check_table(self) -> None:
        n = self.order
        t = self.table
        for i in range(n):
            if t[0][i] != i or t[i][0] != i:
                raise StructuralError("element 0 is not an identity for the table")
            if sorted(t[i]) != list(range(n)) or sorted(t[j][i] for j in range(n)) != list(range(n)):
                raise StructuralError("multiplication table is not a Latin square")
        # Light's associativity test: checking a(xy) = (ax)y for generators a
        # suffices once the generators generate, which closure guarantees.
        for a in self.generators:
            ta = t[a]
            for x in range(n):
                tax = t[ta[x]]
                tx = t[x]
                for y in range(n):
                    if ta[tx[y]] != tax[y]:
                        raise StructuralError("multiplication table is not associative")
        # generators generate: breadth-first closure must reach everything
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for e in frontier:
                for s in self.generators:
                    c = t[e][s]
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        if len(seen) != n:
            raise StructuralError("listed generators do not generate the group")

    # -- basic queries ---------------------------------------------------

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def element_order(self, i: int) -> int:
        if self._elt_order is None:
            orders = []
            for e in range(self.order):
                x, n = e, 1
                while x != 0:
                    x = self.table[x][e]
                    n += 1
                orders.append(n)
            self._elt_order = tuple(orders)
        return self._elt_order[i]

    def exponent(self) -> int:
        return lcm(*(self.element_order(e) for e in range(self.order)))

    def conjugate(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return self.table[self.table[g][x]][self.inverse[g]]

    # -- subgroups ---------------------------------------------------------

    def subgroup(self, members: Iterable[int]) -> "Subgroup":
        return Subgroup(self, members)

    def generated_subgroup(self, seeds: Iterable[int]) -> "Subgroup":
        members = {0}
        frontier = [0]
        seeds = tuple(seeds)
        while frontier:
            nxt = []
            for e in frontier:
                for s in seeds:
                    c = self.table[e][s]
                    if c not in members:
                        members.add(c)
                        nxt.append(c)
            frontier = nxt
        # seeds need not contain inverses, but in a finite group powers do
        return Subgroup(self, members)

    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (0,))

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, range(self.order))

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"


def _bfs_closure(
    identity: Hashable,
    gen_tokens: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    order_bound: int,
) -> tuple[list[Hashable], list[tuple[int, ...]]]:
    """Canonical breadth-first enumeration: from the identity, apply the
    generators in listed order by right multiplication."""
    index: dict[Hashable, int] = {identity: 0}
    elements: list[Hashable] = [identity]
    words: list[tuple[int, ...]] = [()]
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for k, s in enumerate(gen_tokens):
                c = mul(e, s)
                if c not in index:
                    if len(elements) >= order_bound:
                        raise ResourceError(
                            f"group order exceeds the configured bound {order_bound}"
                        )
                    index[c] = len(elements)
                    elements.append(c)
                    words.append(words[index[e]] + (k,))
                    nxt.append(c)
        frontier = nxt
    return elements, words


def _group_from_tokens(
    identity: Hashable,
    gen_tokens: Sequence[Hashable],
    mul: Callable[[Hashable, Hashable], Hashable],
    order_bound: int,
) -> tuple[FiniteGroup, list[Hashable]]:
    elements, words = _bfs_closure(identity, gen_tokens, mul, order_bound)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    gen_indices = [index[s] for s in gen_tokens]
    return FiniteGroup(table, gen_indices, words), elements


def from_permutations(
    gens: Sequence[Sequence[int]], *, order_bound: int = DEFAULT_ORDER_BOUND
) -> FiniteGroup:
    """Group generated by permutations of {0..n-1}, given as image tuples.

    An empty generator list yields the trivial group."""
    if not gens:
        return FiniteGroup([[0]], [], [()])
    n = len(gens[0])
    tokens = []
    for p in gens:
        t = tuple(p)
        if len(t) != n:
            raise StructuralError("permutation generators act on different sets")
        if sorted(t) != list(range(n)):
            raise StructuralError(f"{list(p)} is not a permutation of 0..{n - 1}")
        tokens.append(t)
    identity = tuple(range(n))

    def mul(a, b):  # a*b acts by b first: composition a o b
        return tuple(a[b[x]] for x in range(n))

    group, _ = _group_from_tokens(identity, tokens, mul, order_bound)
    return group


class Subgroup:
    """Subset of a parent group, closed under product and inverse."""

    __slots__ = ("parent", "members")

    def __init__(self, parent: FiniteGroup, members: Iterable[int]):
        mem = tuple(sorted(set(members)))
        if not mem or mem[0] != 0:
            raise StructuralError("a subgroup must contain the identity")
        mset = set(mem)
        for a in mem:
            if parent.inverse[a] not in mset:
                raise StructuralError("subgroup is not closed under inversion")
            for b in mem:
                if parent.table[a][b] not in mset:
                    raise StructuralError("subgroup is not closed under the product")
        self.parent = parent
        self.members = mem

    @property
    def order(self) -> int:
        return len(self.members)

    def is_cyclic(self) -> bool:
        return any(
            self.parent.element_order(e) == self.order for e in self.members
        )

    def conjugated_by(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, (self.parent.conjugate(g, x) for x in self.members))

    def minimal_generators(self) -> tuple[int, ...]:
        """Greedy deterministic generating set (sorted element order)."""
        gens: list[int] = []
        closure = {0}
        for m in self.members:
            if m not in closure:
                gens.append(m)
                closure = set(
                    self.parent.generated_subgroup(gens).members
                )
        return tuple(gens)

    def as_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """Standalone group plus the embedding (subgroup index -> parent index)."""
        gens = self.minimal_generators()
        t = self.parent.table

        def mul(a, b):
            return t[a][b]

        group, elements = _group_from_tokens(0, gens, mul, len(self.members) + 1)
        return group, tuple(elements)  # type: ignore[arg-type]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, members={self.members})"


def cyclic_subgroups(g: FiniteGroup, up_to_conjugacy: bool = False) -> list[Subgroup]:
    """Every subgroup generated by a single element, the trivial one
    included, sorted by (order, members).  With ``up_to_conjugacy`` one
    representative per conjugacy class is kept: the least in that order."""
    seen: dict[tuple[int, ...], Subgroup] = {}
    for e in range(g.order):
        s = g.generated_subgroup([e] if e else [])
        seen.setdefault(s.members, s)
    subs = [seen[k] for k in sorted(seen, key=lambda m: (len(m), m))]
    if not up_to_conjugacy:
        return subs
    reps: list[Subgroup] = []
    taken: set[tuple[int, ...]] = set()
    for s in subs:
        if s.members in taken:
            continue
        orbit = {s.conjugated_by(x).members for x in range(g.order)}
        taken |= orbit
        reps.append(s)
    return reps


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def sylow_subgroups(g: FiniteGroup) -> dict[int, Subgroup]:
    """One Sylow p-subgroup for each prime p dividing the order.

    A p-subgroup that is not yet Sylow has index divisible by p in its
    normalizer, so some element of p-power order outside it normalizes it;
    adjoining that element grows the subgroup and the loop terminates."""
    out: dict[int, Subgroup] = {}
    for p, a in sorted(_prime_factors(g.order).items()):
        target = p**a
        current = g.trivial_subgroup()
        while current.order < target:
            mem = set(current.members)
            normalizer = [
                x
                for x in range(g.order)
                if all(g.conjugate(x, m) in mem for m in current.members)
            ]
            grown = False
            for y in normalizer:
                if y in mem:
                    continue
                q = g.element_order(y)
                m = q
                while m % p == 0:
                    m //= p
                z = y
                for _ in range(m - 1):  # z = y^m has p-power order
                    z = g.table[z][y]
                if z not in mem and g.element_order(z) > 1:
                    current = g.generated_subgroup(list(current.members) + [z])
                    grown = True
                    break
            if not grown:  # cannot happen for a correct table
                raise StructuralError("Sylow growth failed: table is inconsistent")
        out[p] = current
    return out


def exponent(g: FiniteGroup) -> int:
    """Least common multiple of the element orders."""
    return g.exponent()


def is_metacyclic(g: FiniteGroup) -> bool:
    """Whether every Sylow subgroup is cyclic (equivalently, the exponent
    equals the order)."""
    return all(s.is_cyclic() for s in sylow_subgroups(g).values())
