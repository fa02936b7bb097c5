"""Finite groups given by multiplication tables, realized from matrix generators.

Elements are indices ``0 .. |G|-1`` with ``0`` the identity.  A
:class:`FiniteMatrixGroup` additionally remembers the matrix of each element.
Subgroups are handled as frozensets of indices and closed through the table.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .errors import BadInput, CapExceeded, DimensionMismatch, NotInvertible
from .exactmath import CycMatrix, check_conductor

DEFAULT_CAP = 1024


def default_cap() -> int:
    raw = os.environ.get("LRQ_CAP")
    if raw is None:
        return DEFAULT_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise BadInput(f"LRQ_CAP must be a positive integer, got {raw!r}") from exc
    if cap < 1:
        raise BadInput(f"LRQ_CAP must be a positive integer, got {raw!r}")
    return cap


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def prime_factors(n: int) -> list[int]:
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    """Largest power of ``p`` dividing ``n``."""
    if p < 2:
        return 1
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_power_of(n: int, p: int) -> bool:
    return p_part(n, p) == n


@dataclass(frozen=True)
class AbelianStructure:
    """A finite abelian group Z/d_1 x ... x Z/d_k with d_1 | d_2 | ... and d_i >= 2."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if any(d < 2 for d in f):
            raise BadInput(f"invariant factors must be >= 2: {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise BadInput(f"invariant factors must form a divisibility chain: {f}")

    @classmethod
    def from_cyclic_factors(cls, orders) -> "AbelianStructure":
        """Normalize an arbitrary product of cyclic groups Z/n_1 x Z/n_2 x ..."""
        by_prime: dict[int, list[int]] = {}
        for n in orders:
            for p in prime_factors(n):
                by_prime.setdefault(p, []).append(p_part(n, p))
        width = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * width
        for p, powers in by_prime.items():
            powers.sort(reverse=True)
            for i, q in enumerate(powers):
                factors[width - 1 - i] *= q
        return cls(tuple(d for d in factors if d > 1))

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def p_part(self, p: int) -> "AbelianStructure":
        return AbelianStructure.from_cyclic_factors(p_part(d, p) for d in self.invariant_factors)

    def prime_to_p_part(self, p: int) -> "AbelianStructure":
        return AbelianStructure.from_cyclic_factors(d // p_part(d, p) for d in self.invariant_factors)

    def as_list(self) -> list[int]:
        return list(self.invariant_factors)


class FiniteGroup:
    """A finite group given by its Cayley table; element 0 is the identity."""

    def __init__(self, table, generators=()):
        self.table = [tuple(r) for r in table]
        self.order = len(self.table)
        self.generators = tuple(generators)

    def __len__(self):
        return self.order

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(row.index(0) for row in self.table)

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        x = 0
        for _ in range(k):
            x = self.table[x][a]
        return x

    def powers(self, a: int) -> list[int]:
        """[a^0, a^1, ..., a^(ord a - 1)]."""
        out = [0]
        x = a
        while x != 0:
            out.append(x)
            x = self.table[x][a]
        return out

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = [0] * self.order
        for a in range(self.order):
            if orders[a]:
                continue
            pw = self.powers(a)
            n = len(pw)
            for k, x in enumerate(pw):
                if not orders[x]:
                    orders[x] = n // gcd(k, n) if k else 1
        return tuple(orders)

    def element_order(self, a: int) -> int:
        return self.element_orders[a]

    def subgroup_closure(self, gens) -> frozenset[int]:
        gens = [g for g in set(gens) if g != 0]
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def is_subgroup(self, subset) -> bool:
        s = set(subset)
        if 0 not in s:
            return False
        return all(self.table[a][b] in s for a in s for b in s)

    def is_abelian(self, subset=None) -> bool:
        s = range(self.order) if subset is None else sorted(subset)
        t = self.table
        return all(t[a][b] == t[b][a] for a in s for b in s if a < b)

    def is_cyclic(self) -> bool:
        return self.order in self.element_orders

    def commutator(self, a: int, b: int) -> int:
        t, inv = self.table, self.inverses
        return t[t[t[a][b]][inv[a]]][inv[b]]

    @cached_property
    def commutator_subgroup(self) -> frozenset[int]:
        comms = {self.commutator(a, b) for a in range(self.order) for b in range(a + 1, self.order)}
        # the subgroup generated by all commutators is automatically normal
        return self.subgroup_closure(comms)

    def is_normal(self, subset) -> bool:
        s = set(subset)
        t, inv = self.table, self.inverses
        gens = self.generators or range(self.order)
        return all(t[t[g][x]][inv[g]] in s for g in gens for x in s)

    def quotient(self, normal) -> tuple["FiniteGroup", list[int]]:
        """G/N as a table group, plus the coset label of every element of G."""
        normal = sorted(normal)
        labels = [-1] * self.order
        reps = []
        for g in range(self.order):
            if labels[g] < 0:
                lab = len(reps)
                reps.append(g)
                for x in normal:
                    labels[self.table[g][x]] = lab
        t = self.table
        qtable = [[labels[t[a][b]] for b in reps] for a in reps]
        return FiniteGroup(qtable, [labels[g] for g in self.generators]), labels


class FiniteMatrixGroup(FiniteGroup):
    """A finite group together with a faithful realization by cyclotomic matrices."""

    def __init__(self, table, generators, elements, dimension: int, conductor: int):
        super().__init__(table, generators)
        self.elements = tuple(elements)
        self.dimension = dimension
        self.conductor = conductor
        self._index = {M.key: i for i, M in enumerate(self.elements)}

    def index_of(self, M: CycMatrix) -> int | None:
        if M.conductor != self.conductor:
            try:
                M = M.promote(self.conductor)
            except Exception:
                return None
        return self._index.get(M.key)

    @property
    def generator_matrices(self) -> list[CycMatrix]:
        return [self.elements[i] for i in self.generators]

    def __repr__(self):
        return f"FiniteMatrixGroup(order={self.order}, dim={self.dimension}, conductor={self.conductor})"


def close(generators, cap: int | None = None, dimension: int | None = None) -> FiniteMatrixGroup:
    """Breadth-first closure of matrix generators.

    Elements are numbered in BFS order (right multiplication by the generators
    in the given order), which makes the result reproducible.  Only
    ``|G| * len(generators)`` matrix products are formed; the full table is then
    filled from the BFS parent pointers.
    """
    cap = default_cap() if cap is None else cap
    gens = list(generators)
    if not gens:
        if dimension is None:
            raise BadInput("empty generator list needs an explicit dimension")
        I = CycMatrix.identity(dimension)
        return FiniteMatrixGroup([[0]], [], [I], dimension, 1)
    d = gens[0].rows
    for g in gens:
        if not g.is_square or g.rows != d:
            raise DimensionMismatch("generators must be square matrices of one dimension")
    if dimension is not None and dimension != d:
        raise DimensionMismatch(f"generators are {d}x{d}, expected dimension {dimension}")
    m = 1
    for g in gens:
        m = m * g.conductor // gcd(m, g.conductor)
    check_conductor(m)
    gens = [g.promote(m) for g in gens]
    for g in gens:
        if g.det().is_zero():
            raise NotInvertible("singular generator")

    identity = CycMatrix.identity(d, m)
    elements = [identity]
    index = {identity.key: 0}
    parent: list[tuple[int, int] | None] = [None]
    right: list[list[int]] = []
    i = 0
    while i < len(elements):
        row = []
        x = elements[i]
        for gi, g in enumerate(gens):
            y = x @ g
            k = index.get(y.key)
            if k is None:
                if len(elements) >= cap:
                    raise CapExceeded(cap)
                k = len(elements)
                elements.append(y)
                index[y.key] = k
                parent.append((i, gi))
            row.append(k)
        right.append(row)
        i += 1

    n = len(elements)
    table = []
    for a in range(n):
        row = [0] * n
        row[0] = a
        for j in range(1, n):
            pj, gk = parent[j]
            row[j] = right[row[pj]][gk]
        table.append(row)
    gen_idx = [right[0][gi] for gi in range(len(gens))]
    return FiniteMatrixGroup(table, gen_idx, elements, d, m)


def unique_abelian_sylow(G: FiniteGroup, p: int) -> bool:
    """True iff G has a unique p-Sylow subgroup and it is abelian."""
    pp = p_part(G.order, p)
    if pp == 1:
        return True
    S = [g for g in range(G.order) if is_power_of(G.element_orders[g], p)]
    if len(S) != pp:
        return False
    return G.is_subgroup(S) and G.is_abelian(S)


def sylow_subgroup(G: FiniteGroup, p: int) -> frozenset[int]:
    """Elements of p-power order; the unique p-Sylow when :func:`unique_abelian_sylow` holds."""
    if p < 2:
        return frozenset({0})
    return frozenset(g for g in range(G.order) if is_power_of(G.element_orders[g], p))


def abelian_invariants(A: FiniteGroup, subset=None) -> AbelianStructure:
    """Invariant factors of an abelian group (or abelian subgroup ``subset``).

    Repeatedly split off a cyclic subgroup of maximal order in the quotient:
    a cyclic subgroup of maximal order is a direct summand.
    """
    elems = sorted(range(A.order) if subset is None else subset)
    K = frozenset({0})
    found = []
    while len(K) < len(elems):
        best, best_order = None, 0
        for g in elems:
            k, x = 1, g
            while x not in K:
                x = A.table[x][g]
                k += 1
            # x == g^k in K, so the coset order of g divides k; k is minimal by construction
            if k > best_order:
                best, best_order = g, k
        found.append(best_order)
        K = A.subgroup_closure(set(K) | {best})
    return AbelianStructure(tuple(reversed(found)))


def abelianization(G: FiniteGroup) -> AbelianStructure:
    Q, _ = G.quotient(G.commutator_subgroup)
    return abelian_invariants(Q)


def all_abelian_subgroups_cyclic(G: FiniteGroup) -> bool:
    """True iff every subgroup generated by two commuting elements is cyclic.

    For commuting g, h the group <g, h> has order ord(g) ord(h) / |<g> n <h>| and
    exponent lcm(ord g, ord h); it is cyclic iff the two agree.
    """
    t = G.table
    orders = G.element_orders
    cyc = [None] * G.order
    for a in range(G.order):
        for b in range(a + 1, G.order):
            if t[a][b] != t[b][a]:
                continue
            oa, ob = orders[a], orders[b]
            if oa == 1 or ob == 1:
                continue
            if cyc[a] is None:
                cyc[a] = frozenset(G.powers(a))
            if cyc[b] is None:
                cyc[b] = frozenset(G.powers(b))
            inter = len(cyc[a] & cyc[b])
            if oa * ob // inter != oa * ob // gcd(oa, ob):
                return False
    return True
