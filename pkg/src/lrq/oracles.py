"""Brute-force reference computations used to cross-check the main algorithms.

Everything here is deliberately naive: it works from raw multiplication
tables, explicit root vectors and plain fractions, and shares no code with
the routines it is compared against beyond the ADE graph classifier.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from itertools import combinations, product

from .deform import RootDiagram, classify_tree


# continued fractions


def cf_value(a) -> Fraction:
    """Evaluate a_1 - 1/(a_2 - 1/(... - 1/a_k))."""
    val = Fraction(a[-1])
    for x in reversed(a[:-1]):
        val = x - 1 / val
    return val


# group theory from raw tables


def commutator_closure(table) -> frozenset[int]:
    """Subgroup generated by all commutators, by naive fixpoint iteration."""
    n = len(table)
    inv = [next(b for b in range(n) if table[a][b] == 0) for a in range(n)]
    comms = {table[table[a][b]][table[inv[a]][inv[b]]] for a in range(n) for b in range(n)}
    sub = set(comms) | {0}
    while True:
        new = {table[x][y] for x in sub for y in sub} - sub
        if not new:
            return frozenset(sub)
        sub |= new


def abelianization_oracle(table) -> list[int]:
    """Invariant factors of G / [G, G] from the sizes of its torsion subgroups."""
    K = commutator_closure(table)
    n = len(table)
    cosets, label = [], {}
    for g in range(n):
        if g in label:
            continue
        c = frozenset(table[g][k] for k in K)
        for x in c:
            label[x] = len(cosets)
        cosets.append(min(c))
    m = len(cosets)
    reps = cosets

    def order(i):
        x, k = reps[i], 1
        while label[x] != label[0]:
            x = table[x][reps[i]]
            k += 1
        return k

    orders = [order(i) for i in range(m)]
    # for each prime p, |A[p^j]| = p^(sum_i min(j, e_i)) recovers the exponents e_i
    exps: dict[int, list[int]] = {}
    rest, q = m, 2
    primes = []
    while rest > 1:
        if rest % q == 0:
            primes.append(q)
            while rest % q == 0:
                rest //= q
        q += 1
    for p in primes:
        counts = []
        j = 0
        while True:
            j += 1
            c = sum(1 for o in orders if (p ** j) % o == 0)
            counts.append(c)
            if j > 1 and counts[-1] == counts[-2]:
                break
        logs = [0]
        for c in counts:
            e = 0
            while c > 1:
                c //= p
                e += 1
            logs.append(e)
        # number of cyclic factors with exponent >= j is logs[j] - logs[j-1]
        ge = [logs[j] - logs[j - 1] for j in range(1, len(logs))]
        parts = []
        for j in range(len(ge)):
            nxt = ge[j + 1] if j + 1 < len(ge) else 0
            parts += [j + 1] * (ge[j] - nxt)
        exps[p] = sorted(parts, reverse=True)
    width = max((len(v) for v in exps.values()), default=0)
    factors = [1] * width
    for p, es in exps.items():
        for i, e in enumerate(es):
            factors[i] *= p ** e
    return sorted((f for f in factors if f > 1), key=lambda f: f)


def det_character_direct(rep) -> list:
    """Determinant of every element image, computed directly."""
    return [M.det() for M in rep.element_images]


# root systems


def root_vectors(kind: str, k: int) -> list[tuple[int, ...]]:
    if kind == "A":
        roots = []
        for i in range(k + 1):
            for j in range(k + 1):
                if i != j:
                    v = [0] * (k + 1)
                    v[i], v[j] = 1, -1
                    roots.append(tuple(v))
        return roots
    if kind == "D":
        roots = []
        for i, j in combinations(range(k), 2):
            for si, sj in product((1, -1), repeat=2):
                v = [0] * k
                v[i], v[j] = si, sj
                roots.append(tuple(v))
        return roots
    raise ValueError("only A and D root systems are realized here")


def _dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def _reflect_closure(gens, roots) -> frozenset:
    sub = set(gens) | {tuple(-x for x in g) for g in gens}
    frontier = list(sub)
    while frontier:
        nxt = []
        for a in list(sub):
            for b in frontier:
                for x, y in ((a, b), (b, a)):
                    c = _dot(x, y)
                    r = tuple(yy - c * xx for xx, yy in zip(x, y))
                    if r not in sub:
                        sub.add(r)
                        nxt.append(r)
        frontier = nxt
    assert sub <= set(roots)
    return frozenset(sub)


def root_subsystems(kind: str, k: int) -> set[frozenset]:
    """All subsets of the roots that are symmetric and closed under their own reflections."""
    roots = root_vectors(kind, k)
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for S in frontier:
            for r in roots:
                if r in S:
                    continue
                T = _reflect_closure(set(S) | {r}, roots)
                if T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    return found


def subsystem_type(S) -> RootDiagram:
    if not S:
        return RootDiagram(())
    dim = len(next(iter(S)))
    # a generic linear functional picks a positive system
    weights = [10 ** (dim - i) + i for i in range(dim)]
    pos = [r for r in S if _dot(r, weights) > 0]
    posset = set(pos)
    simple = [r for r in pos
              if not any(tuple(a - b for a, b in zip(r, s)) in posset for s in pos if s != r)]
    idx = range(len(simple))
    edges = [(i, j) for i, j in combinations(idx, 2) if _dot(simple[i], simple[j]) == -1]
    assert all(_dot(simple[i], simple[j]) in (0, -1) for i, j in combinations(idx, 2))
    # split into components and classify each
    nb = {i: set() for i in idx}
    for i, j in edges:
        nb[i].add(j)
        nb[j].add(i)
    comps, seen = [], set()
    for v in idx:
        if v in seen:
            continue
        comp, stack = {v}, [v]
        while stack:
            for w in nb[stack.pop()]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(classify_tree(comp, [(i, j) for i, j in edges if i in comp]))
    return RootDiagram(tuple(comps))


def brute_force_specializations(kind: str, k: int) -> set[RootDiagram]:
    return {subsystem_type(S) for S in root_subsystems(kind, k)}


# floating-point linear algebra


def complex_value(x, k: int = 1) -> complex:
    """Value of x under the embedding zeta_m -> exp(2 pi i k / m)."""
    z = cmath.exp(2j * cmath.pi * k / x.conductor)
    return sum(float(c) * z ** i for i, c in enumerate(x.coefficients))


def numeric_rank(M, k: int = 1, tol: float = 1e-9) -> int:
    """Rank of M under one complex embedding, by partial-pivoting elimination."""
    a = [[complex_value(M[i, j], k) for j in range(M.cols)] for i in range(M.rows)]
    rank, col = 0, 0
    rows, cols = M.rows, M.cols
    while rank < rows and col < cols:
        piv = max(range(rank, rows), key=lambda r: abs(a[r][col]))
        if abs(a[piv][col]) < tol:
            col += 1
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, rows):
            f = a[r][col] / a[rank][col]
            for c in range(col, cols):
                a[r][c] -= f * a[rank][c]
        rank += 1
        col += 1
    return rank
