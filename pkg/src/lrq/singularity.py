"""Quotient singularities by very small actions.

Two layers: the cyclic (toric) pipeline working purely with integers
(Hilbert bases, Hilbert-Kunz counts, Hirzebruch-Jung fractions, resolution
chains), and invariants of a general singularity computed from its group.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .errors import BadInput, NotImplementedForNonAbelian, NotVerySmall, Unrealizable
from .exactmath import root_of_unity_order
from .groups import AbelianStructure, abelian_invariants, abelianization, p_part
from .lrgs import LrRepresentation, check_characteristic, lambda_invariant


# cyclic types


def canonical_toric_form(n: int, weights) -> tuple[int, ...]:
    """Lexicographically least sorted (a*q_i mod n) over units a mod n.

    Residues are taken in 1..n so that the trivial group n = 1 gives all ones.
    """
    if n == 1:
        return (1,) * len(weights)
    best = None
    for a in range(1, n):
        if gcd(a, n) != 1:
            continue
        cand = tuple(sorted((a * q - 1) % n + 1 for q in weights))
        if best is None or cand < best:
            best = cand
    return best


@dataclass(frozen=True)
class CyclicType:
    """mu_n acting by zeta -> diag(zeta^q_1, ..., zeta^q_d)."""

    n: int
    weights: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(q) for q in self.weights))
        if self.n < 1:
            raise BadInput(f"order must be >= 1, got {self.n}")
        if not self.weights:
            raise BadInput("at least one weight is needed")
        if any(gcd(q, self.n) != 1 for q in self.weights):
            raise BadInput(f"weights {self.weights} must be coprime to {self.n}")

    @property
    def dimension(self) -> int:
        return len(self.weights)

    def canonical(self) -> "CyclicType":
        return CyclicType(self.n, canonical_toric_form(self.n, self.weights))

    def __str__(self):
        return f"1/{self.n}({','.join(map(str, self.weights))})"


_TYPE_RE = re.compile(r"^\s*1\s*/\s*(\d+)\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*$")


def parse_cyclic_type(text: str) -> CyclicType:
    """Parse '1/n(q1,q2,...)'."""
    m = _TYPE_RE.match(text)
    if not m:
        raise BadInput(f"cannot parse type {text!r}; expected 1/n(q1,q2,...)")
    n = int(m.group(1))
    ws = [int(x) % n if n > 1 else 1 for x in m.group(2).split(",")]
    return CyclicType(n, tuple(ws))


def _in_monoid(t: CyclicType, e) -> bool:
    return sum(q * x for q, x in zip(t.weights, e)) % t.n == 0


def _box_members(t: CyclicType):
    """Members of M in the box [0, n]^d, with the last coordinate solved mod n."""
    n, qs = t.n, t.weights
    d = len(qs)
    qinv = pow(qs[-1], -1, n) if n > 1 else 0
    out = []
    for head in product(range(n + 1), repeat=d - 1):
        s = sum(q * x for q, x in zip(qs, head))
        r = (-s * qinv) % n if n > 1 else 0
        for last in (r, r + n):
            if last <= n:
                out.append(head + (last,))
    return out


def hilbert_basis(t: CyclicType) -> list[tuple[int, ...]]:
    """Minimal generators of M = {e in N^d : sum q_i e_i = 0 mod n}, sorted."""
    members = [e for e in _box_members(t) if any(e)]
    members.sort(key=sum)
    basis = []
    for e in members:
        # e is decomposable iff some smaller basis element fits under it
        if not any(all(b_i <= e_i for b_i, e_i in zip(b, e)) for b in basis):
            basis.append(e)
    d = t.dimension
    for i in range(d):
        unit = tuple(t.n if j == i else 0 for j in range(d))
        assert unit in basis, "n * e_i must be a minimal generator"
    return sorted(basis, reverse=True)


def hilbert_kunz(t) -> Fraction:
    """(1/n) * number of exponents in [0,n)^d dominating no basis element."""
    if isinstance(t, LrqSingularity):
        t = t.cyclic_type()
    if not isinstance(t, CyclicType):
        raise NotImplementedForNonAbelian("Hilbert-Kunz multiplicity is only implemented for cyclic types")
    n, d = t.n, t.dimension
    basis = hilbert_basis(t)
    count = 0
    for head in product(range(n), repeat=d - 1):
        threshold = n
        for b in basis:
            if b[-1] < threshold and all(x <= y for x, y in zip(b[:-1], head)):
                threshold = b[-1]
        count += threshold
    return Fraction(count, n)


# Hirzebruch-Jung continued fractions


def hj_fraction(n: int, q: int) -> list[int]:
    if not (0 < q < n) or gcd(n, q) != 1:
        raise BadInput(f"need 0 < q < n with gcd(n, q) = 1, got n={n}, q={q}")
    out = []
    while q:
        a = -(-n // q)
        out.append(a)
        n, q = q, a * q - n
    return out


def continuants(a) -> list[int]:
    """A_0 = 1, A_i = a_i A_{i-1} - A_{i-2} with A_{-1} = 0."""
    prev, cur = 0, 1
    out = [1]
    for x in a:
        prev, cur = cur, x * cur - prev
        out.append(cur)
    return out


@dataclass(frozen=True)
class DualGraph:
    """Weighted graph: self-intersection numbers and undirected edges."""

    self_intersections: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "self_intersections", tuple(self.self_intersections))
        es = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        object.__setattr__(self, "edges", es)
        k = len(self.self_intersections)
        if any(not (0 <= u < k and 0 <= v < k) or u == v for u, v in es):
            raise BadInput("edge endpoints out of range")
        if any(w > -2 for w in self.self_intersections):
            raise BadInput("self-intersections must be <= -2")

    @classmethod
    def chain(cls, weights) -> "DualGraph":
        w = tuple(weights)
        return cls(w, tuple((i, i + 1) for i in range(len(w) - 1)))

    def neighbours(self) -> list[list[int]]:
        nb = [[] for _ in self.self_intersections]
        for u, v in self.edges:
            nb[u].append(v)
            nb[v].append(u)
        return nb

    def is_connected(self) -> bool:
        k = len(self.self_intersections)
        if k == 0:
            return True
        nb = self.neighbours()
        seen, stack = {0}, [0]
        while stack:
            for v in nb[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == k

    def _walk(self, start: int, avoid: int) -> list[int] | None:
        """Vertices of the branch starting at ``start`` away from ``avoid``, if it is a path."""
        nb = self.neighbours()
        path, prev, cur = [start], avoid, start
        while True:
            nxt = [v for v in nb[cur] if v != prev]
            if not nxt:
                return path
            if len(nxt) > 1:
                return None
            prev, cur = cur, nxt[0]
            path.append(cur)

    def shape(self) -> tuple:
        """('chain',), ('star', (a, b, c)) with sorted branch discriminants, or ('other',)."""
        k = len(self.self_intersections)
        if not self.is_connected() or len(self.edges) != k - 1:
            return ("other",)
        deg = [len(x) for x in self.neighbours()]
        if all(x <= 2 for x in deg):
            return ("chain",)
        centres = [v for v in range(k) if deg[v] >= 3]
        if len(centres) != 1 or deg[centres[0]] != 3:
            return ("other",)
        c = centres[0]
        discs = []
        for start in self.neighbours()[c]:
            branch = self._walk(start, c)
            if branch is None:
                return ("other",)
            discs.append(continuants([-self.self_intersections[v] for v in branch])[-1])
        return ("star", tuple(sorted(discs)))


def resolution_chain(n: int, q: int) -> DualGraph:
    return DualGraph.chain(-a for a in hj_fraction(n, q))


_ADE_RE = re.compile(r"^([ADE])_?(\d+)$")


def parse_ade(text: str) -> tuple[str, int]:
    m = _ADE_RE.match(text.strip())
    if not m:
        raise BadInput(f"cannot parse ADE type {text!r}")
    kind, k = m.group(1), int(m.group(2))
    if (kind == "A" and k < 1) or (kind == "D" and k < 4) or (kind == "E" and k not in (6, 7, 8)):
        raise BadInput(f"{text!r} is not a valid ADE type")
    return kind, k


def ade_graph(name: str) -> DualGraph:
    """Dynkin diagram of an ADE type as a graph of (-2)-curves."""
    kind, k = parse_ade(name)
    if kind == "A":
        return DualGraph.chain([-2] * k)
    if kind == "D":
        # chain 0..k-2 with vertex k-1 attached to k-3
        edges = [(i, i + 1) for i in range(k - 2)] + [(k - 3, k - 1)]
        return DualGraph((-2,) * k, tuple(edges))
    # E_k: chain 0..k-2 with vertex k-1 attached to 2
    edges = [(i, i + 1) for i in range(k - 2)] + [(2, k - 1)]
    return DualGraph((-2,) * k, tuple(edges))


def is_f_regular_graph(g: DualGraph, p: int) -> tuple[bool, str]:
    """Hara's criterion for a rational surface singularity with resolution graph g."""
    check_characteristic(p)
    sh = g.shape()
    if sh[0] == "chain":
        return True, "chain"
    if sh[0] == "other":
        return False, "neither a chain nor a star with three branches"
    t = sh[1]
    name = f"star of type {t}"
    if t[0] == 2 and t[1] == 2 and t[2] >= 2:
        bad = {2}
    elif t in ((2, 3, 3), (2, 3, 4)):
        bad = {2, 3}
    elif t == (2, 3, 5):
        bad = {2, 3, 5}
    else:
        return False, f"{name} is not on the list"
    if p in bad:
        return False, f"{name} requires p not in {sorted(bad)}"
    return True, name


@dataclass(frozen=True)
class RdpRealization:
    ade: str
    family: str
    params: dict
    length: int
    etale: bool

    def to_json(self) -> dict:
        return {"type": self.ade, "family": self.family, "params": dict(self.params),
                "length": self.length, "etale": self.etale}


def rdp_group_for(name: str, p: int) -> RdpRealization:
    """Group scheme whose quotient is the rational double point of the given type."""
    check_characteristic(p)
    kind, k = parse_ade(name)
    label = f"{kind}{k}"
    if kind == "A":
        family, params, length, bad = "Mu", {"n": k + 1}, k + 1, set()
    elif kind == "D":
        family, params, length, bad = "BD", {"n": k - 2}, 4 * (k - 2), {2}
    else:
        family, params, length, bad = {6: ("BT", {}, 24, {2, 3}),
                                        7: ("BO", {}, 48, {2, 3}),
                                        8: ("BI", {}, 120, {2, 3, 5})}[k]
    if p in bad:
        raise Unrealizable(f"{label} is not a linearly reductive quotient in characteristic {p}")
    etale = p == 0 or length % p != 0
    return RdpRealization(label, family, params, length, etale)


# general lrq singularities


class LrqSingularity:
    """The quotient of formal affine space by a very small representation."""

    def __init__(self, rep: LrRepresentation, lam: int | None = None):
        lam = lambda_invariant(rep) if lam is None else lam
        if lam != 0:
            raise NotVerySmall(f"representation has lambda = {lam}")
        if rep.dimension < 2:
            raise NotVerySmall("dimension must be at least 2")
        self.rep = rep

    @property
    def scheme(self):
        return self.rep.scheme

    @property
    def p(self) -> int:
        return self.rep.scheme.p

    @property
    def dimension(self) -> int:
        return self.rep.dimension

    def cyclic_type(self) -> CyclicType:
        """Weights of a cyclic group acting diagonally, when that is the case."""
        G = self.scheme.abs
        n = G.order
        if not G.is_cyclic():
            raise NotImplementedForNonAbelian("group is not cyclic")
        g = G.element_orders.index(n)
        M = self.rep.image(g)
        d = M.rows
        if any(M[i, j].nonzero for i in range(d) for j in range(d) if i != j):
            raise NotImplementedForNonAbelian("cyclic action is not diagonal in the given basis")
        # write each diagonal entry as a power of one primitive root: find q with entry = x^q
        xs = [M[i, i] for i in range(d)]
        base = xs[0]
        weights = []
        for x in xs:
            y, q = base, 1
            while y != x:
                y, q = y * base, q + 1
                if q > n:
                    raise NotImplementedForNonAbelian("diagonal entries are not powers of one root")
            weights.append(q % n if n > 1 else 1)
        if n > 1 and root_of_unity_order(base) != n:
            raise NotImplementedForNonAbelian("first weight is not primitive")
        return CyclicType(n, tuple(weights))


@dataclass(frozen=True)
class Invariants:
    length: int
    f_signature: Fraction
    class_group: AbelianStructure
    class_group_p_part: AbelianStructure
    pi1_order: int
    pi1_abelianization: AbelianStructure
    pi1_generators: tuple[int, ...]
    gorenstein: bool

    def to_json(self) -> dict:
        f = self.f_signature
        return {
            "length": self.length,
            "f_signature": f"{f.numerator}/{f.denominator}",
            "class_group": self.class_group.as_list(),
            "class_group_dual": {
                "infinitesimal": self.class_group_p_part.as_list(),
                "etale": self.class_group.prime_to_p_part(self._p).as_list() if self._p else self.class_group.as_list(),
            },
            "pi1_etale": {
                "order": self.pi1_order,
                "abelianization": self.pi1_abelianization.as_list(),
                "generators": list(self.pi1_generators),
                "trivial": self.pi1_order == 1,
            },
            "gorenstein": self.gorenstein,
        }

    _p: int = field(default=0, repr=False)


def invariants(X: LrqSingularity) -> Invariants:
    from .lrgs import det_character

    scheme = X.scheme
    G = scheme.abs
    p = scheme.p
    cl = abelianization(G)
    Q, labels = scheme.etale_quotient()
    gens = tuple(sorted({labels[g] for g in G.generators} - {0}))
    return Invariants(
        length=G.order,
        f_signature=Fraction(1, G.order),
        class_group=cl,
        class_group_p_part=cl.p_part(p) if p else AbelianStructure(),
        pi1_order=Q.order,
        pi1_abelianization=abelianization(Q),
        pi1_generators=gens,
        gorenstein=det_character(X.rep).trivial,
        _p=p,
    )
