"""Rigidity of three-dimensional quotient singularities and ADE specializations.

The rigidity answers evaluate closed-form arithmetic criteria on the type of
the singularity.  The root-system part enumerates root subsystems of ADE
root systems by the Borel-de Siebenthal moves (delete a node of the Dynkin
diagram, or of the extended diagram) and compares lengths of the matching
group schemes.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd

from .errors import BadDimension, BadInput, BadSequence, MissingIdentification
from .groups import is_prime, p_part, valuation
from .lrgs import check_characteristic
from .singularity import canonical_toric_form, continuants, parse_ade


def _mult_order(r: int, m: int) -> int:
    k, x = 1, r % m
    while x != 1 % m:
        x = x * r % m
        k += 1
    return k


@dataclass(frozen=True)
class Cyclic:
    """Type 1/n(1, q1, q2)."""

    n: int
    q1: int
    q2: int

    def __post_init__(self):
        if self.n < 1:
            raise BadInput("n must be >= 1")
        if gcd(self.q1, self.n) != 1 or gcd(self.q2, self.n) != 1:
            raise BadInput(f"weights must be coprime to {self.n}")

    @property
    def length(self) -> int:
        return self.n

    @property
    def connected_base(self) -> int:
        return self.n

    def __str__(self):
        return f"1/{self.n}(1,{self.q1},{self.q2})"


@dataclass(frozen=True)
class Metacyclic:
    """mu(m, 3^f N, r) embedded in GL3 with corner entry zeta_{3^(f-1)}."""

    m: int
    f: int
    N: int
    r: int

    def __post_init__(self):
        m, f, N, r = self.m, self.f, self.N, self.r
        if m < 2 or not (0 < r <= m):
            raise BadInput("needs m >= 2 and 0 < r <= m")
        if f < 2 or N < 1 or N % 3 == 0:
            raise BadInput("needs f >= 2 and 3 not dividing N")
        if gcd(r, m) != 1 or _mult_order(r, m) != 3:
            raise BadInput("needs ord(r) = 3 mod m")
        if gcd(3 ** f * N * (r - 1), m) != 1:
            raise BadInput("needs (n(r-1), m) = 1")

    @property
    def length(self) -> int:
        return self.m * 3 ** self.f * self.N

    def __str__(self):
        return f"1/{self.m}(1,{self.r},{self.r * self.r % self.m}) x| mu_{3 ** self.f * self.N} (f={self.f}, N={self.N})"


ThreefoldType = Cyclic | Metacyclic


def cyclic_from_weights(n: int, weights) -> Cyclic:
    """Normalize three weights to the form 1/n(1, q1, q2)."""
    if len(weights) != 3:
        raise BadInput("a threefold type needs exactly three weights")
    form = canonical_toric_form(n, weights)
    return Cyclic(n, form[1], form[2])


def _check_cube_root(z: int, p: int) -> int:
    if not isinstance(z, int) or z % p == 1 or pow(z, 3, p) != 1:
        raise BadInput(f"{z} is not a primitive cube root of unity mod {p}")
    return z % p


def _requires_choice(t: Metacyclic, p: int) -> bool:
    return t.f == 2 and t.N == 1 and t.m % p == 0


def is_rigid(t: ThreefoldType, p: int, cube_root_choice: int | None = None) -> bool:
    """Infinitesimal rigidity of the threefold quotient singularity of type t."""
    check_characteristic(p)
    if p in (0, 2):
        return True
    if isinstance(t, Cyclic):
        return not (t.n % p == 0 and (1 + t.q1 + t.q2) % t.n == 0)
    if isinstance(t, Metacyclic):
        if p == 3:
            raise BadInput("the metacyclic family is not linearly reductive for p = 3")
        if t.length % p:
            return True
        if not _requires_choice(t, p):
            # a connected part exists but the characters differ: on mu_N, or
            # because zeta_{3^(f-1)} has order > 3, or because p does not divide m
            return True
        if cube_root_choice is None:
            raise MissingIdentification(
                "the answer depends on which cube root of unity mod p is identified with zeta_3; "
                "pass cube_root_choice")
        z = _check_cube_root(cube_root_choice, p)
        return t.r % p != z
    raise BadInput(f"unknown threefold type {t!r}")


def non_rigid_candidates(t: Metacyclic, p: int) -> list[int] | None:
    """Cube-root choices making t non-rigid, or None if the answer is choice-free."""
    check_characteristic(p)
    if p in (0, 2, 3) or t.length % p or not _requires_choice(t, p):
        return None
    return [t.r % p]


@dataclass(frozen=True)
class DeformationSpace:
    """Rigid, or W(k)[eps]/(eps^2, p^a eps) with a >= 1."""

    p: int
    exponent: int = 0

    @property
    def rigid(self) -> bool:
        return self.exponent == 0

    @property
    def descriptor(self) -> str:
        if self.rigid:
            return "W(k)"
        coeff = str(self.p) if self.exponent == 1 else f"{self.p}^{self.exponent}"
        return f"W(k)[eps]/(eps^2, {coeff}*eps)"

    @property
    def reduced(self) -> str:
        return "Spec W(k)"

    def to_json(self) -> dict:
        doc = {"rigid": self.rigid, "defSpace": self.descriptor}
        if not self.rigid:
            doc["exponent"] = self.exponent
            doc["reduced"] = self.reduced
            doc["canonicalLift"] = True
        return doc


def deformation_space(t: ThreefoldType, p: int, cube_root_choice: int | None = None) -> DeformationSpace:
    if is_rigid(t, p, cube_root_choice):
        return DeformationSpace(p, 0)
    base = t.n if isinstance(t, Cyclic) else t.m
    a = valuation(base, p)
    assert a >= 1
    return DeformationSpace(p, a)


def rigidity_dim_ge_4(d: int) -> bool:
    if d < 4:
        raise BadDimension(f"dimension {d} < 4; use is_rigid for threefolds")
    return True


# root diagrams


def _component_rank(c: tuple[str, int]) -> int:
    return c[1]


def _component_str(c: tuple[str, int]) -> str:
    return f"{c[0]}{c[1]}"


def _component_key(c):
    return ("ADE".index(c[0]), c[1])


@dataclass(frozen=True)
class RootDiagram:
    """A multiset of ADE components, stored sorted."""

    components: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        comps = tuple(sorted((tuple(c) for c in self.components), key=_component_key))
        for kind, k in comps:
            parse_ade(f"{kind}{k}")
        object.__setattr__(self, "components", comps)

    @classmethod
    def parse(cls, text: str) -> "RootDiagram":
        text = text.strip()
        if text in ("", "0", "empty"):
            return cls(())
        comps = []
        for part in text.split("+"):
            part = part.strip()
            mult = 1
            i = 0
            while i < len(part) and part[i].isdigit():
                i += 1
            if i:
                mult = int(part[:i])
                part = part[i:]
            comps.extend([parse_ade(part)] * mult)
        return cls(tuple(comps))

    @property
    def rank(self) -> int:
        return sum(_component_rank(c) for c in self.components)

    def __add__(self, other: "RootDiagram") -> "RootDiagram":
        return RootDiagram(self.components + other.components)

    def __str__(self):
        if not self.components:
            return "0"
        counts = Counter(self.components)
        parts = []
        for c in sorted(counts, key=_component_key):
            k = counts[c]
            parts.append(f"{k}{_component_str(c)}" if k > 1 else _component_str(c))
        return "+".join(parts)


def _path(n: int, offset: int = 0) -> list[tuple[int, int]]:
    return [(offset + i, offset + i + 1) for i in range(n - 1)]


def dynkin_edges(kind: str, k: int, extended: bool = False) -> tuple[int, list[tuple[int, int]]]:
    """(vertex count, edges) of the Dynkin diagram, optionally extended by one node."""
    if kind == "A":
        edges = _path(k)
        if not extended:
            return k, edges
        if k == 1:
            return 2, [(0, 1)]
        return k + 1, edges + [(k - 1, k), (k, 0)]
    if kind == "D":
        edges = _path(k - 1) + [(k - 3, k - 1)]
        return (k + 1, edges + [(1, k)]) if extended else (k, edges)
    if k == 6:
        edges = _path(5) + [(2, 5)]
        return (7, edges + [(5, 6)]) if extended else (6, edges)
    if k == 7:
        edges = _path(6) + [(2, 6)]
        return (8, edges + [(0, 7)]) if extended else (7, edges)
    edges = _path(7) + [(2, 7)]
    return (9, edges + [(6, 8)]) if extended else (8, edges)


def classify_tree(vertices, edges) -> tuple[str, int]:
    """ADE type of a connected simply-laced Dynkin tree."""
    vs = list(vertices)
    nb = {v: [] for v in vs}
    for u, w in edges:
        nb[u].append(w)
        nb[w].append(u)
    n = len(vs)
    if len(edges) != n - 1:
        raise BadInput("not a tree")
    deg = {v: len(nb[v]) for v in vs}
    branch = [v for v in vs if deg[v] >= 3]
    if not branch:
        return ("A", n)
    if len(branch) > 1 or deg[branch[0]] != 3:
        raise BadInput("not a Dynkin diagram of finite type")
    c = branch[0]
    arms = []
    for start in nb[c]:
        length, prev, cur = 1, c, start
        while True:
            nxt = [v for v in nb[cur] if v != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                raise BadInput("not a Dynkin diagram of finite type")
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return ("D", arms[2] + 3)
    if arms[0] == 1 and arms[1] == 2 and arms[2] in (2, 3, 4):
        return ("E", arms[2] + 4)
    raise BadInput(f"star with arms {arms} is not of finite type")


def graph_type(vertices, edges) -> RootDiagram:
    """Components of a simply-laced Dynkin graph as a RootDiagram."""
    vs = set(vertices)
    es = [(u, w) for u, w in edges if u in vs and w in vs]
    nb = {v: set() for v in vs}
    for u, w in es:
        nb[u].add(w)
        nb[w].add(u)
    comps, seen = [], set()
    for v in sorted(vs):
        if v in seen:
            continue
        comp, stack = {v}, [v]
        while stack:
            for w in nb[stack.pop()]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(classify_tree(comp, [(u, w) for u, w in es if u in comp]))
    return RootDiagram(tuple(comps))


def _moves(c: tuple[str, int]) -> set[RootDiagram]:
    """Diagrams obtained from a connected type by one Borel-de Siebenthal move."""
    out = set()
    for extended in (False, True):
        n, edges = dynkin_edges(*c, extended=extended)
        if extended and c[0] == "A" and c[1] == 1:
            out.add(RootDiagram((c,)))
            continue
        for v in range(n):
            out.add(graph_type([u for u in range(n) if u != v], edges))
    out.discard(RootDiagram((c,)))
    return out


@lru_cache(maxsize=None)
def _connected_specializations(c: tuple[str, int]) -> frozenset[RootDiagram]:
    result = {RootDiagram((c,)), RootDiagram(())}
    for d in _moves(c):
        result |= _diagram_specializations(d)
    return frozenset(result)


def _diagram_specializations(d: RootDiagram) -> frozenset[RootDiagram]:
    parts = [_connected_specializations(c) for c in d.components]
    out = set()
    for choice in product(*parts):
        total = RootDiagram(())
        for x in choice:
            total = total + x
        out.add(total)
    return frozenset(out)


def rdp_specializations(g0) -> frozenset[RootDiagram]:
    """All root-subsystem types of the root system of g0 (including g0 and the empty one)."""
    if isinstance(g0, str):
        g0 = RootDiagram.parse(g0)
    if not g0.components:
        return frozenset({RootDiagram(())})
    return _diagram_specializations(g0)


def ade_length(c: tuple[str, int]) -> int:
    """Length of the group scheme attached to a rational double point of type c."""
    kind, k = c
    if kind == "A":
        return k + 1
    if kind == "D":
        return 4 * (k - 2)
    return {6: 24, 7: 48, 8: 120}[k]


@dataclass(frozen=True)
class MonotonicityReport:
    g0: RootDiagram
    specializations: tuple[RootDiagram, ...]
    lengths: tuple[tuple[int, ...], ...]
    violations: tuple[str, ...]

    @property
    def monotone(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "gamma": str(self.g0),
            "length": ade_length(self.g0.components[0]),
            "specializations": [str(s) for s in self.specializations],
            "lengths": [list(x) for x in self.lengths],
            "monotone": self.monotone,
            "violations": list(self.violations),
        }


def _diagram_sort_key(d: RootDiagram):
    return (d.rank, [_component_key(c) for c in d.components])


def length_monotonic_check(g0) -> MonotonicityReport:
    if isinstance(g0, str):
        g0 = RootDiagram.parse(g0)
    if len(g0.components) != 1:
        raise BadInput("length check needs a single ADE type")
    top = ade_length(g0.components[0])
    specs = tuple(sorted(rdp_specializations(g0), key=_diagram_sort_key))
    lengths, violations = [], []
    for s in specs:
        ls = tuple(ade_length(c) for c in s.components)
        lengths.append(ls)
        for c, l in zip(s.components, ls):
            if l > top:
                violations.append(f"{_component_str(c)} in {s} has length {l} > {top}")
    return MonotonicityReport(g0, specs, tuple(lengths), tuple(violations))


@dataclass(frozen=True)
class Dominance:
    dominates: bool
    n: int
    n_prime: int

    def to_json(self) -> dict:
        return {"dominates": self.dominates, "n": self.n, "n_prime": self.n_prime}


def _check_sequence(a, name: str) -> list[int]:
    a = list(a)
    if not a:
        raise BadSequence(f"{name} is empty")
    if any(not isinstance(x, int) or x < 2 for x in a):
        raise BadSequence(f"{name} must have all entries >= 2, got {a}")
    return a


def cyclic_deformation_dominance(a, a_prime) -> Dominance:
    """Compare HJ sequences position-wise over the shorter one.

    a' dominated by a means len(a') <= len(a) and a'_i <= a_i; then the
    continuants satisfy n' <= n and n' - A'_{k'-1} <= n - A_{k-1}.
    """
    a = _check_sequence(a, "a")
    ap = _check_sequence(a_prime, "a'")
    A, Ap = continuants(a), continuants(ap)
    dom = len(ap) <= len(a) and all(x <= y for x, y in zip(ap, a))
    if dom:
        assert Ap[-1] <= A[-1]
        assert Ap[-1] - Ap[-2] <= A[-1] - A[-2]
    return Dominance(dom, A[-1], Ap[-1])
