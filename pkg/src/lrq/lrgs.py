"""Linearly reductive group schemes modelled by (p, abstract group).

A finite linearly reductive group scheme in characteristic p is determined by
an abstract finite group with a unique abelian p-Sylow subgroup.  The Sylow
plays the role of the connected part and the quotient by it is the etale part.
Representations are given in characteristic zero by cyclotomic matrices;
fixed-space dimensions, determinants and conjugation data transfer unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd

from .errors import (
    BadInput,
    ConnectedPartNotCyclic,
    DimensionMismatch,
    NotAHomomorphism,
    NotLinearlyReductive,
)
from .exactmath import CycMatrix, CycNum, cycnum_to_json
from .groups import (
    AbelianStructure,
    FiniteGroup,
    FiniteMatrixGroup,
    abelian_invariants,
    is_prime,
    p_part,
    sylow_subgroup,
    unique_abelian_sylow,
)


def check_characteristic(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or (p != 0 and not is_prime(p)):
        raise BadInput(f"characteristic must be 0 or a prime, got {p!r}")
    return p


@dataclass(frozen=True, eq=False)
class LrGroupScheme:
    p: int
    abs: FiniteGroup

    @property
    def length(self) -> int:
        return self.abs.order

    @property
    def connected_length(self) -> int:
        return p_part(self.abs.order, self.p)

    @property
    def etale_length(self) -> int:
        return self.length // self.connected_length

    @property
    def is_etale(self) -> bool:
        return self.connected_length == 1

    @cached_property
    def connected_part(self) -> frozenset[int]:
        """Element indices of the p-Sylow subgroup."""
        return sylow_subgroup(self.abs, self.p)

    @cached_property
    def connected_factors(self) -> AbelianStructure:
        """Cyclic decomposition of the connected part (the mu_{p^k} factors)."""
        return abelian_invariants(self.abs, self.connected_part)

    def etale_quotient(self) -> tuple[FiniteGroup, list[int]]:
        return self.abs.quotient(self.connected_part)


def make_scheme(p: int, G: FiniteGroup) -> LrGroupScheme:
    check_characteristic(p)
    if p and not unique_abelian_sylow(G, p):
        raise NotLinearlyReductive(f"group of order {G.order} has no unique abelian {p}-Sylow subgroup")
    return LrGroupScheme(p, G)


class LrRepresentation:
    """A representation given by one matrix per group generator.

    The images of all elements are computed along the Cayley graph of the
    generators, and every edge is checked against the multiplication table.
    """

    def __init__(self, scheme: LrGroupScheme, images, dimension: int | None = None):
        G = scheme.abs
        images = list(images)
        if len(images) != len(G.generators):
            raise DimensionMismatch(f"expected {len(G.generators)} generator images, got {len(images)}")
        if images:
            d = images[0].rows
            if any(not M.is_square or M.rows != d for M in images):
                raise DimensionMismatch("generator images must be square of one dimension")
            if dimension is not None and dimension != d:
                raise DimensionMismatch(f"images are {d}x{d}, expected dimension {dimension}")
        elif dimension is not None:
            d = dimension
        elif isinstance(G, FiniteMatrixGroup):
            d = G.dimension
        else:
            raise BadInput("cannot infer the dimension of a representation without generators")
        self.scheme = scheme
        self.dimension = d
        self.images = tuple(images)
        if isinstance(G, FiniteMatrixGroup) and _same_matrices(images, G.generator_matrices):
            # the closure already realized every element as a product of these generators
            self.element_images = G.elements
        else:
            self.element_images = self._extend()

    def _extend(self) -> tuple[CycMatrix, ...]:
        G = self.scheme.abs
        out: list[CycMatrix | None] = [None] * G.order
        out[0] = CycMatrix.identity(self.dimension)
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g, M in zip(G.generators, self.images):
                    y = G.table[x][g]
                    img = out[x] @ M
                    if out[y] is None:
                        out[y] = img
                        nxt.append(y)
                    elif out[y] != img:
                        raise NotAHomomorphism(f"images disagree on element {y}")
            frontier = nxt
        if any(M is None for M in out):
            raise BadInput("generators do not generate the group")
        return tuple(out)

    @classmethod
    def natural(cls, scheme: LrGroupScheme) -> "LrRepresentation":
        G = scheme.abs
        if not isinstance(G, FiniteMatrixGroup):
            raise BadInput("natural representation needs a matrix group")
        return cls(scheme, G.generator_matrices)

    def image(self, g: int) -> CycMatrix:
        return self.element_images[g]

    def direct_sum(self, other: "LrRepresentation") -> "LrRepresentation":
        if other.scheme is not self.scheme:
            raise BadInput("direct sum needs representations of the same scheme")
        return LrRepresentation(self.scheme, [_block(a, b) for a, b in zip(self.images, other.images)])


def _same_matrices(a, b) -> bool:
    return len(a) == len(b) and all(x == y for x, y in zip(a, b))


def trivial_representation(scheme: LrGroupScheme, d: int = 1) -> LrRepresentation:
    return LrRepresentation(scheme, [CycMatrix.identity(d)] * len(scheme.abs.generators), dimension=d)


def _block(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    n = a.rows + b.rows
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i < a.rows and j < a.rows:
                row.append(a[i, j])
            elif i >= a.rows and j >= a.rows:
                row.append(b[i - a.rows, j - a.rows])
            else:
                row.append(0)
        rows.append(row)
    return CycMatrix.from_rows(rows)


def fixed_dimension(M: CycMatrix) -> int:
    """Dimension of the eigenvalue-1 eigenspace of M."""
    d = M.rows
    return d - M.minus_identity().rank()


def lambda_invariant(rep: LrRepresentation) -> int:
    """max over g != 1 of dim ker(rho(g) - 1); 0 for the trivial group."""
    best = 0
    seen = set()
    for g in range(1, rep.scheme.abs.order):
        M = rep.element_images[g]
        k = M.key
        if k in seen:
            continue
        seen.add(k)
        best = max(best, fixed_dimension(M))
        if best == rep.dimension:
            break
    return best


def lambda_character_sum(rep: LrRepresentation) -> int:
    """The same maximum computed from traces.

    dim V^<g> = (1/ord g) * sum_j tr rho(g^j); all generators of a cyclic
    subgroup share the value, so each cyclic subgroup is visited once.
    """
    G = rep.scheme.abs
    traces = [M.trace() for M in rep.element_images]
    done = [False] * G.order
    best = 0
    for g in range(1, G.order):
        if done[g]:
            continue
        pw = G.powers(g)
        n = len(pw)
        for k in range(1, n):
            if gcd(k, n) == 1:
                done[pw[k]] = True
        total = CycNum.rational(0)
        for x in pw:
            total = total + traces[x]
        dim = total.to_fraction() / n
        if dim.denominator != 1:
            raise AssertionError(f"non-integral fixed dimension {dim}")
        best = max(best, int(dim))
    return best


@dataclass(frozen=True)
class Predicates:
    very_small: bool
    small: bool
    faithful: bool
    gorenstein: bool

    def as_dict(self) -> dict:
        return {"very_small": self.very_small, "small": self.small,
                "faithful": self.faithful, "gorenstein": self.gorenstein}


def predicates(rep: LrRepresentation, lam: int | None = None) -> Predicates:
    lam = lambda_invariant(rep) if lam is None else lam
    faithful = not any(M.is_identity() for M in rep.element_images[1:])
    return Predicates(
        very_small=lam == 0,
        small=lam <= rep.dimension - 2,
        faithful=faithful,
        gorenstein=all(M.det() == 1 for M in rep.images),
    )


@dataclass(frozen=True)
class SchemeCharacter:
    """A one-dimensional character, one root of unity per element index."""

    values: tuple[CycNum, ...]

    @property
    def trivial(self) -> bool:
        one = CycNum.rational(1)
        return all(v == one for v in self.values)

    def is_multiplicative(self, G: FiniteGroup) -> bool:
        if self.values[0] != CycNum.rational(1):
            return False
        return all(
            self.values[G.table[a][b]] == self.values[a] * self.values[b]
            for a in range(G.order) for b in G.generators
        )

    def to_json(self) -> dict:
        return {"values": [[i, cycnum_to_json(v)] for i, v in enumerate(self.values)],
                "trivial": self.trivial}


def det_character(rep: LrRepresentation) -> SchemeCharacter:
    """Element-wise determinant, propagated multiplicatively from the generators."""
    G = rep.scheme.abs
    gen_dets = [M.det() for M in rep.images]
    values: list[CycNum | None] = [None] * G.order
    values[0] = CycNum.rational(1)
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, dg in zip(G.generators, gen_dets):
                y = G.table[x][g]
                if values[y] is None:
                    values[y] = values[x] * dg
                    nxt.append(y)
        frontier = nxt
    return SchemeCharacter(tuple(values))


@dataclass(frozen=True)
class AdCharacter:
    """Conjugation action on a cyclic connected part, valued in (Z/p)^x.

    ``values[g]`` is c(g) mod p where g x g^-1 = x^c(g) for a generator x of
    the p-Sylow.  For etale schemes the Lie algebra is zero and the character
    is recorded as trivial with ``etale`` set.
    """

    p: int
    values: tuple[int, ...]
    generator_values: tuple[int, ...]
    etale: bool = False
    sylow_generator: int | None = None

    @property
    def trivial(self) -> bool:
        return all(v == 1 for v in self.values)

    def order_of(self, g: int) -> int:
        """Multiplicative order of values[g] in (Z/p)^x."""
        v, k = self.values[g], 1
        if self.etale:
            return 1
        x = v
        while x != 1:
            x = x * v % self.p
            k += 1
        return k

    def to_json(self) -> dict:
        return {"char": self.p, "etale": self.etale, "trivial": self.trivial,
                "generator_values": list(self.generator_values)}


def ad_character(scheme: LrGroupScheme) -> AdCharacter:
    G = scheme.abs
    if scheme.is_etale:
        ones = (1,) * G.order
        return AdCharacter(scheme.p, ones, (1,) * len(G.generators), etale=True)
    S = scheme.connected_part
    s = len(S)
    x = next((g for g in range(G.order) if G.element_orders[g] == s), None)
    if x is None or x not in S:
        raise ConnectedPartNotCyclic(f"the {scheme.p}-Sylow subgroup of order {s} is not cyclic")
    pw = G.powers(x)
    where = {y: k for k, y in enumerate(pw)}
    inv = G.inverses
    values = []
    for g in range(G.order):
        y = G.table[G.table[g][x]][inv[g]]
        c = where[y]
        assert gcd(c, s) == 1, "conjugation must induce an automorphism of the Sylow"
        values.append(c % scheme.p)
    values = tuple(values)
    return AdCharacter(scheme.p, values, tuple(values[g] for g in G.generators), sylow_generator=x)
