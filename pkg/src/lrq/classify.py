"""Very small linearly reductive subgroup schemes of SL2, GL2, SL3 and GL3.

Each catalog entry carries explicit cyclotomic generators; the group is
obtained by closure, its length is checked against the expected formula and
its natural representation is verified to be very small before the entry is
emitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import BadInput, NotLinearlyReductive
from .exactmath import CycMatrix, CycNum, matrix_to_json, root_of_unity
from .groups import FiniteMatrixGroup, close, p_part
from .lrgs import (
    LrGroupScheme,
    LrRepresentation,
    check_characteristic,
    lambda_invariant,
    make_scheme,
    predicates,
)
from .singularity import canonical_toric_form

FAMILIES = (
    "Mu", "MuNQ", "BD", "BT", "BO", "BI",
    "Brieskorn2a", "Brieskorn2b", "Brieskorn3a", "Brieskorn3b", "Brieskorn4", "Brieskorn5",
    "Metacyclic3",
)

# order of parameters inside a family, used for sorting and for the CLI
PARAM_KEYS = {
    "Mu": ("n",),
    "MuNQ": ("n", "q"),
    "BD": ("n",),
    "BT": (),
    "BO": (),
    "BI": (),
    "Brieskorn2a": ("m", "n"),
    "Brieskorn2b": ("m", "n"),
    "Brieskorn3a": ("m",),
    "Brieskorn3b": ("m",),
    "Brieskorn4": ("m",),
    "Brieskorn5": ("m",),
    "Metacyclic3": ("m", "f", "N", "r"),
}


def z(m: int, k: int = 1) -> CycNum:
    return root_of_unity(m, k)


def _mult_order(r: int, m: int) -> int:
    if gcd(r, m) != 1:
        return 0
    k, x = 1, r % m
    while x != 1 % m:
        x = x * r % m
        k += 1
    return k


def _inverse_mod(q: int, n: int) -> int:
    return pow(q, -1, n) if n > 1 else 1


def canonical_q(n: int, q: int) -> int:
    """Representative of {q, q^-1 mod n}: mu_{n,q} and mu_{n,q'} are conjugate."""
    if n == 1:
        return 1
    return min(q % n, _inverse_mod(q, n))


# group constructors


@lru_cache(maxsize=None)
def mu_sl2(n: int) -> FiniteMatrixGroup:
    return close([CycMatrix.diagonal([z(n), z(n, -1)])])


@lru_cache(maxsize=None)
def mu_nq(n: int, q: int) -> FiniteMatrixGroup:
    return close([CycMatrix.diagonal([z(n), z(n, q)])])


@lru_cache(maxsize=None)
def mu_weights(n: int, weights: tuple[int, ...]) -> FiniteMatrixGroup:
    return close([CycMatrix.diagonal([z(n, w) for w in weights])])


def _bd_generators(n: int) -> list[CycMatrix]:
    return [CycMatrix.diagonal([z(2 * n), z(2 * n, -1)]),
            CycMatrix.from_rows([[0, z(4)], [z(4), 0]])]


def _bt_generators() -> list[CycMatrix]:
    sqrt2 = z(8) + z(8, 7)
    h = CycMatrix.from_rows([[z(8, 7), z(8, 7)], [z(8, 5), z(8)]]).scale(sqrt2.inverse())
    return _bd_generators(2) + [h]


def _bo_generators() -> list[CycMatrix]:
    return _bt_generators() + [CycMatrix.diagonal([z(8), z(8, -1)])]


def _bi_generators() -> list[CycMatrix]:
    c = z(5) + z(5, -1)
    s = CycMatrix.from_rows([[c, 1], [1, -c]]).scale((z(5, 2) - z(5, 3)).inverse())
    return [CycMatrix.diagonal([z(10), z(10, -1)]),
            CycMatrix.from_rows([[0, 1], [-1, 0]]),
            s]


@lru_cache(maxsize=None)
def bd(n: int) -> FiniteMatrixGroup:
    return close(_bd_generators(n))


@lru_cache(maxsize=None)
def bt() -> FiniteMatrixGroup:
    return close(_bt_generators())


@lru_cache(maxsize=None)
def bo() -> FiniteMatrixGroup:
    return close(_bo_generators())


@lru_cache(maxsize=None)
def bi() -> FiniteMatrixGroup:
    return close(_bi_generators())


def _scalar(k: CycNum, d: int = 2) -> CycMatrix:
    return CycMatrix.diagonal([k] * d)


def fibered_product(h1_order: int, n1_order: int, H2: FiniteMatrixGroup,
                    n2_generators: list[CycMatrix], lift: CycMatrix | None) -> FiniteMatrixGroup:
    """psi(H1 x_Q H2) for scalar H1 = mu_{h1_order} and N1 = mu_{n1_order}.

    The common quotient Q is cyclic of order c = h1_order / n1_order <= 3.
    ``lift`` is an element of H2 whose class generates H2/N2; the isomorphism
    of quotients sends it to the class of zeta_{h1_order}.  The group is
    built both by enumerating matching pairs and by closing generators; the
    two must agree.
    """
    c = h1_order // n1_order
    n2 = H2.subgroup_closure(H2.index_of(g) for g in n2_generators)
    if H2.order != c * len(n2):
        raise BadInput("quotient orders do not match")
    # label every element of H2 by its coset h0^k N2
    label = [-1] * H2.order
    h0 = 0 if lift is None else H2.index_of(lift)
    x = 0
    for k in range(c):
        for y in n2:
            label[H2.table[x][y]] = k
        x = H2.table[x][h0]
    assert min(label) == 0
    products = set()
    for i in range(h1_order):
        s = _scalar(z(h1_order, i))
        for h in range(H2.order):
            if label[h] == i % c:
                products.add((s @ H2.elements[h]).key)
    gens = [_scalar(z(n1_order))] + list(n2_generators)
    if lift is not None:
        gens.append(_scalar(z(h1_order)) @ lift)
    G = close(gens)
    assert G.order == len(products), (G.order, len(products))
    return G


@lru_cache(maxsize=None)
def brieskorn(case: str, m: int, n: int = 0) -> FiniteMatrixGroup:
    if case == "2a":
        H = bd(n)
        return fibered_product(2 * m, 2 * m, H, _bd_generators(n), None)
    if case == "2b":
        H = bd(n)
        gens = _bd_generators(n)
        return fibered_product(4 * m, 2 * m, H, gens[:1], gens[1])
    if case == "3a":
        return fibered_product(2 * m, 2 * m, bt(), _bt_generators(), None)
    if case == "3b":
        gens = _bt_generators()
        return fibered_product(6 * m, 2 * m, bt(), gens[:2], gens[2])
    if case == "4":
        return fibered_product(2 * m, 2 * m, bo(), _bo_generators(), None)
    if case == "5":
        return fibered_product(2 * m, 2 * m, bi(), _bi_generators(), None)
    raise BadInput(f"unknown case {case!r}")


def metacyclic3_generators(m: int, f: int, N: int, r: int) -> list[CycMatrix]:
    corner = z(3 ** (f - 1))
    gens = [CycMatrix.diagonal([z(m), z(m, r), z(m, r * r)])]
    if N > 1:
        gens.append(_scalar(z(N), 3))
    gens.append(CycMatrix.from_rows([[0, 1, 0], [0, 0, 1], [corner, 0, 0]]))
    return gens


@lru_cache(maxsize=None)
def metacyclic3(m: int, f: int, N: int, r: int) -> FiniteMatrixGroup:
    return close(metacyclic3_generators(m, f, N, r), cap=max(1024, m * 3 ** f * N))


# parameter validation and characteristic gates


def _need(cond: bool, msg: str):
    if not cond:
        raise BadInput(msg)


def validate(family: str, params: dict) -> dict:
    """Check the parameter constraints of a family; returns normalized params."""
    if family not in PARAM_KEYS:
        raise BadInput(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    keys = PARAM_KEYS[family]
    if family == "MuNQ" and "q1" in params:
        keys = ("n", "q1", "q2")
    extra = set(params) - set(keys)
    _need(not extra, f"unexpected parameters for {family}: {sorted(extra)}")
    missing = [k for k in keys if k not in params]
    _need(not missing, f"missing parameters for {family}: {missing}")
    try:
        P = {k: int(params[k]) for k in keys}
    except (TypeError, ValueError) as exc:
        raise BadInput(f"parameters of {family} must be integers") from exc
    if family in ("Mu",):
        _need(P["n"] >= 1, "n must be >= 1")
    elif family == "MuNQ":
        _need(P["n"] >= 1, "n must be >= 1")
        for k in keys[1:]:
            _need(P[k] >= 1 and gcd(P[k], P["n"]) == 1, f"{k} must be a positive unit mod n")
    elif family == "BD":
        _need(P["n"] >= 2, "BD_n needs n >= 2")
    elif family == "Brieskorn2a":
        m, n = P["m"], P["n"]
        _need(n >= 2 and m >= 1 and m % 2 == 1 and gcd(m, n) == 1, "case 2a needs n >= 2, m odd, (m,n) = 1")
    elif family == "Brieskorn2b":
        m, n = P["m"], P["n"]
        _need(n >= 2 and m >= 2 and m % 2 == 0 and gcd(m, n) == 1, "case 2b needs n >= 2, m even, (m,n) = 1")
    elif family in ("Brieskorn3a", "Brieskorn4"):
        _need(P["m"] >= 1 and gcd(P["m"], 6) == 1, "needs (m,6) = 1")
    elif family == "Brieskorn3b":
        _need(P["m"] >= 1 and gcd(P["m"], 6) == 3, "needs (m,6) = 3")
    elif family == "Brieskorn5":
        _need(P["m"] >= 1 and gcd(P["m"], 30) == 1, "needs (m,30) = 1")
    elif family == "Metacyclic3":
        m, f, N, r = P["m"], P["f"], P["N"], P["r"]
        _need(m >= 2 and 0 < r <= m, "needs m >= 2 and 0 < r <= m")
        _need(f >= 2 and N >= 1 and N % 3 != 0, "needs f >= 2 and 3 not dividing N")
        _need(_mult_order(r, m) == 3, "needs ord(r) = 3 mod m")
        n = 3 ** f * N
        _need(gcd(n * (r - 1), m) == 1, "needs (n(r-1), m) = 1")
    return P


def gate(family: str, params: dict, p: int) -> bool:
    """Characteristic condition attached to each family (p = 0 always passes)."""
    if p == 0:
        return True
    if family in ("Mu", "MuNQ"):
        return True
    if family in ("BD", "Brieskorn2a", "Brieskorn2b"):
        return p >= 3
    if family in ("BT", "BO", "Brieskorn3a", "Brieskorn3b", "Brieskorn4"):
        return p >= 5
    if family in ("BI", "Brieskorn5"):
        return p >= 7
    if family == "Metacyclic3":
        return p != 3
    raise BadInput(f"unknown family {family!r}")


def expected_length(family: str, P: dict) -> int:
    if family in ("Mu", "MuNQ"):
        return P["n"]
    if family == "BD":
        return 4 * P["n"]
    if family in ("Brieskorn2a", "Brieskorn2b"):
        return 4 * P["m"] * P["n"]
    if family in ("BT", "BO", "BI"):
        return {"BT": 24, "BO": 48, "BI": 120}[family]
    if family in ("Brieskorn3a", "Brieskorn3b"):
        return 24 * P["m"]
    if family == "Brieskorn4":
        return 48 * P["m"]
    if family == "Brieskorn5":
        return 120 * P["m"]
    if family == "Metacyclic3":
        return P["m"] * 3 ** P["f"] * P["N"]
    raise BadInput(f"unknown family {family!r}")


def build_group(family: str, params: dict) -> FiniteMatrixGroup:
    P = validate(family, params)
    if family == "Mu":
        G = mu_sl2(P["n"])
    elif family == "MuNQ":
        if "q1" in P:
            G = mu_weights(P["n"], (1, P["q1"] % P["n"] if P["n"] > 1 else 1, P["q2"] % P["n"] if P["n"] > 1 else 1))
        else:
            G = mu_nq(P["n"], P["q"])
    elif family == "BD":
        G = bd(P["n"])
    elif family == "BT":
        G = bt()
    elif family == "BO":
        G = bo()
    elif family == "BI":
        G = bi()
    elif family.startswith("Brieskorn"):
        G = brieskorn(family[len("Brieskorn"):], P["m"], P.get("n", 0))
    else:
        G = metacyclic3(P["m"], P["f"], P["N"], P["r"])
    assert G.order == expected_length(family, P), (family, P, G.order)
    return G


# catalog entries


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    family: str
    params: dict
    scheme: LrGroupScheme
    rep: LrRepresentation
    length: int
    gorenstein: bool
    smooth: bool = False

    @property
    def sort_key(self):
        keys = PARAM_KEYS[self.family]
        if self.family == "MuNQ" and "q1" in self.params:
            keys = ("n", "q1", "q2")
        return (self.length, FAMILIES.index(self.family), tuple(self.params[k] for k in keys))

    def to_json(self) -> dict:
        doc = {
            "family": self.family,
            "params": dict(self.params),
            "length": self.length,
            "generators": [matrix_to_json(M) for M in self.scheme.abs.generator_matrices],
            "lambda": 0,
            "gorenstein": self.gorenstein,
        }
        if self.smooth:
            doc["smooth"] = True
        return doc


_AUDITS: dict[int, tuple] = {}


def _audit(G: FiniteMatrixGroup, rep: LrRepresentation):
    """Predicates of the natural representation; independent of p, so memoized per group."""
    hit = _AUDITS.get(id(G))
    if hit is None or hit[0] is not G:
        hit = (G, predicates(rep, lambda_invariant(rep)))
        _AUDITS[id(G)] = hit
    return hit[1]


def make_entry(family: str, params: dict, p: int) -> CatalogEntry | None:
    """Entry for ``family(params)`` in characteristic p, or None if the gate fails."""
    P = validate(family, params)
    if not gate(family, P, p):
        return None
    G = build_group(family, P)
    try:
        scheme = make_scheme(p, G)
    except NotLinearlyReductive as exc:
        raise AssertionError(f"{family}{P} passes the gate at p={p} but is not linearly reductive") from exc
    rep = LrRepresentation.natural(scheme)
    pred = _audit(G, rep)
    if not (pred.very_small and pred.faithful):
        raise AssertionError(f"{family}{P} is not very small and faithful")
    return CatalogEntry(family, P, scheme, rep, G.order, pred.gorenstein, smooth=G.order == 1)


def _collect(candidates, p: int, max_length: int | None) -> list[CatalogEntry]:
    out = []
    for family, params in candidates:
        if max_length is not None and expected_length(family, validate(family, params)) > max_length:
            continue
        entry = make_entry(family, params, p)
        if entry is not None:
            out.append(entry)
    out.sort(key=lambda e: e.sort_key)
    return out


def sl2_catalog(p: int, max_length: int) -> list[CatalogEntry]:
    check_characteristic(p)
    cands = [("Mu", {"n": n}) for n in range(1, max_length + 1)]
    cands += [("BD", {"n": n}) for n in range(2, max_length // 4 + 1)]
    cands += [("BT", {}), ("BO", {}), ("BI", {})]
    return _collect(cands, p, max_length)


def gl2_cyclic_parameters(max_length: int):
    for n in range(1, max_length + 1):
        if n == 1:
            yield 1, 1
            continue
        for q in range(1, n):
            if gcd(n, q) == 1 and canonical_q(n, q) == q:
                yield n, q


def gl2_catalog(p: int, max_length: int) -> list[CatalogEntry]:
    check_characteristic(p)
    L = max_length
    cands = [("MuNQ", {"n": n, "q": q}) for n, q in gl2_cyclic_parameters(L)]
    for m in range(1, L // 8 + 1):
        for n in range(2, L // (4 * m) + 1):
            if gcd(m, n) != 1:
                continue
            cands.append(("Brieskorn2a" if m % 2 else "Brieskorn2b", {"m": m, "n": n}))
    for m in range(1, L // 24 + 1):
        g6 = gcd(m, 6)
        if g6 == 1:
            cands.append(("Brieskorn3a", {"m": m}))
            cands.append(("Brieskorn4", {"m": m}))
        elif g6 == 3:
            cands.append(("Brieskorn3b", {"m": m}))
        if gcd(m, 30) == 1:
            cands.append(("Brieskorn5", {"m": m}))
    return _collect(cands, p, L)


def gl3_cyclic_parameters(max_m: int):
    """Canonical weight triples (1, q1, q2) for mu_m in GL3, one per conjugacy class."""
    for m in range(1, max_m + 1):
        if m == 1:
            yield 1, 1, 1
            continue
        units = [q for q in range(1, m) if gcd(q, m) == 1]
        seen = set()
        for q1 in units:
            for q2 in units:
                if q2 < q1:
                    continue
                form = canonical_toric_form(m, (1, q1, q2))
                if form not in seen:
                    seen.add(form)
        for form in sorted(seen):
            yield m, form[1], form[2]


def metacyclic3_parameters(max_m: int, max_length: int):
    for m in range(7, max_m + 1):
        rs = sorted({min(r, r * r % m) for r in range(2, m) if _mult_order(r, m) == 3 and gcd(r - 1, m) == 1})
        for r in rs:
            f = 2
            while m * 3 ** f <= max_length:
                N = 1
                while m * 3 ** f * N <= max_length:
                    if N % 3 and gcd(N, m) == 1:
                        yield m, f, N, r
                    N += 1
                f += 1


def gl3_catalog(p: int, max_m: int, max_length: int | None = None) -> list[CatalogEntry]:
    """Cyclic entries with m <= max_m and metacyclic ones with m <= max_m, length <= max_length."""
    check_characteristic(p)
    cands = [("MuNQ", {"n": m, "q1": q1, "q2": q2}) for m, q1, q2 in gl3_cyclic_parameters(max_m)]
    meta_bound = max_length if max_length is not None else 27 * max_m
    cands += [("Metacyclic3", {"m": m, "f": f, "N": N, "r": r})
              for m, f, N, r in metacyclic3_parameters(max_m, meta_bound)]
    return _collect(cands, p, max_length)


def sl3_catalog(p: int, max_m: int) -> list[CatalogEntry]:
    check_characteristic(p)
    cands = [("MuNQ", {"n": m, "q1": q1, "q2": q2})
             for m, q1, q2 in gl3_cyclic_parameters(max_m) if (1 + q1 + q2) % m == 0]
    entries = _collect(cands, p, None)
    for e in entries:
        assert e.gorenstein, e.params
    return entries


CATALOGS = {
    "sl2": sl2_catalog,
    "gl2": gl2_catalog,
    "sl3": sl3_catalog,
    "gl3": gl3_catalog,
}
