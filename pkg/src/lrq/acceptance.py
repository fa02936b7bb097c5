"""Acceptance checks, each returning a Result with a pass flag and a short detail line."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import classify, deform, oracles
from .groups import abelianization, valuation
from .lrgs import LrRepresentation, lambda_character_sum, lambda_invariant, make_scheme
from .singularity import (
    CyclicType,
    LrqSingularity,
    ade_graph,
    continuants,
    hilbert_kunz,
    hj_fraction,
    invariants,
    is_f_regular_graph,
)


@dataclass
class Result:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail} ({self.seconds:.1f}s)"


@lru_cache(maxsize=None)
def catalogs() -> dict[str, list]:
    """The catalogs audited by the suite."""
    return {
        "sl2(p=7, L=120)": classify.sl2_catalog(7, 120),
        "gl2(p=0, L=96)": classify.gl2_catalog(0, 96),
        "sl3(p=0, m<=50)": classify.sl3_catalog(0, 50),
        "gl3(p=0, m<=50)": classify.gl3_catalog(0, 50, 256),
    }


def catalog_lengths() -> Result:
    entries = classify.sl2_catalog(7, 120)
    got = {(e.family, tuple(e.params.values())): e.length for e in entries}
    want = {("Mu", (n,)): n for n in range(1, 121)}
    want.update({("BD", (n,)): 4 * n for n in range(2, 31)})
    want.update({("BT", ()): 24, ("BO", ()): 48, ("BI", ()): 120})
    closure_ok = all(e.scheme.abs.order == e.length for e in entries)
    ok = got == want and closure_ok
    return Result("catalog lengths", ok, f"{len(entries)} entries, expected {len(want)}")


def lambda_audit() -> Result:
    bad, total = [], 0
    for name, entries in catalogs().items():
        for e in entries:
            total += 1
            a = lambda_invariant(e.rep)
            b = lambda_character_sum(e.rep)
            if a != 0 or b != 0:
                bad.append(f"{name} {e.family}{e.params}: rank {a}, traces {b}")
    return Result("very-smallness audit", not bad, f"{total} entries" + (f", failures {bad[:3]}" if bad else ""))


def hk_closed_forms() -> Result:
    bad = []
    for n in range(2, 51):
        if hilbert_kunz(CyclicType(n, (1, 1))) != Fraction(n + 1, 2):
            bad.append(f"(1,1) n={n}")
        if hilbert_kunz(CyclicType(n, (1, n - 1))) != 2 - Fraction(1, n):
            bad.append(f"(1,n-1) n={n}")
    return Result("Hilbert-Kunz closed forms", not bad, "n in 2..50" + (f", failures {bad}" if bad else ""))


def f_signature() -> Result:
    bad, total = [], 0
    for name, entries in catalogs().items():
        for e in entries:
            if e.length == 1:
                continue  # the smooth point is not a quotient singularity of a nontrivial group
            total += 1
            inv = invariants(LrqSingularity(e.rep, lam=0))
            if inv.f_signature != Fraction(1, e.length) or inv.to_json()["f_signature"] != f"1/{e.length}":
                bad.append(f"{name} {e.family}{e.params}")
    return Result("F-signature", not bad, f"{total} entries" + (f", failures {bad[:3]}" if bad else ""))


def hj_round_trip() -> Result:
    bad, total = [], 0
    for n in range(2, 201):
        for q in range(1, n):
            if gcd(q, n) != 1:
                continue
            total += 1
            a = hj_fraction(n, q)
            if min(a) < 2 or oracles.cf_value(a) != Fraction(n, q) or continuants(a)[-1] != n:
                bad.append((n, q))
    return Result("HJ round-trip", not bad, f"{total} pairs" + (f", failures {bad[:5]}" if bad else ""))


def class_groups() -> Result:
    bad = []
    for n in range(1, 21):
        if abelianization(classify.mu_sl2(n)).as_list() != ([n] if n > 1 else []):
            bad.append(f"mu_{n}")
    for n in range(2, 21):
        want = [4] if n % 2 else [2, 2]
        G = classify.bd(n)
        if abelianization(G).as_list() != want or oracles.abelianization_oracle(G.table) != want:
            bad.append(f"BD_{n}")
    for label, G, want in (("BT", classify.bt(), [3]), ("BO", classify.bo(), [2]), ("BI", classify.bi(), [])):
        if oracles.abelianization_oracle(G.table) != want or abelianization(G).as_list() != want:
            bad.append(label)
    # invariants() reports the same groups
    for n, G in ((5, classify.bd(5)), (6, classify.bd(6))):
        inv = invariants(LrqSingularity(LrRepresentation.natural(make_scheme(0, G)), lam=0))
        if inv.class_group.as_list() != ([4] if n % 2 else [2, 2]):
            bad.append(f"invariants BD_{n}")
    return Result("class groups", not bad, "mu_n, BD_n (n<=20), BT, BO, BI" + (f", failures {bad}" if bad else ""))


def _cyclic_types(max_n: int):
    for n in range(2, max_n + 1):
        for q1 in range(1, n):
            if gcd(q1, n) != 1:
                continue
            for q2 in range(q1, n):
                if gcd(q2, n) == 1:
                    yield deform.Cyclic(n, q1, q2)


def rigidity_sweep() -> Result:
    bad = []
    count = 0
    for t in _cyclic_types(100):
        count += 1
        if not deform.is_rigid(t, 2):
            bad.append(f"p=2 {t}")
        expected = t.n % 7 == 0 and (1 + t.q1 + t.q2) % t.n == 0
        if deform.is_rigid(t, 7) == expected:
            bad.append(f"p=7 {t}")
        space = deform.deformation_space(t, 7)
        if expected and space.exponent != valuation(t.n, 7):
            bad.append(f"exponent {t}")
        if not expected and not space.rigid:
            bad.append(f"space {t}")
    return Result("rigidity sweep", not bad, f"{count} types at p=2 and p=7" + (f", failures {bad[:5]}" if bad else ""))


def hara_gates() -> Result:
    expected = {
        "A5": {2, 3, 5, 7},
        "D6": {3, 5, 7},
        "E6": {5, 7},
        "E7": {5, 7},
        "E8": {7},
    }
    bad = []
    for name, good in expected.items():
        g = ade_graph(name)
        for p in (2, 3, 5, 7):
            if is_f_regular_graph(g, p)[0] != (p in good):
                bad.append(f"{name} p={p}")
    return Result("Hara graph gates", not bad, "A, D, E6, E7, E8 at p in 2,3,5,7" + (f", failures {bad}" if bad else ""))


def root_subsystems() -> Result:
    bad = []
    for kind, k in (("A", 1), ("A", 2), ("A", 3), ("D", 4)):
        brute = oracles.brute_force_specializations(kind, k)
        if brute != set(deform.rdp_specializations(deform.RootDiagram(((kind, k),)))):
            bad.append(f"{kind}{k}")
    for n in range(1, 9):
        for d in deform.rdp_specializations(f"A{n}"):
            if any(c[0] != "A" for c in d.components) or sum(c[1] + 1 for c in d.components) > n + 1:
                bad.append(f"A{n} -> {d}")
    return Result("root-subsystem oracle", not bad, "A1, A2, A3, D4 exact; A_n, n<=8" + (f", failures {bad[:5]}" if bad else ""))


def length_monotonicity() -> Result:
    names = [f"A{k}" for k in range(1, 9)] + [f"D{k}" for k in range(4, 9)] + ["E6", "E7", "E8"]
    bad, total = [], 0
    for name in names:
        rep = deform.length_monotonic_check(name)
        total += len(rep.specializations)
        bad.extend(rep.violations)
    return Result("length monotonicity", not bad, f"{total} specializations over {len(names)} types" + (f", failures {bad[:3]}" if bad else ""))


def prime_power_cyclicity() -> Result:
    bad, total = [], 0
    for p, entries in ((2, classify.gl2_catalog(2, 96)), (3, classify.gl3_catalog(3, 50, 256))):
        for e in entries:
            total += 1
            if not e.scheme.abs.is_cyclic():
                bad.append(f"p={p} {e.family}{e.params}")
    return Result("d = p^i cyclicity", not bad, f"{total} entries" + (f", failures {bad[:3]}" if bad else ""))


CRITERIA = (
    catalog_lengths,
    lambda_audit,
    hk_closed_forms,
    f_signature,
    hj_round_trip,
    class_groups,
    rigidity_sweep,
    hara_gates,
    root_subsystems,
    length_monotonicity,
    prime_power_cyclicity,
)


def run_one(check) -> Result:
    start = time.perf_counter()
    try:
        res = check()
    except Exception as exc:  # report, do not abort the table
        res = Result(check.__name__, False, f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - start
    return res


def run_all() -> list[Result]:
    return [run_one(c) for c in CRITERIA]
