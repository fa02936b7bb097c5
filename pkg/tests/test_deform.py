from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrq import deform
from lrq.classify import gl3_cyclic_parameters
from lrq.deform import (
    Cyclic,
    DeformationSpace,
    Metacyclic,
    RootDiagram,
    cyclic_deformation_dominance,
    deformation_space,
    is_rigid,
    length_monotonic_check,
    rdp_specializations,
    rigidity_dim_ge_4,
)
from lrq.errors import BadDimension, BadInput, BadSequence, MissingIdentification
from lrq.exactmath import CycMatrix, root_of_unity
from lrq.groups import FiniteGroup, is_prime, valuation
from lrq.lrgs import LrGroupScheme, LrRepresentation, ad_character, det_character
from lrq.oracles import brute_force_specializations
from lrq.singularity import continuants

PRIMES_50 = [p for p in range(2, 51) if is_prime(p)]


def test_rigidity_examples():
    assert not is_rigid(Cyclic(7, 2, 4), 7)
    assert is_rigid(Cyclic(7, 2, 4), 2)
    assert is_rigid(Cyclic(3, 1, 1), 5)
    assert not is_rigid(Cyclic(49, 3, 45), 7)
    assert is_rigid(Cyclic(49, 3, 45), 0)


def test_deformation_space_examples():
    sp = deformation_space(Cyclic(7, 2, 4), 7)
    assert sp == DeformationSpace(7, 1)
    assert sp.descriptor == "W(k)[eps]/(eps^2, 7*eps)"
    assert sp.reduced == "Spec W(k)"
    assert deformation_space(Cyclic(49, 3, 45), 7).exponent == 2
    assert deformation_space(Cyclic(49, 3, 45), 7).descriptor == "W(k)[eps]/(eps^2, 7^2*eps)"
    assert deformation_space(Cyclic(5, 1, 1), 5).rigid


def test_dim_ge_4():
    assert rigidity_dim_ge_4(4) and rigidity_dim_ge_4(17)
    with pytest.raises(BadDimension):
        rigidity_dim_ge_4(3)


def test_type_validation():
    with pytest.raises(BadInput):
        Cyclic(6, 2, 1)
    with pytest.raises(BadInput):
        Metacyclic(7, 1, 1, 2)
    with pytest.raises(BadInput):
        Metacyclic(7, 2, 3, 2)


def test_metacyclic_needs_identification():
    t = Metacyclic(7, 2, 1, 2)
    with pytest.raises(MissingIdentification):
        is_rigid(t, 7)
    # the two primitive cube roots mod 7 are 2 and 4
    assert not is_rigid(t, 7, cube_root_choice=2)
    assert is_rigid(t, 7, cube_root_choice=4)
    with pytest.raises(BadInput):
        is_rigid(t, 7, cube_root_choice=3)
    assert deformation_space(t, 7, 2).exponent == 1


def test_metacyclic_choice_free_cases():
    # f >= 3: zeta_{3^(f-1)} has order 9 and never matches an order-3 value
    assert is_rigid(Metacyclic(7, 3, 1, 2), 7)
    # N > 1: det is nontrivial on mu_N
    assert is_rigid(Metacyclic(7, 2, 2, 2), 7)
    assert is_rigid(Metacyclic(7, 2, 2, 2), 2)
    # etale
    assert is_rigid(Metacyclic(7, 2, 1, 2), 5)


def test_metacyclic_characters_agree_with_rule():
    """chi_ad = chi_det on the C_9 generator exactly when r mod p is the chosen cube root."""
    from lrq.classify import metacyclic3

    G = metacyclic3(7, 2, 1, 2)
    scheme = LrGroupScheme(7, G)
    ad = ad_character(scheme)
    det = det_character(LrRepresentation.natural(scheme))
    a, c9 = G.generators
    assert ad.values[a] == 1 and det.values[a] == root_of_unity(1, 0)
    assert det.values[c9] == root_of_unity(3, 1)
    # identifying zeta_3 with z in F_7: chi_ad(c9) = z iff the choice is r mod 7
    assert ad.values[c9] == 2


@lru_cache(maxsize=None)
def _cyclic_table(n):
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], [1])


@lru_cache(maxsize=None)
def _ad(n, p):
    return ad_character(LrGroupScheme(p, _cyclic_table(n)))


def test_rigidity_matches_characters():
    """Compare with the criterion: rigid iff etale or chi_ad != chi_det.

    For a diagonal action chi_det is the character of the one-dimensional
    representation det(rho), which is cheap to extend over the group.
    """
    bad = []
    for n, q1, q2 in gl3_cyclic_parameters(100):
        if n == 1:
            continue
        scheme = LrGroupScheme(0, _cyclic_table(n))
        d = root_of_unity(n, 1 + q1 + q2)
        chi_det = det_character(LrRepresentation(scheme, [CycMatrix.from_rows([[d]])]))
        for p in PRIMES_50:
            ad = _ad(n, p)
            assert ad.trivial
            expected = ad.etale or not chi_det.trivial
            if is_rigid(Cyclic(n, q1, q2), p) != expected:
                bad.append((n, q1, q2, p))
    assert not bad


def test_p2_sweep_all_rigid():
    for n in range(2, 101):
        for q1 in range(1, n):
            for q2 in range(q1, n):
                try:
                    t = Cyclic(n, q1, q2)
                except BadInput:
                    continue
                assert is_rigid(t, 2)


@pytest.mark.parametrize("p", [3, 5, 7, 13])
def test_exponent_is_valuation(p):
    for n, q1, q2 in gl3_cyclic_parameters(60):
        sp = deformation_space(Cyclic(n, q1, q2), p)
        if not sp.rigid:
            assert sp.exponent == valuation(n, p) >= 1


# root diagrams


def test_a3_specializations():
    got = {str(d) for d in rdp_specializations("A3")}
    assert got == {"0", "A1", "2A1", "A2", "A3"}


def test_e8_contains_d8_and_a8():
    specs = rdp_specializations("E8")
    assert RootDiagram.parse("D8") in specs and RootDiagram.parse("A8") in specs
    assert RootDiagram.parse("E7+A1") in specs and RootDiagram.parse("2A4") in specs
    assert RootDiagram.parse("E8") in specs and RootDiagram(()) in specs


@pytest.mark.parametrize("kind,k", [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("D", 4)])
def test_matches_brute_force(kind, k):
    assert set(rdp_specializations(RootDiagram(((kind, k),)))) == brute_force_specializations(kind, k)


@pytest.mark.parametrize("n", range(1, 9))
def test_a_n_only_a_types(n):
    for d in rdp_specializations(f"A{n}"):
        assert all(c[0] == "A" for c in d.components)
        assert sum(c[1] + 1 for c in d.components) <= n + 1


@pytest.mark.parametrize("small,big", [("A3", "D4"), ("D4", "D5"), ("E6", "E7"), ("E7", "E8"),
                                       ("A2+A1", "A4"), ("D5", "E6"), ("A1", "2A1")])
def test_monotone_under_inclusion(small, big):
    assert RootDiagram.parse(small) in rdp_specializations(big)
    assert rdp_specializations(small) <= rdp_specializations(big)


def test_multiset_specializations_are_products():
    got = rdp_specializations("A1+A2")
    assert {str(d) for d in got} == {"0", "A1", "2A1", "A2", "A1+A2"}


def test_root_diagram_parse_and_rank():
    d = RootDiagram.parse("2A1+D4")
    assert d.rank == 6 and str(d) == "2A1+D4"
    assert str(RootDiagram(())) == "0"
    with pytest.raises(BadInput):
        RootDiagram.parse("D3")


def test_length_monotone_examples():
    rep = length_monotonic_check("D4")
    assert rep.monotone
    lengths = dict(zip(map(str, rep.specializations), rep.lengths))
    assert lengths["A3"] == (4,) and lengths["4A1"] == (2, 2, 2, 2)
    rep = length_monotonic_check("E8")
    assert rep.monotone
    i = rep.specializations.index(RootDiagram.parse("D8"))
    assert rep.lengths[i] == (24,)
    rep = length_monotonic_check("A1")
    assert {str(s) for s in rep.specializations} == {"0", "A1"}


@pytest.mark.parametrize("name", [f"A{k}" for k in range(1, 9)] + [f"D{k}" for k in range(4, 9)] + ["E6", "E7", "E8"])
def test_length_monotone_everywhere(name):
    assert length_monotonic_check(name).monotone


# dominance


def test_dominance_examples():
    r = cyclic_deformation_dominance([3, 2, 3], [2, 2, 2])
    assert r.dominates and (r.n, r.n_prime) == (12, 4)
    r = cyclic_deformation_dominance([2, 4], [2, 4])
    assert r.dominates and r.n == r.n_prime
    assert not cyclic_deformation_dominance([2, 2], [3]).dominates


@pytest.mark.parametrize("a,b", [([1, 2], [2]), ([2], []), ([2, 3], [0])])
def test_dominance_bad_sequences(a, b):
    with pytest.raises(BadSequence):
        cyclic_deformation_dominance(a, b)


seqs = st.lists(st.integers(2, 5), min_size=1, max_size=8)


@settings(max_examples=200, deadline=None)
@given(seqs, st.data())
def test_dominance_implies_continuant_bounds(a, data):
    k = data.draw(st.integers(1, len(a)))
    b = [data.draw(st.integers(2, x)) for x in a[:k]]
    r = cyclic_deformation_dominance(a, b)
    assert r.dominates
    A, B = continuants(a), continuants(b)
    assert B[-1] <= A[-1]
    assert B[-1] - B[-2] <= A[-1] - A[-2]


@settings(max_examples=100, deadline=None)
@given(seqs, seqs)
def test_dominance_flag(a, b):
    r = cyclic_deformation_dominance(a, b)
    assert r.dominates == (len(b) <= len(a) and all(x <= y for x, y in zip(b, a)))
    if r.dominates:
        assert r.n_prime <= r.n


def test_cyclic_from_weights():
    assert deform.cyclic_from_weights(7, (2, 4, 1)) == Cyclic(7, 2, 4)
    with pytest.raises(BadInput):
        deform.cyclic_from_weights(7, (1, 2))
