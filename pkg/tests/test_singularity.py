from fractions import Fraction
from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lrq.classify import bd, bi, mu_nq, mu_sl2, mu_weights
from lrq.errors import BadInput, NotImplementedForNonAbelian, NotVerySmall, Unrealizable
from lrq.exactmath import CycMatrix
from lrq.groups import close, is_power_of
from lrq.lrgs import LrRepresentation, make_scheme
from lrq.oracles import cf_value
from lrq.singularity import (
    CyclicType,
    DualGraph,
    LrqSingularity,
    ade_graph,
    canonical_toric_form,
    continuants,
    hilbert_basis,
    hilbert_kunz,
    hj_fraction,
    invariants,
    is_f_regular_graph,
    parse_cyclic_type,
    rdp_group_for,
    resolution_chain,
)


def lrq(G, p=0):
    return LrqSingularity(LrRepresentation.natural(make_scheme(p, G)))


def in_monoid(n, qs, e):
    return sum(q * x for q, x in zip(qs, e)) % n == 0


def hk_brute(n, qs):
    """Monomials in [0,n)^d lying under no nonzero invariant monomial."""
    d = len(qs)
    count = 0
    for e in product(range(n), repeat=d):
        under = any(any(f) and in_monoid(n, qs, f) for f in product(*(range(x + 1) for x in e)))
        count += not under
    return Fraction(count, n)


def test_hilbert_basis_examples():
    assert hilbert_basis(CyclicType(3, (1, 2))) == [(3, 0), (1, 1), (0, 3)]
    assert hilbert_basis(CyclicType(2, (1, 1))) == [(2, 0), (1, 1), (0, 2)]
    assert sorted(hilbert_basis(CyclicType(1, (1, 1, 1)))) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


@pytest.mark.parametrize("n,qs", [(5, (1, 2)), (7, (1, 3)), (6, (1, 5)), (4, (1, 1, 3)), (5, (1, 2, 3))])
def test_hilbert_basis_generates(n, qs):
    basis = hilbert_basis(CyclicType(n, qs))
    d = len(qs)
    box = list(product(range(2 * n + 1), repeat=d))
    reach = {(0,) * d}
    for e in sorted(box, key=sum):
        if any(all(b <= x for b, x in zip(bb, e)) and tuple(x - b for b, x in zip(bb, e)) in reach for bb in basis):
            reach.add(e)
    for e in box:
        if in_monoid(n, qs, e):
            assert e in reach


@pytest.mark.parametrize("n", range(2, 51))
def test_hk_closed_forms(n):
    assert hilbert_kunz(CyclicType(n, (1, 1))) == Fraction(n + 1, 2)
    assert hilbert_kunz(CyclicType(n, (1, n - 1))) == 2 - Fraction(1, n)


def test_hk_smooth():
    assert hilbert_kunz(CyclicType(1, (1, 1))) == 1
    assert hilbert_kunz(CyclicType(1, (1, 1, 1))) == 1


@pytest.mark.parametrize("n,qs", [(3, (1, 1, 1)), (5, (1, 2, 3)), (7, (1, 2, 4)), (4, (1, 1, 3)), (6, (1, 5, 5))])
def test_hk_three_dim_against_brute_force(n, qs):
    assert hilbert_kunz(CyclicType(n, qs)) == hk_brute(n, qs)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 15), st.data())
def test_hk_surface_bounds(n, data):
    q = data.draw(st.sampled_from([q for q in range(1, n) if gcd(q, n) == 1]))
    e = hilbert_kunz(CyclicType(n, (1, q)))
    assert (e * n).denominator == 1 and e * n <= n * n
    assert e > 1
    assert e == hk_brute(n, (1, q))


def test_hk_needs_cyclic():
    with pytest.raises(NotImplementedForNonAbelian):
        hilbert_kunz(lrq(bd(3)))
    assert hilbert_kunz(lrq(mu_nq(5, 2))) == hilbert_kunz(CyclicType(5, (1, 2)))


@pytest.mark.parametrize("n,q,a", [(2, 1, [2]), (5, 2, [3, 2]), (12, 5, [3, 2, 3])])
def test_hj_examples(n, q, a):
    assert hj_fraction(n, q) == a


@pytest.mark.parametrize("a,A", [([2], [1, 2]), ([3, 2], [1, 3, 5]), ([3, 2, 3], [1, 3, 5, 12])])
def test_continuant_examples(a, A):
    assert continuants(a) == A


def test_hj_round_trip():
    for n in range(2, 201):
        for q in range(1, n):
            if gcd(q, n) == 1:
                a = hj_fraction(n, q)
                assert min(a) >= 2
                assert cf_value(a) == Fraction(n, q)
                assert continuants(a)[-1] == n


@pytest.mark.parametrize("n,q", [(5, 5), (6, 4), (4, 0)])
def test_hj_bad_input(n, q):
    with pytest.raises(BadInput):
        hj_fraction(n, q)


def test_resolution_chain():
    assert resolution_chain(6, 5).self_intersections == (-2,) * 5
    assert resolution_chain(5, 2).self_intersections == (-3, -2)
    assert resolution_chain(2, 1).self_intersections == (-2,)
    assert resolution_chain(12, 5).shape() == ("chain",)


def test_ade_shapes():
    assert ade_graph("A5").shape() == ("chain",)
    assert ade_graph("D4").shape() == ("star", (2, 2, 2))
    assert ade_graph("D7").shape() == ("star", (2, 2, 5))
    assert ade_graph("E6").shape() == ("star", (2, 3, 3))
    assert ade_graph("E7").shape() == ("star", (2, 3, 4))
    assert ade_graph("E8").shape() == ("star", (2, 3, 5))


@pytest.mark.parametrize("name,p,ok", [
    ("E8", 7, True), ("E8", 5, False), ("D4", 2, False), ("D4", 3, True),
    ("E6", 3, False), ("E7", 5, True), ("A3", 2, True), ("E8", 0, True),
])
def test_hara_gates(name, p, ok):
    assert is_f_regular_graph(ade_graph(name), p)[0] is ok


def test_other_graph_not_f_regular():
    # two branch vertices
    g = DualGraph((-2,) * 6, ((0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (3, 0)))
    assert g.shape() == ("other",)
    assert not is_f_regular_graph(g, 7)[0]


def test_star_with_big_discriminant():
    # arms (2, 3, 7) built from -2 chains
    edges = [(0, 1)] + [(0, 2), (2, 3)] + [(0, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9)]
    g = DualGraph((-2,) * 10, tuple(edges))
    assert g.shape() == ("star", (2, 3, 7))
    assert not is_f_regular_graph(g, 11)[0]


def test_rdp_table():
    r = rdp_group_for("A4", 5)
    assert (r.family, r.length, r.etale) == ("Mu", 5, False)
    r = rdp_group_for("E8", 7)
    assert (r.family, r.length, r.etale) == ("BI", 120, True)
    assert rdp_group_for("D5", 3).length == 12
    with pytest.raises(Unrealizable):
        rdp_group_for("E6", 2)
    with pytest.raises(Unrealizable):
        rdp_group_for("D4", 2)


def test_invariants_mu_n():
    for n, p in [(5, 7), (9, 3), (6, 3), (8, 2)]:
        inv = invariants(lrq(mu_sl2(n), p))
        assert inv.f_signature == Fraction(1, n)
        assert inv.class_group.as_list() == [n]
        # the etale quotient is trivial exactly when n is a power of p
        assert (inv.pi1_order == 1) == is_power_of(n, p)


def test_invariants_bi_and_bd3():
    inv = invariants(lrq(bi(), 7))
    assert inv.f_signature == Fraction(1, 120) and inv.class_group.as_list() == [] and inv.pi1_order == 120
    inv = invariants(lrq(bd(3), 5))
    assert inv.f_signature == Fraction(1, 12) and inv.class_group.as_list() == [4]


def test_invariants_json_p_parts():
    doc = invariants(lrq(mu_sl2(6), 3)).to_json()
    assert doc["f_signature"] == "1/6"
    assert doc["class_group_dual"] == {"infinitesimal": [3], "etale": [2]}
    assert doc["pi1_etale"]["order"] == 2


def test_cyclic_type_class_group():
    for n, q in [(5, 2), (7, 3), (12, 5)]:
        assert invariants(lrq(mu_nq(n, q))).class_group.as_list() == [n]


def test_not_very_small():
    with pytest.raises(NotVerySmall):
        lrq(close([CycMatrix.diagonal([1, -1])]))


def test_cyclic_type_recovery():
    X = lrq(mu_weights(7, (1, 2, 4)))
    assert X.cyclic_type().canonical() == CyclicType(7, (1, 2, 4))


def test_parse_cyclic_type():
    t = parse_cyclic_type("1/7(1, 2, 4)")
    assert t == CyclicType(7, (1, 2, 4)) and str(t) == "1/7(1,2,4)"
    with pytest.raises(BadInput):
        parse_cyclic_type("7(1,2)")
    with pytest.raises(BadInput):
        parse_cyclic_type("1/6(1,2)")


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 30), st.data())
def test_canonical_form_properties(n, data):
    units = [q for q in range(1, n) if gcd(q, n) == 1]
    qs = data.draw(st.lists(st.sampled_from(units), min_size=2, max_size=4))
    a = data.draw(st.sampled_from(units))
    c = canonical_toric_form(n, qs)
    assert c[0] == 1 and list(c) == sorted(c)
    assert canonical_toric_form(n, c) == c
    assert canonical_toric_form(n, list(reversed(qs))) == c
    assert canonical_toric_form(n, [a * q % n for q in qs]) == c


@pytest.mark.parametrize("n", range(2, 25))
def test_canonical_form_matches_gl2_conjugacy(n):
    units = [q for q in range(1, n) if gcd(q, n) == 1]
    for q in units:
        for r in units:
            same = canonical_toric_form(n, (1, q)) == canonical_toric_form(n, (1, r))
            assert same == (q == r or q * r % n == 1)
