import pytest

from lrq.classify import bd, bi, bo, bt, mu_nq, mu_sl2
from lrq.errors import CapExceeded, NotInvertible
from lrq.exactmath import CycMatrix, root_of_unity
from lrq.groups import (
    AbelianStructure,
    abelian_invariants,
    abelianization,
    all_abelian_subgroups_cyclic,
    close,
    default_cap,
    is_prime,
    p_part,
    sylow_subgroup,
    unique_abelian_sylow,
    valuation,
)
from lrq.oracles import abelianization_oracle, commutator_closure


def s3():
    z = root_of_unity(3, 1)
    rot = CycMatrix.diagonal([z, z * z])
    flip = CycMatrix.from_rows([[0, 1], [1, 0]])
    return close([rot, flip])


def klein():
    return close([CycMatrix.diagonal([-1, 1]), CycMatrix.diagonal([1, -1])])


def test_bd2_order_8():
    i = root_of_unity(4, 1)
    G = close([CycMatrix.diagonal([i, -i]), CycMatrix.from_rows([[0, i], [i, 0]])])
    assert G.order == 8


def test_bi_order_120():
    assert bi().order == 120


def test_empty_generators():
    G = close([], dimension=3)
    assert G.order == 1 and G.elements[0] == CycMatrix.identity(3)


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        close([CycMatrix.diagonal([root_of_unity(12, 1), 1])], cap=5)


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("LRQ_CAP", "7")
    assert default_cap() == 7
    with pytest.raises(CapExceeded):
        close([CycMatrix.diagonal([root_of_unity(8, 1), 1])])


def test_singular_generator():
    with pytest.raises(NotInvertible):
        close([CycMatrix.from_rows([[1, 0], [0, 0]])])


@pytest.mark.parametrize("G", [mu_sl2(7), bd(3), bt(), bo(), s3()], ids=["mu7", "bd3", "bt", "bo", "s3"])
def test_table_is_a_group(G):
    n = G.order
    assert G.elements[0] == CycMatrix.identity(G.dimension)
    assert len({M.key for M in G.elements}) == n
    for a in range(n):
        assert sorted(G.table[a]) == list(range(n))
        assert G.table[a][G.inv(a)] == 0
    # spot-check associativity and agreement with matrix products
    for a in range(0, n, 3):
        for b in range(0, n, 5):
            assert G.elements[G.table[a][b]] == G.elements[a] @ G.elements[b]
            for c in range(0, n, 7):
                assert G.table[G.table[a][b]][c] == G.table[a][G.table[b][c]]


def test_bfs_order_is_deterministic():
    a, b = bt(), close(bt().generator_matrices)
    assert [M.key for M in a.elements] == [M.key for M in b.elements]


@pytest.mark.parametrize("G", [mu_sl2(12), bd(5), bt(), bo(), bi()], ids=["mu12", "bd5", "bt", "bo", "bi"])
def test_lagrange(G):
    assert all(G.order % o == 0 for o in G.element_orders)


def test_unique_abelian_sylow_s3():
    G = s3()
    assert G.order == 6
    assert unique_abelian_sylow(G, 3)
    assert not unique_abelian_sylow(G, 2)
    # oracle: three involutions, more than the 2-part of the order
    assert sum(1 for o in G.element_orders if o == 2) == 3
    assert unique_abelian_sylow(G, 5)


def test_sylow_subgroup_is_p_part():
    G = bd(6)
    S = sylow_subgroup(G, 3)
    assert len(S) == p_part(G.order, 3) and G.is_subgroup(S)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
def test_bd_abelianization_matches_oracle(n):
    G = bd(n)
    want = [4] if n % 2 else [2, 2]
    assert abelianization(G).as_list() == want
    assert abelianization_oracle(G.table) == want


@pytest.mark.parametrize("G,want", [(bt(), [3]), (bo(), [2]), (bi(), [])], ids=["bt", "bo", "bi"])
def test_polyhedral_abelianization(G, want):
    assert abelianization(G).as_list() == want
    assert G.commutator_subgroup == commutator_closure(G.table)


def test_abelianization_idempotent():
    for G in (bd(4), bt(), mu_nq(12, 5)):
        ab = abelianization(G)
        Q, _ = G.quotient(G.commutator_subgroup)
        assert abelianization(Q) == ab
        assert abelian_invariants(Q) == ab


def test_all_abelian_subgroups_cyclic():
    assert all_abelian_subgroups_cyclic(bi())
    assert all_abelian_subgroups_cyclic(mu_sl2(9))
    assert not all_abelian_subgroups_cyclic(klein())


def test_trivial_group_is_cyclic():
    G = close([], dimension=2)
    assert G.is_cyclic() and abelianization(G).is_trivial


def test_abelian_structure_chain():
    assert AbelianStructure.from_cyclic_factors([2, 3, 4]).as_list() == [2, 12]
    assert AbelianStructure.from_cyclic_factors([6, 10]).as_list() == [2, 30]
    with pytest.raises(ValueError):
        AbelianStructure((4, 6))


@pytest.mark.parametrize("n,p,v", [(8, 2, 3), (45, 3, 2), (7, 5, 0), (98, 7, 2)])
def test_valuation(n, p, v):
    assert valuation(n, p) == v and p_part(n, p) == p ** v


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
