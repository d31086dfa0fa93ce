import numpy as np
import pytest

from cliffcat.errors import InvalidGroup, NotNormal
from cliffcat.groups import (FiniteGroup, GroupAction, Subgroup, abelian, automorphism_group, complements, cyclic,
                             dihedral, direct_product, find_isomorphism, group_from_json, group_to_json,
                             homomorphisms, klein, normal_subgroups, parse_group_ref, quaternion, quotient,
                             semidirect_product, small_groups, subgroups, symmetric)

# label: (order, #subgroups, #normal subgroups, |Aut|)
CATALOG = {
    "1": (1, 1, 1, 1), "Z2": (2, 2, 2, 1), "Z3": (3, 2, 2, 2), "Z4": (4, 3, 3, 2), "V4": (4, 5, 5, 6),
    "Z5": (5, 2, 2, 4), "Z6": (6, 4, 4, 2), "D3": (6, 6, 3, 6), "Z7": (7, 2, 2, 6), "Z8": (8, 4, 4, 4),
    "Z4xZ2": (8, 8, 8, 8), "Z2xZ2xZ2": (8, 16, 16, 168), "D4": (8, 10, 6, 8), "Q8": (8, 6, 6, 24),
}


@pytest.mark.parametrize("G", small_groups(8), ids=lambda G: G.label)
def test_catalog_invariants(G):
    order, n_sub, n_norm, n_aut = CATALOG[G.label]
    assert G.order == order
    assert len(subgroups(G)) == n_sub
    assert len(normal_subgroups(G)) == n_norm
    assert len(automorphism_group(G)[1]) == n_aut


def test_small_groups_pairwise_non_isomorphic():
    gs = small_groups(8)
    for i, a in enumerate(gs):
        for b in gs[i + 1:]:
            if a.order == b.order:
                assert find_isomorphism(a, b) is None


def test_symmetric4_lattice():
    S4 = symmetric(4)
    assert S4.order == 24
    assert len(subgroups(S4, 24)) == 30
    assert len(normal_subgroups(S4, 24)) == 4


def test_table_validation():
    with pytest.raises(InvalidGroup):
        FiniteGroup.from_table([[0, 1], [1, 1]])
    with pytest.raises(InvalidGroup):
        FiniteGroup.from_table([[0, 1, 2], [1, 2, 0]])
    # a Latin square that is not associative
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(InvalidGroup):
        FiniteGroup.from_table(bad)


def test_dihedral_conventions():
    D = dihedral(4)
    r, s = 1, 4
    assert D.element_order(r) == 4 and D.element_order(s) == 2
    assert D.mul(D.mul(s, r), s) == D.inv(r)
    assert not D.is_abelian


def test_subgroup_validation_and_normality():
    D3 = dihedral(3)
    with pytest.raises(InvalidGroup):
        Subgroup.of(D3, [0, 1])
    rot = Subgroup.of(D3, [0, 1, 2])
    refl = Subgroup.of(D3, [0, 3])
    assert rot.is_normal() and not refl.is_normal()
    with pytest.raises(NotNormal):
        quotient(D3, refl)


def test_quotient_map():
    D4 = dihedral(4)
    centre = Subgroup.of(D4, [0, 2])
    qm = quotient(D4, centre)
    G = qm.quotient
    assert G.order == 4 and G.is_abelian and G.exponent == 2
    for a in range(8):
        for b in range(8):
            assert qm.projection[D4.mul(a, b)] == G.mul(int(qm.projection[a]), int(qm.projection[b]))
    for s in range(4):
        assert qm.lift(s) == min(qm.cosets[s])


def test_complements():
    D4 = dihedral(4)
    counts = sorted(len(complements(D4, N)) for N in normal_subgroups(D4))
    assert counts == [0, 1, 1, 2, 2, 4]
    Z4 = cyclic(4)
    assert complements(Z4, Z4.subgroup([0, 2])) == []


def test_semidirect_product_builds_d3():
    Z3, Z2 = cyclic(3), cyclic(2)
    inv = np.array([[0, 1, 2], [0, 2, 1]])
    act = GroupAction(Z2, Z3, inv)
    U = semidirect_product(Z3, Z2, act)
    assert U.order == 6 and not U.is_abelian
    assert find_isomorphism(U, dihedral(3)) is not None


def test_group_action_validation():
    Z2, Z3 = cyclic(2), cyclic(3)
    with pytest.raises(InvalidGroup):
        GroupAction(Z2, Z3, np.array([[0, 1, 2], [1, 2, 0]]))  # not an automorphism
    assert GroupAction.trivial(Z2, Z3) == GroupAction.trivial(Z2, Z3)


def test_homomorphism_counts():
    assert len(homomorphisms(cyclic(4), cyclic(2))) == 2
    assert len(homomorphisms(klein(), cyclic(2))) == 4
    assert len(homomorphisms(quaternion(), cyclic(2))) == 4


def test_parsing_round_trip():
    assert parse_group_ref("cyclic:6") == cyclic(6)
    assert parse_group_ref("product:cyclic:2*cyclic:2") == direct_product(cyclic(2), cyclic(2))
    assert parse_group_ref("klein") == klein()
    G = dihedral(3)
    assert group_from_json(group_to_json(G)) == G
    assert group_from_json({"catalog": "product", "params": ["cyclic:4", "cyclic:2"]}) == abelian(4, 2)
    for bad in ("cyclic:x", "nope", "product:"):
        with pytest.raises(InvalidGroup):
            parse_group_ref(bad)
