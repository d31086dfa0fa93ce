import pytest

from cliffcat.clifford import (GradedPointedCategory, check_induced_equivalence, classify_graded, g_action,
                               invariant_classes, omega_of_induced, restriction_decomposition, stabilizer)
from cliffcat.cohomology import cohomology_group
from cliffcat.groups import cyclic, dihedral, klein, normal_subgroups, quaternion
from cliffcat.pointed import PointedCategory, module_classes


def graded(K, kernel, twisted=False):
    w = cohomology_group(K, 3).representatives[-1] if twisted else None
    C = PointedCategory(K, w) if twisted else PointedCategory.untwisted(K)
    return GradedPointedCategory(C, K.subgroup(kernel))


CASES = [
    (klein(), [0, 1], False), (cyclic(4), [0, 2], False), (dihedral(4), [0, 1, 2, 3], False),
    (dihedral(4), [0, 2], True), (quaternion(), [0, 1, 3, 6], False), (dihedral(3), [0, 1, 2], False),
]


@pytest.mark.parametrize("K,kernel,tw", CASES, ids=lambda x: getattr(x, "label", None))
def test_classify_graded_consistent(K, kernel, tw):
    GC = graded(K, kernel, tw)
    recs = classify_graded(GC)  # raises on any failed clause
    assert len(recs) == len(module_classes(GC.category))
    for r in recs:
        assert all(r.checks.values())
        assert len(r.orbit) * r.stabilizer.order == GC.G.order


def test_z4_over_order_two_kernel():
    GC = graded(cyclic(4), [0, 2])
    recs = classify_graded(GC)
    # classes ordered L = 0, Z4, {0,2}; only Z4 projects onto all of G
    assert [r.witness.L.order for r in recs] == [1, 4, 2]
    assert [r.stabilizer.order for r in recs] == [1, 2, 1]
    assert [len(r.orbit) for r in recs] == [2, 1, 2]


def test_action_is_trivial_for_central_kernel_untwisted():
    GC = graded(klein(), [0, 1])
    for m in GC.trivial_classes():
        for s in range(GC.G.order):
            assert g_action(GC, s, m).key == m.key
        assert stabilizer(GC, m).order == GC.G.order
    assert len(invariant_classes(GC)) == len(GC.trivial_classes())


def test_omega_orbit_table():
    GC = graded(dihedral(4), [0, 1, 2, 3])
    for m in GC.trivial_classes():
        oa = omega_of_induced(GC, m)
        assert len(oa.classes) * stabilizer(GC, m).order == GC.G.order
        assert oa.orbit_of(0) == list(range(len(oa.classes)))


def test_restriction_of_regular_module():
    GC = graded(klein(), [0, 1])
    reg = module_classes(GC.category)[0]  # L trivial
    r = restriction_decomposition(GC, reg)
    assert r.S.order == 1 and len(r.pieces) == 2


@pytest.mark.parametrize("K", [cyclic(2), klein(), cyclic(4), dihedral(3)], ids=lambda G: G.label)
def test_induced_equivalence_against_oracle(K):
    for N in normal_subgroups(K):
        assert check_induced_equivalence(GradedPointedCategory(PointedCategory.untwisted(K), N))
