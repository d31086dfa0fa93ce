"""Clifford theory for pointed categories graded by a quotient K -> G = K/N.

The trivial component is C_e = Vec_N^{omega|N}.  G acts on classes of
C_e-module data by transport along lifts; every module category over the
whole category is decomposed into C_e-pieces and annotated with its
stabilizer, orbit and base piece.  The oracle classification of
:mod:`cliffcat.pointed` is the source of truth; every statement of the
correspondence is checked against it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .cohomology import Cochain, restrict
from .errors import ConsistencyFailure, LiftDependence
from .groups import FiniteGroup, QuotientMap, Subgroup, quotient
from .pointed import (ModuleData, PointedCategory, class_index, module_classes, modules_equivalent,
                      transport, transport_values)


@dataclass(frozen=True, eq=False)
class GradedPointedCategory:
    category: PointedCategory
    kernel: Subgroup

    @cached_property
    def quotient_map(self) -> QuotientMap:
        return quotient(self.category.group, self.kernel)

    @property
    def K(self) -> FiniteGroup:
        return self.category.group

    @property
    def G(self) -> FiniteGroup:
        return self.quotient_map.quotient

    @property
    def grading_group(self) -> FiniteGroup:
        return self.G

    @cached_property
    def trivial_component(self) -> PointedCategory:
        N = self.kernel
        C = self.category
        return PointedCategory(N.as_group, restrict(C.omega, N), f"{C.label}_e", psi_mod=C.psi_modulus)

    def lift(self, sigma: int) -> int:
        return self.quotient_map.lift(sigma)

    def to_K(self, L: Subgroup) -> Subgroup:
        """A subgroup of N's own indexing, as a subgroup of K."""
        emb = self.kernel.embedding
        return Subgroup(self.K, tuple(int(emb[a]) for a in L.elements))

    def from_K(self, L: Subgroup) -> Subgroup:
        idx = self.kernel.index_of
        return Subgroup(self.kernel.as_group, tuple(idx[a] for a in L.elements))

    def transport_by(self, x: int, m: ModuleData) -> ModuleData:
        """C_e-data conjugated by any x in K (x need not lie in N)."""
        Ce = self.trivial_component
        Lk = self.to_K(m.L)
        Lp, vals = transport_values(self.category.omega, Ce.psi_modulus, Lk, m.psi.values, x)
        Lp_n = self.from_K(Lp)
        return ModuleData(Ce, Lp_n, Cochain(Lp_n.as_group, 2, Ce.psi_modulus, vals))

    # the protocol shared with TY categories: trivial_classes / act / same_class
    def trivial_classes(self) -> list[ModuleData]:
        return _ce_classes(self)

    def act(self, sigma: int, m: ModuleData) -> ModuleData:
        return g_action(self, sigma, m)

    def same_class(self, m1: ModuleData, m2: ModuleData) -> bool:
        return m1.key == m2.key


@lru_cache(maxsize=None)
def _ce_classes(GC: GradedPointedCategory) -> list[ModuleData]:
    return module_classes(GC.trivial_component)


def g_action(GC: GradedPointedCategory, sigma: int, m: ModuleData, check_lifts: bool = True) -> ModuleData:
    """sigma . [m], realized by transport along the least lift of sigma.

    With ``check_lifts`` every other lift is tried and must give an equivalent class.
    """
    qm = GC.quotient_map
    out = GC.transport_by(qm.lift(sigma), m)
    if check_lifts:
        for x in qm.cosets[sigma][1:]:
            if GC.transport_by(x, m).key != out.key:
                raise LiftDependence(f"lifts of {sigma} disagree on {m!r}")
    return out


@dataclass
class OmegaAction:
    parent: GradedPointedCategory
    classes: list[ModuleData]
    action: np.ndarray  # action[sigma, i] = j

    def orbit_of(self, i: int) -> list[int]:
        return sorted(set(self.action[:, i].tolist()))


def omega_of_induced(GC: GradedPointedCategory, m: ModuleData) -> OmegaAction:
    """The G-orbit of [m] with its full action table."""
    G = GC.G
    classes = [m]
    keys = {m.key: 0}
    rows: list[list[int]] = []
    i = 0
    while i < len(classes):
        col = []
        for s in range(G.order):
            t = g_action(GC, s, classes[i])
            if t.key not in keys:
                keys[t.key] = len(classes)
                classes.append(t)
            col.append(keys[t.key])
        rows.append(col)
        i += 1
    action = np.array(rows, dtype=np.int64).T
    _check_action(G, action)
    return OmegaAction(GC, classes, action)


def _check_action(G: FiniteGroup, action: np.ndarray):
    n = action.shape[1]
    if not np.array_equal(action[G.identity], np.arange(n)):
        raise ConsistencyFailure("identity of G does not act trivially on classes")
    for s in range(G.order):
        for t in range(G.order):
            if not np.array_equal(action[G.mul(s, t)], action[s][action[t]]):
                raise ConsistencyFailure("class action is not compatible with the group law")


def stabilizer(GC: GradedPointedCategory, m: ModuleData) -> Subgroup:
    """{sigma : sigma . [m] = [m]} on equivalence classes."""
    G = GC.G
    return Subgroup.of(G, [s for s in range(G.order) if g_action(GC, s, m).key == m.key])


def invariant_classes(GC, S: Subgroup | None = None) -> list:
    """Classes of trivial-component module data fixed by every element of S (default: all of G).

    Works for any object offering ``trivial_classes``, ``act``, ``same_class`` and
    ``grading_group`` (graded pointed categories and TY categories).
    """
    elems = range(GC.grading_group.order) if S is None else S.elements
    return [m for m in GC.trivial_classes() if all(GC.same_class(GC.act(s, m), m) for s in elems)]


@dataclass
class Restriction:
    """C_e-decomposition of one module category over the whole graded category."""

    witness: ModuleData
    S: Subgroup  # projection of L in G
    base: ModuleData  # (L cap N, psi restricted)
    coset_reps: list[int]  # least element of each left coset sigma S
    pieces: list[ModuleData]
    piece_stabilizer: Subgroup  # {sigma : C_sigma (x) base = base as subcategories}


def _piece_objects(K: FiniteGroup, N: Subgroup, L: Subgroup, g: int) -> frozenset[tuple[int, ...]]:
    """Simple objects (left L-cosets) of the C_e-submodule category through delta_g (x) A."""
    return frozenset(tuple(sorted(K.mul(K.mul(n, g), l) for l in L.elements)) for n in N.elements)


def restriction_decomposition(GC: GradedPointedCategory, witness: ModuleData) -> Restriction:
    K, N, G, qm = GC.K, GC.kernel, GC.G, GC.quotient_map
    L = witness.L
    S = qm.project(L)
    LN = L.intersect(N)
    Ce = GC.trivial_component
    loc = Subgroup(L.as_group, tuple(L.index_of[a] for a in LN.elements))
    base = ModuleData(Ce, GC.from_K(LN), Cochain(loc.as_group, 2, Ce.psi_modulus, restrict(witness.psi, loc).values))
    reps: list[int] = []
    covered: set[int] = set()
    for s in range(G.order):
        if s in covered:
            continue
        reps.append(s)
        covered.update(G.mul(s, t) for t in S.elements)
    pieces = [base if s == G.identity else g_action(GC, s, base) for s in reps]
    P0 = _piece_objects(K, N, L, K.identity)
    stab = []
    for s in range(G.order):
        x = qm.lift(s)
        moved = frozenset(tuple(sorted(K.mul(x, a) for a in c)) for c in P0)
        if moved == P0:
            stab.append(s)
    return Restriction(witness, S, base, reps, pieces, Subgroup.of(G, stab))


@dataclass
class CliffordClass:
    stabilizer: Subgroup  # S = projection(L)
    base: ModuleData
    orbit: list[int]  # indices into the C_e class list, one per piece
    witness: ModuleData
    class_stabilizer: Subgroup  # stabilizer of [base] among equivalence classes
    checks: dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "witness": self.witness.to_json(),
            "S": list(self.stabilizer.elements),
            "base": self.base.to_json(),
            "orbit": self.orbit,
            "class_stabilizer": list(self.class_stabilizer.elements),
        }


def induced_equivalent(GC: GradedPointedCategory, m1: ModuleData, m2: ModuleData) -> bool:
    """Equivalence of induced module categories through their (S, C_S-data):
    some sigma conjugates S2 onto S1 and carries m2's C_{S2}-data to data equivalent
    to m1's over C_{S1}."""
    qm, G, K = GC.quotient_map, GC.G, GC.K
    S1, S2 = qm.project(m1.L), qm.project(m2.L)
    inner = [x for x in range(K.order) if int(qm.projection[x]) in S1.members]
    for s in range(G.order):
        if S2.conjugate(s) != S1:
            continue
        moved = transport(qm.lift(s), m2)
        if modules_equivalent(moved, m1, conjugators=inner):
            return True
    return False


def classify_graded(GC: GradedPointedCategory, check: bool = True) -> list[CliffordClass]:
    """Clifford data for every oracle class of the whole category.

    With ``check`` each clause is verified and a violation raises ConsistencyFailure.
    """
    G = GC.G
    ce = GC.trivial_classes()
    out = []
    for w in module_classes(GC.category):
        r = restriction_decomposition(GC, w)
        idx = [class_index(ce, p) for p in r.pieces]
        cls_stab = stabilizer(GC, r.base)
        oa = omega_of_induced(GC, r.base)
        orbit_classes = {class_index(ce, c) for c in oa.classes}
        checks = {
            "transitivity": set(idx) == orbit_classes,
            "orbit_stabilizer": len(r.pieces) * r.S.order == G.order,
            "class_orbit_stabilizer": len(oa.classes) * cls_stab.order == G.order,
            "stabilizer_is_projection": r.piece_stabilizer == r.S,
            "projection_fixes_class": r.S.members <= cls_stab.members,
        }
        if check:
            for name, ok in checks.items():
                if not ok:
                    raise ConsistencyFailure(f"{name} fails for witness {w!r}")
        out.append(CliffordClass(r.S, r.base, idx, w, cls_stab, checks))
    return out


def check_induced_equivalence(GC: GradedPointedCategory) -> bool:
    """Induced-equivalence criterion against the oracle, on all ordered pairs of classes
    and on each class against a transported copy of itself."""
    classes = module_classes(GC.category)
    K = GC.K
    for i, a in enumerate(classes):
        for j, b in enumerate(classes):
            if induced_equivalent(GC, a, b) != (i == j):
                return False
        for x in range(K.order):
            if not induced_equivalent(GC, transport(x, a), a):
                return False
    return True
