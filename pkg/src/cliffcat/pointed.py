"""Pointed categories Vec_K^omega and their indecomposable module categories.

A module category is recorded by (L, psi): a subgroup L of K and a 2-cochain
psi on L with d(psi) = omega|_L, i.e. the twisted group algebra k_psi L.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .cohomology import (Cochain, canonical_mod_coboundaries, coboundary, cohomology_group,
                         is_cocycle, is_trivial_class, restrict, solve_coboundary)
from .errors import CategoryMismatch, InvalidGroup, InvariantBroken, TooLarge
from .groups import DEFAULT_BOUND, FiniteGroup, Subgroup, subgroups


@dataclass(frozen=True, eq=False)
class PointedCategory:
    group: FiniteGroup
    omega: Cochain
    label: str = ""
    psi_mod: int | None = None

    def __post_init__(self):
        if self.psi_mod is not None and self.psi_mod % (self.omega.modulus * self.group.order):
            raise InvalidGroup("psi modulus must be a multiple of M_omega * |K|")
        if self.omega.group != self.group or self.omega.degree != 3:
            raise InvalidGroup("omega must be a 3-cochain on the category's group")
        if not self.omega.is_normalized():
            raise InvalidGroup("omega must be normalized")
        if not is_cocycle(self.omega):
            raise InvalidGroup("omega is not a 3-cocycle")

    @classmethod
    def untwisted(cls, K: FiniteGroup, label: str = "") -> "PointedCategory":
        return cls(K, Cochain.zero(K, 3, 1), label or f"Vec_{K.label}")

    def __eq__(self, other):
        return (isinstance(other, PointedCategory) and self.group == other.group
                and self.omega == other.omega and self.psi_modulus == other.psi_modulus)

    def __hash__(self):
        return hash((self.group, self.omega, self.psi_modulus))

    @property
    def psi_modulus(self) -> int:
        """Modulus of every psi over this category; big enough for all k*-solutions."""
        return self.psi_mod or self.omega.modulus * self.group.order

    @cached_property
    def omega_psi(self) -> Cochain:
        return self.omega.embed(self.psi_modulus)


@dataclass(frozen=True, eq=False)
class ModuleData:
    category: PointedCategory
    L: Subgroup
    psi: Cochain

    def __post_init__(self):
        C = self.category
        if self.L.parent != C.group:
            raise InvalidGroup("L must be a subgroup of the category's group")
        if self.psi.group != self.L.as_group or self.psi.modulus != C.psi_modulus or self.psi.degree != 2:
            raise InvalidGroup("psi must be a 2-cochain on L at the category's psi modulus")
        if coboundary(self.psi) != restrict(C.omega_psi, self.L):
            raise InvariantBroken("d(psi) != omega|_L")

    def __eq__(self, other):
        return (isinstance(other, ModuleData) and self.category == other.category
                and self.L == other.L and self.psi == other.psi)

    def __hash__(self):
        return hash((self.L.elements, self.psi))

    def __repr__(self):
        return f"ModuleData(L={list(self.L.elements)}, psi={self.psi!r})"

    @cached_property
    def key(self) -> tuple:
        """Invariant of the equivalence class: least conjugate data over all transports."""
        K = self.category.group
        best = None
        for x in range(K.order):
            t = transport(x, self)
            k = (t.L.elements, _psi_class_key(t.psi))
            if best is None or k < best:
                best = k
        return best

    def to_json(self) -> dict:
        return {"subgroup": list(self.L.elements), "psi": self.psi.to_json()["values"],
                "psi_modulus": self.psi.modulus}


def _psi_class_key(psi: Cochain) -> tuple[int, ...]:
    # k*-coboundaries of a mod-M cocycle are reachable at modulus M*|L|
    fine = psi.embed(psi.modulus * psi.group.order)
    return canonical_mod_coboundaries(fine).key()


def transport_values(omega: Cochain, modulus: int, L: Subgroup, psi: np.ndarray,
                     x: int) -> tuple[Subgroup, np.ndarray]:
    """Conjugate (L, psi) by x in K = omega.group; psi given on L's own indexing.

    psi'(x a x^-1, x b x^-1) = psi(a, b) - [omega(a', b', x) + omega(x, a, b) - omega(a', x, b)]
    where a' = x a x^-1.
    """
    K = omega.group
    Lp = L.conjugate(x)
    xi = K.inv(x)
    emb = Lp.embedding
    a_par = np.array([K.conj(xi, a) for a in emb], dtype=np.int64)
    a_loc = np.array([L.index_of[int(a)] for a in a_par], dtype=np.int64)
    f = modulus // omega.modulus
    w = omega.values
    A1, B1 = np.meshgrid(emb, emb, indexing="ij")
    A0, B0 = np.meshgrid(a_par, a_par, indexing="ij")
    corr = w[A1, B1, x] + w[x, A0, B0] - w[A1, x, B0]
    vals = psi[np.ix_(a_loc, a_loc)] - f * corr
    return Lp, vals % modulus


def transport(x: int, m: ModuleData) -> ModuleData:
    """The class of delta_x (x) M(L, psi), as data on x L x^-1.  The invariant is re-checked."""
    C = m.category
    Lp, vals = transport_values(C.omega, C.psi_modulus, m.L, m.psi.values, x)
    return ModuleData(C, Lp, Cochain(Lp.as_group, 2, C.psi_modulus, vals))


def modules_equivalent(m1: ModuleData, m2: ModuleData, conjugators=None) -> bool:
    """Whether some transport of m1 has m2's subgroup and a k*-cohomologous psi.

    ``conjugators`` restricts the transporting elements (e.g. to a graded piece of K).
    """
    if m1.category != m2.category:
        raise CategoryMismatch("module data over different categories")
    if m1.L.order != m2.L.order:
        return False
    K = m1.category.group
    for x in (range(K.order) if conjugators is None else conjugators):
        if m1.L.conjugate(x) != m2.L:
            continue
        diff = transport(x, m1).psi - m2.psi
        if is_trivial_class(diff, K.order):
            return True
    return False


def psi_solutions(C: PointedCategory, L: Subgroup) -> list[Cochain]:
    """One psi per k*-class with d(psi) = omega|_L, or [] if omega|_L is obstructed."""
    target = restrict(C.omega, L)
    base = solve_coboundary(target, C.group.order)
    if base is not None and base.modulus != C.psi_modulus:
        base = base.embed(C.psi_modulus)
    if base is None:
        return []
    base = canonical_mod_coboundaries(base)
    H2 = cohomology_group(L.as_group, 2)
    return [canonical_mod_coboundaries(base + h) for h in H2.elements(C.psi_modulus)]


def module_classes(C: PointedCategory, bound: int = DEFAULT_BOUND) -> list[ModuleData]:
    """One representative per equivalence class of indecomposable module categories.

    Classes are ordered by their canonical key (least conjugate subgroup first).
    """
    if C.group.order > bound:
        raise TooLarge(f"classification bounded to order {bound}")
    seen: dict[tuple, ModuleData] = {}
    for L in subgroups(C.group, bound):
        for psi in psi_solutions(C, L):
            m = ModuleData(C, L, psi)
            seen.setdefault(m.key, m)
    out = []
    for key in sorted(seen):
        m = seen[key]
        # re-express on the least conjugate subgroup
        K = C.group
        for x in range(K.order):
            t = transport(x, m)
            if (t.L.elements, _psi_class_key(t.psi)) == key:
                m = ModuleData(C, t.L, canonical_mod_coboundaries(t.psi))
                break
        out.append(m)
    return out


def class_index(classes: list[ModuleData], m: ModuleData) -> int:
    k = m.key
    for i, c in enumerate(classes):
        if c.key == k:
            return i
    raise KeyError("module data not among the listed classes")


def pointed_obstruction(U: FiniteGroup, omega: Cochain, X: Subgroup) -> Cochain | None:
    """A 2-cochain beta on X with d(beta) = omega|_X, or None when the pointed
    subcategory generated by X has nonzero obstruction."""
    if X.parent != U or omega.group != U:
        raise InvalidGroup("X must be a subgroup of U carrying omega")
    sol = solve_coboundary(restrict(omega, X), U.order)
    return None if sol is None else canonical_mod_coboundaries(sol)
