"""Tambara-Yamagami categories TY(A, chi, tau) as Z/2-graded extensions of Vec_A.

Module categories over Vec_A are pairs (B, alpha).  Each one corresponds to a
Lagrangian subgroup of A x A^ with its hyperbolic form,

    L(B, alpha) = {(b, f) : b in B, f|_B = alt_alpha(b, -)},

and, after identifying A^ with A through chi, the nontrivial grade acts by
swapping the two coordinates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .cohomology import Cochain, canonical_mod_coboundaries, cohomology_group
from .errors import GroupTheoreticalCase, InvalidGroup
from .groups import FiniteGroup, Subgroup, abelian, cyclic, small_groups, subgroups
from .pointed import ModuleData, PointedCategory, module_classes


@dataclass(frozen=True, eq=False)
class TYCategory:
    A: FiniteGroup
    chi: np.ndarray  # chi[a, b] in Z/modulus
    modulus: int
    tau: int = 1  # recorded only; no criterion here reads it
    label: str = ""

    def __post_init__(self):
        A, c, M = self.A, np.asarray(self.chi), self.modulus
        if not A.is_abelian:
            raise InvalidGroup("A must be abelian")
        if self.tau not in (1, -1):
            raise InvalidGroup("tau must be +1 or -1")
        if c.shape != (A.order, A.order):
            raise InvalidGroup("chi must be an |A| x |A| table")
        c = c % M
        object.__setattr__(self, "chi", c)
        if not np.array_equal(c, c.T):
            raise InvalidGroup("chi is not symmetric")
        if not np.array_equal(c[A.table], (c[:, None, :] + c[None, :, :]) % M):
            raise InvalidGroup("chi is not a bicharacter")
        if len({r.tobytes() for r in c}) != A.order:
            raise InvalidGroup("chi is degenerate")

    @classmethod
    def from_json(cls, obj: dict) -> "TYCategory":
        from .groups import group_from_json
        A = group_from_json(obj["A"])
        M = int(obj.get("modulus") or A.exponent)
        chi = np.zeros((A.order, A.order), dtype=np.int64)
        for k, v in obj["chi"].items():
            a, b = (int(t) for t in k.split(","))
            chi[a, b] = int(v)
        return cls(A, chi, M, int(obj.get("tau", 1)), obj.get("label", ""))

    def to_json(self) -> dict:
        from .groups import group_to_json
        A = self.A
        return {"A": group_to_json(A),
                "chi": {f"{a},{b}": int(self.chi[a, b]) for a in range(A.order) for b in range(A.order)
                        if self.chi[a, b]},
                "modulus": self.modulus, "tau": self.tau}

    @cached_property
    def base(self) -> PointedCategory:
        """The trivial component Vec_A."""
        return PointedCategory.untwisted(self.A)

    def perp(self, B: Subgroup) -> Subgroup:
        """B^perp = {a : chi(a, b) = 0 for all b in B}"""
        cols = list(B.elements)
        return Subgroup.of(self.A, [a for a in range(self.A.order) if not self.chi[a, cols].any()])

    def is_isotropic(self, B: Subgroup) -> bool:
        e = list(B.elements)
        return not self.chi[np.ix_(e, e)].any()

    # Z/2 protocol used by clifford.invariant_classes
    @cached_property
    def grading_group(self) -> FiniteGroup:
        return cyclic(2)

    def trivial_classes(self) -> list[ModuleData]:
        return _vec_classes(self.A)

    def act(self, sigma: int, m: ModuleData) -> ModuleData:
        return m if sigma == 0 else duality_action(self, m)

    def same_class(self, m1: ModuleData, m2: ModuleData) -> bool:
        return m1.key == m2.key


@lru_cache(maxsize=None)
def _vec_classes(A: FiniteGroup) -> list[ModuleData]:
    return module_classes(PointedCategory.untwisted(A))


def ising() -> TYCategory:
    return TYCategory(cyclic(2), np.array([[0, 0], [0, 1]]), 2, 1, "Ising")


def hyperbolic_klein() -> TYCategory:
    A = abelian(2, 2)
    chi = np.array([[_coords_dot(a, b) for b in range(4)] for a in range(4)])
    return TYCategory(A, chi, 2, 1, "hyperbolic V4")


def _coords_dot(a: int, b: int) -> int:
    # abelian(2, 2) stores (x, y) at index 2x + y; pairing x1*y2 + y1*x2
    x1, y1, x2, y2 = a // 2, a % 2, b // 2, b % 2
    return (x1 * y2 + y1 * x2) % 2


def alternating_form(psi: Cochain) -> np.ndarray:
    """alt(a, b) = psi(a, b) - psi(b, a), a class invariant of 2-cocycles on abelian groups."""
    v = psi.values
    return (v - v.T) % psi.modulus


def lagrangian(ty: TYCategory, m: ModuleData) -> frozenset[tuple[int, int]]:
    """L(B, alpha) inside A x A, the second factor standing for A^ through chi."""
    A, M = ty.A, ty.modulus
    B = m.L
    mp = m.psi.modulus
    alt = alternating_form(m.psi)  # in B's own indexing, at modulus mp
    scale = mp // M if mp % M == 0 else None
    if scale is None:
        raise InvalidGroup("psi modulus must be a multiple of the chi modulus")
    elems = list(B.elements)
    out = set()
    for i, b in enumerate(elems):
        want = alt[i]
        for a in range(A.order):
            if np.array_equal((ty.chi[a, elems] * scale) % mp, want):
                out.add((b, a))
    return frozenset(out)


def module_from_lagrangian(ty: TYCategory, L: frozenset[tuple[int, int]]) -> ModuleData:
    """Inverse of ``lagrangian``: the (B, alpha) class whose Lagrangian is L."""
    A, M = ty.A, ty.modulus
    C = ty.base
    mp = C.psi_modulus
    B = Subgroup.of(A, sorted({b for b, _ in L}))
    elems = list(B.elements)
    want = np.zeros((B.order, B.order), dtype=np.int64)
    for b, a in sorted(L):
        want[B.index_of[b]] = (ty.chi[a, elems] * (mp // M)) % mp
    for h in cohomology_group(B.as_group, 2).elements(mp):
        if np.array_equal(alternating_form(h), want):
            return ModuleData(C, B, canonical_mod_coboundaries(h))
    raise InvalidGroup("no 2-cocycle class realizes the swapped Lagrangian")


def duality_action(ty: TYCategory, m: ModuleData) -> ModuleData:
    """The nontrivial grade acting on a Vec_A-module class: swap the Lagrangian's coordinates."""
    L = lagrangian(ty, m)
    if len(L) != ty.A.order:
        raise InvalidGroup("module data does not give a Lagrangian subgroup")
    return module_from_lagrangian(ty, frozenset((a, b) for b, a in L))


def is_group_theoretical(ty: TYCategory) -> Subgroup | None:
    """A Lagrangian subgroup B (chi = 0 on B x B, |B|^2 = |A|) or None."""
    A = ty.A
    for B in subgroups(A, A.order):
        if B.order * B.order == A.order and ty.is_isotropic(B):
            return B
    return None


def classify_ty_modules(ty: TYCategory) -> list[list[ModuleData]]:
    """Duality orbits of Vec_A-module classes; one indecomposable TY-module category each.

    Only the non-group-theoretical case is covered.
    """
    w = is_group_theoretical(ty)
    if w is not None:
        raise GroupTheoreticalCase(f"Lagrangian subgroup {list(w.elements)} exists")
    seen: set = set()
    orbits = []
    for m in ty.trivial_classes():
        if m.key in seen:
            continue
        d = duality_action(ty, m)
        orb = {m.key: m, d.key: d}
        seen.update(orb)
        orbits.append([orb[k] for k in sorted(orb)])
    return sorted(orbits, key=lambda o: o[0].key)


def three_way(ty: TYCategory) -> dict[str, bool]:
    """Lagrangian exists / duality fixes a class with isotropic data / some class is Z/2-invariant."""
    from .clifford import invariant_classes
    fixed = invariant_classes(ty)
    return {
        "lagrangian": is_group_theoretical(ty) is not None,
        "fixed_isotropic": any(ty.is_isotropic(m.L) and m.psi.is_zero() for m in fixed),
        "invariant_class": bool(fixed),
    }


# --- catalog --------------------------------------------------------------


def _extend_character(A: FiniteGroup, gens: tuple[int, ...], values, M: int) -> np.ndarray | None:
    phi = np.full(A.order, -1, dtype=np.int64)
    phi[A.identity] = 0
    queue = [A.identity]
    while queue:
        a = queue.pop()
        for g, v in zip(gens, values):
            b = A.mul(a, g)
            val = (phi[a] + v) % M
            if phi[b] < 0:
                phi[b] = val
                queue.append(b)
            elif phi[b] != val:
                return None
    return phi


@lru_cache(maxsize=None)
def bicharacters(A: FiniteGroup) -> tuple[np.ndarray, ...]:
    """Every nondegenerate symmetric bicharacter on A with values in Z/exp(A), sorted."""
    M = A.exponent
    gens = A.generators
    k = len(gens)
    pairs = [(i, j) for i in range(k) for j in range(i, k)]
    found = {}
    for vals in itertools.product(range(M), repeat=len(pairs)):
        c = np.zeros((k, k), dtype=np.int64)
        for (i, j), v in zip(pairs, vals):
            c[i, j] = c[j, i] = v
        rows = [_extend_character(A, gens, c[i], M) for i in range(k)]
        if any(r is None for r in rows):
            continue
        chi = np.zeros((A.order, A.order), dtype=np.int64)
        ok = True
        for b in range(A.order):
            col = _extend_character(A, gens, [r[b] for r in rows], M)
            if col is None:
                ok = False
                break
            chi[:, b] = col
        if not ok:
            continue
        try:
            TYCategory(A, chi, M)
        except InvalidGroup:
            continue
        found.setdefault(chi.tobytes(), chi)
    return tuple(found[k] for k in sorted(found))


def ty_catalog(max_order: int = 8) -> list[TYCategory]:
    out = []
    for A in small_groups(max_order):
        if not A.is_abelian:
            continue
        for i, chi in enumerate(bicharacters(A)):
            out.append(TYCategory(A, chi, A.exponent, 1, f"{A.label}#{i}"))
    return out
