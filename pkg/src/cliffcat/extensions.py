"""Extensions of the regular C_e-module category in the pointed model.

For a graded pointed category Vec_U^omega with U = K and trivial component
Vec_N, an extension is described by a pair (theta, gamma): a 1-cocycle
theta: G -> N for the action fixed by a designated complement, and a
2-cochain gamma on G trivializing omega on X_theta = {theta_sigma t_sigma}.

The 1-cocycle rule used throughout is theta(st) = theta(s) * s_*(theta(t)).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import lcm

import numpy as np

from .cohomology import (Cochain, canonical_mod_coboundaries, coboundary, cocycle_system,
                         cohomology_group, is_cocycle, is_trivial_class, pullback,
                         solve_coboundary)
from .errors import ContextMismatch, InvalidGroup, NotCocycle, Obstructed, TooLarge
from .groups import (DEFAULT_BOUND, FiniteGroup, GroupAction, QuotientMap, Subgroup, complements,
                     quotient, semidirect_product)
from .pointed import PointedCategory, module_classes

COCYCLE_RULE = "theta(st) = theta(s) * s_*(theta(t))"
ORIENTATIONS = (1, -1)


@dataclass(frozen=True, eq=False)
class DegSequence:
    """Ue -> U -> G with deg the quotient projection."""

    U: FiniteGroup
    Ue: Subgroup
    G: FiniteGroup
    deg: QuotientMap

    def __post_init__(self):
        ker = [a for a in range(self.U.order) if int(self.deg.projection[a]) == self.G.identity]
        if tuple(ker) != self.Ue.elements:
            raise InvalidGroup("sequence is not exact: ker(deg) differs from Ue")

    @classmethod
    def from_kernel(cls, U: FiniteGroup, N: Subgroup) -> "DegSequence":
        qm = quotient(U, N)
        return cls(U, N, qm.quotient, qm)


class ExtensionContext:
    """The data shared by all extension pairs over one graded pointed category."""

    def __init__(self, U: FiniteGroup, N: Subgroup, omega: Cochain, bound: int = DEFAULT_BOUND):
        if omega.group != U or omega.degree != 3:
            raise InvalidGroup("omega must be a 3-cochain on U")
        if not is_cocycle(omega):
            raise InvalidGroup("omega is not a 3-cocycle")
        self.seq = DegSequence.from_kernel(U, N)
        self.omega = omega
        comps = complements(U, N, bound)
        self.complement: Subgroup | None = comps[0] if comps else None

    @classmethod
    def from_semidirect(cls, N: FiniteGroup, G: FiniteGroup, act: GroupAction, omega: Cochain | None = None):
        """Context on U = N x| G (pair indexing of ``semidirect_product``); omega defaults to 0."""
        U = semidirect_product(N, G, act)
        Ue = Subgroup.of(U, range(N.order))
        return cls(U, Ue, omega if omega is not None else Cochain.zero(U, 3, 1))

    @property
    def U(self) -> FiniteGroup:
        return self.seq.U

    @property
    def N(self) -> Subgroup:
        return self.seq.Ue

    @property
    def G(self) -> FiniteGroup:
        return self.seq.G

    @property
    def semidirect(self) -> bool:
        return self.complement is not None

    @property
    def modulus(self) -> int:
        """Working modulus M' for gamma."""
        return lcm(self.omega.modulus, self.G.order * self.U.order)

    @cached_property
    def section(self) -> np.ndarray:
        """t[sigma]: the element of the designated complement over sigma."""
        if self.complement is None:
            raise ContextMismatch("U does not split over N")
        t = np.zeros(self.G.order, dtype=np.int64)
        for a in self.complement.elements:
            t[int(self.seq.deg.projection[a])] = a
        return t

    @cached_property
    def action(self) -> GroupAction:
        """sigma_*(u) = t_sigma u t_sigma^-1, on N's own indexing."""
        U, N = self.U, self.N
        perms = np.array([[N.index_of[U.conj(int(t), int(u))] for u in N.elements] for t in self.section],
                         dtype=np.int64)
        return GroupAction(self.G, N.as_group, perms)

    def element(self, u: int, sigma: int) -> int:
        """[u, sigma] as an element of U (u in N's indexing)."""
        return self.U.mul(int(self.N.embedding[u]), int(self.section[sigma]))

    def same(self, other: "ExtensionContext") -> bool:
        return (self.U == other.U and self.N == other.N and self.omega == other.omega
                and self.complement == other.complement)


@dataclass(frozen=True)
class OneCocycle:
    action: GroupAction
    theta: tuple[int, ...]

    def __post_init__(self):
        G, N, act = self.action.actor, self.action.target, self.action
        th = self.theta
        if len(th) != G.order:
            raise InvalidGroup("theta needs one value per element of G")
        if th[G.identity] != N.identity:
            raise InvalidGroup("theta(e) must be the identity")
        for s in range(G.order):
            for t in range(G.order):
                if th[G.mul(s, t)] != N.mul(th[s], act.act(s, th[t])):
                    raise InvalidGroup(f"theta violates {COCYCLE_RULE} at ({s}, {t})")

    def act_by(self, u: int) -> "OneCocycle":
        """(u . theta)_sigma = u theta_sigma sigma_*(u^-1)"""
        N, act = self.action.target, self.action
        ui = N.inv(u)
        return OneCocycle(act, tuple(N.mul(N.mul(u, th), act.act(s, ui)) for s, th in enumerate(self.theta)))

    def to_json(self) -> dict:
        return {"values": list(self.theta), "rule": COCYCLE_RULE}


def z1_cocycles(act: GroupAction, bound: int = 1_000_000) -> list[OneCocycle]:
    """All 1-cocycles G -> N, sorted by their value tuples.

    A cocycle is fixed by its values on generators of G; each choice is propagated
    along the Cayley graph and kept when no conflict arises.
    """
    G, N = act.actor, act.target
    gens = G.generators
    if N.order ** len(gens) > bound:
        raise TooLarge(f"{N.order}^{len(gens)} generator assignments exceed {bound}")
    out = []
    for choice in itertools.product(range(N.order), repeat=len(gens)):
        th = [-1] * G.order
        th[G.identity] = N.identity
        queue = [G.identity]
        ok = True
        while queue and ok:
            a = queue.pop()
            for g, v in zip(gens, choice):
                b = G.mul(a, g)
                val = N.mul(th[a], act.act(a, v))
                if th[b] < 0:
                    th[b] = val
                    queue.append(b)
                elif th[b] != val:
                    ok = False
                    break
        if not ok:
            continue
        try:
            out.append(OneCocycle(act, tuple(th)))
        except InvalidGroup:
            continue
    return sorted(out, key=lambda c: c.theta)


def h1_orbits(cocycles: list[OneCocycle], N: FiniteGroup | None = None) -> list[list[OneCocycle]]:
    """Partition of the cocycles into N-orbits; each orbit sorted, orbits ordered by their least member."""
    if not cocycles:
        return []
    N = N or cocycles[0].action.target
    index = {c.theta: i for i, c in enumerate(cocycles)}
    seen: set[int] = set()
    orbits = []
    for i, c in enumerate(cocycles):
        if i in seen:
            continue
        orb = {c.act_by(u).theta for u in range(N.order)}
        members = sorted(index[t] for t in orb if t in index)
        seen.update(members)
        orbits.append([cocycles[j] for j in members])
    return sorted(orbits, key=lambda o: o[0].theta)


def x_theta(ctx: ExtensionContext, theta: OneCocycle) -> Subgroup:
    """X_theta = {[theta_sigma, sigma]}, asserted to be a subgroup of U."""
    return Subgroup.of(ctx.U, [ctx.element(th, s) for s, th in enumerate(theta.theta)])


def _x_map(ctx: ExtensionContext, theta: OneCocycle) -> np.ndarray:
    return np.array([ctx.element(th, s) for s, th in enumerate(theta.theta)], dtype=np.int64)


def _check_theta(ctx: ExtensionContext, theta: OneCocycle):
    if theta.action != ctx.action:
        raise ContextMismatch("cocycle is for a different action")


def omega_theta(ctx: ExtensionContext, theta: OneCocycle) -> Cochain:
    """Pullback of omega along sigma -> [theta_sigma, sigma]."""
    _check_theta(ctx, theta)
    w = pullback(ctx.omega, _x_map(ctx, theta), ctx.G)
    if not is_cocycle(w):
        raise NotCocycle("pullback of omega along theta is not a cocycle")
    return w


def theta_obstruction(ctx: ExtensionContext, theta: OneCocycle) -> Cochain | None:
    """A gamma at the working modulus with d(gamma) = omega_theta, or None if obstructed."""
    w = omega_theta(ctx, theta)
    sol = solve_coboundary(w, ctx.modulus // w.modulus)
    return None if sol is None else canonical_mod_coboundaries(sol)


def l_omega_theta(ctx: ExtensionContext, theta: OneCocycle, limit: int = 200_000) -> list[Cochain]:
    """Every gamma at the working modulus with d(gamma) = omega_theta, sorted."""
    g0 = theta_obstruction(ctx, theta)
    if g0 is None:
        raise Obstructed("omega restricted to X_theta is nontrivial")
    m = ctx.modulus
    Z = cocycle_system(ctx.G, 2, m).kernel_elements(limit)
    rows = (Z + g0.slot_vector()[None, :]) % m
    rows = rows[np.lexsort(rows.T[::-1])] if rows.shape[1] else rows
    from .cohomology import _from_slots
    return [_from_slots(ctx.G, 2, m, r) for r in rows]


def torsor_check(ctx: ExtensionContext, theta: OneCocycle, limit: int = 200_000) -> dict:
    """Z^2(G, Z/M') acting on L_omega^theta by translation: free and transitive.

    Exhaustive when Z^2 has at most ``limit`` elements: every translate is checked
    against d(gamma) = omega_theta directly and the translates are counted.  Larger
    instances fall back to checking the generators of Z^2.  Very small instances are
    compared against a brute-force scan of all normalized 2-cochains.
    """
    from .cohomology import coboundary_matrix
    g0 = theta_obstruction(ctx, theta)
    if g0 is None:
        return {"nonempty": False}
    G, m = ctx.G, ctx.modulus
    D = coboundary_matrix(G, 2)
    target = omega_theta(ctx, theta).embed(m).slot_vector()
    sys_ = cocycle_system(G, 2, m)
    out = {"nonempty": True, "size": sys_.kernel_size}
    if sys_.kernel_size <= limit:
        Z = sys_.kernel_elements(limit)
        L = (Z + g0.slot_vector()[None, :]) % m
        members = bool((((L @ D.T) - target[None, :]) % m == 0).all()) if L.shape[1] else True
        distinct = len({r.tobytes() for r in L}) == len(L)
        out.update(mode="exhaustive", free=distinct, transitive=members)
        slots = D.shape[1]
        if 0 < slots and m ** slots <= limit:
            grid = np.array(list(itertools.product(range(m), repeat=slots)), dtype=np.int64).reshape(-1, slots)
            hits = grid[(((grid @ D.T) - target[None, :]) % m == 0).all(axis=1)]
            out["brute_force"] = {r.tobytes() for r in hits} == {r.tobytes() for r in L}
    else:
        ok = all(not ((D @ v) % m).any() for v, _ in sys_.kernel_basis)
        ok = ok and not ((D @ g0.slot_vector() - target) % m).any()
        out.update(mode="generators", free=ok, transitive=ok)
    return out


@dataclass(frozen=True, eq=False)
class ExtensionDatum:
    context: ExtensionContext
    theta: OneCocycle
    gamma: Cochain

    def __post_init__(self):
        ctx = self.context
        if self.gamma.group != ctx.G or self.gamma.degree != 2 or self.gamma.modulus != ctx.modulus:
            raise InvalidGroup("gamma must be a 2-cochain on G at the working modulus")
        x_theta(ctx, self.theta)
        if coboundary(self.gamma) != omega_theta(ctx, self.theta).embed(ctx.modulus):
            raise InvalidGroup("d(gamma) != omega restricted to X_theta")

    def to_json(self) -> dict:
        return {"theta": self.theta.to_json(), "gamma": self.gamma.to_json()["values"],
                "gamma_modulus": self.gamma.modulus}


def _correction(ctx: ExtensionContext, th: OneCocycle, nu: OneCocycle, u: int, terms: int) -> np.ndarray:
    """With x = [theta, .] and y = [nu, .]:
    two terms   omega(x_s, x_t, u) + omega(x_s, u, y_t)
    three terms omega(x_s, x_t, u) + omega(u, y_s, y_t) - omega(x_s, u, y_t)
    """
    w = ctx.omega.values
    x, y = _x_map(ctx, th), _x_map(ctx, nu)
    uu = int(ctx.N.embedding[u])
    X1, X2 = np.meshgrid(x, x, indexing="ij")
    Y1, Y2 = np.meshgrid(y, y, indexing="ij")
    if terms == 2:
        return w[X1, X2, uu] + w[X1, uu, Y2]
    out = w[X1, X2, uu] + w[uu, Y1, Y2] - w[X1, uu, Y2]
    return out


def extensions_equivalent(d1: ExtensionDatum, d2: ExtensionDatum, orientation: int = 1,
                          terms: int = 3) -> bool:
    """Whether some u in N with theta = u . nu and some kappa give
    gamma^nu = gamma^theta + d(kappa) + orientation * correction(u).

    ``terms=2`` uses the two-factor correction omega(x_s, x_t, u) omega(x_s, u, y_t);
    ``terms=3`` the one obtained by transporting the module structure along u.
    """
    if not d1.context.same(d2.context):
        raise ContextMismatch("extension data over different contexts")
    if orientation not in ORIENTATIONS or terms not in (2, 3):
        raise ValueError("orientation must be +1 or -1 and terms 2 or 3")
    ctx = d1.context
    m = ctx.modulus
    f = m // ctx.omega.modulus
    th, nu = d1.theta, d2.theta
    for u in range(ctx.N.order):
        if nu.act_by(u).theta != th.theta:
            continue
        corr = _correction(ctx, th, nu, u, terms) * f * orientation
        diff = Cochain(ctx.G, 2, m, d2.gamma.values - d1.gamma.values - corr)
        if is_cocycle(diff) and is_trivial_class(diff, ctx.G.order):
            return True
    return False


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def extension_candidates(ctx: ExtensionContext) -> list[ExtensionDatum]:
    """(theta, gamma0 + h) for every unobstructed theta and every class h in H^2(G, k*)."""
    if not ctx.semidirect:
        return []
    H2 = cohomology_group(ctx.G, 2).elements(ctx.modulus)
    out = []
    for th in z1_cocycles(ctx.action):
        g0 = theta_obstruction(ctx, th)
        if g0 is None:
            continue
        for h in H2:
            out.append(ExtensionDatum(ctx, th, canonical_mod_coboundaries(g0 + h)))
    return out


def equivalence_matrix(cands: list[ExtensionDatum], orientation: int = 1, terms: int = 3) -> np.ndarray:
    n = len(cands)
    E = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            E[i, j] = extensions_equivalent(cands[i], cands[j], orientation, terms)
    return E


def extension_classes(ctx: ExtensionContext, orientation: int = 1, terms: int = 3) -> list[ExtensionDatum]:
    """One datum per equivalence class; the first candidate of each class represents it."""
    cands = extension_candidates(ctx)
    parent = list(range(len(cands)))
    for i in range(len(cands)):
        for j in range(i + 1, len(cands)):
            if _find(parent, i) != _find(parent, j) and extensions_equivalent(cands[i], cands[j], orientation, terms):
                parent[_find(parent, j)] = _find(parent, i)
    return [c for i, c in enumerate(cands) if _find(parent, i) == i]


def relation_laws(E: np.ndarray) -> dict[str, bool]:
    n = E.shape[0]
    trans = True
    if n:
        comp = (E.astype(np.int64) @ E.astype(np.int64)) > 0
        trans = bool(not (comp & ~E).any())
    return {"reflexive": bool(E.diagonal().all()), "symmetric": bool((E == E.T).all()), "transitive": trans}


def oracle_complement_count(ctx: ExtensionContext) -> int:
    """Oracle classes (L, psi) over U with L a complement of N."""
    C = PointedCategory(ctx.U, ctx.omega)
    N = ctx.N
    return sum(1 for m in module_classes(C)
               if m.L.order * N.order == ctx.U.order and m.L.intersect(N).order == 1)
