"""Normalized bar cochains with values in roots of unity, and their cohomology.

A k*-valued cochain is stored as integer exponents modulo ``M``: the value
``v`` stands for ``exp(2 pi i v / M)``.  The coboundary is the trivial-action
bar differential written additively.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import lcm

import numpy as np

from .errors import DegreeZero, InvalidGroup, TooLarge
from .groups import FiniteGroup, Subgroup, parse_group_ref
from .linalg import ModularSystem, factorize, local_smith

MATRIX_BOUND = 10_000_000


@dataclass(frozen=True, eq=False)
class Cochain:
    group: FiniteGroup
    degree: int
    modulus: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64) % self.modulus
        if v.shape != (self.group.order,) * self.degree:
            raise InvalidGroup(f"cochain values must have shape {(self.group.order,) * self.degree}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def zero(cls, G: FiniteGroup, degree: int, modulus: int = 1) -> "Cochain":
        return cls(G, degree, modulus, np.zeros((G.order,) * degree, dtype=np.int64))

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.group == other.group and self.degree == other.degree
                and self.modulus == other.modulus and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.group, self.degree, self.modulus, self.values.tobytes()))

    def __repr__(self):
        nz = int(np.count_nonzero(self.values))
        return f"Cochain(deg={self.degree}, mod={self.modulus}, nonzero={nz}, on {self.group!r})"

    def __call__(self, *args: int) -> int:
        return int(self.values[tuple(args)])

    def _check(self, other: "Cochain"):
        if self.group != other.group or self.degree != other.degree or self.modulus != other.modulus:
            raise ValueError("cochains live in different groups")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.group, self.degree, self.modulus, self.values + other.values)

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        return Cochain(self.group, self.degree, self.modulus, self.values - other.values)

    def __neg__(self) -> "Cochain":
        return Cochain(self.group, self.degree, self.modulus, -self.values)

    def scale(self, k: int) -> "Cochain":
        return Cochain(self.group, self.degree, self.modulus, self.values * k)

    def embed(self, modulus: int) -> "Cochain":
        """Same k*-valued cochain written over a finer root of unity."""
        if modulus % self.modulus:
            raise ValueError(f"modulus {modulus} is not a multiple of {self.modulus}")
        return Cochain(self.group, self.degree, modulus, self.values * (modulus // self.modulus))

    def is_zero(self) -> bool:
        return not self.values.any()

    def is_normalized(self) -> bool:
        e = self.group.identity
        for axis in range(self.degree):
            if np.take(self.values, e, axis=axis).any():
                return False
        return True

    def slot_vector(self) -> np.ndarray:
        return self.values.reshape(-1)[_slot_flat(self.group, self.degree)]

    def key(self) -> tuple[int, ...]:
        return tuple(self.slot_vector().tolist())

    def to_json(self, group_ref=None) -> dict:
        vals = {}
        for idx in zip(*np.nonzero(self.values)):
            vals[",".join(str(int(i)) for i in idx)] = int(self.values[idx])
        from .groups import group_to_json
        return {"group": group_ref if group_ref is not None else group_to_json(self.group),
                "degree": self.degree, "modulus": self.modulus, "values": vals}


def cochain_from_json(obj: dict, group: FiniteGroup | None = None) -> Cochain:
    if group is None:
        ref = obj.get("group")
        if isinstance(ref, str):
            group = parse_group_ref(ref)
        else:
            from .groups import group_from_json
            group = group_from_json(ref)
    n, m = int(obj["degree"]), int(obj["modulus"])
    if m < 1 or n < 0:
        raise InvalidGroup("degree must be >= 0 and modulus >= 1")
    vals = np.zeros((group.order,) * n, dtype=np.int64)
    for k, v in obj.get("values", {}).items():
        idx = tuple(int(s) for s in k.split(",")) if k else ()
        if len(idx) != n or any(i < 0 or i >= group.order for i in idx):
            raise InvalidGroup(f"bad cochain key {k!r}")
        vals[idx] = int(v)
    c = Cochain(group, n, m, vals)
    if not c.is_normalized():
        raise InvalidGroup("cochain is not normalized")
    return c


# --- normalized slots and the coboundary matrix ----------------------------


@lru_cache(maxsize=None)
def _slots(G: FiniteGroup, n: int) -> np.ndarray:
    """Tuples of non-identity elements in lexicographic order, shape (count, n)."""
    ne = G.nonidentity()
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(ne, repeat=n)), dtype=np.int64).reshape(-1, n)


@lru_cache(maxsize=None)
def _slot_flat(G: FiniteGroup, n: int) -> np.ndarray:
    s = _slots(G, n)
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    return np.ravel_multi_index(tuple(s.T), (G.order,) * n)


@lru_cache(maxsize=None)
def _slot_lookup(G: FiniteGroup, n: int) -> np.ndarray:
    """flat full index -> slot index, -1 where an argument is the identity"""
    size = G.order ** n
    look = np.full(size, -1, dtype=np.int64)
    look[_slot_flat(G, n)] = np.arange(len(_slot_flat(G, n)))
    return look


def slot_count(G: FiniteGroup, n: int) -> int:
    return (G.order - 1) ** n


@lru_cache(maxsize=None)
def coboundary_matrix(G: FiniteGroup, n: int) -> np.ndarray:
    """Integer matrix of delta: C^n -> C^{n+1} on normalized slots."""
    rows, cols = slot_count(G, n + 1), slot_count(G, n)
    if rows * cols > MATRIX_BOUND:
        raise TooLarge(f"coboundary matrix {rows}x{cols} exceeds bound")
    D = np.zeros((rows, cols), dtype=np.int64)
    if n == 0:
        return D
    R = _slots(G, n + 1)
    look = _slot_lookup(G, n)
    shape = (G.order,) * n
    ridx = np.arange(rows)
    terms = [(R[:, 1:], 1)]
    for i in range(1, n + 1):
        merged = G.table[R[:, i - 1], R[:, i]][:, None]
        terms.append((np.hstack([R[:, :i - 1], merged, R[:, i + 1:]]), (-1) ** i))
    terms.append((R[:, :n], (-1) ** (n + 1)))
    for T, coef in terms:
        col = look[np.ravel_multi_index(tuple(T.T), shape)]
        ok = col >= 0
        np.add.at(D, (ridx[ok], col[ok]), coef)
    return D


@lru_cache(maxsize=None)
def _system(G: FiniteGroup, n: int, m: int) -> ModularSystem:
    return ModularSystem(coboundary_matrix(G, n), m)


def _from_slots(G: FiniteGroup, n: int, m: int, vec) -> Cochain:
    vals = np.zeros(G.order ** n, dtype=np.int64)
    vals[_slot_flat(G, n)] = vec
    return Cochain(G, n, m, vals.reshape((G.order,) * n))


# --- operations ------------------------------------------------------------


def coboundary(c: Cochain) -> Cochain:
    """(dc)(g1..g_{n+1}) = c(g2..) + sum_i (-1)^i c(.., g_i g_{i+1}, ..) + (-1)^{n+1} c(g1..g_n)"""
    G, n = c.group, c.degree
    g = G.order
    if n == 0:
        return Cochain.zero(G, 1, c.modulus)
    idx = list(np.indices((g,) * (n + 1)))
    v = c.values
    out = v[tuple(idx[1:])].copy()
    for i in range(1, n + 1):
        args = idx[:i - 1] + [G.table[idx[i - 1], idx[i]]] + idx[i + 1:]
        out += (-1) ** i * v[tuple(args)]
    out += (-1) ** (n + 1) * v[tuple(idx[:n])]
    return Cochain(G, n + 1, c.modulus, out)


def is_cocycle(c: Cochain) -> bool:
    return coboundary(c).is_zero()


def cyclic_generator(n: int, q: int = 1) -> Cochain:
    """Standard 3-cocycle on Z/n: q*a*floor((b+c)/n) as an exponent of an n-th root,
    stored at modulus n^2."""
    from .groups import cyclic
    G = cyclic(n)
    a, b, c = np.indices((n, n, n))
    vals = q * n * a * ((b + c) // n)
    return Cochain(G, 3, n * n, vals)


def restrict(c: Cochain, L: Subgroup) -> Cochain:
    """c restricted to L, as a cochain on ``L.as_group``."""
    if L.parent != c.group:
        raise InvalidGroup("subgroup of a different group")
    emb = L.embedding
    if c.degree == 0:
        return Cochain(L.as_group, 0, c.modulus, c.values)
    return Cochain(L.as_group, c.degree, c.modulus, c.values[np.ix_(*([emb] * c.degree))])


def pullback(c: Cochain, f, H: FiniteGroup) -> Cochain:
    """c o (f x ... x f) for a map f: H -> c.group given as an index array."""
    f = np.asarray(f, dtype=np.int64)
    if c.degree == 0:
        return Cochain(H, 0, c.modulus, c.values)
    return Cochain(H, c.degree, c.modulus, c.values[np.ix_(*([f] * c.degree))])


def solve_coboundary(target: Cochain, lift_factor: int = 1) -> Cochain | None:
    """A normalized b at modulus M*lift_factor with db = target (embedded), or None."""
    n = target.degree
    if n == 0:
        raise DegreeZero("a 0-cochain is never a coboundary target")
    if lift_factor < 1:
        raise ValueError("lift_factor must be >= 1")
    G = target.group
    m = target.modulus * lift_factor
    if n == 1:
        # delta on C^0 is zero under the trivial action
        return Cochain.zero(G, 0, m) if target.is_zero() else None
    sys_ = _system(G, n - 1, m)
    x = sys_.solve(target.slot_vector() * lift_factor)
    if x is None:
        return None
    return _from_slots(G, n - 1, m, x)


def is_trivial_class(c: Cochain, lift_factor: int | None = None) -> bool:
    """Whether the cocycle c is a coboundary of a k*-valued cochain.

    Roots of unity of order M*|G| always suffice, so ``lift_factor`` defaults to |G|.
    """
    if c.degree == 0:
        return c.is_zero()
    return solve_coboundary(c, lift_factor or c.group.order) is not None


def canonical_mod_coboundaries(c: Cochain) -> Cochain:
    """Canonical representative of c + B^n at the same modulus."""
    n = c.degree
    if n <= 1:
        return c
    sys_ = _system(c.group, n - 1, c.modulus)
    return _from_slots(c.group, n, c.modulus, sys_.reduce(c.slot_vector()))


@dataclass(frozen=True)
class CohomologyGroup:
    group: FiniteGroup
    degree: int
    invariant_factors: tuple[int, ...]
    representatives: tuple[Cochain, ...]

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def modulus(self) -> int:
        return lcm(1, *self.invariant_factors)

    def elements(self, modulus: int | None = None) -> list[Cochain]:
        """One cocycle per class, all at a common modulus (default: the exponent)."""
        m = modulus or self.modulus
        reps = [r.embed(m) for r in self.representatives]
        out = []
        for coeffs in itertools.product(*(range(d) for d in self.invariant_factors)):
            v = np.zeros((self.group.order,) * self.degree, dtype=np.int64)
            for k, r in zip(coeffs, reps):
                v = v + k * r.values
            out.append(Cochain(self.group, self.degree, m, v))
        return out


@lru_cache(maxsize=None)
def cohomology_group(G: FiniteGroup, n: int) -> CohomologyGroup:
    """H^n(G, k*) computed as the torsion of coker(delta_n) on integral normalized cochains."""
    if n < 1:
        raise ValueError("H^0(G, k*) = k* is not finite; degree must be >= 1")
    D = coboundary_matrix(G, n)
    primary: dict[int, list[tuple[int, np.ndarray]]] = {}
    for p, v in factorize(G.order).items():
        S = local_smith(D, p, v + 1, left=False)
        primary[p] = sorted(((e, S.V[:, i]) for i, e in enumerate(S.vals) if e > 0),
                            key=lambda t: -t[0])
    count = max((len(x) for x in primary.values()), default=0)
    factors, reps = [], []
    for j in range(count):
        d = 1
        parts = []
        for p, lst in primary.items():
            if j < len(lst):
                e, col = lst[j]
                d *= p ** e
                parts.append((p ** e, col))
        vec = np.zeros(slot_count(G, n), dtype=np.int64)
        for pe, col in parts:
            vec = vec + (col % pe) * (d // pe)
        factors.append(d)
        reps.append(_from_slots(G, n, d, vec % d))
    order = sorted(range(count), key=lambda j: factors[j])
    return CohomologyGroup(G, n, tuple(factors[j] for j in order), tuple(reps[j] for j in order))


def cocycle_system(G: FiniteGroup, n: int, m: int) -> ModularSystem:
    """Z^n(G, Z/m) is the kernel of this system."""
    return _system(G, n, m)


def enumerate_cocycles(G: FiniteGroup, n: int, M: int, limit: int = 200_000) -> list[Cochain]:
    """All normalized n-cocycles with values in Z/M, sorted by slot vector."""
    if n == 0:
        return [Cochain(G, 0, M, np.array(v)) for v in range(M)]
    sys_ = _system(G, n, M)
    rows = sys_.kernel_elements(limit)
    rows = rows[np.lexsort(rows.T[::-1])] if rows.shape[1] else rows
    return [_from_slots(G, n, M, r) for r in rows]


def cocycle_count(G: FiniteGroup, n: int, M: int) -> int:
    if n == 0:
        return M
    return _system(G, n, M).kernel_size
