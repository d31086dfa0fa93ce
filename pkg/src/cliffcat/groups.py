"""Finite groups as closed multiplication tables.

Everything downstream (cochains, module data, 1-cocycles) addresses group
elements by their index ``0..n-1`` in a table.  Named groups are produced by
constructors that emit tables; no permutation-group algorithms are used.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import InvalidGroup, NotNormal, TooLarge

DEFAULT_BOUND = 16


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its multiplication table ``table[a, b] = a*b``."""

    table: np.ndarray
    identity: int
    inverse: np.ndarray
    label: str = ""
    _key: bytes = field(init=False, repr=False)

    def __post_init__(self):
        self.table.setflags(write=False)
        self.inverse.setflags(write=False)
        object.__setattr__(self, "_key", self.table.tobytes() + bytes([self.identity % 256]))

    @classmethod
    def from_table(cls, table, label: str = "") -> "FiniteGroup":
        """Validate a raw table and build the group (identity and inverses are found)."""
        t = np.asarray(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise InvalidGroup("table must be a non-empty square array")
        n = t.shape[0]
        full = np.arange(n)
        if t.min() < 0 or t.max() >= n:
            raise InvalidGroup("table entries out of range")
        for i in range(n):
            if not (np.array_equal(np.sort(t[i]), full) and np.array_equal(np.sort(t[:, i]), full)):
                raise InvalidGroup(f"row/column {i} is not a permutation")
        ids = [e for e in range(n) if np.array_equal(t[e], full) and np.array_equal(t[:, e], full)]
        if len(ids) != 1:
            raise InvalidGroup("no two-sided identity")
        e = ids[0]
        # associativity, exhaustively: t[t[a,b],c] == t[a,t[b,c]]
        if not np.array_equal(t[t[:, :, None], full[None, None, :]], t[full[:, None, None], t[None, :, :]]):
            raise InvalidGroup("table is not associative")
        inv = np.array([int(np.nonzero(t[a] == e)[0][0]) for a in range(n)], dtype=np.int64)
        if not all(t[inv[a], a] == e for a in range(n)):
            raise InvalidGroup("inverse is not two-sided")
        return cls(t.copy(), e, inv, label)

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FiniteGroup({self.label or '?'}, order={self.order})"

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, x: int, a: int) -> int:
        """x a x^-1"""
        return int(self.table[self.table[x, a], self.inverse[x]])

    def power(self, a: int, k: int) -> int:
        r = self.identity
        if k < 0:
            a, k = self.inv(a), -k
        for _ in range(k):
            r = self.mul(r, a)
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce([self.element_order(a) for a in range(self.order)]))

    def nonidentity(self) -> list[int]:
        return [a for a in range(self.order) if a != self.identity]

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set, chosen greedily by decreasing element order."""
        cand = sorted(range(self.order), key=lambda a: (-self.element_order(a), a))
        gens: list[int] = []
        span = {self.identity}
        for a in cand:
            if len(span) == self.order:
                break
            if a not in span:
                gens.append(a)
                span = closure(self, gens)
        return tuple(gens)

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        return Subgroup.of(self, elements)

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))


@dataclass(frozen=True)
class Subgroup:
    """A subgroup in canonical form: its strictly sorted element list."""

    parent: FiniteGroup
    elements: tuple[int, ...]

    @classmethod
    def of(cls, G: FiniteGroup, elements: Iterable[int]) -> "Subgroup":
        els = tuple(sorted(set(int(x) for x in elements)))
        s = set(els)
        if G.identity not in s:
            raise InvalidGroup("subgroup must contain the identity")
        for a in els:
            if G.inv(a) not in s or any(G.mul(a, b) not in s for b in els):
                raise InvalidGroup("element set is not closed")
        return cls(G, els)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, a) -> bool:
        return a in self.members

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.elements)

    @cached_property
    def index_of(self) -> dict[int, int]:
        """parent element -> index in :meth:`as_group`"""
        return {a: i for i, a in enumerate(self.elements)}

    @cached_property
    def embedding(self) -> np.ndarray:
        """index in :meth:`as_group` -> parent element"""
        return np.array(self.elements, dtype=np.int64)

    @cached_property
    def as_group(self) -> FiniteGroup:
        """The subgroup as a standalone table group (element i = ``elements[i]``)."""
        G = self.parent
        idx = self.index_of
        t = np.array([[idx[G.mul(a, b)] for b in self.elements] for a in self.elements], dtype=np.int64)
        inv = np.array([idx[G.inv(a)] for a in self.elements], dtype=np.int64)
        name = f"{G.label}<{','.join(map(str, self.elements))}>" if G.label else ""
        return FiniteGroup(t, idx[G.identity], inv, name)

    def conjugate(self, x: int) -> "Subgroup":
        """x L x^-1"""
        G = self.parent
        return Subgroup(G, tuple(sorted(G.conj(x, a) for a in self.elements)))

    def is_normal(self) -> bool:
        return all(self.conjugate(x) == self for x in range(self.parent.order))

    def intersect(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(a for a in self.elements if a in other.members))

    def image(self, f: Sequence[int], target: FiniteGroup) -> "Subgroup":
        return Subgroup(target, tuple(sorted({int(f[a]) for a in self.elements})))


def closure(G: FiniteGroup, gens: Iterable[int]) -> set[int]:
    """Subgroup generated by ``gens``; returns all of G once past half its order."""
    gens = [g for g in gens if g != G.identity]
    elements = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = G.mul(a, g)
                if b not in elements:
                    elements.add(b)
                    nxt.append(b)
        if 2 * len(elements) > G.order:
            return set(range(G.order))
        frontier = nxt
    return elements


def subgroups(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> list[Subgroup]:
    """All subgroups of G, each in canonical form, sorted lexicographically."""
    if G.order > bound:
        raise TooLarge(f"subgroup enumeration bounded to order {bound}")
    found: set[tuple[int, ...]] = set()
    queue: deque[tuple[int, ...]] = deque()
    for a in range(G.order):
        s = tuple(sorted(closure(G, [a])))
        if s not in found:
            found.add(s)
            queue.append(s)
    while queue:
        h = queue.popleft()
        hs = set(h)
        for g in range(G.order):
            if g in hs:
                continue
            s = tuple(sorted(closure(G, list(h) + [g])))
            if s not in found:
                found.add(s)
                queue.append(s)
    return [Subgroup(G, s) for s in sorted(found)]


def normal_subgroups(G: FiniteGroup, bound: int = DEFAULT_BOUND) -> list[Subgroup]:
    return [L for L in subgroups(G, bound) if L.is_normal()]


@dataclass(frozen=True)
class QuotientMap:
    source: FiniteGroup
    kernel: Subgroup
    quotient: FiniteGroup
    projection: np.ndarray
    cosets: tuple[tuple[int, ...], ...]

    def lift(self, sigma: int) -> int:
        """Least element index in the coset of sigma."""
        return self.cosets[sigma][0]

    def project(self, L: Subgroup) -> Subgroup:
        return L.image(self.projection, self.quotient)


def quotient(K: FiniteGroup, N: Subgroup) -> QuotientMap:
    """K/N with cosets ordered by their least element index."""
    if N.parent != K:
        raise InvalidGroup("kernel must be a subgroup of K")
    if not N.is_normal():
        raise NotNormal("kernel is not normal")
    cosets = sorted({tuple(sorted(K.mul(k, n) for n in N.elements)) for k in range(K.order)})
    proj = np.empty(K.order, dtype=np.int64)
    for i, c in enumerate(cosets):
        proj[list(c)] = i
    reps = [c[0] for c in cosets]
    t = np.array([[proj[K.mul(a, b)] for b in reps] for a in reps], dtype=np.int64)
    inv = np.array([proj[K.inv(a)] for a in reps], dtype=np.int64)
    label = f"{K.label}/{len(N)}" if K.label else ""
    Q = FiniteGroup(t, int(proj[K.identity]), inv, label)
    return QuotientMap(K, N, Q, proj, tuple(cosets))


def extend_homomorphism(G: FiniteGroup, gens: Sequence[int], images: Sequence[int],
                        H: FiniteGroup) -> np.ndarray | None:
    """The homomorphism G -> H sending gens[i] to images[i], or None if none exists."""
    f = np.full(G.order, -1, dtype=np.int64)
    f[G.identity] = H.identity
    queue = deque([G.identity])
    while queue:
        a = queue.popleft()
        for g, h in zip(gens, images):
            b = G.mul(a, g)
            v = H.mul(int(f[a]), h)
            if f[b] < 0:
                f[b] = v
                queue.append(b)
            elif f[b] != v:
                return None
    if (f < 0).any():
        return None
    return f


def homomorphisms(G: FiniteGroup, H: FiniteGroup) -> list[np.ndarray]:
    gens = G.generators
    out = []
    cands = [[h for h in range(H.order) if G.element_order(g) % H.element_order(h) == 0] for g in gens]
    for imgs in itertools.product(*cands):
        f = extend_homomorphism(G, gens, imgs, H)
        if f is not None:
            out.append(f)
    return out


def find_isomorphism(G: FiniteGroup, H: FiniteGroup) -> np.ndarray | None:
    if G.order != H.order:
        return None
    gens = G.generators
    cands = [[h for h in range(H.order) if H.element_order(h) == G.element_order(g)] for g in gens]
    for imgs in itertools.product(*cands):
        f = extend_homomorphism(G, gens, imgs, H)
        if f is not None and len(set(f.tolist())) == H.order:
            return f
    return None


def automorphism_group(N: FiniteGroup, bound: int = DEFAULT_BOUND) -> tuple[FiniteGroup, list[np.ndarray]]:
    """Aut(N) as an abstract table group plus each element as a permutation of N.

    Permutations are sorted lexicographically (the identity comes first) and the
    table composes them as ``perm_a o perm_b``.
    """
    if N.order > bound:
        raise TooLarge(f"automorphism enumeration bounded to order {bound}")
    perms = sorted((tuple(f.tolist()) for f in homomorphisms(N, N) if len(set(f.tolist())) == N.order))
    index = {p: i for i, p in enumerate(perms)}
    t = np.array([[index[tuple(p[q[x]] for x in range(N.order))] for q in perms] for p in perms],
                 dtype=np.int64)
    A = FiniteGroup.from_table(t, f"Aut({N.label})" if N.label else "")
    return A, [np.array(p, dtype=np.int64) for p in perms]


@dataclass(frozen=True, eq=False)
class GroupAction:
    """G acting on N by automorphisms: ``perms[sigma]`` is the permutation sigma_*."""

    actor: FiniteGroup
    target: FiniteGroup
    perms: np.ndarray

    def __post_init__(self):
        G, N, p = self.actor, self.target, self.perms
        if p.shape != (G.order, N.order):
            raise InvalidGroup("action array has the wrong shape")
        if not np.array_equal(p[G.identity], np.arange(N.order)):
            raise InvalidGroup("identity must act trivially")
        for s in range(G.order):
            ps = p[s]
            if len(set(ps.tolist())) != N.order or not np.array_equal(ps[N.table], N.table[ps[:, None], ps[None, :]]):
                raise InvalidGroup(f"element {s} does not act by an automorphism")
            for t in range(G.order):
                if not np.array_equal(p[G.mul(s, t)], ps[p[t]]):
                    raise InvalidGroup("action is not a homomorphism")

    def __eq__(self, other):
        return (isinstance(other, GroupAction) and self.actor == other.actor
                and self.target == other.target and np.array_equal(self.perms, other.perms))

    def __hash__(self):
        return hash((self.actor, self.target, self.perms.tobytes()))

    def act(self, sigma: int, u: int) -> int:
        return int(self.perms[sigma, u])

    @classmethod
    def trivial(cls, G: FiniteGroup, N: FiniteGroup) -> "GroupAction":
        return cls(G, N, np.tile(np.arange(N.order, dtype=np.int64), (G.order, 1)))

    @classmethod
    def from_homomorphism(cls, G: FiniteGroup, N: FiniteGroup, f: Sequence[int],
                          perms: Sequence[np.ndarray]) -> "GroupAction":
        return cls(G, N, np.array([perms[int(f[s])] for s in range(G.order)], dtype=np.int64))


def semidirect_product(N: FiniteGroup, G: FiniteGroup, act: GroupAction) -> FiniteGroup:
    """N x| G on pairs (u, sigma) stored at index ``sigma * |N| + u``.

    [u, s] [v, t] = [u * s_*(v), s t]
    """
    if act.actor != G or act.target != N:
        raise InvalidGroup("action does not match the factors")
    n, g = N.order, G.order
    t = np.empty((n * g, n * g), dtype=np.int64)
    for s in range(g):
        for u in range(n):
            for tt in range(g):
                row = N.table[u, act.perms[s]]  # u * s_*(v) for all v
                t[s * n + u, tt * n: (tt + 1) * n] = G.mul(s, tt) * n + row
    label = f"{N.label}:{G.label}" if N.label and G.label else ""
    return FiniteGroup.from_table(t, label)


def pair_index(N: FiniteGroup, u: int, sigma: int) -> int:
    return sigma * N.order + u


def complements(K: FiniteGroup, N: Subgroup, bound: int = DEFAULT_BOUND) -> list[Subgroup]:
    """All T <= K with T cap N = {e} and |T||N| = |K|."""
    if not N.is_normal():
        raise NotNormal("kernel is not normal")
    target = K.order // N.order
    return [T for T in subgroups(K, bound) if T.order == target and T.intersect(N).order == 1]


# --- constructors ---------------------------------------------------------


def from_generators(gens: Sequence, mul: Callable, identity, key: Callable[..., Hashable] = lambda x: x,
                    label: str = "") -> FiniteGroup:
    """Table group from generators of some concrete group, elements in BFS order."""
    elems = [identity]
    index = {key(identity): 0}
    i = 0
    while i < len(elems):
        for g in gens:
            b = mul(elems[i], g)
            if key(b) not in index:
                index[key(b)] = len(elems)
                elems.append(b)
        i += 1
        if len(elems) > 4096:
            raise TooLarge("generated group is too large")
    t = [[index[key(mul(a, b))] for b in elems] for a in elems]
    return FiniteGroup.from_table(t, label)


def cyclic(n: int) -> FiniteGroup:
    a = np.arange(n)
    return FiniteGroup.from_table((a[:, None] + a[None, :]) % n, f"Z{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n; index f*n + k stands for s^f r^k."""
    t = np.empty((2 * n, 2 * n), dtype=np.int64)
    for f1, k1, f2, k2 in itertools.product(range(2), range(n), range(2), range(n)):
        k = ((-k1 if f2 else k1) + k2) % n
        t[f1 * n + k1, f2 * n + k2] = ((f1 + f2) % 2) * n + k
    return FiniteGroup.from_table(t, f"D{n}")


def direct_product(*factors: FiniteGroup) -> FiniteGroup:
    """Elements indexed in mixed radix, first factor most significant."""
    G = factors[0]
    for H in factors[1:]:
        h = H.order
        t = (G.table[:, None, :, None] * h + H.table[None, :, None, :]).reshape(G.order * h, G.order * h)
        G = FiniteGroup.from_table(t, f"{G.label}x{H.label}")
    return G


def klein() -> FiniteGroup:
    G = direct_product(cyclic(2), cyclic(2))
    return FiniteGroup(G.table.copy(), G.identity, G.inverse.copy(), "V4")


def quaternion() -> FiniteGroup:
    def mul(a, b):
        (a0, a1, a2, a3), (b0, b1, b2, b3) = a, b
        return (a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
                a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
                a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
                a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0)
    return from_generators([(0, 1, 0, 0), (0, 0, 1, 0)], mul, (1, 0, 0, 0), label="Q8")


def symmetric(n: int) -> FiniteGroup:
    def mul(p, q):  # apply q first
        return tuple(p[q[i]] for i in range(n))
    gens = [tuple([1, 0] + list(range(2, n)))] if n >= 2 else []
    if n >= 3:
        gens.append(tuple(list(range(1, n)) + [0]))
    return from_generators(gens, mul, tuple(range(n)), label=f"S{n}")


def trivial_group() -> FiniteGroup:
    return FiniteGroup.from_table([[0]], "1")


def abelian(*orders: int) -> FiniteGroup:
    if not orders:
        return trivial_group()
    return direct_product(*(cyclic(n) for n in orders))


def small_groups(max_order: int = 8) -> list[FiniteGroup]:
    """One representative of each isomorphism type up to order 8."""
    cat = [trivial_group(), cyclic(2), cyclic(3), cyclic(4), klein(), cyclic(5), cyclic(6),
           dihedral(3), cyclic(7), cyclic(8), abelian(4, 2), abelian(2, 2, 2), dihedral(4), quaternion()]
    return [G for G in cat if G.order <= max_order]


# --- textual / JSON references --------------------------------------------


def parse_group_ref(ref: str) -> FiniteGroup:
    """``cyclic:n``, ``dihedral:n``, ``klein``, ``quaternion``, ``symmetric:n``,
    ``trivial`` or ``product:<ref>*<ref>...``."""
    ref = ref.strip()
    if ref.startswith("product:"):
        parts = [p for p in ref[len("product:"):].split("*") if p]
        if not parts:
            raise InvalidGroup("empty product")
        return direct_product(*(parse_group_ref(p) for p in parts))
    name, _, arg = ref.partition(":")
    try:
        if name == "cyclic":
            return cyclic(int(arg))
        if name == "dihedral":
            return dihedral(int(arg))
        if name == "symmetric":
            return symmetric(int(arg))
    except ValueError as exc:
        raise InvalidGroup(f"bad parameter in {ref!r}") from exc
    if name == "klein" and not arg:
        return klein()
    if name == "quaternion" and not arg:
        return quaternion()
    if name == "trivial" and not arg:
        return trivial_group()
    raise InvalidGroup(f"unknown group reference {ref!r}")


def group_from_json(obj) -> FiniteGroup:
    if isinstance(obj, str):
        return parse_group_ref(obj)
    if not isinstance(obj, dict):
        raise InvalidGroup("group must be an object or a reference string")
    if "catalog" in obj:
        kind, params = obj["catalog"], obj.get("params", [])
        if kind == "product":
            return direct_product(*(group_from_json(p) for p in params))
        if kind in ("klein", "quaternion"):
            return parse_group_ref(kind)
        if kind in ("cyclic", "dihedral", "symmetric"):
            if len(params) != 1:
                raise InvalidGroup(f"{kind} takes one parameter")
            return parse_group_ref(f"{kind}:{int(params[0])}")
        raise InvalidGroup(f"unknown catalog entry {kind!r}")
    if "table" not in obj:
        raise InvalidGroup("group object needs 'table' or 'catalog'")
    G = FiniteGroup.from_table(obj["table"], str(obj.get("name", "")))
    if "order" in obj and int(obj["order"]) != G.order:
        raise InvalidGroup("declared order does not match table")
    return G


def group_to_json(G: FiniteGroup) -> dict:
    return {"name": G.label, "order": G.order, "table": G.table.tolist()}
