"""Exact linear algebra over Z/M.

Systems are decomposed by the Chinese remainder theorem into prime-power
moduli p^k.  Over the local ring Z/p^k a Smith form is reached by always
pivoting on an entry of least p-adic valuation, which divides every other
entry of the active block, so elimination never needs gcd steps.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import prod

import numpy as np


def factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


@dataclass
class LocalSmith:
    """U A V = diag(p^e_0, p^e_1, ...) (mod q = p^k), valuations nondecreasing.

    ``left`` is False when U was not tracked (cohomology only needs V).
    """

    p: int
    k: int
    shape: tuple[int, int]
    vals: list[int]
    V: np.ndarray
    U: np.ndarray | None
    Uinv: np.ndarray | None

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def rank(self) -> int:
        return len(self.vals)


def local_smith(A: np.ndarray, p: int, k: int, left: bool = True) -> LocalSmith:
    q = p ** k
    a = np.array(A, dtype=np.int64) % q
    r, c = a.shape
    V = np.eye(c, dtype=np.int64)
    U = np.eye(r, dtype=np.int64) if left else None
    Ui = np.eye(r, dtype=np.int64) if left else None
    vals: list[int] = []
    # drop all-zero rows up front when U is not needed; they never pivot
    rows = np.arange(r)
    if not left:
        keep = a.any(axis=1)
        a, rows = a[keep], rows[keep]
        r = a.shape[0]
    t = 0
    while t < min(r, c):
        sub = a[t:, t:]
        if not sub.any():
            break
        best_e = None
        for e in range(k):
            hit = np.argwhere((sub % p ** (e + 1)) != 0)
            if hit.size:
                best_e = e
                i, j = int(hit[0][0]) + t, int(hit[0][1]) + t
                break
        assert best_e is not None
        if i != t:
            a[[t, i]] = a[[i, t]]
            if left:
                U[[t, i]] = U[[i, t]]
                Ui[:, [t, i]] = Ui[:, [i, t]]
        if j != t:
            a[:, [t, j]] = a[:, [j, t]]
            V[:, [t, j]] = V[:, [j, t]]
        pe = p ** best_e
        w = int(a[t, t]) // pe
        winv = pow(w, -1, q)
        a[t] = (a[t] * winv) % q
        if left:
            U[t] = (U[t] * winv) % q
            Ui[:, t] = (Ui[:, t] * w) % q
        col = a[t + 1:, t] // pe
        nzr = np.nonzero(col)[0]
        if nzr.size:
            f = col[nzr]
            idx = nzr + t + 1
            a[idx] = (a[idx] - np.outer(f, a[t])) % q
            if left:
                U[idx] = (U[idx] - np.outer(f, U[t])) % q
                Ui[:, t] = (Ui[:, t] + Ui[:, idx] @ f) % q
        row = a[t, t + 1:] // pe
        nzc = np.nonzero(row)[0]
        if nzc.size:
            g = row[nzc]
            idx = nzc + t + 1
            V[:, idx] = (V[:, idx] - np.outer(V[:, t], g)) % q
            a[t, idx] = 0
        vals.append(best_e)
        t += 1
        if not left and t % 64 == 0:
            # compact away rows that became zero
            live = np.concatenate([np.ones(t, dtype=bool), a[t:].any(axis=1)])
            a = a[live]
            r = a.shape[0]
    return LocalSmith(p, k, tuple(A.shape), vals, V, U, Ui)


def _crt_weights(m: int) -> dict[int, tuple[int, int]]:
    """prime -> (prime power q, idempotent e with e = 1 mod q, 0 mod m/q)"""
    out = {}
    for p, k in factorize(m).items():
        q = p ** k
        rest = m // q
        out[p] = (q, rest * pow(rest, -1, q) % m)
    return out


class ModularSystem:
    """A fixed integer matrix A viewed modulo m; solves A x = b and describes ker A."""

    def __init__(self, A: np.ndarray, m: int):
        self.A = np.asarray(A, dtype=np.int64)
        self.m = int(m)
        self.ncols = self.A.shape[1]
        self.nrows = self.A.shape[0]
        self.parts = {p: local_smith(self.A, p, k) for p, k in factorize(self.m).items()}
        self.crt = _crt_weights(self.m)

    def solve(self, b) -> np.ndarray | None:
        """A solution of A x = b (mod m), free coordinates set to zero, or None."""
        b = np.asarray(b, dtype=np.int64)
        x = np.zeros(self.ncols, dtype=np.int64)
        if self.m == 1:
            return x
        for p, S in self.parts.items():
            q = S.q
            ub = (S.U @ (b % q)) % q
            y = np.zeros(self.ncols, dtype=np.int64)
            for i, e in enumerate(S.vals):
                pe = p ** e
                if ub[i] % pe:
                    return None
                y[i] = (ub[i] // pe) % (q // pe)
            if ub[S.rank:].any():
                return None
            xp = (S.V @ y) % q
            x = (x + xp * self.crt[p][1]) % self.m
        return x

    def reduce(self, b) -> np.ndarray:
        """Canonical representative of b modulo the column span of A."""
        b = np.asarray(b, dtype=np.int64) % self.m
        x = np.zeros(self.nrows, dtype=np.int64)
        if self.m == 1:
            return x
        for p, S in self.parts.items():
            q = S.q
            w = (S.U @ (b % q)) % q
            for i, e in enumerate(S.vals):
                w[i] %= p ** e
            xp = (S.Uinv @ w) % q
            x = (x + xp * self.crt[p][1]) % self.m
        return x

    @cached_property
    def kernel_basis(self) -> list[tuple[np.ndarray, int]]:
        """Generators of ker A (mod m) with their additive orders; the kernel is their direct sum."""
        gens: list[tuple[np.ndarray, int]] = []
        if self.m == 1:
            return gens
        for p, S in self.parts.items():
            q = S.q
            e_p = self.crt[p][1]
            for i in range(self.ncols):
                if i < S.rank:
                    e = S.vals[i]
                    if e == 0:
                        continue
                    v = S.V[:, i] * (q // p ** e)
                    order = p ** e
                else:
                    v = S.V[:, i]
                    order = q
                gens.append(((v % q) * e_p % self.m, order))
        return gens

    @cached_property
    def kernel_size(self) -> int:
        return prod(o for _, o in self.kernel_basis)

    def kernel_elements(self, limit: int) -> np.ndarray:
        """All kernel vectors as rows, in mixed-radix order over ``kernel_basis``."""
        if self.kernel_size > limit:
            from .errors import TooLarge
            raise TooLarge(f"kernel has {self.kernel_size} elements (limit {limit})")
        out = np.zeros((1, self.ncols), dtype=np.int64)
        for v, order in self.kernel_basis:
            steps = (np.arange(order)[:, None] * v[None, :]) % self.m
            out = ((out[:, None, :] + steps[None, :, :]) % self.m).reshape(-1, self.ncols)
        return out


def torsion_factors(A: np.ndarray, bound_order: int) -> dict[int, LocalSmith]:
    """Local Smith data of A at every prime of ``bound_order``, precise enough to read off
    all invariant factors that divide ``bound_order``."""
    return {p: local_smith(A, p, k + 1, left=False) for p, k in factorize(bound_order).items()}
