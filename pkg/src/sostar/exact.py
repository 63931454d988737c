"""Exact nonsingularity certificates for integer matrices.

A determinant that is nonzero modulo a prime is nonzero over the integers, so
one lucky prime is a proof.  A zero residue proves nothing; it escalates to
more primes and finally to fraction-free (Bareiss) elimination over Python
integers.  Primes are drawn below 2**31 so that every product of two
residues fits in a signed 64-bit integer.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from sympy import nextprime

PRIME_LO = 2**30
PRIME_HI = 2**31 - 1


def random_primes(count: int, seed: int) -> list[int]:
    rng = random.Random(seed)
    out: list[int] = []
    while len(out) < count:
        p = nextprime(rng.randrange(PRIME_LO, PRIME_HI - 2**20))
        if p not in out:
            out.append(int(p))
    return out


def det_mod_p(a, p: int) -> int:
    """Determinant of a square integer matrix modulo p by Gaussian elimination."""
    m = np.array(a, dtype=object) % p
    m = m.astype(np.int64)
    n = m.shape[0]
    det = 1
    for c in range(n):
        nz = np.nonzero(m[c:, c])[0]
        if len(nz) == 0:
            return 0
        r = c + int(nz[0])
        if r != c:
            m[[c, r]] = m[[r, c]]
            det = -det
        piv = int(m[c, c])
        det = det * piv % p
        if c + 1 == n:
            break
        f = (m[c + 1 :, c] * pow(piv, p - 2, p)) % p
        m[c + 1 :, c:] = (m[c + 1 :, c:] - (f[:, None] * m[c, c:][None, :]) % p) % p
    return det % p


_PERMS4 = [(perm, 1 - 2 * (sum(1 for i in range(4) for j in range(i) if perm[j] > perm[i]) % 2)) for perm in permutations(range(4))]


def det4_mod_p_batch(blocks: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of 4x4 integer matrices (Leibniz expansion)."""
    b = np.asarray(blocks, dtype=np.int64) % p
    total = np.zeros(b.shape[0], dtype=np.int64)
    for perm, sign in _PERMS4:
        term = np.ones(b.shape[0], dtype=np.int64)
        for i in range(4):
            term = term * b[:, i, perm[i]] % p
        total = (total + sign * term) % p
    return total


def bareiss_det(a) -> int:
    """Exact determinant of a square integer matrix, fraction-free."""
    m = [[int(x) for x in row] for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = m[k][k]
        for i in range(k + 1, n):
            mi = m[i]
            mik = mi[k]
            mk = m[k]
            for j in range(k + 1, n):
                mi[j] = (mi[j] * pk - mik * mk[j]) // prev
        prev = pk
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class Certificate:
    nonsingular: bool
    method: str  # "mod-p" or "exact"
    prime: int | None = None
    residue: int | None = None


def certify_nonsingular(a, seed: int = 0, extra_primes: int = 8) -> Certificate:
    primes = random_primes(1 + extra_primes, seed)
    for p in primes:
        r = det_mod_p(a, p)
        if r != 0:
            return Certificate(True, "mod-p", p, r)
    return Certificate(bareiss_det(a) != 0, "exact")


def certify_blocks(blocks: np.ndarray, seed: int = 0, extra_primes: int = 8) -> list[Certificate]:
    """Nonsingularity certificates for a stack of 4x4 blocks."""
    blocks = np.asarray(blocks, dtype=np.int64)
    primes = random_primes(1 + extra_primes, seed)
    out: list[Certificate | None] = [None] * blocks.shape[0]
    pending = np.arange(blocks.shape[0])
    for p in primes:
        if len(pending) == 0:
            break
        res = det4_mod_p_batch(blocks[pending], p)
        for idx, r in zip(pending, res):
            if r != 0:
                out[idx] = Certificate(True, "mod-p", p, int(r))
        pending = np.array([i for i in pending if out[i] is None], dtype=np.int64)
    for idx in pending:
        out[idx] = Certificate(bareiss_det(blocks[idx]) != 0, "exact")
    return out  # type: ignore[return-value]
