"""Integer factorization under an effort budget, plus P, omega and Q.

Pipeline: trial division by every prime up to ``TRIAL_BOUND``, a strong
pseudoprime test on what remains, then Brent's variant of Pollard rho with
a pseudorandom walk seeded from the integer itself. Output is a pure
function of ``(n, budget)``.

Conventions for the arithmetic functions follow the usual ones for the
degenerate inputs: ``P(0) = P(+-1) = 1``, ``omega(0) = omega(+-1) = 0`` and
``Q(0) = Q(+-1) = 1``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
import numpy as np

TRIAL_BOUND = 10**6
DEFAULT_BUDGET = 10**7

# Deterministic Miller-Rabin witness set, valid for n < 3.3 * 10**24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_RANDOM_ROUNDS = 24
_CHUNK = 256


def primes_up_to(y: int) -> list[int]:
    """All primes ``p <= y`` in increasing order (sieve of Eratosthenes)."""
    if y < 2:
        return []
    sieve = np.ones(y + 1, dtype=bool)
    sieve[:2] = False
    sieve[4::2] = False
    for p in range(3, math.isqrt(y) + 1, 2):
        if sieve[p]:
            sieve[p * p :: 2 * p] = False
    return np.flatnonzero(sieve).tolist()


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(primes_up_to(TRIAL_BOUND))


@lru_cache(maxsize=1)
def _trial_chunks() -> tuple[tuple[tuple[int, ...], int], ...]:
    # Products of consecutive prime blocks: one gcd rules out a whole block.
    ps = _trial_primes()
    chunks = []
    for i in range(0, len(ps), _CHUNK):
        block = ps[i : i + _CHUNK]
        chunks.append((block, math.prod(block)))
    return tuple(chunks)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Strong pseudoprime test.

    Exact below 3.3e24 (fixed witness set). Above that, 24 witnesses drawn
    from a generator seeded with ``n`` so the answer is reproducible.
    """
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n < 43 * 43:
        return True
    if n < _MR_DETERMINISTIC_LIMIT:
        bases = _MR_BASES
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(_MR_RANDOM_ROUNDS)]
    return all(_strong_probable_prime(n, a) for a in bases)


@dataclass(frozen=True)
class Factorization:
    """``n = sign * prod(p**e) * (cofactor or 1)``.

    ``cofactor`` is whatever composite part the rho budget could not split;
    it is ``None`` exactly when the factorization is complete.
    """

    n: int
    sign: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int | None = None

    @property
    def complete(self) -> bool:
        return self.cofactor is None

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out * (self.cofactor or 1)


@lru_cache(maxsize=4096)
def _rho(n: int, max_iter: int) -> int | None:
    """Brent's cycle-finding rho; a nontrivial factor of odd composite n or None."""
    rng = random.Random(n)
    N = gmpy2.mpz(n)
    spent = 0
    while spent < max_iter:
        y = gmpy2.mpz(rng.randrange(1, n))
        c = gmpy2.mpz(rng.randrange(1, n))
        m = 128
        g = r = q = gmpy2.mpz(1)
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % N
            spent += r
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % N
                    q = q * (x - y) % N
                g = gmpy2.gcd(q, N)
                k += m
            spent += min(r, k)
            r *= 2
            if spent >= max_iter and g == 1:
                return None
        if g == N:
            # Batched product overshot: replay one step at a time.
            g = gmpy2.mpz(1)
            while g == 1:
                ys = (ys * ys + c) % N
                g = gmpy2.gcd(x - ys, N)
        if g != N:
            return int(g)
    return None


def _split(n: int, budget: int, primes: dict[int, int], leftover: list[int]) -> None:
    if n == 1:
        return
    if n < TRIAL_BOUND * TRIAL_BOUND or is_prime(n):
        primes[n] = primes.get(n, 0) + 1
        return
    root = gmpy2.iroot(n, 2)
    if root[1]:
        _split(int(root[0]), budget, primes, leftover)
        _split(int(root[0]), budget, primes, leftover)
        return
    d = _rho(n, budget)
    if d is None:
        leftover.append(n)
        return
    _split(d, budget, primes, leftover)
    _split(n // d, budget, primes, leftover)


@lru_cache(maxsize=1 << 16)
def factor(n: int, budget: int = DEFAULT_BUDGET) -> Factorization:
    """Factor a nonzero integer; ``budget`` caps rho iterations per composite."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    m = abs(n)
    found: dict[int, int] = {}
    for block, prod in _trial_chunks():
        if m == 1 or block[0] * block[0] > m:
            break
        if math.gcd(m, prod) == 1:
            continue
        for p in block:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
    leftover: list[int] = []
    if m > 1:
        if m <= _trial_primes()[-1] ** 2:
            found[m] = found.get(m, 0) + 1
        else:
            _split(m, budget, found, leftover)
    cofactor = math.prod(leftover) if leftover else None
    return Factorization(n, sign, tuple(sorted(found.items())), cofactor)


def _as_factorization(n: int, budget: int) -> Factorization | None:
    return None if n in (0, 1, -1) else factor(n, budget)


def largest_prime_factor(n: int, budget: int = DEFAULT_BUDGET) -> tuple[int, bool]:
    """P(n). When incomplete, the value is a lower bound from the known primes."""
    f = _as_factorization(n, budget)
    if f is None or not f.factors:
        return 1, f is None or f.complete
    return f.factors[-1][0], f.complete


def omega(n: int, budget: int = DEFAULT_BUDGET) -> tuple[int, bool]:
    f = _as_factorization(n, budget)
    if f is None:
        return 0, True
    return len(f.factors), f.complete


def radical(n: int, budget: int = DEFAULT_BUDGET) -> tuple[int, bool]:
    f = _as_factorization(n, budget)
    if f is None:
        return 1, True
    return math.prod(f.primes), f.complete


def _smooth_at(p: int, n: int, A: float) -> bool:
    return p <= math.log(n) ** A


def is_smooth(n: int, A: float) -> bool:
    """True iff P(n) <= (log n)**A, natural log; defined for n >= 2."""
    if n < 2:
        raise ValueError("smoothness is only defined for n >= 2")
    p, _ = largest_prime_factor(n)
    return _smooth_at(p, n, A)


def largest_prime_factor_sieve(z: int) -> np.ndarray:
    """``lpf[n] = P(n)`` for ``2 <= n <= z``."""
    lpf = np.zeros(z + 1, dtype=np.int64)
    for p in primes_up_to(z):
        lpf[p::p] = p
    return lpf


def count_smooth(z: int, A: float) -> int:
    """#{2 <= n <= z : P(n) <= (log n)**A}."""
    if z < 2:
        raise ValueError("z must be at least 2")
    lpf = largest_prime_factor_sieve(z).tolist()
    return sum(_smooth_at(lpf[n], n, A) for n in range(2, z + 1))
