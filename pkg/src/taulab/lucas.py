"""The Lucas sequence u_r = tau(2^r) and its cyclotomic factorization.

u_r satisfies u_{r+2} = trace * u_{r+1} - norm * u_r with trace = -24 and
norm = 2048 (the Hecke recurrence at p = 2), u_0 = 1, u_1 = -24. The roots
alpha, beta of X^2 - trace X + norm are complex and never formed; everything
is done with integers.

Indexing: with U_n = u_{n-1} = (alpha^n - beta^n) / (alpha - beta) we have
U_n = prod_{d | n, d >= 2} C_d where C_d = Phi_d(alpha, beta), so C_n | U_n.
Cyclotomic quantities here are indexed by n, the Lucas terms by r = n - 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InternalInconsistencyError
from .factor import DEFAULT_BUDGET, TRIAL_BOUND, factor

TRACE = -24
NORM = 2048


@dataclass(frozen=True)
class LucasParams:
    trace: int = TRACE
    norm: int = NORM

    def step(self, prev: int, cur: int) -> int:
        return self.trace * cur - self.norm * prev


@dataclass(frozen=True)
class CycloPart:
    n: int
    U_n: int
    C_n: int
    A_n: int
    B_n: int
    primitive_primes: tuple[int, ...]
    complete: bool

    @property
    def a_within_6n(self) -> bool:
        """Whether |A_n| <= 6n; reported only, not guaranteed."""
        return abs(self.A_n) <= 6 * self.n


def lucas_terms(max_r: int, params: LucasParams = LucasParams()) -> list[int]:
    """u_0 .. u_max_r."""
    if max_r < 1:
        raise ValueError("max_r must be at least 1")
    terms = [1, params.trace]
    while len(terms) <= max_r:
        terms.append(params.step(terms[-2], terms[-1]))
    return terms


def check_divisibility(r: int, s: int, terms: list[int] | None = None) -> bool:
    """Whether u_r divides u_s."""
    if not 0 <= r <= s:
        raise ValueError("need 0 <= r <= s")
    if terms is None or len(terms) <= s:
        terms = lucas_terms(max(s, 1))
    return terms[s] % terms[r] == 0


def mobius(n: int) -> int:
    f = factor(n)
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def cyclotomic_value(n: int, terms: list[int]) -> int:
    """C_n = Phi_n(alpha, beta) = prod_{d | n} U_d^{mu(n/d)}, exactly."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if len(terms) < n:
        raise ValueError(f"need terms u_0..u_{n - 1}")
    num = den = 1
    for d in divisors(n):
        mu = mobius(n // d)
        if mu == 1:
            num *= terms[d - 1]
        elif mu == -1:
            den *= terms[d - 1]
    q, rem = divmod(num, den)
    if rem:
        raise InternalInconsistencyError(f"Phi_{n}(alpha, beta) came out non-integral")
    return q


def split_AB(n: int, terms: list[int] | None = None, budget: int = DEFAULT_BUDGET) -> CycloPart:
    """Split C_n = A_n * B_n, with B_n the part made of primes = +-1 mod n.

    Primes dividing the norm (only 2 here) always stay in A_n: they divide
    every term from u_1 on and carry no cyclotomic information. This only
    matters at n = 3, where 2 = -1 mod 3. An unsplit cofactor stays in A_n
    and the part is marked incomplete.
    """
    if terms is None or len(terms) < n:
        terms = lucas_terms(max(n - 1, 1))
    C = cyclotomic_value(n, terms)
    f = factor(C, budget)
    B = 1
    for q, e in f.factors:
        if q % n in (1, n - 1) and NORM % q:
            B *= q**e
    prim = tuple(q for q in f.primes if not _divides_earlier(q, terms, n - 1))
    return CycloPart(n, terms[n - 1], C, C // B, B, prim, f.complete)


def _divides_earlier(q: int, terms: list[int], r: int) -> bool:
    return any(terms[j] % q == 0 for j in range(1, r))


def primitive_divisor(
    r: int, terms: list[int] | None = None, budget: int = DEFAULT_BUDGET
) -> tuple[int | None, bool]:
    """Smallest prime dividing u_r and no u_j with 1 <= j < r.

    Any such prime divides C_{r+1}, so only that value is factored. Returns
    ``(prime or None, complete)``; a prime below the trial-division bound is
    certainly the smallest even when the factorization is incomplete.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    if terms is None or len(terms) <= r:
        terms = lucas_terms(r)
    f = factor(cyclotomic_value(r + 1, terms), budget)
    for q in f.primes:
        if not _divides_earlier(q, terms, r):
            return q, f.complete or q < TRIAL_BOUND
    return None, f.complete


def nu_factorial_2adic(m: int) -> int:
    """Exponent of 2 in m! (Legendre's formula)."""
    if m < 1:
        raise ValueError("m must be positive")
    total, power = 0, 2
    while power <= m:
        total += m // power
        power *= 2
    return total


def term_mod(k: int, modulus: int, params: LucasParams = LucasParams()) -> int:
    """u_k mod |modulus| via the companion matrix, O(log k) multiplications."""
    m = abs(modulus)
    if m == 1:
        return 0
    # [u_{j+1}, u_j] = M^j [u_1, u_0] with M = [[trace, -norm], [1, 0]].
    a, b, c, d = 1, 0, 0, 1
    x, y, z, w = params.trace % m, -params.norm % m, 1, 0
    e = k
    while e:
        if e & 1:
            a, b, c, d = (a * x + b * z) % m, (a * y + b * w) % m, (c * x + d * z) % m, (c * y + d * w) % m
        x, y, z, w = (x * x + y * z) % m, (x * y + y * w) % m, (z * x + w * z) % m, (z * y + w * w) % m
        e >>= 1
    return (c * params.trace + d) % m


def term_mod_iterative(k: int, modulus: int, params: LucasParams = LucasParams()) -> int:
    """u_k mod |modulus| by running the recurrence k times."""
    m = abs(modulus)
    prev, cur = 1 % m, params.trace % m
    if k == 0:
        return prev
    for _ in range(k - 1):
        prev, cur = cur, (params.trace * cur - params.norm * prev) % m
    return cur
