"""Per-prime S-unit witnesses built from tau(p), tau(p^2), tau(p^3).

With tau(p^2) = tau(p)^2 - p^11 and tau(p^3) = tau(p) (tau(p)^2 - 2 p^11),

    u = 2 tau(p^2) / tau(p)^2,   v = tau(p^3) / tau(p)^3,   u - v = 1,

and clearing the common denominator D gives coprime integers E = D u,
F = D v with E - F = D. All rationals are ``fractions.Fraction``, so every
identity below is checked exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InternalInconsistencyError, VanishingTauError
from .factor import DEFAULT_BUDGET, Factorization, factor
from .tau import TauTable, tau_prime_power

# Explicit constants standing in for the implied ones in D << p^11 and
# max(|E|, |F|) << p^22.
D_CONSTANT = 4
EF_CONSTANT = 12


@dataclass(frozen=True)
class SUnitWitness:
    p: int
    tau_p: int
    tau_p2: int
    tau_p3: int
    u: Fraction
    v: Fraction
    D: int
    E: int
    F: int

    @property
    def e_minus_2f(self) -> int:
        return self.E - 2 * self.F

    def checks(self) -> dict[str, bool]:
        """Every identity, gcd fact and bound the witness should satisfy."""
        p, D, E, F = self.p, self.D, self.E, self.F
        p11 = p**11
        return {
            "u_minus_v_is_1": self.u - self.v == 1,
            "e_minus_f_is_d": E - F == D,
            "gcd_ef": math.gcd(E, F) == 1,
            "gcd_de": math.gcd(D, E) == 1,
            "gcd_df": math.gcd(D, F) == 1,
            "e_minus_2f_closed_form": self.e_minus_2f * self.tau_p**2 == 2 * D * p11,
            "e_minus_2f_at_least_p": self.e_minus_2f >= p,
            "d_bound": 0 < D <= D_CONSTANT * p11,
            "ef_bound": max(abs(E), abs(F)) <= EF_CONSTANT * p11 * p11,
            "p6_not_dividing_tau_p": check_p6(p, self.tau_p),
        }

    def violations(self) -> list[str]:
        return [name for name, ok in self.checks().items() if not ok]

    def as_row(self) -> dict:
        return {
            "p": self.p,
            "u": str(self.u),
            "v": str(self.v),
            "D": self.D,
            "E": self.E,
            "F": self.F,
            "E_minus_2F": self.e_minus_2f,
        }


def _tau_p(p: int, table: TauTable) -> int:
    tp = table[p]
    if tp == 0:
        raise VanishingTauError(p)
    return tp


def sunit_witness(p: int, table: TauTable) -> SUnitWitness:
    tp = _tau_p(p, table)
    tp2 = tau_prime_power(tp, p, 2)
    tp3 = tau_prime_power(tp, p, 3)
    u = Fraction(2 * tp2, tp * tp)
    v = Fraction(tp3, tp**3)
    D = math.lcm(u.denominator, v.denominator)
    E, F = D * u, D * v
    if E.denominator != 1 or F.denominator != 1:
        raise InternalInconsistencyError(f"D = {D} does not clear u, v at p = {p}")
    return SUnitWitness(p, tp, tp2, tp3, u, v, D, int(E), int(F))


def check_p6(p: int, tau_p: int) -> bool:
    """True iff p^6 does not divide tau(p)."""
    if tau_p == 0:
        raise VanishingTauError(p)
    return tau_p % p**6 != 0


def distinctness_check(primes: Iterable[int], table: TauTable) -> list[tuple[int, int]]:
    """Pairs of primes sharing the same value of 2 tau(p^2) / tau(p)^2."""
    keyed = sorted(
        (Fraction(2 * tau_prime_power(_tau_p(p, table), p, 2), table[p] ** 2), p) for p in primes
    )
    clashes = []
    i = 0
    while i < len(keyed):
        j = i
        while j + 1 < len(keyed) and keyed[j + 1][0] == keyed[i][0]:
            j += 1
        group = [p for _, p in keyed[i : j + 1]]
        clashes.extend((a, b) for k, a in enumerate(group) for b in group[k + 1 :])
        i = j + 1
    return clashes


def union_primes(factorizations: Iterable[Factorization]) -> tuple[list[int], bool]:
    primes: set[int] = set()
    complete = True
    for f in factorizations:
        primes.update(f.primes)
        complete &= f.complete
    return sorted(primes), complete


def triple_factorizations(p: int, table: TauTable, budget: int = DEFAULT_BUDGET) -> list[Factorization]:
    """Factorizations whose union has the primes of tau(p) tau(p^2) tau(p^3).

    tau(p^3) is split as tau(p) * (tau(p)^2 - 2 p^11), so only the second
    factor is new.
    """
    tp = _tau_p(p, table)
    cubic_part = tp * tp - 2 * p**11
    if tau_prime_power(tp, p, 3) != tp * cubic_part:
        raise InternalInconsistencyError(f"tau(p^3) factorization identity fails at p = {p}")
    return [factor(tp, budget), factor(tau_prime_power(tp, p, 2), budget), factor(cubic_part, budget)]


def def_factorizations(w: SUnitWitness, budget: int = DEFAULT_BUDGET) -> list[Factorization]:
    return [factor(w.D, budget), factor(w.E, budget), factor(w.F, budget)]


def triple_P(p: int, table: TauTable, budget: int = DEFAULT_BUDGET) -> tuple[int, bool]:
    """P(tau(p) tau(p^2) tau(p^3)), checked against P(D E F) <= it."""
    primes, complete = union_primes(triple_factorizations(p, table, budget))
    ell, ell_complete = largest_def_prime(sunit_witness(p, table), budget)
    big = primes[-1] if primes else 1
    if complete and ell_complete and ell > big:
        raise InternalInconsistencyError(f"P(DEF) = {ell} exceeds the triple product's {big} at p = {p}")
    return big, complete


def largest_def_prime(w: SUnitWitness, budget: int = DEFAULT_BUDGET) -> tuple[int, bool]:
    primes, complete = union_primes(def_factorizations(w, budget))
    return (primes[-1] if primes else 1), complete


def radical_DEF(p: int, table: TauTable, budget: int = DEFAULT_BUDGET) -> tuple[int, bool]:
    """Q(D E F), the radical of the ABC triple's product."""
    primes, complete = union_primes(def_factorizations(sunit_witness(p, table), budget))
    return math.prod(primes), complete
