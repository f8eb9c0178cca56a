"""Desk-scale scans of the divisibility statements about tau.

Every scan returns a ``Report`` whose rows are sorted by prime and depend
only on the parameters and the factoring budget. Rows whose factorizations
ran out of budget are kept, flagged, and counted in ``incomplete_count``;
no summary statistic is computed from them.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from typing import Callable, Iterable

import gmpy2

from .errors import OutOfRangeError
from .factor import DEFAULT_BUDGET, factor, primes_up_to
from .lucas import cyclotomic_value, divisors, lucas_terms, split_AB, term_mod, term_mod_iterative
from .report import Report
from .sunit import (
    def_factorizations,
    distinctness_check,
    sunit_witness,
    triple_factorizations,
    union_primes,
)
from .tau import TauTable, tau_from_factors

THM21_EXPONENT = Fraction(33, 31)
ITERATIVE_CHAIN_LIMIT = 10**7

_worker_table: TauTable | None = None


def _init_worker(table: TauTable) -> None:
    global _worker_table
    _worker_table = table


def _call_row(args):
    fn, p, budget = args
    return fn(p, _worker_table, budget)


def _map_rows(fn: Callable, primes: Iterable[int], table: TauTable, budget: int, jobs: int) -> list:
    primes = list(primes)
    if jobs <= 1 or len(primes) < 2:
        return [fn(p, table, budget) for p in primes]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(table,)) as ex:
        return list(ex.map(_call_row, [(fn, p, budget) for p in primes], chunksize=8))


def _nonvanishing(primes: Iterable[int], table: TauTable) -> tuple[list[int], list[int]]:
    keep, zero = [], []
    for p in primes:
        (zero if table[p] == 0 else keep).append(p)
    return keep, zero


def _check_range(y: int, table: TauTable) -> None:
    if y > table.max_n:
        raise OutOfRangeError(f"bound {y} exceeds the table range {table.max_n}")


def nested_log_reference(p: int) -> float | None:
    """loglog p * logloglog p / loglogloglog p, or None when any inner log is <= 1."""
    l1 = math.log(p)
    if l1 <= 1:
        return None
    l2 = math.log(l1)
    if l2 <= 1:
        return None
    l3 = math.log(l2)
    if l3 <= 1:
        return None
    return l2 * l3 / math.log(l3)


def _thm21_row(p: int, table: TauTable, budget: int, A: float) -> dict:
    primes, complete = union_primes(triple_factorizations(p, table, budget)[:2])
    big = primes[-1] if primes else 1
    threshold = math.log(p) ** A
    return {"p": p, "P": big, "threshold": threshold, "satisfied": big >= threshold, "complete": complete}


def scan_thm21(
    y: int,
    table: TauTable,
    A: float | Fraction = THM21_EXPONENT,
    budget: int = DEFAULT_BUDGET,
    jobs: int = 1,
) -> Report:
    """P(tau(p) tau(p^2)) against (log p)^A for every prime p <= y."""
    _check_range(y, table)
    primes, zero = _nonvanishing(primes_up_to(y), table)
    rows = _map_rows(partial(_thm21_row, A=float(A)), primes, table, budget, jobs)
    done = [r for r in rows if r["complete"]]
    hits = sum(r["satisfied"] for r in done)
    summary = {
        "primes": len(rows),
        "complete_rows": len(done),
        "satisfied": hits,
        "fraction": hits / len(done) if done else None,
        "tau_zero_primes": zero,
    }
    params = {"y": y, "A": str(A), "budget": budget}
    return Report("thm21", params, rows, summary, len(rows) - len(done))


def _thm22_row(p: int, table: TauTable, budget: int) -> dict:
    primes, complete = union_primes(triple_factorizations(p, table, budget))
    return {"p": p, "primes": primes, "complete": complete}


def scan_thm22(x: int, table: TauTable, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> Report:
    """s = omega(prod over odd p <= x^(1/3) of tau(p) tau(p^2) tau(p^3))."""
    if x < 1:
        raise ValueError("x must be positive")
    y = int(gmpy2.iroot(x, 3)[0])
    _check_range(y, table)
    odd = [p for p in primes_up_to(y) if p > 2]
    primes, zero = _nonvanishing(odd, table)
    per_prime = _map_rows(_thm22_row, primes, table, budget, jobs)
    seen: set[int] = set()
    rows = []
    for r in per_prime:
        new = [q for q in r["primes"] if q not in seen]
        seen.update(new)
        rows.append({
            "p": r["p"],
            "omega_triple": len(r["primes"]),
            "new_primes": len(new),
            "s_cumulative": len(seen),
            "complete": r["complete"],
        })
    s = len(seen)
    bound = math.log(x) / (6 * math.log(7))
    incomplete = sum(not r["complete"] for r in rows)
    summary = {
        "x": x,
        "y": y,
        "odd_primes": len(rows),
        "s": s,
        "bound": bound,
        "holds": s >= bound,
        "vacuous": not rows,
        "s_is_lower_bound": incomplete > 0,
        "tau_zero_primes": zero,
    }
    params = {"x": x, "include_p2": False, "budget": budget}
    return Report("thm22", params, rows, summary, incomplete)


def _thm23_row(p: int, table: TauTable, budget: int) -> dict:
    primes, complete = union_primes(triple_factorizations(p, table, budget))
    w = sunit_witness(p, table)
    def_primes, def_complete = union_primes(def_factorizations(w, budget))
    big = primes[-1] if primes else 1
    ell = def_primes[-1] if def_primes else 1
    q_def = math.prod(def_primes)
    ref = nested_log_reference(p)
    return {
        "p": p,
        "triple_P": big,
        "ell": ell,
        "t": len(primes),
        "Q_DEF": q_def,
        "Q_DEF_ge_p": q_def >= p,
        "nested_log_ref": "undefined" if ref is None else ref,
        "triple_complete": complete,
        "def_complete": def_complete,
    }


def scan_thm23(y: int, table: TauTable, budget: int = DEFAULT_BUDGET, jobs: int = 1) -> Report:
    """Per-prime triple_P, ell = P(DEF), t, Q(DEF) and the nested-log reference."""
    _check_range(y, table)
    primes, zero = _nonvanishing(primes_up_to(y), table)
    rows = _map_rows(_thm23_row, primes, table, budget, jobs)
    done = [r for r in rows if r["triple_complete"] and r["def_complete"]]
    summary = {
        "primes": len(rows),
        "complete_rows": len(done),
        "ell_le_triple_P": sum(r["ell"] <= r["triple_P"] for r in done),
        "ell_gt_triple_P": [r["p"] for r in done if r["ell"] > r["triple_P"]],
        "Q_DEF_ge_p": sum(r["Q_DEF_ge_p"] for r in done),
        "nested_log_defined": sum(r["nested_log_ref"] != "undefined" for r in rows),
        "tau_zero_primes": zero,
    }
    params = {"y": y, "budget": budget}
    return Report("thm23", params, rows, summary, len(rows) - len(done))


def count_tau_zero(y: int, table: TauTable) -> int:
    """#{p <= y : tau(p) = 0}."""
    _check_range(y, table)
    return sum(1 for p in primes_up_to(y) if table[p] == 0)


def zeros_report(y: int, table: TauTable) -> Report:
    _check_range(y, table)
    primes = primes_up_to(y)
    rows = [{"p": p} for p in primes if table[p] == 0]
    summary = {"primes_checked": len(primes), "zero_count": len(rows)}
    return Report("zeros", {"y": y}, rows, summary)


def factorial_factors(m: int) -> list[tuple[int, int]]:
    """Prime factorization of m! by Legendre's formula."""
    out = []
    for p in primes_up_to(m):
        e, q = 0, p
        while q <= m:
            e += m // q
            q *= p
        out.append((p, e))
    return out


def tau_factorial(m: int, table: TauTable) -> int:
    """tau(m!); only the primes up to m need to be in the table."""
    if m > table.max_n and m > 1:
        raise OutOfRangeError(f"tau({m}!) needs tau(p) for p <= {m}; table stops at {table.max_n}")
    return tau_from_factors(factorial_factors(m), table)


def _factorial_index(value: int) -> int | None:
    """n >= 1 with n! == value, if any."""
    if value < 1:
        return None
    facts = [1]
    while facts[-1] < value:
        facts.append(facts[-1] * (len(facts) + 1))
    i = bisect_left(facts, value)
    return i + 1 if facts[i] == value else None


def search_factorial(max_m: int, table: TauTable, signed: bool = True) -> list[tuple[int, int]]:
    """All (m, n), m <= max_m, with tau(m!) = n! (signed) or |tau(m!)| = n!."""
    key = "signed_n" if signed else "unsigned_n"
    return [(r["m"], r[key]) for r in _factorial_rows(max_m, table) if r[key] is not None]


def _factorial_rows(max_m: int, table: TauTable) -> list[dict]:
    if max_m < 1:
        raise ValueError("max_m must be positive")
    rows = []
    for m in range(1, max_m + 1):
        t = tau_factorial(m, table)
        signed_n = _factorial_index(t)
        unsigned_n = _factorial_index(abs(t))
        rows.append({
            "m": m,
            "tau_m_factorial": t,
            "signed_n": signed_n,
            "unsigned_n": unsigned_n,
            "n_below_6m": None if unsigned_n is None else unsigned_n < 6 * m,
        })
    return rows


def factorial_report(max_m: int, table: TauTable) -> Report:
    rows = _factorial_rows(max_m, table)
    summary = {
        "signed": [[r["m"], r["signed_n"]] for r in rows if r["signed_n"] is not None],
        "unsigned": [[r["m"], r["unsigned_n"]] for r in rows if r["unsigned_n"] is not None],
    }
    return Report("search_factorial", {"max_m": max_m}, rows, summary)


def check_divisibility_chain(s: int) -> Report:
    """u_r | u_k for all 1 <= r <= s, where k = lcm(2, ..., s + 1) - 1."""
    if s < 2:
        raise ValueError("s must be at least 2")
    k = math.lcm(*range(2, s + 2)) - 1
    terms = lucas_terms(s)
    residue = term_mod_iterative if k <= ITERATIVE_CHAIN_LIMIT else term_mod
    rows = []
    for r in range(1, s + 1):
        rows.append({"r": r, "u_r": terms[r], "divides": residue(k, terms[r]) == 0})
    summary = {"k": k, "all_divide": all(r["divides"] for r in rows)}
    return Report("divisibility_chain", {"s": s}, rows, summary)


def lucas_report(max_r: int, table: TauTable | None = None) -> Report:
    """u_0..u_max_r, cross-checked against tau(2^r) where the table reaches."""
    terms = lucas_terms(max_r)
    rows = []
    for r, u in enumerate(terms):
        row = {"r": r, "u_r": u, "tau_2r": None, "agrees": None}
        if table is not None and 2**r <= table.max_n:
            row["tau_2r"] = table[2**r]
            row["agrees"] = table[2**r] == u
        rows.append(row)
    mismatches = [r["r"] for r in rows if r["agrees"] is False]
    return Report("lucas", {"max_r": max_r}, rows, {"mismatches": mismatches})


def cyclo_report(max_n: int, budget: int) -> Report:
    terms = lucas_terms(max(max_n, 2))
    rows, product_failures = [], []
    for n in range(2, max_n + 1):
        part = split_AB(n, terms, budget)
        prod = 1
        for d in divisors(n):
            if d >= 2:
                prod *= cyclotomic_value(d, terms)
        if prod != part.U_n:
            product_failures.append(n)
        b_ok = all(q % n in (1, n - 1) for q, _ in factor(part.B_n, budget).factors)
        rows.append({
            "n": n,
            "U_n": part.U_n,
            "C_n": part.C_n,
            "A_n": part.A_n,
            "B_n": part.B_n,
            "primitive_primes": list(part.primitive_primes),
            "A_within_6n": part.a_within_6n,
            "B_congruence": b_ok,
            "complete": part.complete,
        })
    summary = {
        "product_failures": product_failures,
        "B_congruence_failures": [r["n"] for r in rows if not r["B_congruence"]],
        "A_within_6n": sum(r["A_within_6n"] for r in rows),
    }
    incomplete = sum(not r["complete"] for r in rows)
    return Report("cyclo", {"max": max_n, "budget": budget}, rows, summary, incomplete)

def sunit_report(bound: int, table: TauTable) -> Report:
    rows = []
    skipped = []
    for p in primes_up_to(bound):
        if table[p] == 0:
            skipped.append(p)
            continue
        w = sunit_witness(p, table)
        row = w.as_row()
        row["violations"] = w.violations()
        rows.append(row)
    odd = [p for p in primes_up_to(bound) if p > 2 and p not in skipped]
    clashes = distinctness_check(odd, table)
    summary = {
        "primes": len(rows),
        "violations": sum(len(r["violations"]) for r in rows),
        "distinctness_clashes": [list(c) for c in clashes],
        "tau_zero_primes": skipped,
    }
    return Report("sunit", {"bound": bound}, rows, summary)

def lucas_suite(bound: int, table: TauTable, budget: int) -> Report:
    """Recurrence vs table, divisibility lattice, cyclotomic product, chain."""
    rows = []
    terms = lucas_terms(120)
    r = 0
    while 2**r <= min(bound, table.max_n):
        if terms[r] != table[2**r]:
            rows.append({"check": "u_r_equals_tau_2r", "detail": f"r={r}"})
        r += 1
    for s in range(121):
        for rr in range(s + 1):
            if (s + 1) % (rr + 1) == 0 and terms[s] % terms[rr]:
                rows.append({"check": "divisibility_lattice", "detail": f"r={rr},s={s}"})
    cyc = cyclo_report(80, budget)
    rows += [{"check": "cyclotomic_product", "detail": f"n={n}"} for n in cyc.summary["product_failures"]]
    rows += [{"check": "B_congruence", "detail": f"n={n}"} for n in cyc.summary["B_congruence_failures"]]
    for s in range(2, 11):
        if not check_divisibility_chain(s).summary["all_divide"]:
            rows.append({"check": "divisibility_chain", "detail": f"s={s}"})
    return Report("verify_lucas", {"bound": bound}, rows, {"violations": len(rows)})
