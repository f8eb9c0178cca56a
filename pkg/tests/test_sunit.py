import math
from fractions import Fraction

import pytest
import sympy

from taulab.errors import VanishingTauError
from taulab.factor import primes_up_to
from taulab.sunit import (
    check_p6,
    distinctness_check,
    radical_DEF,
    sunit_witness,
    triple_factorizations,
    triple_P,
    union_primes,
)
from taulab.tau import TauTable


def test_witness_p2(table_1e4):
    w = sunit_witness(2, table_1e4)
    assert (w.u, w.v) == (Fraction(-46, 9), Fraction(-55, 9))
    assert (w.D, w.E, w.F) == (9, -46, -55)
    assert w.e_minus_2f == 64 == 2 * 9 * 2**11 // 576
    assert w.violations() == []


def test_witness_p3(table_1e4):
    w = sunit_witness(3, table_1e4)
    assert (w.tau_p, w.tau_p2, w.tau_p3) == (252, -113643, -73279080)
    assert (w.u, w.v) == (Fraction(-1403, 392), Fraction(-1795, 392))
    assert (w.D, w.E, w.F) == (392, -1403, -1795)
    assert w.e_minus_2f == 2187 == 3**7
    assert w.violations() == []


def test_witness_invariants_up_to_2000(table_1e4):
    for p in primes_up_to(2000):
        w = sunit_witness(p, table_1e4)
        assert w.u - w.v == 1
        # Independent recomputation of D from the raw fractions.
        u = Fraction(2 * (table_1e4[p] ** 2 - p**11), table_1e4[p] ** 2)
        v = Fraction(table_1e4[p] * (table_1e4[p] ** 2 - 2 * p**11), table_1e4[p] ** 3)
        assert (u, v) == (w.u, w.v)
        # D clears both denominators and no proper divisor D/q does.
        assert (w.D * u).denominator == (w.D * v).denominator == 1
        for q in sympy.primefactors(w.D):
            d = w.D // q
            assert (d * u).denominator != 1 or (d * v).denominator != 1
        assert w.violations() == [], (p, w.violations())


def test_vanishing_tau_is_an_error():
    fake = TauTable(5, (1, -24, 252, -1472, 0))
    with pytest.raises(VanishingTauError) as info:
        sunit_witness(5, fake)
    assert info.value.p == 5
    with pytest.raises(VanishingTauError):
        triple_P(5, fake)
    with pytest.raises(VanishingTauError):
        check_p6(5, 0)


@pytest.mark.parametrize("p, tau_p", [(2, -24), (3, 252), (5, 4830)])
def test_check_p6_examples(p, tau_p):
    assert check_p6(p, tau_p)


def test_check_p6_detects_divisibility():
    assert not check_p6(2, 64 * 3)


def test_check_p6_all_primes(table_1e4):
    assert all(check_p6(p, table_1e4[p]) for p in primes_up_to(10**4))


def test_distinctness_small(table_1e4):
    odd = [p for p in primes_up_to(100) if p > 2]
    assert distinctness_check(odd, table_1e4) == []
    assert distinctness_check([3], table_1e4) == []


def test_distinctness_detects_clash():
    # A genuine clash cannot be forged with integer tau values; a repeated prime must clash.
    fake = TauTable(7, (1, -24, 252, -1472, 4830, -6048, -16744))
    assert distinctness_check([5, 5, 7], fake) == [(5, 5)]


def test_distinctness_1e4(table_1e4):
    odd = [p for p in primes_up_to(10**4) if p > 2]
    assert distinctness_check(odd, table_1e4) == []


def sympy_primes(*values):
    out = set()
    for v in values:
        out |= set(sympy.factorint(abs(v)))
    return out


def test_triple_P_examples(table_1e4):
    assert triple_P(2, table_1e4) == (23, True)
    assert triple_P(3, table_1e4) == (359, True)


def test_triple_primes_against_sympy(table_1e4):
    for p in primes_up_to(60):
        w = sunit_witness(p, table_1e4)
        primes, complete = union_primes(triple_factorizations(p, table_1e4))
        assert complete
        assert set(primes) == sympy_primes(w.tau_p, w.tau_p2, w.tau_p3)


def test_tau27_factorization():
    assert sympy.factorint(73279080) == {2: 3, 3: 6, 5: 1, 7: 1, 359: 1}


def test_radical_DEF(table_1e4):
    assert radical_DEF(2, table_1e4) == (7590, True)
    assert 7590 == 2 * 3 * 5 * 11 * 23
    q3 = math.prod(sympy_primes(392, 1403, 1795))
    assert q3 == 2 * 5 * 7 * 23 * 61 * 359 == 35257390
    assert radical_DEF(3, table_1e4) == (q3, True)
