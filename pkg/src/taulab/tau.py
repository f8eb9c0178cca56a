"""Exact values of tau(n), the coefficients of X * prod_{n>=1} (1 - X^n)^24.

The table is built from Jacobi's identity for the cube of the Euler product,

    prod_{n>=1} (1 - X^n)^3 = sum_{k>=0} (-1)^k (2k + 1) X^{k(k+1)/2},

which has O(sqrt(N)) nonzero terms below degree N. Three squarings give the
24th power; each squaring is one big-integer multiplication (Kronecker
substitution, GMP underneath). ``naive_tau_series`` multiplies the factors
out directly and is kept as the small-degree cross-check.

The second, independent route is multiplicative: tau(p) read from the table,
tau(p^r) from the Hecke recurrence, tau(n) as the product over prime powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import gmpy2

from .errors import CacheFormatError, OutOfRangeError, ResourceLimitError
from .factor import factor, primes_up_to
from .report import Report

CACHE_MAGIC = "TAUTABLE v1"


@dataclass(frozen=True)
class TauTable:
    """``values[n - 1] == tau(n)`` for ``1 <= n <= max_n``; use ``table[n]``."""

    max_n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.max_n:
            raise ValueError(f"expected {self.max_n} values, got {len(self.values)}")

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.max_n:
            raise OutOfRangeError(f"tau({n}) is outside the table range 1..{self.max_n}")
        return self.values[n - 1]

    def __len__(self) -> int:
        return self.max_n


def euler_cube(degree: int) -> list[int]:
    """Coefficients of prod (1 - X^n)^3 through ``degree``."""
    out = [0] * (degree + 1)
    k = 0
    while (t := k * (k + 1) // 2) <= degree:
        out[t] = -(2 * k + 1) if k & 1 else 2 * k + 1
        k += 1
    return out


def _max_bits(coeffs: Sequence[int]) -> int:
    return max(abs(c) for c in coeffs).bit_length()


def _pack(coeffs: Sequence[int], width: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(width, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(width, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(value: int, count: int, width: int) -> list[int]:
    # Bias every slot by half its range so no slot borrows from its neighbour.
    half = 1 << (8 * width - 1)
    bias = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * count, "little")
    mask = (1 << (8 * width * count)) - 1
    buf = ((value + bias) & mask).to_bytes(count * width, "little")
    return [int.from_bytes(buf[i * width : (i + 1) * width], "little") - half for i in range(count)]


def square_truncated(coeffs: Sequence[int], degree: int) -> list[int]:
    """Coefficients of ``f(X)^2`` through ``degree``, exact."""
    length = min(len(coeffs), degree + 1)
    coeffs = coeffs[:length]
    # |coefficient of f^2| <= length * max|f|^2, plus a sign bit.
    bits = 2 * _max_bits(coeffs) + length.bit_length() + 1
    width = (bits + 8) // 8
    packed = gmpy2.mpz(_pack(coeffs, width))
    return _unpack(int(packed * packed), degree + 1, width)


def build_tau_table(max_n: int) -> TauTable:
    if max_n < 1:
        raise ValueError("max_n must be positive")
    degree = max_n - 1
    try:
        series = euler_cube(degree)
        for _ in range(3):
            series = square_truncated(series, degree)
    except MemoryError as exc:
        raise ResourceLimitError(f"cannot allocate the degree-{degree} series") from exc
    return TauTable(max_n, tuple(series))


def naive_tau_series(max_n: int) -> list[int]:
    """tau(1..max_n) by multiplying out (1 - X^n) twenty-four times per n."""
    degree = max_n - 1
    c = [0] * (degree + 1)
    c[0] = 1
    for n in range(1, degree + 1):
        for _ in range(24):
            for k in range(degree, n - 1, -1):
                c[k] -= c[k - n]
    return c


def tau_prime_power(tau_p: int, p: int, r: int) -> int:
    """tau(p^r) from tau(p) via tau(p^{r+2}) = tau(p) tau(p^{r+1}) - p^11 tau(p^r)."""
    if r < 0:
        raise ValueError("r must be non-negative")
    p11 = p**11
    prev, cur = 1, tau_p
    if r == 0:
        return prev
    for _ in range(r - 1):
        prev, cur = cur, tau_p * cur - p11 * prev
    return cur


def tau_from_factors(factors: Iterable[tuple[int, int]], table: TauTable) -> int:
    out = 1
    for p, e in factors:
        if p > table.max_n:
            raise OutOfRangeError(f"prime {p} exceeds the table range {table.max_n}")
        out *= tau_prime_power(table[p], p, e)
    return out


def tau_at(n: int, table: TauTable) -> int:
    """tau(n) assembled multiplicatively; only the primes of n need be in range."""
    if n < 1:
        raise ValueError("n must be positive")
    f = factor(n)
    if not f.complete:
        raise OutOfRangeError(f"could not factor {n}")
    return tau_from_factors(f.factors, table)


def _coprime_pairs(limit: int):
    for a in range(2, math.isqrt(limit) + 1):
        for b in range(a + 1, limit // a + 1):
            if math.gcd(a, b) == 1:
                yield a, b


def verify_table(table: TauTable) -> Report:
    """Exhaustively check normalisation, multiplicativity, Hecke and Deligne."""
    N = table.max_n
    v = table.values
    rows = []
    counts = dict.fromkeys(("initial", "multiplicative", "hecke", "deligne", "square_nonzero"), 0)

    def violation(check, a, b, n):
        rows.append({"check": check, "a": a, "b": b, "n": n})

    for n, expected in ((1, 1), (2, -24)):
        if n <= N:
            counts["initial"] += 1
            if v[n - 1] != expected:
                violation("initial", n, None, n)

    for a, b in _coprime_pairs(N):
        counts["multiplicative"] += 1
        if v[a * b - 1] != v[a - 1] * v[b - 1]:
            violation("multiplicative", a, b, a * b)

    for p in primes_up_to(N):
        tp = v[p - 1]
        p11 = p**11
        counts["deligne"] += 1
        if tp * tp > 4 * p11:
            violation("deligne", p, None, p)
        if p * p <= N:
            counts["square_nonzero"] += 1
            if tp != 0 and v[p * p - 1] == 0:
                violation("square_nonzero", p, 2, p * p)
        r, lo, mid = 0, 1, p
        while mid * p <= N:
            counts["hecke"] += 1
            hi = mid * p
            if v[hi - 1] != v[mid - 1] * tp - p11 * v[lo - 1]:
                violation("hecke", p, r, hi)
            r, lo, mid = r + 1, mid, hi

    summary = {"max_n": N, "violations": len(rows)}
    summary.update({f"checked_{k}": c for k, c in counts.items()})
    return Report("verify_table", {"max_n": N}, rows, summary)


def save_table(table: TauTable, path: str | Path) -> None:
    lines = [f"{CACHE_MAGIC} max={table.max_n}"]
    lines.extend(f"{n}\t{t}" for n, t in enumerate(table.values, start=1))
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii", newline="\n")


def load_table(path: str | Path) -> TauTable:
    text = Path(path).read_text(encoding="ascii")
    if text.endswith("\n"):
        text = text[:-1]
    lines = text.split("\n")
    header = lines[0]
    prefix = f"{CACHE_MAGIC} max="
    if not header.startswith(prefix) or not header[len(prefix) :].isdigit():
        raise CacheFormatError(f"bad header {header!r}")
    max_n = int(header[len(prefix) :])
    if max_n < 1 or len(lines) - 1 != max_n:
        raise CacheFormatError(f"header says {max_n} entries, file has {len(lines) - 1}")
    values = []
    for expected, line in enumerate(lines[1:], start=1):
        idx, sep, val = line.partition("\t")
        if not sep or idx != str(expected):
            raise CacheFormatError(f"line {expected + 1}: expected index {expected}, got {line[:40]!r}")
        try:
            values.append(int(val))
        except ValueError:
            raise CacheFormatError(f"line {expected + 1}: bad value {val[:40]!r}") from None
    if values[0] != 1 or (max_n >= 2 and values[1] != -24):
        raise CacheFormatError("cache fails tau(1) = 1, tau(2) = -24")
    return TauTable(max_n, tuple(values))
