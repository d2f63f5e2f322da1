"""Exact arithmetic in Z_p.

Everything here works on plain Python ints, except the per-prime lookup
tables (quadratic character, inverses) which are numpy arrays so that the
O(p) sweeps in the other modules can run vectorized.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import (
    BadRational,
    NotOneModThree,
    NotPrime,
    OutOfRange,
    ZeroInverse,
    ZeroPolynomial,
)

Rational = Union[int, Fraction]

# qr/inverse tables are int64 sweeps; products of two residues must fit.
TABLE_LIMIT = 2**31
# Above this the binomial is a running product of k terms, no factorial table.
FACTORIAL_TABLE_LIMIT = 2**16

# Deterministic for n < 3.3e24, which covers the whole 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_between(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi] by sieve, each confirmed by `is_prime`."""
    if hi < 2 or hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(hi) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    out = [int(q) for q in np.flatnonzero(sieve) if q >= lo]
    assert all(is_prime(q) for q in out)
    return out


def iter_primes(lo: int, hi: int) -> Iterator[int]:
    yield from primes_between(lo, hi)


@dataclass(frozen=True)
class PrimeField:
    """An odd prime p together with lazily built lookup tables."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 3 or not is_prime(self.p):
            raise NotPrime(f"{self.p!r} is not an odd prime")

    def reduce(self, a: Rational) -> int:
        """Map an integer or a rational p-integer to its residue in [0, p-1]."""
        return reduce_mod(a, self.p)

    @cached_property
    def chi(self) -> np.ndarray:
        """chi[r] = (r/p) for r in Z_p, as int8."""
        self._check_table_size()
        p = self.p
        x = np.arange(1, (p + 1) // 2, dtype=np.int64)
        table = np.full(p, -1, dtype=np.int8)
        table[x * x % p] = 1
        table[0] = 0
        table.setflags(write=False)
        return table

    @cached_property
    def qr_table(self) -> np.ndarray:
        """qr_table[r] is True iff r is a square mod p (0 included)."""
        t = self.chi >= 0
        t.setflags(write=False)
        return t

    @cached_property
    def inverses(self) -> np.ndarray:
        """inverses[x] = 1/x mod p for x >= 1; inverses[0] = 0."""
        self._check_table_size()
        x = np.arange(self.p, dtype=np.int64)
        inv = pow_mod_array(x, self.p - 2, self.p)
        inv.setflags(write=False)
        return inv

    @cached_property
    def _factorials(self) -> tuple[list[int], list[int]]:
        p = self.p
        fact = [1] * p
        for i in range(1, p):
            fact[i] = fact[i - 1] * i % p
        inv_fact = [1] * p
        inv_fact[p - 1] = pow(fact[p - 1], p - 2, p)
        for i in range(p - 1, 0, -1):
            inv_fact[i - 1] = inv_fact[i] * i % p
        return fact, inv_fact

    def _check_table_size(self):
        if self.p >= TABLE_LIMIT:
            raise OutOfRange(f"lookup tables need p < 2^31, got {self.p}")


def reduce_mod(a: Rational, p: int) -> int:
    if isinstance(a, Fraction):
        if a.denominator % p == 0:
            raise BadRational(f"{a} is not a {p}-integer")
        return a.numerator * pow(a.denominator, p - 2, p) % p
    if isinstance(a, tuple):
        return reduce_mod(Fraction(*a), p)
    return int(a) % p


def pow_mod(base: int, exp: int, fld: PrimeField) -> int:
    if exp < 0:
        raise ValueError("exponent must be nonnegative")
    return pow(base % fld.p, exp, fld.p)


def pow_mod_array(base: np.ndarray, exp: int, p: int) -> np.ndarray:
    """Elementwise base**exp mod p for an int64 array of residues (p < 2^31)."""
    result = np.ones_like(base, dtype=np.int64)
    b = np.asarray(base, dtype=np.int64) % p
    while exp:
        if exp & 1:
            result = result * b % p
        b = b * b % p
        exp >>= 1
    return result


def inv_mod(a: Rational, fld: PrimeField) -> int:
    r = fld.reduce(a)
    if r == 0:
        raise ZeroInverse(f"0 has no inverse mod {fld.p}")
    return pow(r, fld.p - 2, fld.p)


def legendre(a: Rational, fld: PrimeField) -> int:
    """(a/p) by the binary reciprocity algorithm."""
    n = fld.p
    a = fld.reduce(a)
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def legendre_euler(a: Rational, fld: PrimeField) -> int:
    """(a/p) via Euler's criterion; kept as an independent oracle."""
    r = pow(fld.reduce(a), (fld.p - 1) // 2, fld.p)
    return -1 if r == fld.p - 1 else r


def p_over_3(p: int) -> int:
    """The symbol (p/3)."""
    return (0, 1, -1)[p % 3]


class CubicBranch(enum.Enum):
    UNITY = "unity"
    PLUS = "plus"
    MINUS = "minus"


def cubic_class(a: Rational, fld: PrimeField, A: int, B: int) -> CubicBranch:
    """Which cube root of unity a^((p-1)/3) is, for p = A^2 + 3B^2.

    PLUS means a^((p-1)/3) = (-1 + A/B)/2 and MINUS means (-1 - A/B)/2.
    """
    p = fld.p
    if p % 3 != 1:
        raise NotOneModThree(f"p = {p} is not 1 mod 3")
    r = fld.reduce(a)
    if r == 0:
        raise ZeroInverse(f"{a} vanishes mod {p}")
    w = pow(r, (p - 1) // 3, p)
    half = inv_mod(2, fld)
    ab = A * inv_mod(B, fld)
    if w == 1:
        return CubicBranch.UNITY
    if w == (-1 + ab) * half % p:
        return CubicBranch.PLUS
    if w == (-1 - ab) * half % p:
        return CubicBranch.MINUS
    raise ArithmeticError(f"({A}, {B}) is not a decomposition of {p}")


@dataclass(frozen=True)
class PolyZp:
    """Polynomial over Z_p, coefficients lowest degree first, trimmed."""

    coeffs: tuple[int, ...]
    p: int

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Rational], fld: PrimeField) -> "PolyZp":
        reduced = [fld.reduce(c) for c in coeffs]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        return cls(tuple(reduced), fld.p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        """Horner evaluation mod p over an int64 array of residues."""
        p = self.p
        acc = np.zeros_like(xs, dtype=np.int64)
        for c in reversed(self.coeffs):
            acc = (acc * xs + c) % p
        return acc

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc


def count_roots(f: PolyZp, fld: PrimeField) -> int:
    """N_p(f): number of x in Z_p with f(x) = 0, by a full sweep."""
    if f.is_zero():
        raise ZeroPolynomial("the zero polynomial has p roots")
    xs = np.arange(fld.p, dtype=np.int64)
    return int(np.count_nonzero(f.evaluate(xs) == 0))


def binom_mod(n: int, k: int, fld: PrimeField) -> int:
    p = fld.p
    if n < 0 or k < 0:
        raise OutOfRange("binomial arguments must be nonnegative")
    if n >= p:
        raise OutOfRange(f"n = {n} >= p = {p}")
    if k > n:
        return 0
    if p < FACTORIAL_TABLE_LIMIT:
        fact, inv_fact = fld._factorials
        return fact[n] * inv_fact[k] % p * inv_fact[n - k] % p
    k = min(k, n - k)
    num = den = 1
    for i in range(k):
        num = num * (n - i) % p
        den = den * (i + 1) % p
    return num * pow(den, p - 2, p) % p
