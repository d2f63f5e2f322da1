import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from residue_spectra.errors import (
    BadRational,
    NotOneModThree,
    NotPrime,
    OutOfRange,
    ZeroInverse,
    ZeroPolynomial,
)
from residue_spectra.modular_core import (
    CubicBranch,
    PolyZp,
    PrimeField,
    binom_mod,
    count_roots,
    cubic_class,
    inv_mod,
    is_prime,
    legendre,
    legendre_euler,
    pow_mod,
    primes_between,
)
from residue_spectra.representations import decompose

from oracles import legendre_enum

SMALL_PRIMES = primes_between(5, 300)


def test_pow_mod_examples():
    assert pow_mod(2, 0, PrimeField(7)) == 1
    assert pow_mod(0, 0, PrimeField(7)) == 1
    assert pow_mod(3, 6, PrimeField(7)) == 1
    assert pow_mod(2, 5, PrimeField(11)) == 10


def test_inv_mod_examples():
    f = PrimeField(13)
    assert inv_mod(1, f) == 1
    assert inv_mod(2, f) == 7
    with pytest.raises(ZeroInverse):
        inv_mod(0, f)
    with pytest.raises(ZeroInverse):
        inv_mod(26, f)


def test_legendre_examples():
    assert legendre(1, PrimeField(101)) == 1
    assert legendre(11, PrimeField(11)) == 0
    assert legendre(3, PrimeField(11)) == 1


def test_legendre_rational():
    f = PrimeField(11)
    # 1/3 = 4 mod 11, a square
    assert legendre(Fraction(1, 3), f) == legendre(4, f) == 1
    assert legendre((2, 3), f) == legendre(2 * 4, f)
    with pytest.raises(BadRational):
        legendre(Fraction(1, 11), f)


def test_legendre_matches_enumeration():
    for p in (5, 7, 11, 13, 29):
        f = PrimeField(p)
        assert [legendre(a, f) for a in range(-p, 2 * p)] == [legendre_enum(a, p) for a in range(-p, 2 * p)]


def test_legendre_reciprocity_vs_euler_random():
    rng = random.Random(20261014)
    pool = primes_between(3, 10**5)
    for _ in range(1000):
        p = rng.choice(pool)
        a = rng.randrange(-10**9, 10**9)
        f = PrimeField(p)
        assert legendre(a, f) == legendre_euler(a, f)


@settings(max_examples=200)
@given(st.sampled_from(SMALL_PRIMES), st.integers(1, 10**6), st.integers(1, 10**6))
def test_legendre_multiplicative(p, a, b):
    f = PrimeField(p)
    if (a * b) % p:
        assert legendre(a * b, f) == legendre(a, f) * legendre(b, f)


@pytest.mark.parametrize("p", [5, 7, 13, 101])
def test_complete_shift_sum_vanishes(p):
    f = PrimeField(p)
    for m in range(p):
        assert sum(legendre(x + m, f) for x in range(p)) == 0


def test_chi_table_matches_legendre():
    f = PrimeField(97)
    assert [int(v) for v in f.chi] == [legendre(a, f) for a in range(97)]
    assert f.qr_table[0]
    assert sum(f.qr_table) == (97 + 1) // 2


def test_inverse_table():
    f = PrimeField(101)
    inv = f.inverses
    assert inv[0] == 0
    assert all(x * int(inv[x]) % 101 == 1 for x in range(1, 101))


def test_prime_field_rejects_composites():
    for n in (1, 2, 4, 9, 561, 2**32 + 1):
        with pytest.raises(NotPrime):
            PrimeField(n)


def test_is_prime_against_trial_division():
    def trial(n):
        return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))

    assert [n for n in range(3000) if is_prime(n)] == [n for n in range(3000) if trial(n)]
    # strong pseudoprimes to several small bases
    for n in (3215031751, 2152302898747, 3474749660383, 341550071728321, 3825123056546413051):
        assert not is_prime(n)
    assert is_prime(2**61 - 1)
    assert is_prime(18446744073709551557)  # largest 64-bit prime


def test_cubic_class_examples():
    f13 = PrimeField(13)
    assert cubic_class(8, f13, 1, 2) is CubicBranch.UNITY
    # 2^4 = 3 mod 13 and (-1 + 1*7)*7 = 42 = 3, so 2 sits on the plus branch
    assert cubic_class(2, f13, 1, 2) is CubicBranch.PLUS
    f7 = PrimeField(7)
    d = decompose(f7)
    branches = [cubic_class(a, f7, d.A, d.B) for a in range(1, 7)]
    assert set(branches) == set(CubicBranch)
    with pytest.raises(NotOneModThree):
        cubic_class(2, PrimeField(11), 1, 1)


@pytest.mark.parametrize("p", [p for p in SMALL_PRIMES if p % 3 == 1])
def test_cubic_class_unity_iff_three_cube_roots(p):
    f = PrimeField(p)
    d = decompose(f)
    for a in range(1, min(p, 40)):
        roots = count_roots(PolyZp.from_coeffs([-a, 0, 0, 1], f), f)
        assert (cubic_class(a, f, d.A, d.B) is CubicBranch.UNITY) == (roots == 3)


def test_count_roots_examples():
    f = PrimeField(7)
    assert count_roots(PolyZp.from_coeffs([-1, 0, 1], f), f) == 2
    assert count_roots(PolyZp.from_coeffs([1, 0, 1], f), f) == 0
    assert count_roots(PolyZp.from_coeffs([-1, 0, 0, 1], f), f) == 3
    with pytest.raises(ZeroPolynomial):
        count_roots(PolyZp.from_coeffs([7, 14], f), f)


@settings(max_examples=100)
@given(st.sampled_from(SMALL_PRIMES), st.lists(st.integers(-50, 50), min_size=1, max_size=6))
def test_count_roots_at_most_degree(p, coeffs):
    f = PrimeField(p)
    poly = PolyZp.from_coeffs(coeffs, f)
    if not poly.is_zero():
        assert count_roots(poly, f) <= max(poly.degree, 0)


def test_poly_trims_and_reduces():
    f = PrimeField(5)
    poly = PolyZp.from_coeffs([-1, 6, 5, 10], f)
    assert poly.coeffs == (4, 1)
    assert poly.degree == 1


def test_binom_mod_examples():
    f = PrimeField(7)
    assert binom_mod(5, 0, f) == 1
    assert binom_mod(3, 1, f) == 3
    assert binom_mod(4, 2, f) == 6
    with pytest.raises(OutOfRange):
        binom_mod(7, 2, f)


@pytest.mark.parametrize("p", [13, 101, 65537, 1000003])
def test_binom_mod_against_math_comb(p):
    f = PrimeField(p)
    rng = random.Random(p)
    for _ in range(20):
        n = rng.randrange(p)
        k = rng.randrange(n + 1) if n < 5000 else rng.randrange(2000)
        assert binom_mod(n, k, f) == math.comb(n, k) % p
