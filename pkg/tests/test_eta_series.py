from math import gcd

import pytest

from residue_spectra.errors import CutoffExceeded
from residue_spectra.eta_series import LEVELS, EtaCache, a_coeff, eta_product, euler_series
from residue_spectra.modular_core import primes_between

from oracles import naive_eta


def test_euler_series_examples():
    s = euler_series(1, 7)
    assert list(s.coeffs) == [1, -1, -1, 0, 0, 1, 0, 1]
    assert list(euler_series(2, 4).coeffs) == [1, 0, -1, 0, -1]
    assert euler_series(5, 0)[0] == 1


def test_euler_series_vs_naive():
    for scale in (1, 2, 3, 7):
        assert list(euler_series(scale, 300).coeffs) == naive_eta([(scale, 1)], 300, shift=0)


def test_a14_small_values():
    cache = EtaCache(10)
    assert a_coeff(14, 1, cache) == 1
    assert a_coeff(14, 2, cache) == -1
    assert a_coeff(14, 4, cache) == 1


@pytest.mark.parametrize("level", sorted(LEVELS))
def test_sparse_vs_naive_product(level):
    spec = LEVELS[level]
    assert list(eta_product(spec, 200).coeffs) == naive_eta(spec.factors, 200)


def test_cutoff_exceeded():
    cache = EtaCache(20)
    with pytest.raises(CutoffExceeded):
        cache.coeff(14, 21)


@pytest.mark.parametrize("level", sorted(LEVELS))
def test_multiplicative(level):
    n_max = 2000
    a = eta_product(LEVELS[level], n_max).coeffs
    for m in range(2, n_max + 1):
        for n in range(m + 1, n_max // m + 1):
            if gcd(m, n) == 1:
                assert a[m * n] == a[m] * a[n], (level, m, n)


@pytest.mark.parametrize("level", sorted(LEVELS))
def test_hasse_bound_at_good_primes(level):
    a = eta_product(LEVELS[level], 3000).coeffs
    for p in primes_between(2, 3000):
        if level % p:
            assert a[p] ** 2 <= 4 * p


def test_known_a15_relation_from_forms():
    from residue_spectra.representations import quaternary_counts

    a = eta_product(LEVELS[15], 500).coeffs
    N = quaternary_counts((1, 3, 5, 15), 500)
    for p in primes_between(7, 500):
        assert 3 * a[p] == 2 * N[p] - p - 1
