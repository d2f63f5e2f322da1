import pytest

from residue_spectra import char_sums
from residue_spectra.char_sums import (
    cubic_shift_sum,
    curve_char_sum,
    curve_point_count,
    delta_k,
    delta_mod40,
    epsilon_p,
    jacobsthal_cubic_sum,
    record_curves,
)
from residue_spectra.errors import WrongResidueClass, ZeroParameter
from residue_spectra.eta_series import EtaCache
from residue_spectra.modular_core import PrimeField, legendre, p_over_3, primes_between
from residue_spectra.representations import decompose

from oracles import legendre_enum, points_enum

PRIMES = primes_between(5, 400)


def test_jacobsthal_examples():
    assert jacobsthal_cubic_sum(1, PrimeField(5)) == -1
    # A = -2, 1 is a cube: -1 - 2A
    assert jacobsthal_cubic_sum(1, PrimeField(7)) == 3
    # p = 13, (A, B) = (1, 2), 2 on the plus branch: -1 + A + 3B
    assert jacobsthal_cubic_sum(2, PrimeField(13)) == 6
    with pytest.raises(ZeroParameter):
        jacobsthal_cubic_sum(13, PrimeField(13))


@pytest.mark.parametrize("p", [p for p in PRIMES if p % 3 == 1][:20])
def test_jacobsthal_for_cube_8a(p):
    f = PrimeField(p)
    d = decompose(f)
    for a in (1, 8, 27):
        assert jacobsthal_cubic_sum(8 * a, f) == -1 - 2 * d.A


@pytest.mark.parametrize("p", [p for p in PRIMES if p % 3 == 2])
def test_jacobsthal_is_minus_one_for_p_2_mod_3(p):
    f = PrimeField(p)
    for m in range(1, 10):
        if m % p:
            assert jacobsthal_cubic_sum(m, f) == legendre(m, f) * cubic_shift_sum(m, f) == -1


@pytest.mark.parametrize("p", [p for p in PRIMES if p % 3 == 1])
def test_jacobsthal_takes_three_branch_values(p):
    f = PrimeField(p)
    d = decompose(f)
    allowed = {-1 - 2 * d.A, -1 + d.A + 3 * d.B, -1 + d.A - 3 * d.B}
    for m in range(1, 13):
        if m % p:
            assert jacobsthal_cubic_sum(m, f) in allowed


def test_curve_example_enumerated():
    cc = curve_point_count(1, 1, PrimeField(5))
    assert cc.count == points_enum(1, 1, 5) == 9
    assert not cc.singular


@pytest.mark.parametrize("p", [5, 7, 11, 13, 17])
def test_curve_counts_match_point_enumeration(p):
    f = PrimeField(p)
    for m in range(p):
        for n in range(0, p, 2):
            assert curve_point_count(m, n, f).count == points_enum(m, n, p)


def test_singular_flag():
    f = PrimeField(7)
    assert curve_point_count(0, 0, f).singular
    assert curve_point_count(-3, 2, f).singular  # 4(-27) + 27*4 = 0
    assert not curve_point_count(1, 1, f).singular


@pytest.mark.parametrize("p", [p for p in PRIMES if p % 3 == 2])
def test_m_zero_curves_have_p_plus_one_points(p):
    f = PrimeField(p)
    for n in (1, 2, 5):
        assert curve_point_count(0, n, f).count == p + 1


def test_curve_minus3_minus322_against_a15():
    p = 11
    cache = EtaCache(p)
    cc = curve_point_count(-3, -322, PrimeField(p))
    assert cc.count == p + 1 - p_over_3(p) * cache.coeff(15, p) == 8
    cache = EtaCache(400)
    for p in PRIMES:
        if p > 5:
            assert curve_char_sum(-3, -322, PrimeField(p)) == -p_over_3(p) * cache.coeff(15, p)


def test_a14_from_curve_sum():
    # level-14 coefficients from the curve y^2 = x^3 - 75x - 506
    cache = EtaCache(400)
    for p in PRIMES:
        if p != 7:
            f = PrimeField(p)
            assert cache.coeff(14, p) == -legendre(-3, f) * curve_char_sum(-75, -506, f)


@pytest.mark.parametrize("p", PRIMES[:30])
def test_hasse_and_twist_invariance(p):
    f = PrimeField(p)
    for m, n in [(1, 1), (2, 3), (-3, 5), (7, -2)]:
        base = curve_point_count(m, n, f)
        if not base.singular:
            assert base.within_hasse()
        for u in (2, 3, 5):
            if u % p:
                assert curve_point_count(m * u**4, n * u**6, f).count == base.count


@pytest.mark.parametrize("p", PRIMES[:40])
def test_point_count_k_substitution_identity(p):
    f = PrimeField(p)
    for k in range(1, 13):
        if k % p == 0:
            continue
        chi = legendre(k, f)
        lhs = curve_point_count(-3 * k * k, k**3 * (27 * k + 2), f).count
        assert lhs == (1 - chi) * (p + 1) + chi * curve_point_count(-3, 27 * k + 2, f).count


def test_epsilon_example():
    # roots of x^3 - 3x + 3 mod 5 are 2 and 4; (12/5) = -1, (24/5) = 1
    assert epsilon_p(1, PrimeField(5)) == 1
    with pytest.raises(ZeroParameter):
        epsilon_p(0, PrimeField(5))


def test_epsilon_t36_reduces_to_x3_minus_3x_plus_18():
    from residue_spectra.modular_core import PolyZp

    for p in primes_between(7, 300):
        f = PrimeField(p)
        direct = char_sums.nonresidue_root_count(PolyZp.from_coeffs([18, -3, 0, 1], f), f)
        assert epsilon_p(36, f) == direct


def test_delta_k_examples():
    # x^3 + 4x + 8 mod 11 has the single root 4, a square
    assert delta_k(1, PrimeField(11)) == 0
    with pytest.raises(ZeroParameter):
        delta_k(11, PrimeField(11))


def test_delta_k_is_epsilon_at_minus_t_over_3():
    from fractions import Fraction

    for p in primes_between(5, 300):
        f = PrimeField(p)
        for t in range(1, 13):
            if t % p:
                assert delta_k(Fraction(-t, 3), f) == epsilon_p(t, f)


def test_epsilon_by_enumeration():
    for p in (5, 7, 11, 13):
        for t in range(1, p):
            want = sum(1 for x in range(1, p)
                       if (x**3 - 3 * t * x + 3 * t * t) % p == 0 and legendre_enum(6 * x, p) == -1)
            assert epsilon_p(t, PrimeField(p)) == want


def test_delta_mod40_table():
    assert delta_mod40(7) == 0
    assert delta_mod40(3) == 1
    assert delta_mod40(11) == 2
    assert delta_mod40(19) == 2
    assert delta_mod40(23) == 0
    assert delta_mod40(31) == 1
    with pytest.raises(WrongResidueClass):
        delta_mod40(13)


def test_record_curves_collects():
    f = PrimeField(7)
    with record_curves() as log:
        curve_point_count(1, 1, f)
        curve_point_count(2, 1, f)
    curve_point_count(3, 1, f)
    assert [(c.m, c.n) for c in log] == [(1, 1), (2, 1)]
