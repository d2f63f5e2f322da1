"""Decompositions p = A^2 + 3B^2 = (L^2 + 27M^2)/4 and diagonal
quaternary representation counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import CoefficientOverflow, WrongResidueClass
from .modular_core import PrimeField, binom_mod, inv_mod

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class Decomposition:
    """p = A^2 + 3B^2, 4p = L^2 + 27M^2 with A = L = 1 (mod 3), B, M > 0."""

    p: int
    A: int
    B: int
    L: int
    M: int

    def is_valid(self) -> bool:
        return (
            self.A * self.A + 3 * self.B * self.B == self.p
            and self.L * self.L + 27 * self.M * self.M == 4 * self.p
            and self.A % 3 == 1
            and self.L % 3 == 1
            and self.B > 0
            and self.M > 0
        )


def _search(n: int, weight: int) -> list[tuple[int, int]]:
    """All (u, v) with u >= 0, v > 0 and u^2 + weight*v^2 = n."""
    out = []
    for v in range(1, math.isqrt(n // weight) + 1):
        rest = n - weight * v * v
        u = math.isqrt(rest)
        if u * u == rest:
            out.append((u, v))
    return out


def _one_mod_three(u: int) -> int:
    if u % 3 == 1:
        return u
    if (-u) % 3 == 1:
        return -u
    raise ArithmeticError(f"{u} is divisible by 3")


def decompose(fld: PrimeField) -> Decomposition:
    p = fld.p
    if p % 3 != 1:
        raise WrongResidueClass(f"p = {p} is not 1 mod 3")
    ab = _search(p, 3)
    lm = _search(4 * p, 27)
    if len(ab) != 1 or len(lm) != 1:
        raise ArithmeticError(f"non-unique decomposition for {p}: {ab}, {lm}")
    (a, b), (l, m) = ab[0], lm[0]
    d = Decomposition(p, _one_mod_three(a), b, _one_mod_three(l), m)
    assert d.is_valid(), d
    return d


def jacobi_predictions(fld: PrimeField) -> tuple[int, int]:
    """binom((p-1)/2, (p-1)/6)/2 and -binom(2(p-1)/3, (p-1)/3), reduced mod p."""
    p = fld.p
    if p % 3 != 1:
        raise WrongResidueClass(f"p = {p} is not 1 mod 3")
    a_pred = binom_mod((p - 1) // 2, (p - 1) // 6, fld) * inv_mod(2, fld) % p
    l_pred = -binom_mod(2 * (p - 1) // 3, (p - 1) // 3, fld) % p
    return a_pred, l_pred


def jacobi_check(fld: PrimeField, d: Decomposition) -> tuple[bool, bool]:
    """Whether A and L agree mod p with the binomial predictions."""
    a_pred, l_pred = jacobi_predictions(fld)
    return d.A % fld.p == a_pred, d.L % fld.p == l_pred


def theta_vector(a: int, n: int) -> np.ndarray:
    """t[j] = #{x in Z : a x^2 = j} for 0 <= j <= n."""
    t = np.zeros(n + 1, dtype=np.int64)
    t[0] = 1
    x = np.arange(1, math.isqrt(n // a) + 1, dtype=np.int64)
    t[a * x * x] = 2
    return t


def triangular_vector(a: int, n: int) -> np.ndarray:
    """t[j] = #{x >= 0 : a x(x+1)/2 = j} for 0 <= j <= n."""
    t = np.zeros(n + 1, dtype=np.int64)
    x = 0
    while a * x * (x + 1) // 2 <= n:
        t[a * x * (x + 1) // 2] += 1
        x += 1
    return t


def _convolve_all(vectors: Sequence[np.ndarray], n: int) -> np.ndarray:
    acc = np.zeros(n + 1, dtype=np.int64)
    acc[0] = 1
    for v in vectors:
        if int(np.abs(acc).sum()) * int(np.abs(v).sum()) > _INT64_MAX:
            raise CoefficientOverflow("representation count exceeds int64")
        acc = np.convolve(acc, v)[: n + 1]
    return acc


def _check_coeffs(coeffs: Sequence[int]) -> tuple[int, ...]:
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) != 4 or min(coeffs) < 1:
        raise ValueError(f"need four positive coefficients, got {coeffs}")
    return coeffs


@lru_cache(maxsize=32)
def _quaternary_table(coeffs: tuple[int, ...], n: int) -> np.ndarray:
    out = _convolve_all([theta_vector(a, n) for a in coeffs], n)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def _triangular_table(coeffs: tuple[int, ...], n: int) -> np.ndarray:
    out = _convolve_all([triangular_vector(a, n) for a in coeffs], n)
    out.setflags(write=False)
    return out


def quaternary_counts(coeffs: Sequence[int], n_max: int) -> np.ndarray:
    """N(a,b,c,d; n) for every 0 <= n <= n_max."""
    return _quaternary_table(_check_coeffs(coeffs), n_max)


def triangular_counts(coeffs: Sequence[int], n_max: int) -> np.ndarray:
    """T(a,b,c,d; n) for every 0 <= n <= n_max."""
    return _triangular_table(_check_coeffs(coeffs), n_max)


def quaternary_count(a: int, b: int, c: int, d: int, n: int) -> int:
    """N(a,b,c,d; n), representations of n by ax^2+by^2+cz^2+dw^2 over Z."""
    if n < 1:
        raise ValueError("n must be positive")
    return int(quaternary_counts((a, b, c, d), n)[n])


def triangular_count(a: int, b: int, c: int, d: int, n: int) -> int:
    """T(a,b,c,d; n), weighted sums of four triangular numbers."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return int(triangular_counts((a, b, c, d), n)[n])
