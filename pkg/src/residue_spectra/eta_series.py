"""q-expansions of the eta products q * prod (1 - q^{sk})^e.

Each factor prod_k (1 - q^{sk}) is expanded sparsely by the pentagonal
number theorem; the dense accumulator is multiplied by those sparse series
and the leading q is applied as a final index shift.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .errors import CoefficientOverflow, CutoffExceeded

_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class QSeries:
    coeffs: np.ndarray  # coeffs[n] is the coefficient of q^n

    @property
    def cutoff(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return int(self.coeffs[n])

    def nonzero_terms(self) -> list[tuple[int, int]]:
        return [(int(n), int(self.coeffs[n])) for n in np.flatnonzero(self.coeffs)]


@dataclass(frozen=True)
class EtaSpec:
    factors: tuple[tuple[int, int], ...]  # (scale, exponent) pairs
    shift: int = 1


LEVELS: dict[int, EtaSpec] = {
    14: EtaSpec(((1, 1), (2, 1), (7, 1), (14, 1))),
    15: EtaSpec(((1, 1), (3, 1), (5, 1), (15, 1))),
    20: EtaSpec(((2, 2), (10, 2))),
    24: EtaSpec(((2, 1), (4, 1), (6, 1), (12, 1))),
}


def pentagonal_terms(scale: int, n_max: int) -> list[tuple[int, int]]:
    """(exponent, sign) pairs of prod_{k>=1} (1 - q^{scale*k}) up to q^n_max."""
    if scale < 1:
        raise ValueError("scale must be positive")
    terms = [(0, 1)]
    j = 1
    while scale * j * (3 * j - 1) // 2 <= n_max:
        sign = -1 if j % 2 else 1
        terms.append((scale * j * (3 * j - 1) // 2, sign))
        e = scale * j * (3 * j + 1) // 2
        if e <= n_max:
            terms.append((e, sign))
        j += 1
    return sorted(terms)


def euler_series(scale: int, n_max: int) -> QSeries:
    coeffs = np.zeros(n_max + 1, dtype=np.int64)
    for e, sign in pentagonal_terms(scale, n_max):
        coeffs[e] = sign
    return QSeries(coeffs)


def _times_sparse(acc: np.ndarray, terms: list[tuple[int, int]]) -> np.ndarray:
    if int(np.abs(acc).max(initial=0)) * len(terms) > _INT64_MAX:
        raise CoefficientOverflow("eta product coefficient exceeds int64")
    n = len(acc)
    out = np.zeros_like(acc)
    for e, sign in terms:
        if sign > 0:
            out[e:] += acc[: n - e]
        else:
            out[e:] -= acc[: n - e]
    return out


def eta_product(spec: EtaSpec, n_max: int) -> QSeries:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    body_len = n_max + 1 - spec.shift
    acc = np.zeros(body_len, dtype=np.int64)
    acc[0] = 1
    for scale, exponent in spec.factors:
        terms = pentagonal_terms(scale, body_len - 1)
        for _ in range(exponent):
            acc = _times_sparse(acc, terms)
    coeffs = np.zeros(n_max + 1, dtype=np.int64)
    coeffs[spec.shift :] = acc
    coeffs.setflags(write=False)
    return QSeries(coeffs)


class EtaCache:
    """Memoized expansions of the four level-N eta products up to a cutoff."""

    def __init__(self, cutoff: int):
        self.cutoff = cutoff
        self._series: dict[int, QSeries] = {}
        self._lock = threading.Lock()

    def series(self, level: int) -> QSeries:
        if level not in LEVELS:
            raise ValueError(f"unknown level {level}; expected one of {sorted(LEVELS)}")
        s = self._series.get(level)
        if s is None:
            with self._lock:
                s = self._series.get(level)
                if s is None:
                    s = eta_product(LEVELS[level], self.cutoff)
                    self._series[level] = s
        return s

    def warm(self) -> "EtaCache":
        for level in LEVELS:
            self.series(level)
        return self

    def coeff(self, level: int, n: int) -> int:
        if n > self.cutoff:
            raise CutoffExceeded(f"a_{level}({n}) needs cutoff >= {n}, have {self.cutoff}")
        if n < 0:
            raise ValueError("n must be nonnegative")
        return self.series(level)[n]


def a_coeff(level: int, n: int, cache: EtaCache) -> int:
    return cache.coeff(level, n)
