"""Brute-force residue counts V_p(f(x)) and V_p(f(x) + c/x).

V_p counts the distinct residues r in Z_p (zero included) taken by the
function as x runs over its domain: Z_p for a polynomial, Z_p* once a
nonzero c/x term is present.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .modular_core import PolyZp, PrimeField, Rational

_scratch = threading.local()


@dataclass(frozen=True)
class LaurentPoly:
    """f(x) + c/x over Z_p; c == 0 means a plain polynomial."""

    poly: PolyZp
    c: int = 0

    @classmethod
    def from_coeffs(
        cls, coeffs: Sequence[Rational], fld: PrimeField, c: Rational = 0
    ) -> "LaurentPoly":
        return cls(PolyZp.from_coeffs(coeffs, fld), fld.reduce(c))

    @property
    def p(self) -> int:
        return self.poly.p

    def domain(self) -> np.ndarray:
        start = 1 if self.c else 0
        return np.arange(start, self.p, dtype=np.int64)

    def values(self, fld: PrimeField) -> np.ndarray:
        """f(x) (+ c/x) mod p for every x in the domain, in order."""
        xs = self.domain()
        vals = self.poly.evaluate(xs)
        if self.c:
            vals = (vals + self.c * fld.inverses[xs]) % fld.p
        return vals


def laurent(coeffs: Sequence[Rational], fld: PrimeField, c: Rational = 0) -> LaurentPoly:
    return LaurentPoly.from_coeffs(coeffs, fld, c)


def _marks(p: int) -> np.ndarray:
    buf = getattr(_scratch, "buf", None)
    if buf is None or buf.size < p:
        buf = np.zeros(p, dtype=bool)
        _scratch.buf = buf
    return buf


def residue_count(f: LaurentPoly, fld: PrimeField) -> int:
    """V_p(f): the number of distinct values of f mod p over its domain."""
    if f.p != fld.p:
        raise ValueError(f"polynomial lives mod {f.p}, field is mod {fld.p}")
    vals = f.values(fld)
    marks = _marks(fld.p)
    marks[vals] = True
    count = int(np.count_nonzero(marks[: fld.p]))
    marks[vals] = False
    return count


def residue_profile(f: LaurentPoly, fld: PrimeField) -> dict[int, int]:
    """Fiber sizes {r: #x with f(x) = r} for every attained residue r."""
    vals = f.values(fld)
    counts = np.bincount(vals, minlength=fld.p)
    hit = np.flatnonzero(counts)
    return {int(r): int(counts[r]) for r in hit}

