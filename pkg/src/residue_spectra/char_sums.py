"""Character sums over Z_p and elliptic-curve point counts.

All sums are full sweeps through the quadratic-character table of the field.
"""

from __future__ import annotations

import contextlib
import threading
from dataclasses import dataclass

import numpy as np

from .errors import WrongResidueClass, ZeroParameter
from .modular_core import PolyZp, PrimeField, Rational


@dataclass(frozen=True)
class CurveCount:
    """#E_p for y^2 = x^3 + m x + n, projective points included."""

    m: int
    n: int
    p: int
    count: int
    singular: bool

    @property
    def trace(self) -> int:
        return self.p + 1 - self.count

    def within_hasse(self) -> bool:
        # |p + 1 - #E| <= 2 sqrt(p), squared to stay in integers
        return self.trace * self.trace <= 4 * self.p


_recorders: list[list[CurveCount]] = []
_recorder_lock = threading.Lock()


@contextlib.contextmanager
def record_curves():
    """Collect every CurveCount produced while the context is active."""
    log: list[CurveCount] = []
    with _recorder_lock:
        _recorders.append(log)
    try:
        yield log
    finally:
        with _recorder_lock:
            _recorders.remove(log)


def char_sum(values: np.ndarray, fld: PrimeField) -> int:
    """Sum of (v/p) over an array of residues."""
    return int(fld.chi[values].sum(dtype=np.int64))


def _nonzero(m: Rational, fld: PrimeField, name: str) -> int:
    r = fld.reduce(m)
    if r == 0:
        raise ZeroParameter(f"{name} must be nonzero mod {fld.p}")
    return r


def jacobsthal_cubic_sum(m: Rational, fld: PrimeField) -> int:
    """sum_{x=1}^{p-1} (x(x^3 + m) / p)."""
    m = _nonzero(m, fld, "m")
    p = fld.p
    x = np.arange(1, p, dtype=np.int64)
    cube = x * x % p * x % p
    return char_sum(x * ((cube + m) % p) % p, fld)


def cubic_shift_sum(m: Rational, fld: PrimeField) -> int:
    """sum_{x=1}^{p-1} ((x^3 + m) / p)."""
    m = fld.reduce(m)
    p = fld.p
    x = np.arange(1, p, dtype=np.int64)
    return char_sum((x * x % p * x + m) % p, fld)


def curve_char_sum(m: Rational, n: Rational, fld: PrimeField) -> int:
    """sum_{x=0}^{p-1} ((x^3 + m x + n) / p)."""
    f = PolyZp.from_coeffs([n, m, 0, 1], fld)
    return char_sum(f.evaluate(np.arange(fld.p, dtype=np.int64)), fld)


def curve_point_count(m: Rational, n: Rational, fld: PrimeField) -> CurveCount:
    p = fld.p
    mr, nr = fld.reduce(m), fld.reduce(n)
    singular = (4 * mr**3 + 27 * nr**2) % p == 0
    result = CurveCount(mr, nr, p, p + 1 + curve_char_sum(mr, nr, fld), singular)
    if _recorders:
        with _recorder_lock:
            for log in _recorders:
                log.append(result)
    return result


def nonresidue_root_count(f: PolyZp, fld: PrimeField, scale: int = 1) -> int:
    """#{x in Z_p* : f(x) = 0 and (scale*x / p) = -1}, by sweep."""
    x = np.arange(1, fld.p, dtype=np.int64)
    roots = x[f.evaluate(x) == 0]
    return int(np.count_nonzero(fld.chi[scale * roots % fld.p] == -1))


def epsilon_p(t: Rational, fld: PrimeField) -> int:
    """#{x in Z_p* : x^3 - 3tx + 3t^2 = 0, (6x/p) = -1}."""
    t = _nonzero(t, fld, "t")
    return nonresidue_root_count(PolyZp.from_coeffs([3 * t * t, -3 * t, 0, 1], fld), fld, 6)


def delta_k(k: Rational, fld: PrimeField) -> int:
    """#{x in Z_p* : x^3 + 4kx + 8k^2 = 0, (x/p) = -1}."""
    k = _nonzero(k, fld, "k")
    return nonresidue_root_count(PolyZp.from_coeffs([8 * k * k, 4 * k, 0, 1], fld), fld)


_DELTA_MOD40 = {7: 0, 23: 0, 3: 1, 27: 1, 31: 1, 39: 1, 11: 2, 19: 2}


def delta_mod40(p: int) -> int:
    """The p mod 40 table attached to V_p(x^4 - 4x^2 + 4x), p = 3 mod 4."""
    if p % 4 != 3 or p % 40 not in _DELTA_MOD40:
        raise WrongResidueClass(f"no delta(p) entry for p = {p}")
    return _DELTA_MOD40[p % 40]

