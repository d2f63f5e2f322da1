"""Every residue-count identity as an executable predicate over primes.

A predicate takes a prime and its parameters and returns one CheckResult
per identity it covers. The left side always comes from a brute-force sweep
(residue counts, character sums, convolutions, eta expansions) and the right
side from the closed form, so a check can only pass if the two agree. All
comparisons are exact integer equalities; a closed form that does not divide
exactly is carried as a Fraction and therefore fails.
"""

from __future__ import annotations

import contextlib
import contextvars
import json
import os
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from . import char_sums, representations, residue_counts
from .eta_series import EtaCache
from .modular_core import (
    CubicBranch,
    PolyZp,
    PrimeField,
    count_roots,
    cubic_class,
    legendre,
    p_over_3,
    primes_between,
)

Value = Union[int, Fraction, None]

_fault: contextvars.ContextVar[int] = contextvars.ContextVar("fault", default=0)


@contextlib.contextmanager
def inject_fault(delta: int):
    """Add `delta` to the left side of every check made inside the block."""
    token = _fault.set(delta)
    try:
        yield
    finally:
        _fault.reset(token)


@dataclass(frozen=True)
class CheckResult:
    statement_id: str
    p: int
    params: dict
    lhs: Value = None
    rhs: Value = None
    passed: bool = True
    skip_reason: Optional[str] = None
    error: Optional[str] = None

    @property
    def skipped(self) -> bool:
        return self.skip_reason is not None

    def sort_key(self):
        return (_ORDER.get(self.statement_id, len(_ORDER)), self.statement_id, self.p,
                tuple(sorted(self.params.items())))

    def witness(self) -> dict:
        out = {"p": self.p, "params": dict(sorted(self.params.items())),
               "lhs": _jsonable(self.lhs), "rhs": _jsonable(self.rhs)}
        if self.error:
            out["error"] = self.error
        return out


def _jsonable(v: Value):
    if isinstance(v, Fraction):
        return str(v)
    return v


def _check(sid: str, p: int, params: dict, lhs: int, rhs: Value) -> CheckResult:
    lhs = lhs + _fault.get()
    passed = not isinstance(rhs, Fraction) and lhs == rhs
    return CheckResult(sid, p, params, lhs, rhs, passed)


def _skip(sid: str, p: int, params: dict, reason: str) -> CheckResult:
    return CheckResult(sid, p, params, skip_reason=reason)


def _div(num: int, den: int) -> Union[int, Fraction]:
    q, r = divmod(num, den)
    return q if r == 0 else Fraction(num, den)


def _neg1_pow(p: int) -> int:
    return 1 if p % 4 == 1 else -1


class Caches:
    """Eta coefficients and representation counts shared by the predicates.

    Grows on demand; `run_suite` pre-sizes one so it is read-only while
    workers use it.
    """

    def __init__(self, cutoff: int = 0):
        self._lock = threading.Lock()
        self._eta = EtaCache(cutoff).warm() if cutoff else None

    def _ensure(self, n: int) -> EtaCache:
        eta = self._eta
        if eta is None or eta.cutoff < n:
            with self._lock:
                eta = self._eta
                if eta is None or eta.cutoff < n:
                    size = max(n, 2 * eta.cutoff if eta else 256)
                    eta = EtaCache(size).warm()
                    self._eta = eta
        return eta

    @property
    def cutoff(self) -> int:
        return self._eta.cutoff if self._eta else 0

    def a(self, level: int, n: int) -> int:
        return self._ensure(n).coeff(level, n)

    def N(self, coeffs: Sequence[int], n: int) -> int:
        return int(representations.quaternary_counts(coeffs, self._ensure(n).cutoff)[n])

    def T(self, coeffs: Sequence[int], n: int) -> int:
        return int(representations.triangular_counts(coeffs, self._ensure(n).cutoff)[n])


_default_caches = Caches()


def V(fld: PrimeField, coeffs, c=0) -> int:
    return residue_counts.residue_count(residue_counts.laurent(coeffs, fld, c), fld)


def _E(fld: PrimeField, m, n) -> int:
    return char_sums.curve_point_count(m, n, fld).count


# ---------------------------------------------------------------------------
# statements from the introduction
# ---------------------------------------------------------------------------

def check_vp_square(p: int, caches: Caches = None) -> list[CheckResult]:
    fld = PrimeField(p)
    return [_check("vp_square", p, {}, V(fld, [0, 0, 1]), _div(p + 1, 2))]


def check_von_sterneck(p: int, a1: int, a2: int, a3: int, caches: Caches = None):
    params = {"a1": a1, "a2": a2, "a3": a3}
    if (a1 * a1 - 3 * a2) % p == 0:
        return [_skip("von_sterneck", p, params, "p | a1^2 - 3a2")]
    fld = PrimeField(p)
    lhs = V(fld, [a3, a2, a1, 1])
    return [_check("von_sterneck", p, params, lhs, _div(2 * p + p_over_3(p), 3))]


def check_quartic_binomial(p: int, b: int, caches: Caches = None):
    params = {"b": b}
    if p % 3 != 2:
        return [_skip("quartic_binomial", p, params, "p != 2 mod 3")]
    if b % p == 0:
        return [_skip("quartic_binomial", p, params, "p | b")]
    fld = PrimeField(p)
    return [_check("quartic_binomial", p, params, V(fld, [0, b, 0, 0, 1]), (5 * p + 7) // 8)]


def check_sunye_cubic(p: int, c: int, caches: Caches = None):
    caches = caches or _default_caches
    params = {"c": c}
    if p % 4 != 3:
        return [_skip("sunye_cubic", p, params, "p != 3 mod 4")]
    if c % p == 0:
        return [_skip("sunye_cubic", p, params, "p | c")]
    fld = PrimeField(p)
    twist = legendre(-c, fld) * caches.a(24, p)
    if p % 8 == 7 and legendre(3 * c, fld) == 1:
        rhs = _div(5 * p + 5 + twist, 8)
    else:
        rhs = _div(5 * p - 3 + twist, 8)
    return [_check("sunye_cubic", p, params, V(fld, [0, 0, 0, 1], c), rhs)]


def check_sunye_quartic(p: int, caches: Caches = None):
    caches = caches or _default_caches
    if p % 4 != 3:
        return [_skip("sunye_quartic", p, {}, "p != 3 mod 4")]
    fld = PrimeField(p)
    rhs = _div(5 * p + 1 + 4 * char_sums.delta_mod40(p) - 2 * caches.a(20, p), 8)
    return [_check("sunye_quartic", p, {}, V(fld, [0, 4, -4, 0, 1]), rhs)]


def check_jacobi(p: int, caches: Caches = None):
    if p % 3 != 1:
        return [_skip("jacobi", p, {"part": i}, "p != 1 mod 3") for i in (1, 2)]
    fld = PrimeField(p)
    d = representations.decompose(fld)
    a_pred, l_pred = representations.jacobi_predictions(fld)
    return [
        _check("jacobi", p, {"part": 1}, d.A % p, a_pred),
        _check("jacobi", p, {"part": 2}, d.L % p, l_pred),
    ]


# ---------------------------------------------------------------------------
# x^2 + 2a/x and the Jacobsthal sums
# ---------------------------------------------------------------------------

def check_lemma2_1(p: int, m: int, caches: Caches = None):
    ids = [{"m": m, "part": i} for i in (1, 2)]
    if p % 3 != 2:
        return [_skip("lemma2_1", p, q, "p != 2 mod 3") for q in ids]
    if m % p == 0:
        return [_skip("lemma2_1", p, q, "p | m") for q in ids]
    fld = PrimeField(p)
    return [
        _check("lemma2_1", p, ids[0], char_sums.jacobsthal_cubic_sum(m, fld), -1),
        _check("lemma2_1", p, ids[1], legendre(m, fld) * char_sums.cubic_shift_sum(m, fld), -1),
    ]


def _jacobsthal_closed_form(branch: CubicBranch, A: int, B: int) -> int:
    if branch is CubicBranch.UNITY:
        return -1 - 2 * A
    if branch is CubicBranch.PLUS:
        return -1 + A + 3 * B
    return -1 + A - 3 * B


def check_lemma2_2(p: int, m: int, caches: Caches = None):
    params = {"m": m}
    if p % 3 != 1:
        return [_skip("lemma2_2", p, params, "p != 1 mod 3")]
    if m % p == 0:
        return [_skip("lemma2_2", p, params, "p | m")]
    fld = PrimeField(p)
    d = representations.decompose(fld)
    rhs = _jacobsthal_closed_form(cubic_class(m, fld, d.A, d.B), d.A, d.B)
    return [_check("lemma2_2", p, params, char_sums.jacobsthal_cubic_sum(m, fld), rhs)]


def check_thm2_1(p: int, a: int, caches: Caches = None):
    ids = [{"a": a, "part": i} for i in (1, 2)]
    if a % p == 0:
        return [_skip("thm2_1", p, q, "p | a") for q in ids]
    fld = PrimeField(p)
    v = V(fld, [0, 0, 1], 2 * a)
    if p % 3 == 2:
        return [_check("thm2_1", p, ids[0], v, _div(2 * p - 1, 3)),
                _skip("thm2_1", p, ids[1], "p != 1 mod 3")]
    d = representations.decompose(fld)
    branch = cubic_class(a, fld, d.A, d.B)
    if branch is CubicBranch.UNITY:
        rhs = _div(2 * p - 1 + 2 * d.A, 3)
    elif branch is CubicBranch.PLUS:
        rhs = _div(2 * p - 1 - d.A - 3 * d.B, 3)
    else:
        rhs = _div(2 * p - 1 - d.A + 3 * d.B, 3)
    # iff clause: V hits the residue value exactly when x^3 = a is solvable
    is_cube = count_roots(PolyZp.from_coeffs([-a, 0, 0, 1], fld), fld) == 3
    hits = v * 3 == 2 * p - 1 + 2 * d.A
    return [_check("thm2_1", p, ids[0], v, rhs),
            _check("thm2_1", p, ids[1], int(hits), int(is_cube))]


# ---------------------------------------------------------------------------
# x^2 + bx + c/x and elliptic curves
# ---------------------------------------------------------------------------

def check_thm3_1(p: int, b: int, c: int, caches: Caches = None):
    ids = [{"b": b, "c": c, "part": i} for i in (1, 2)]
    out = []
    fld = PrimeField(p)
    chi3 = legendre(3, fld)
    if (b * c * (b**3 - 27 * c)) % p == 0:
        out.append(_skip("thm3_1", p, ids[0], "p | bc(b^3 - 27c)"))
    else:
        t = fld.reduce(Fraction(12 * c, b**3))
        s = char_sums.curve_char_sum(6 * t - 3, 3 * t * t - 6 * t + 2, fld)
        out.append(_check("thm3_1", p, ids[0], 3 * V(fld, [0, b, 1], c), 2 * p - 1 - chi3 * s))
    if b % p == 0:
        out.append(_skip("thm3_1", p, ids[1], "p | b"))
        return out
    t = fld.reduce(Fraction(12 * c, b**3))
    if t == 0:
        out.append(_skip("thm3_1", p, ids[1], "t = 0"))
    elif 9 * t % p == 4:
        out.append(_skip("thm3_1", p, ids[1], "t = 4/9"))
    else:
        lhs = _E(fld, 6 * t - 3, 3 * t * t - 6 * t + 2)
        rhs = (2 * chi3 + 1) * p + 1 - chi3 - 3 * chi3 * V(fld, [0, 6, 1], 18 * t)
        out.append(_check("thm3_1", p, ids[1], lhs, rhs))
    return out


def check_thm3_2(p: int, caches: Caches = None):
    fld = PrimeField(p)
    v = V(fld, [0, 6, 1], 9)
    if p % 3 == 2:
        rhs = _div(2 * p - 1, 3)
    else:
        rhs = _div(2 * p - 1 - representations.decompose(fld).L, 3)
    return [_check("thm3_2", p, {}, v, rhs)]


def check_thm3_3(p: int, caches: Caches = None):
    caches = caches or _default_caches
    ids = [{"part": i} for i in (1, 2, 3)]
    if p in (2, 3, 7):
        return [_skip("thm3_3", p, q, "p in {2, 3, 7}") for q in ids]
    fld = PrimeField(p)
    v = V(fld, [0, 1, 1], -1)
    return [
        _check("thm3_3", p, ids[0], caches.a(14, p), 3 * v - 2 * p + 1),
        _check("thm3_3", p, ids[1], caches.N((1, 1, 7, 7), p), 8 * v - 4 * (p - 1)),
        _check("thm3_3", p, ids[2], caches.T((1, 1, 7, 7), p - 2), p - v),
    ]


# ---------------------------------------------------------------------------
# x^3 - 3x + 2 - 9t
# ---------------------------------------------------------------------------

def check_lemma4_1(p: int, k: int, caches: Caches = None):
    params = {"k": k}
    if k % p == 0:
        return [_skip("lemma4_1", p, params, "p | k")]
    fld = PrimeField(p)
    e1 = _E(fld, -(18 * k + 3), -27 * k * k - 18 * k - 2)
    e2 = _E(fld, -3 * k * k, k**3 * (27 * k + 2))
    num = 5 * p + 2 + _neg1_pow(p) + 4 * char_sums.delta_k(k, fld) + p_over_3(p) * (e1 - e2)
    return [_check("lemma4_1", p, params, V(fld, [0, 4 * k * k, 2 * k, 0, 1]), _div(num, 8))]


def check_lemma4_2(p: int, k: int, caches: Caches = None):
    params = {"k": k}
    if k % p == 0:
        return [_skip("lemma4_2", p, params, "p | k")]
    fld = PrimeField(p)
    chi = legendre(k, fld)
    lhs = _E(fld, -3 * k * k, k**3 * (27 * k + 2))
    rhs = (1 - chi) * (p + 1) + chi * _E(fld, -3, 27 * k + 2)
    return [_check("lemma4_2", p, params, lhs, rhs)]


def check_thm4_1(p: int, t: int, caches: Caches = None):
    params = {"t": t}
    if t % p == 0:
        return [_skip("thm4_1", p, params, "t = 0")]
    if 9 * t % p == 4:
        return [_skip("thm4_1", p, params, "t = 4/9")]
    fld = PrimeField(p)
    lhs = legendre(t, fld) * (_E(fld, -3, 2 - 9 * t) - p - 1)
    rhs = (7 * p + 1 + _neg1_pow(p) + 4 * char_sums.epsilon_p(t, fld)
           - 8 * V(fld, [0, 12 * t * t, -6 * t, 0, 1])
           - 3 * V(fld, [0, 6, 1], 18 * t))
    return [_check("thm4_1", p, params, lhs, rhs)]


def _thm4_2(sid: str, p: int, linear: int, caches: Caches):
    caches = caches or _default_caches
    ids = [{"part": i} for i in (1, 2)]
    if p <= 5:
        return [_skip(sid, p, q, "p <= 5") for q in ids]
    fld = PrimeField(p)
    a15 = caches.a(15, p)
    eps = char_sums.nonresidue_root_count(PolyZp.from_coeffs([18, -3, 0, 1], fld), fld)
    combo = (8 * V(fld, [0, linear, -6, 0, 1]) + 3 * V(fld, [0, 1, 1], 3)
             - 7 * p - 1 - _neg1_pow(p) - 4 * eps)
    return [
        _check(sid, p, ids[0], a15, _div(2 * caches.N((1, 3, 5, 15), p) - p - 1, 3)),
        _check(sid, p, ids[1], a15, p_over_3(p) * combo),
    ]


def check_thm4_2(p: int, caches: Caches = None):
    """a_15(p) from N(1,3,5,15;p) and from residue counts.

    The quartic is x^4 - 6x^2 + 72x: putting t = 36 into the x^4 - 6tx^2 +
    12t^2x count and rescaling x -> 6x gives 72x, not 2x. See
    `check_thm4_2_printed` for the 2x variant, which fails.
    """
    return _thm4_2("thm4_2", p, 72, caches)


def check_thm4_2_printed(p: int, caches: Caches = None):
    """The residue-count display with x^4 - 6x^2 + 2x; false for e.g. p = 13."""
    return _thm4_2("thm4_2_printed", p, 2, caches)


# ---------------------------------------------------------------------------
# suite runner
# ---------------------------------------------------------------------------

def _span(lo: int, hi: int) -> tuple[int, ...]:
    return tuple(range(lo, hi + 1))


@dataclass(frozen=True)
class Grid:
    """Parameter values each statement is checked with (reduced mod p)."""

    a: tuple[int, ...] = _span(1, 12)
    m: tuple[int, ...] = _span(1, 12)
    k: tuple[int, ...] = _span(1, 12)
    t: tuple[int, ...] = _span(1, 12)
    bc: tuple[tuple[int, int], ...] = tuple(
        (b, c) for b in (1, 2, 3, 5, 6, -1) for c in (1, 9, 18, 36, -216, -1)
    )
    sterneck: tuple[tuple[int, int, int], ...] = tuple(
        (a1, a2, a3) for a1 in (0, 1, 2) for a2 in (0, 1, 2) for a3 in (0, 1, 2)
    )
    quartic_b: tuple[int, ...] = (1, 2, 3)
    sunye_c: tuple[int, ...] = (1, 2, 3)


Predicate = Callable[..., list]


@dataclass(frozen=True)
class Statement:
    id: str
    predicate: Predicate
    params: Callable[[Grid], Iterable[tuple]]
    description: str


def _no_params(grid: Grid):
    return [()]


STATEMENTS: tuple[Statement, ...] = (
    Statement("vp_square", check_vp_square, _no_params, "V_p(x^2) = (p+1)/2"),
    Statement("von_sterneck", check_von_sterneck, lambda g: g.sterneck,
              "V_p(x^3+a1x^2+a2x+a3) = (2p+(p/3))/3"),
    Statement("quartic_binomial", check_quartic_binomial, lambda g: [(b,) for b in g.quartic_b],
              "V_p(x^4+bx) = [(5p+7)/8], p = 2 mod 3"),
    Statement("sunye_cubic", check_sunye_cubic, lambda g: [(c,) for c in g.sunye_c],
              "V_p(x^3+c/x) via a_24(p), p = 3 mod 4"),
    Statement("sunye_quartic", check_sunye_quartic, _no_params,
              "V_p(x^4-4x^2+4x) via a_20(p), p = 3 mod 4"),
    Statement("jacobi", check_jacobi, _no_params, "binomial congruences for A and L"),
    Statement("lemma2_1", check_lemma2_1, lambda g: [(m,) for m in g.m],
              "sum (x(x^3+m)/p) = -1, p = 2 mod 3"),
    Statement("lemma2_2", check_lemma2_2, lambda g: [(m,) for m in g.m],
              "sum (x(x^3+m)/p) by cubic class, p = 1 mod 3"),
    Statement("thm2_1", check_thm2_1, lambda g: [(a,) for a in g.a], "V_p(x^2+2a/x)"),
    Statement("thm3_1", check_thm3_1, lambda g: g.bc, "V_p(x^2+bx+c/x) and #E_p"),
    Statement("thm3_2", check_thm3_2, _no_params, "V_p(x^2+6x+9/x)"),
    Statement("thm3_3", check_thm3_3, _no_params, "a_14(p), N(1,1,7,7;p), T(1,1,7,7;p-2)"),
    Statement("lemma4_1", check_lemma4_1, lambda g: [(k,) for k in g.k],
              "V_p(x^4+2kx^2+4k^2x) via delta(k,p)"),
    Statement("lemma4_2", check_lemma4_2, lambda g: [(k,) for k in g.k],
              "#E_p(x^3-3k^2x+k^3(27k+2)) twist"),
    Statement("thm4_1", check_thm4_1, lambda g: [(t,) for t in g.t],
              "#E_p(x^3-3x+2-9t) via eps_p(t)"),
    Statement("thm4_2", check_thm4_2, _no_params, "a_15(p) two ways"),
)

# Opt-in only: kept to document the 2x misprint, never part of "all".
EXTRA_STATEMENTS: tuple[Statement, ...] = (
    Statement("thm4_2_printed", check_thm4_2_printed, _no_params,
              "a_15(p) with V_p(x^4-6x^2+2x), known false"),
)

STATEMENT_IDS = tuple(s.id for s in STATEMENTS)
_ORDER = {s.id: i for i, s in enumerate(STATEMENTS + EXTRA_STATEMENTS)}
_BY_ID = {s.id: s for s in STATEMENTS + EXTRA_STATEMENTS}


def get_statement(sid: str) -> Statement:
    try:
        return _BY_ID[sid]
    except KeyError:
        raise ValueError(f"unknown statement {sid!r}; choose from {', '.join(STATEMENT_IDS)}")


@dataclass
class StatementTally:
    id: str
    checked: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"id": self.id, "checked": self.checked, "passed": self.passed,
                "skipped": self.skipped, "failures": [f.witness() for f in self.failures]}


@dataclass
class SuiteReport:
    p_min: int
    p_max: int
    tallies: list[StatementTally]
    results: list[CheckResult] = field(default_factory=list, repr=False)

    @property
    def failures(self) -> list[CheckResult]:
        return [f for t in self.tallies for f in t.failures]

    @property
    def ok(self) -> bool:
        return not self.failures

    def tally(self, sid: str) -> StatementTally:
        return next(t for t in self.tallies if t.id == sid)

    def vacuous(self) -> list[str]:
        """Statements that were never actually checked."""
        return [t.id for t in self.tallies if t.checked == 0]

    def to_dict(self) -> dict:
        return {"range": [self.p_min, self.p_max],
                "statements": [t.to_dict() for t in self.tallies]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        lines = [f"primes {self.p_min}..{self.p_max}",
                 f"{'statement':<18}{'checked':>9}{'passed':>9}{'skipped':>9}{'failed':>8}"]
        for t in self.tallies:
            lines.append(f"{t.id:<18}{t.checked:>9}{t.passed:>9}{t.skipped:>9}{len(t.failures):>8}")
        for f in self.failures:
            lines.append(f"FAIL {f.statement_id} " + json.dumps(f.witness(), sort_keys=True))
        return "\n".join(lines)


def _run_prime(p: int, statements: Sequence[Statement], grid: Grid, caches: Caches,
               fail_fast: bool) -> list[CheckResult]:
    out = []
    for st in statements:
        for args in st.params(grid):
            try:
                results = st.predicate(p, *args, caches=caches)
            except Exception as exc:  # recorded as a witness, not swallowed
                names = st.predicate.__code__.co_varnames[1 : 1 + len(args)]
                results = [CheckResult(st.id, p, dict(zip(names, args)), passed=False,
                                       error=f"{type(exc).__name__}: {exc}")]
            out.extend(results)
            if fail_fast and any(not r.passed for r in results):
                return out
    return out


def default_threads() -> int:
    raw = os.environ.get("RESIDUE_SPECTRA_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"RESIDUE_SPECTRA_THREADS must be an integer, got {raw!r}")
    return resolve_threads(n)


def resolve_threads(n: int) -> int:
    """0 (or less) means one worker per CPU."""
    return n if n > 0 else (os.cpu_count() or 1)


def run_suite(p_min: int, p_max: int, grid: Grid = None, statements: Sequence[str] = None,
              threads: int = 1, fail_fast: bool = False) -> SuiteReport:
    """Run the selected statements for every prime in [p_min, p_max]."""
    if p_min < 5:
        raise ValueError("p_min must be at least 5")
    grid = grid or Grid()
    selected = [get_statement(s) for s in (statements or STATEMENT_IDS)]
    primes = primes_between(p_min, p_max)
    caches = Caches(max(p_max, 2))

    results: list[CheckResult] = []
    if threads <= 1 or fail_fast:
        for p in primes:
            chunk = _run_prime(p, selected, grid, caches, fail_fast)
            results.extend(chunk)
            if fail_fast and any(not r.passed for r in chunk):
                break
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(contextvars.copy_context().run, _run_prime, p, selected,
                                   grid, caches, False) for p in primes]
            for fut in futures:
                results.extend(fut.result())
    results.sort(key=CheckResult.sort_key)

    tallies = {st.id: StatementTally(st.id) for st in selected}
    for r in results:
        t = tallies[r.statement_id]
        if r.skipped:
            t.skipped += 1
            continue
        t.checked += 1
        if r.passed:
            t.passed += 1
        else:
            t.failures.append(r)
    return SuiteReport(p_min, p_max, list(tallies.values()), results)
