"""Residue counts of x^2 + bx + c/x modulo p, elliptic-curve point counts,
eta-product coefficients and the identities tying them together."""

from .char_sums import (
    CurveCount,
    curve_point_count,
    delta_k,
    delta_mod40,
    epsilon_p,
    jacobsthal_cubic_sum,
)
from .eta_series import LEVELS, EtaCache, a_coeff, eta_product, euler_series
from .harness import Grid, SuiteReport, run_suite
from .modular_core import (
    CubicBranch,
    PolyZp,
    PrimeField,
    binom_mod,
    count_roots,
    cubic_class,
    inv_mod,
    is_prime,
    legendre,
    pow_mod,
)
from .representations import (
    Decomposition,
    decompose,
    jacobi_check,
    quaternary_count,
    triangular_count,
)
from .residue_counts import LaurentPoly, laurent, residue_count, residue_profile

__version__ = "0.1.0"
