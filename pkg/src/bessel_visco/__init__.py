"""Bessel models of linear viscoelasticity.

Special functions, infinite-order operators, Caputo calculus in the
Laplace domain, the creep-compliance spectral series and its hereditary
form, each paired with an independent numerical check.
"""

from .entire import BesselOperatorPair, EntireSeries, OrderTypeEstimate, apply_operator, estimate_order_type
from .errors import (
    BesselViscoError,
    DomainError,
    InsufficientDataError,
    InversionError,
    NumericalError,
    SeriesNonConvergenceError,
    ZeroCapExceededError,
)
from .fraccalc import FracSeries, PowerJet, caputo_laplace, caputo_power, caputo_series
from .hereditary import SampledHistory, strain_from_stress, stress_from_strain
from .identities import SPolynomial, boundary_terms, boundary_terms_direct, lemma3_sides, lemma4_sides, pair_balance_residual
from .laplace import InversionParams, invert
from .material import BesselBody, creep_compliance, creep_derivative, fm_half_creep, laplace_sJ, rayleigh_sum
from .specfun import ZeroTable, bessel_I, bessel_I_ratio, bessel_J, bessel_J_zeros, log_bessel_I, log_gamma

__all__ = [
    "BesselOperatorPair",
    "EntireSeries",
    "OrderTypeEstimate",
    "apply_operator",
    "estimate_order_type",
    "BesselViscoError",
    "DomainError",
    "InsufficientDataError",
    "InversionError",
    "NumericalError",
    "SeriesNonConvergenceError",
    "ZeroCapExceededError",
    "FracSeries",
    "PowerJet",
    "caputo_laplace",
    "caputo_power",
    "caputo_series",
    "SampledHistory",
    "strain_from_stress",
    "stress_from_strain",
    "SPolynomial",
    "boundary_terms",
    "boundary_terms_direct",
    "lemma3_sides",
    "lemma4_sides",
    "pair_balance_residual",
    "InversionParams",
    "invert",
    "BesselBody",
    "creep_compliance",
    "creep_derivative",
    "fm_half_creep",
    "laplace_sJ",
    "rayleigh_sum",
    "ZeroTable",
    "bessel_I",
    "bessel_I_ratio",
    "bessel_J",
    "bessel_J_zeros",
    "log_bessel_I",
    "log_gamma",
]
__version__ = "0.1.0"
