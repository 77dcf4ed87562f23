"""Scalar special functions behind every closed form in the package."""

from .accuracy import DEFAULT_ACCURACY, AccuracyControl
from .bessel import BesselDerivativeExpansion, bessel_k, k0_derivative, k0_derivative_coeffs
from .bickley import (
    EULER_GAMMA,
    bickley,
    bickley_asymptotic,
    bickley_at_zero,
    bickley_extended,
    bickley_regime,
    bickley_series,
    bickley_trapezoid,
)
from .expint import e1, e1_derivative, shi_chi, upper_gamma
from .polylog import bernoulli, dilog, harmonic_phi, polylog_neg_exp, re_dilog, zeta_even

__all__ = [
    "AccuracyControl", "DEFAULT_ACCURACY", "EULER_GAMMA",
    "BesselDerivativeExpansion", "bessel_k", "k0_derivative", "k0_derivative_coeffs",
    "bickley", "bickley_asymptotic", "bickley_at_zero", "bickley_extended",
    "bickley_regime", "bickley_series", "bickley_trapezoid",
    "e1", "e1_derivative", "shi_chi", "upper_gamma",
    "bernoulli", "dilog", "harmonic_phi", "polylog_neg_exp", "re_dilog", "zeta_even",
]
