"""Result record shared by the potential evaluators."""

from dataclasses import dataclass


@dataclass(frozen=True)
class PotentialResult:
    """A potential value with its provenance.

    Attributes
    ----------
    value : float
        Potential in hartree.
    est_error : float
        Absolute error estimate.  Zero for approximations whose error is
        a modelling error rather than a numerical one.
    method : str
        Route that actually produced `value` (after any fallback).
    flags : tuple of str
        Regime warnings and fallbacks, empty when none apply.
    """

    value: float
    est_error: float
    method: str
    flags: tuple = ()
