r"""Fermi nuclear charge distribution and integrals against it.

.. math::
    \rho(x) = \frac{\rho_0}{1 + e^{(x-\xi)/a}}

Integrals ``int_0^inf f(y) H(y) dy`` with the bare Fermi profile
``f = 1/(1 + e^{(y-xi)/a})`` are evaluated by the Sommerfeld-type
development

.. math::
    \int_0^\xi H + \sum_{n\ge0} a^{2n+2}(2-2^{-2n})\zeta(2n+2) H^{(2n+1)}(\xi) + R,
    \qquad R = \sum_{n\ge1} (-1)^{n-1} e^{-n\xi/a}\int_0^\infty H(-y) e^{-ny/a}\,dy,

which is exact when `H` is analytic on the real line.  ``H(-y)`` is the
analytic continuation of `H` to negative arguments (for ``H = y^k`` it is
``(-y)^k``).

All lengths are in bohr.
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import expit

from .errors import ContractError, DomainError, RegimeWarning
from .quadrature import combine, integrate, integrate_to_infinity
from .specfun import (DEFAULT_ACCURACY, bessel_k, bickley, polylog_neg_exp, upper_gamma,
                      zeta_even)

BOHR_FM = 52917.72109
DEFAULT_XI = 2.2677e-5
DEFAULT_T_FM = 2.3


def fm_to_bohr(length_fm):
    """Convert femtometres to bohr."""
    return length_fm / BOHR_FM


def diffuseness_from_thickness(t_fm):
    """Diffuseness ``a = t/(4 ln 3)`` in bohr from the 90%-10% thickness `t` in fm."""
    if not t_fm > 0.0:
        raise DomainError(f"surface thickness must be positive, got {t_fm!r}")
    return fm_to_bohr(t_fm / (4.0 * math.log(3.0)))


DEFAULT_A = diffuseness_from_thickness(DEFAULT_T_FM)


@dataclass(frozen=True)
class FermiDistribution:
    """A normalized Fermi charge density.

    Build with `make_fermi`; `N` and `rho0` are derived there.
    """

    Z: float
    xi: float
    a: float
    N: float
    rho0: float


def normalization_factor(xi, a):
    """``N = 1 + pi^2 a^2/xi^2 - 6 (a/xi)^3 Li3(-e^{-xi/a})``."""
    ratio = a / xi
    return math.fsum([1.0, math.pi ** 2 * ratio ** 2,
                      -6.0 * ratio ** 3 * polylog_neg_exp(3, xi / a)])


def make_fermi(Z=1.0, xi=DEFAULT_XI, a=DEFAULT_A):
    """Fermi distribution with charge `Z`, half-density radius `xi` and
    diffuseness `a` (both in bohr).

    ``rho0 = 3Z/(4 pi xi^3 N)`` so that ``4 pi int x^2 rho = Z``.

    Warns
    -----
    RegimeWarning
        If ``xi/a <= 1``, where the profile no longer has a flat interior.
    """
    for name, v in (("Z", Z), ("xi", xi), ("a", a)):
        if not (v > 0.0 and math.isfinite(v)):
            raise DomainError(f"{name} must be positive and finite, got {v!r}")
    if xi / a <= 1.0:
        warnings.warn(f"xi/a = {xi / a:.3g} <= 1: diffuse profile", RegimeWarning, stacklevel=2)
    n = normalization_factor(xi, a)
    rho0 = 3.0 * Z / (4.0 * math.pi * xi ** 3 * n)
    return FermiDistribution(float(Z), float(xi), float(a), n, rho0)


def fermi_profile(y, xi, a):
    """Bare profile ``1/(1 + e^{(y-xi)/a})``; no overflow for large `y`."""
    return expit(-(np.asarray(y, dtype=float) - xi) / a)


def density(d, x):
    """Charge density ``rho(x)`` of `d`; accepts scalars or arrays."""
    out = d.rho0 * fermi_profile(x, d.xi, d.a)
    return float(out) if np.ndim(out) == 0 else out


def _moment_quadrature(xi, a, k, ctrl):
    def f(y):
        return y ** k * fermi_profile(y, xi, a)

    head = integrate(f, 0.0, xi, ctrl, vectorized=True)
    tail = integrate_to_infinity(f, xi, ctrl, scale=a * (k + 1), vectorized=True)
    return combine([head, tail])


def sommerfeld_coefficient(n):
    """``(2 - 2^{-2n}) zeta(2n+2)``, weight of ``a^{2n+2} H^{(2n+1)}(xi)``."""
    return (2.0 - 2.0 ** (-2 * n)) * zeta_even(2 * n + 2)


def moment_closed(xi, a, k):
    """``int_0^inf y^k/(1 + e^{(y-xi)/a}) dy`` in closed form.

    ``xi^{k+1}/(k+1) + sum_n k!/(k-2n-1)! a^{2n+2} (2 - 2^{-2n}) zeta(2n+2) xi^{k-2n-1}
    + (-1)^{k+1} k! a^{k+1} Li_{k+1}(-e^{-xi/a})``.
    """
    terms = [xi ** (k + 1) / (k + 1)]
    for n in range((k - 1) // 2 + 1 if k >= 1 else 0):
        falling = math.perm(k, 2 * n + 1)
        terms.append(falling * a ** (2 * n + 2) * sommerfeld_coefficient(n) * xi ** (k - 2 * n - 1))
    terms.append((-1) ** (k + 1) * math.factorial(k) * a ** (k + 1) * polylog_neg_exp(k + 1, xi / a))
    return math.fsum(terms)


def fermi_moment(d, k, method="closed", ctrl=DEFAULT_ACCURACY):
    """Bare moment ``int_0^inf y^k f(y) dy`` of the profile of `d` (``rho0`` excluded).

    Parameters
    ----------
    d : FermiDistribution
    k : int
        Non-negative power.
    method : {"closed", "quadrature"}
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"moment order must be a non-negative integer, got {k!r}")
    k = int(k)
    if method == "closed":
        return moment_closed(d.xi, d.a, k)
    if method == "quadrature":
        return _moment_quadrature(d.xi, d.a, k, ctrl).value
    raise DomainError(f"unknown moment method {method!r}")


@dataclass(frozen=True)
class SmoothFunctionBundle:
    """A function `H` with the data `sommerfeld_integrate` needs.

    Attributes
    ----------
    value : callable
        ``H(y)``.
    derivative : callable
        ``(m, y) -> H^{(m)}(y)``, valid for ``m <= max_order``.
    max_order : int
        Highest derivative order available.
    reflected : callable, optional
        ``y -> H(-y)`` for ``y >= 0`` (analytic continuation).  Defaults to
        calling `value` at ``-y``.
    domain_note : str
        Free text describing kinks or other non-analytic points.
    head_integral : callable, optional
        ``(xi) -> int_0^xi H``; quadrature is used when absent.
    residual_integral : callable, optional
        ``(lam) -> int_0^inf H(-y) e^{-lam y} dy``; quadrature when absent.
    scale : float
        Length scale of `H`, used to map the semi-infinite residual integrals.
    """

    value: object
    derivative: object
    max_order: int
    reflected: object = None
    domain_note: str = ""
    head_integral: object = None
    residual_integral: object = None
    scale: float = 1.0


def polynomial_bundle(coeffs):
    """Bundle for ``H(y) = sum coeffs[j] y^j``."""
    poly = np.polynomial.Polynomial(coeffs)
    derivs = [poly]
    for _ in range(len(coeffs) + 30):
        derivs.append(derivs[-1].deriv())

    def derivative(m, y):
        return float(derivs[m](y)) if m < len(derivs) else 0.0

    anti = poly.integ()
    return SmoothFunctionBundle(
        value=lambda y: poly(y),
        derivative=derivative,
        max_order=10 ** 6,
        head_integral=lambda xi: float(anti(xi) - anti(0.0)),
    )


@dataclass(frozen=True)
class SommerfeldResult:
    """Breakdown of a Sommerfeld-type evaluation.

    ``value = head + sum(series) + sum(residuals)``.
    """

    value: float
    head: float
    series: tuple
    residuals: tuple
    est_error: float

    @property
    def residual(self):
        return math.fsum(self.residuals)

    def partial_sums(self):
        """Running totals after each series term (residual included)."""
        base = self.head + self.residual
        out = []
        acc = 0.0
        for t in self.series:
            acc += t
            out.append(base + acc)
        return out


def sommerfeld_breakdown(H, xi, a, n_max=10, residual_terms=20, ctrl=DEFAULT_ACCURACY):
    """`sommerfeld_integrate` returning the individual contributions."""
    if not (xi > 0.0 and a > 0.0):
        raise DomainError("xi and a must be positive")
    if n_max < 0 or residual_terms < 0:
        raise DomainError("term counts must be non-negative")
    if 2 * n_max + 1 > H.max_order:
        raise ContractError(
            f"derivatives up to order {2 * n_max + 1} needed, bundle provides {H.max_order}")
    err = 0.0
    if H.head_integral is not None:
        head = float(H.head_integral(xi))
    else:
        res = integrate(lambda y: H.value(y), 0.0, xi, ctrl)
        head, err = res.value, res.est_error
    series = tuple(a ** (2 * n + 2) * sommerfeld_coefficient(n) * H.derivative(2 * n + 1, xi)
                   for n in range(n_max + 1))
    reflected = H.reflected if H.reflected is not None else (lambda y: H.value(-y))
    residuals = []
    for n in range(1, residual_terms + 1):
        weight = math.exp(-n * xi / a)
        if weight == 0.0:
            break
        lam = n / a
        if H.residual_integral is not None:
            lap = float(H.residual_integral(lam))
        else:
            res = integrate_to_infinity(lambda y, lam=lam: reflected(y) * math.exp(-lam * y), 0.0,
                                        ctrl, scale=min(H.scale, 1.0 / lam))
            lap = res.value
            err += weight * res.est_error
        residuals.append((-1) ** (n - 1) * weight * lap)
    value = math.fsum([head, *series, *residuals])
    return SommerfeldResult(value, head, series, tuple(residuals), err)


def sommerfeld_integrate(H, xi, a, n_max=10, residual_terms=20, ctrl=DEFAULT_ACCURACY):
    """``int_0^inf H(y) / (1 + e^{(y-xi)/a}) dy`` by the Sommerfeld-type development.

    Parameters
    ----------
    H : SmoothFunctionBundle
        Must supply derivatives up to order ``2 n_max + 1``.
    xi, a : float
        Profile parameters.
    n_max : int
        Last index of the derivative series.
    residual_terms : int
        Number of exponentially small residual terms kept.

    Raises
    ------
    ContractError
        If `H` lacks the derivatives the series needs.
    """
    return sommerfeld_breakdown(H, xi, a, n_max, residual_terms, ctrl).value


def _check_interval(gamma, delta):
    if not (0.0 < gamma < delta):
        raise DomainError(f"need 0 < gamma < delta, got gamma={gamma!r}, delta={delta!r}")


def _ki(q, y):
    return bessel_k(0, y) if q == 0 else bickley(q, y)


def i_pq(p, q, gamma, delta):
    """``I(p, q) = int_gamma^delta y^p Ki_q(y) dy`` by recurrence.

    Integration by parts lowers `q`:
    ``I(p,q) = [delta^{p+1} Ki_q(delta) - gamma^{p+1} Ki_q(gamma) + I(p+1,q-1)]/(p+1)``,
    down to ``q = 0`` where
    ``I(m,0) = [-y^m K1 - (m-1) y^{m-1} K0]_gamma^delta + (m-1)^2 I(m-2,0)``
    starts from ``I(0,0) = Ki1(gamma) - Ki1(delta)`` and
    ``I(1,0) = gamma K1(gamma) - delta K1(delta)``.
    """
    if p < 0 or q < 0:
        raise DomainError("p and q must be non-negative")
    _check_interval(gamma, delta)
    return _i_pq(int(p), int(q), float(gamma), float(delta))


@lru_cache(maxsize=4096)
def _i_pq(p, q, g, d):
    if q == 0:
        if p == 0:
            return bickley(1, g) - bickley(1, d)
        if p == 1:
            return g * bessel_k(1, g) - d * bessel_k(1, d)
        m = p

        def edge(y):
            return -y ** m * bessel_k(1, y) - (m - 1) * y ** (m - 1) * bessel_k(0, y)

        return edge(d) - edge(g) + (m - 1) ** 2 * _i_pq(m - 2, 0, g, d)
    return (d ** (p + 1) * _ki(q, d) - g ** (p + 1) * _ki(q, g) + _i_pq(p + 1, q - 1, g, d)) / (p + 1)


# below this the 1/lambda recurrence amplifies rounding; use quadrature
L_RECURRENCE_MIN_LAMBDA = 1.0


def l_base(p, lam, gamma, delta, ctrl=DEFAULT_ACCURACY):
    """``int_gamma^delta y^p e^{-lam y} K0(y) dy`` by quadrature."""
    _check_interval(gamma, delta)

    def f(y):
        return y ** p * math.exp(-lam * y) * bessel_k(0, y)

    return integrate(f, gamma, delta, ctrl).value


def l_npq_quadrature(p, q, lam, gamma, delta, ctrl=DEFAULT_ACCURACY):
    """``int_gamma^delta y^p e^{-lam y} Ki_q(y) dy`` by direct quadrature."""
    _check_interval(gamma, delta)

    def f(y):
        return y ** p * math.exp(-lam * y) * _ki(q, y)

    return integrate(f, gamma, delta, ctrl).value


def l_npq(p, q, lam, gamma, delta, ctrl=DEFAULT_ACCURACY):
    """``L(p, q) = int_gamma^delta y^p e^{-lam y} Ki_q(y) dy``.

    For ``lam >= 1`` uses
    ``L(p,q) = [e^{-lam gamma} gamma^p Ki_q(gamma) - e^{-lam delta} delta^p Ki_q(delta)
    + p L(p-1,q) - L(p,q-1)]/lam``
    with the ``q = 0`` column ``L(m, 0)`` from quadrature.  Each step
    divides by `lam`, so smaller `lam` goes straight to quadrature.
    """
    if p < 0 or q < 0:
        raise DomainError("p and q must be non-negative")
    if not lam > 0.0:
        raise DomainError(f"lambda must be positive, got {lam!r}")
    _check_interval(gamma, delta)
    if lam < L_RECURRENCE_MIN_LAMBDA:
        return l_npq_quadrature(p, q, lam, gamma, delta, ctrl)
    base = [l_base(m, lam, gamma, delta, ctrl) for m in range(p + 1)]
    eg, ed = math.exp(-lam * gamma), math.exp(-lam * delta)
    table = {}

    def get(pp, qq):
        if pp < 0:
            return 0.0
        if qq == 0:
            return base[pp]
        key = (pp, qq)
        if key not in table:
            table[key] = (eg * gamma ** pp * _ki(qq, gamma) - ed * delta ** pp * _ki(qq, delta)
                          + pp * get(pp - 1, qq) - get(pp, qq - 1)) / lam
        return table[key]

    return get(p, q)


def power_exp_integral(k, lam, gamma, delta):
    """``int_gamma^delta y^k e^{-lam y} dy = [Gamma(k+1, gamma lam) - Gamma(k+1, delta lam)]/lam^{k+1}``."""
    _check_interval(gamma, delta)
    if not lam > 0.0:
        raise DomainError("lambda must be positive")
    return (upper_gamma(k + 1, gamma * lam) - upper_gamma(k + 1, delta * lam)) / lam ** (k + 1)
