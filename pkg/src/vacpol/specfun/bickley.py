r"""Bickley-Naylor functions.

.. math::
    Ki_n(z) = \int_0^\infty \frac{e^{-z\cosh t}}{\cosh^n t}\,dt

``Ki_0 = K_0`` and ``Ki_{n+1}' = -Ki_n``.  Three evaluators are provided and
`bickley` picks one by regime:

* ``series``     -- ascending power series with logarithmic part, z <= 2;
* ``asymptotic`` -- large-z expansion, accepted only when the smallest term
  (where the expansion is cut) is below the requested tolerance;
* ``trapezoid``  -- trapezoidal rule on the defining integral.  The integrand
  is analytic in the strip ``|Im t| < pi/2`` and decays double
  exponentially, so the rule converges geometrically in the step size.
"""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from .accuracy import DEFAULT_ACCURACY
from .bessel import bessel_k

EULER_GAMMA = 0.57721566490153286061

SERIES_MAX_Z = 2.0
ASYMPTOTIC_MIN_Z = 15.0

# e^{-45} relative cut for the truncated trapezoid range
_TAIL_EXPONENT = 45.0


def gamma_half(m):
    """``Gamma(m/2)`` for a positive integer `m`, via ``Gamma(1/2) = sqrt(pi)``."""
    if m < 1:
        raise DomainError(f"gamma_half needs m >= 1, got {m!r}")
    if m % 2 == 0:
        return float(math.factorial(m // 2 - 1))
    j = (m - 1) // 2
    return math.factorial(2 * j) / (4 ** j * math.factorial(j)) * math.sqrt(math.pi)


def bickley_at_zero(n):
    """``Ki_n(0) = sqrt(pi) Gamma(n/2) / (2 Gamma((n+1)/2))`` for ``n >= 1``."""
    if n < 1:
        raise DomainError("Ki_n(0) diverges for n < 1")
    return 0.5 * math.sqrt(math.pi) * gamma_half(n) / gamma_half(n + 1)


def bickley_series(n, z, ctrl=DEFAULT_ACCURACY):
    """Ascending series for ``Ki_n(z)``, ``n >= 0``, ``z > 0``.

    The log-series part runs in powers of ``(z/2)^(2k)``; cancellation grows
    with `z`, so this is meant for small arguments.
    """
    if not z > 0.0:
        raise DomainError(f"series needs z > 0, got {z!r}")
    poly = math.fsum(
        (-z / 2) ** k / (math.factorial(k) * math.factorial(n - k - 1)) * gamma_half(n - k) ** 2
        for k in range(n)) * 2.0 ** (n - 2)

    lg = EULER_GAMMA + math.log(z) - math.log(2.0)   # z/2 underflows for subnormal z
    h = z * z / 4
    coef = 1.0 / math.factorial(n)
    phi_k1 = 0.0          # Phi(k+1)
    phi_2k1 = 0.0         # Phi(2k+1)
    phi_2kn1 = math.fsum(1.0 / j for j in range(1, n + 1))   # Phi(2k+n+1)
    terms = []
    for k in range(ctrl.max_terms):
        term = coef * (phi_k1 - phi_2k1 + phi_2kn1 - lg)
        terms.append(term)
        if k > 2 and abs(term) <= 1e-17 * abs(math.fsum(terms)):
            break
        coef *= h * (2 * k + 1) * (2 * k + 2) / ((k + 1) ** 2 * (n + 2 * k + 1) * (n + 2 * k + 2))
        phi_k1 += 1.0 / (k + 1)
        phi_2k1 += 1.0 / (2 * k + 1) + 1.0 / (2 * k + 2)
        phi_2kn1 += 1.0 / (2 * k + n + 1) + 1.0 / (2 * k + n + 2)
    return poly + (-z) ** n * math.fsum(terms)


@lru_cache(maxsize=4096)
def _asymptotic_coefficient(n, m):
    # (2m-1)!/(2^(2m-1)(m-1)!) * sum_k (2k)! (n)_{m-k} / (8^k (k!)^2 (m-k)!)
    inner = Fraction(0)
    for k in range(m + 1):
        rising = 1
        for i in range(m - k):
            rising *= n + i
        inner += Fraction(math.factorial(2 * k) * rising,
                          8 ** k * math.factorial(k) ** 2 * math.factorial(m - k))
    pref = Fraction(math.factorial(2 * m - 1), 2 ** (2 * m - 1) * math.factorial(m - 1))
    return float((-1) ** m * pref * inner)


def bickley_asymptotic(n, z, ctrl=DEFAULT_ACCURACY):
    """Large-z expansion of ``Ki_n(z)``.

    Returns ``(value, error_bound)``; the sum is cut at its smallest term
    and that term's magnitude is the reported bound.
    """
    if not z > 0.0:
        raise DomainError(f"asymptotic series needs z > 0, got {z!r}")
    total = 1.0
    last = math.inf
    err = 0.0
    for m in range(1, ctrl.max_terms + 1):
        term = _asymptotic_coefficient(n, m) / z ** m
        if abs(term) >= abs(last):
            err = abs(last)
            break
        total += term
        last = term
        if abs(term) <= 1e-17 * abs(total):
            err = abs(term)
            break
    else:
        err = abs(last)
    pref = math.sqrt(math.pi / (2 * z)) * math.exp(-z)
    return pref * total, pref * err


def _trapezoid_scaled(orders, z):
    """``e^z Ki_n(z)`` for each n in `orders` (all >= 0) by the trapezoid rule."""
    orders = np.asarray(orders, dtype=float)
    n_min = orders.min()
    t_max = math.acosh(1.0 + _TAIL_EXPONENT / z)
    if n_min > 0:
        t_max = min(t_max, _TAIL_EXPONENT / n_min + math.log(2.0))

    def integrand(t):
        # cosh t - 1 = 2 sinh^2(t/2), exact near t = 0
        sh = np.sinh(0.5 * t)
        base = np.exp(-2.0 * z * sh * sh)
        sech = 1.0 / np.cosh(t)
        return base[None, :] * sech[None, :] ** orders[:, None]

    step = min(0.5, 1.5 / math.sqrt(z))
    nodes = np.arange(0.0, t_max + step, step)
    vals = integrand(nodes)
    vals[:, 0] *= 0.5
    total = vals.sum(axis=1) * step
    for _ in range(12):
        mid = np.arange(0.5 * step, t_max + step, step)
        fine = 0.5 * total + 0.5 * step * integrand(mid).sum(axis=1)
        step *= 0.5
        converged = np.all(np.abs(fine - total) <= 1e-15 * np.abs(fine))
        total = fine
        if converged:
            break
    return total


def bickley_trapezoid(n, z):
    """``Ki_n(z)`` from the trapezoidal rule on the defining integral."""
    if not z > 0.0:
        raise DomainError(f"trapezoid evaluation needs z > 0, got {z!r}")
    return float(_trapezoid_scaled([n], z)[0]) * math.exp(-z)


def bickley_regime(n, z, ctrl=DEFAULT_ACCURACY):
    """Name of the evaluator `bickley` uses for ``(n, z)``."""
    if z == 0.0 or n == 0:
        return "exact"
    if z <= SERIES_MAX_Z:
        return "series"
    if z >= max(ASYMPTOTIC_MIN_Z, 2 * n):
        val, err = bickley_asymptotic(n, z, ctrl)
        if err <= 1e-3 * ctrl.rel_tol * abs(val):
            return "asymptotic"
    return "trapezoid"


def bickley(n, z, ctrl=DEFAULT_ACCURACY):
    """Bickley-Naylor function ``Ki_n(z)``.

    Parameters
    ----------
    n : int
        Non-negative order.  ``Ki_0 = K_0``.
    z : float
        Argument; ``z > 0`` for ``n = 0`` and ``z >= 0`` otherwise.
    ctrl : AccuracyControl
        Tolerance and term caps.

    Raises
    ------
    DomainError
        Negative `n` or `z`, or ``n = 0`` with ``z = 0`` (logarithmic divergence).
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"order must be a non-negative integer, got {n!r}")
    n = int(n)
    if z < 0.0 or math.isnan(z):
        raise DomainError(f"Ki_n(z) requires z >= 0, got {z!r}")
    if n == 0:
        if z == 0.0:
            raise DomainError("Ki_0(0) = K_0(0) diverges")
        return bessel_k(0, z)
    if z == 0.0:
        return bickley_at_zero(n)
    if z <= SERIES_MAX_Z:
        return bickley_series(n, z, ctrl)
    if z >= max(ASYMPTOTIC_MIN_Z, 2 * n):
        val, err = bickley_asymptotic(n, z, ctrl)
        if err <= 1e-3 * ctrl.rel_tol * abs(val):
            return val
    return bickley_trapezoid(n, z)


def bickley_extended(n, z, ctrl=DEFAULT_ACCURACY):
    """`bickley` extended to ``n = -1`` through ``Ki_{-1} = K_1``."""
    if n == -1:
        return bessel_k(1, z)
    return bickley(n, z, ctrl)
