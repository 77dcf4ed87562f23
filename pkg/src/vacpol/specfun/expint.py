"""Exponential integral, its derivatives, integer-order incomplete gamma,
and the hyperbolic sine/cosine integrals."""

import math

import numpy as np
from scipy import special

from ..errors import DomainError, RangeError
from .accuracy import DEFAULT_ACCURACY
from .bickley import EULER_GAMMA

SHI_CHI_SERIES_MAX_Z = 40.0
SHI_CHI_MAX_Z = 700.0


def e1(z):
    """Exponential integral ``E1(z) = int_1^inf e^{-zt}/t dt`` for ``z > 0``.

    Arrays are evaluated elementwise.
    """
    if np.ndim(z):
        arr = np.asarray(z, dtype=float)
        if not np.all(arr > 0.0):
            raise DomainError("E1(z) requires z > 0")
        return special.exp1(arr)
    if not z > 0.0:
        raise DomainError(f"E1(z) requires z > 0, got {z!r}")
    return float(special.exp1(z))


def upper_gamma(n, z):
    """Upper incomplete gamma ``Gamma(n, z) = int_z^inf t^(n-1) e^-t dt``.

    For integer ``n >= 1`` this is ``(n-1)! e^-z sum_{k<n} z^k/k!``.
    """
    if n < 1 or int(n) != n:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    if z < 0.0:
        raise DomainError(f"z must be >= 0, got {z!r}")
    n = int(n)
    term = 1.0
    parts = [1.0]
    for k in range(1, n):
        term *= z / k
        parts.append(term)
    return math.factorial(n - 1) * math.exp(-z) * math.fsum(parts)


def e1_derivative(n, z):
    """``d^n E1/dz^n = (-1/z)^n Gamma(n, z)``.

    >>> import math
    >>> abs(e1_derivative(1, 2.0) + math.exp(-2.0) / 2.0) < 1e-16
    True
    """
    if n < 1 or int(n) != n:
        raise DomainError(f"derivative order must be a positive integer, got {n!r}")
    if not z > 0.0:
        raise DomainError(f"z must be > 0, got {z!r}")
    return (-1.0 / z) ** int(n) * upper_gamma(n, z)


def _shi_chi_series(z, ctrl):
    # Shi = sum z^(2k+1)/((2k+1)(2k+1)!), Chi - gamma - ln z = sum z^(2k)/(2k (2k)!)
    shi_terms = []
    chi_terms = []
    shi_sum = chi_sum = 0.0
    p = z                       # z^(2k+1)/(2k+1)!
    for k in range(4 * ctrl.max_terms):
        s = p / (2 * k + 1)
        q = p * z / (2 * k + 2)   # z^(2k+2)/(2k+2)!
        c = q / (2 * k + 2)
        shi_terms.append(s)
        chi_terms.append(c)
        shi_sum += s
        chi_sum += c
        if s <= 1e-17 * shi_sum and c <= 1e-17 * chi_sum:
            break
        p = q * z / (2 * k + 3)
    shi = math.fsum(shi_terms)
    chi = EULER_GAMMA + math.log(z) + math.fsum(chi_terms)
    return shi, chi


def _ei_asymptotic(z):
    # Ei(z) ~ e^z/z sum_k k!/z^k, cut at the smallest term
    total = 1.0
    term = 1.0
    k = 1
    while True:
        nxt = term * k / z
        if nxt >= term or nxt < 1e-17 * total:
            break
        total += nxt
        term = nxt
        k += 1
    return math.exp(z) / z * total


def shi_chi(z, ctrl=DEFAULT_ACCURACY):
    """Hyperbolic sine and cosine integrals ``(Shi(z), Chi(z))``.

    Both grow like ``e^z/(2z)`` while ``Shi - Chi = E1(z)`` decays, so the
    difference of the returned floats carries only about
    ``eps * e^(2z) * z`` relative accuracy; use `e1` for the difference.

    Raises
    ------
    RangeError
        For ``z > 700``, where the values approach the double overflow limit.
    """
    if not z > 0.0:
        raise DomainError(f"Shi/Chi evaluation needs z > 0, got {z!r}")
    if z > SHI_CHI_MAX_Z:
        raise RangeError(f"Shi/Chi overflow guard: z = {z!r} > {SHI_CHI_MAX_Z}")
    if z <= SHI_CHI_SERIES_MAX_Z:
        return _shi_chi_series(z, ctrl)
    ei = _ei_asymptotic(z)
    em = e1(z)
    return 0.5 * (ei + em), 0.5 * (ei - em)
