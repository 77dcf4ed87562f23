"""Modified Bessel functions of the second kind and derivatives of K0."""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from scipy import special

from ..errors import DomainError, RangeError


def bessel_k(nu, z):
    """Modified Bessel function of the second kind ``K_nu(z)``.

    Parameters
    ----------
    nu : int
        Non-negative integer order.
    z : float
        Positive argument.

    Raises
    ------
    DomainError
        If ``z <= 0`` or `nu` is negative.
    RangeError
        If ``K_nu(z)`` overflows a double (tiny `z`, large `nu`).
    """
    if nu < 0 or int(nu) != nu:
        raise DomainError(f"order must be a non-negative integer, got {nu!r}")
    if not z > 0.0:
        raise DomainError(f"K_nu(z) requires z > 0, got {z!r}")
    if nu == 0:
        val = special.k0(z)
    elif nu == 1:
        val = special.k1(z)
    else:
        val = special.kv(int(nu), z)
    if math.isinf(val):
        raise RangeError(f"K_{nu}({z!r}) overflows")
    return float(val)


@dataclass(frozen=True)
class BesselDerivativeExpansion:
    """``d^k K0/dz^k`` written as ``sum(coeffs[nu] * K_nu(z))``.

    Only orders ``nu <= k`` with ``nu`` of the same parity as ``k`` appear.
    """

    order: int
    coeffs: dict

    def __call__(self, z):
        return math.fsum(float(c) * bessel_k(nu, z) for nu, c in self.coeffs.items())


@lru_cache(maxsize=None)
def _k0_derivative_table(k):
    coeffs = {0: Fraction(1)}
    for _ in range(k):
        nxt = {}
        # K_nu' = -(K_{nu-1} + K_{nu+1})/2 with K_{-nu} = K_nu
        for nu, c in coeffs.items():
            for mu in (abs(nu - 1), nu + 1):
                nxt[mu] = nxt.get(mu, Fraction(0)) - c / 2
        coeffs = {nu: c for nu, c in nxt.items() if c != 0}
    return tuple(sorted(coeffs.items()))


def k0_derivative_coeffs(k):
    """Exact expansion of the k-th derivative of ``K0`` over ``{K_nu}``.

    ``k0_derivative_coeffs(2)`` gives ``{0: 1/2, 2: 1/2}``, i.e.
    ``K0'' = (K0 + K2)/2``.  The closed form is
    ``(-1/2)^k * sum_j C(k, j) K_{|k - 2j|}``.
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"derivative order must be a non-negative integer, got {k!r}")
    return BesselDerivativeExpansion(int(k), dict(_k0_derivative_table(int(k))))


def k0_derivative(k, z):
    """Value of ``d^k K0/dz^k`` at `z`."""
    return k0_derivative_coeffs(k)(z)
