r"""Uehling potential of a Fermi nucleus.

.. math::
    \delta V(r) = -\frac{2\alpha^2}{3r}\int_0^\infty x\rho(x)
    \big[g(2c|r-x|) - g(2c(r+x))\big]\,dx

with `rho` normalized to ``Z``.  The point-charge limit
``-(2 alpha Z/(3 pi r)) U(2cr)`` follows from ``g(z-) - g(z+) ~ 4cxU``.

Two routes:

``direct``
    adaptive quadrature, split at ``x = r`` (kink of ``|r - x|``) and at the
    nuclear surface.
``sommerfeld``
    the Sommerfeld-type development of `fermi_nucleus` applied to
    ``H(y) = y [g(2c(r-y)) - g(2c(r+y))]``, with ``g`` decomposed into the
    primitives ``y z^p Ki_q(z)`` whose derivatives are exact.  ``H`` has a
    logarithmic branch point at ``y = r``, so the development is only an
    asymptotic series; it is accurate when ``r`` is many diffuseness
    lengths outside the surface.
"""

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, RegimeWarning
from .fermi_nucleus import (SmoothFunctionBundle, fermi_profile, i_pq, sommerfeld_breakdown)
from .quadrature import combine, integrate, integrate_to_infinity
from .results import PotentialResult
from .specfun import DEFAULT_ACCURACY, bessel_k, bickley, k0_derivative_coeffs
from .uehling_point import DEFAULT_CONSTANTS, g_kernel

# g(z) = sum coef * z^p Ki_q(z) with Ki_0 = K0
G_DECOMPOSITION = {
    (0, 1): Fraction(9, 16),
    (2, 1): Fraction(1, 48),
    (1, 0): Fraction(-7, 16),
    (3, 0): Fraction(-1, 48),
    (1, 2): Fraction(19, 48),
    (3, 2): Fraction(1, 48),
}

MAX_DERIVATIVE = 25
# Sommerfeld route is used only for r beyond xi + GUARD_DIFFUSENESS * a
GUARD_DIFFUSENESS = 10.0
# beyond xi + TAIL_DIFFUSENESS * a the profile is below e^-60
TAIL_DIFFUSENESS = 60.0


@dataclass(frozen=True)
class HPrimitive:
    """``x -> x z^p Ki_q(z)`` with ``z = 2c(r + sign x)``.

    ``q = 0`` stands for ``K0``; `sign` is ``+1`` or ``-1``.
    """

    p: int
    q: int
    sign: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise DomainError("p and q must be non-negative")
        if self.sign not in (1, -1):
            raise DomainError(f"sign must be +1 or -1, got {self.sign!r}")


def _z(h, x, r, k):
    z = 2.0 * k.c * (r + h.sign * x)
    if not z > 0.0:
        if h.q == 0 or z < 0.0:
            raise DomainError(f"argument 2c(r{'+' if h.sign > 0 else '-'}x) = {z!r} must be positive")
    return z


def _ki(q, z):
    return bessel_k(0, z) if q == 0 else bickley(q, z)


def _ki_derivative(q, m, z):
    # d^m Ki_q/dz^m; Ki_q' = -Ki_{q-1}, and below q = 0 derivatives of K0
    if m <= q:
        return (-1) ** m * _ki(q - m, z)
    return (-1) ** q * k0_derivative_coeffs(m - q)(z)


def _phi_derivative(h, j, z):
    # d^j/dz^j [z^p Ki_q(z)] by Leibniz
    terms = []
    for i in range(min(j, h.p) + 1):
        falling = math.perm(h.p, i)
        terms.append(math.comb(j, i) * falling * z ** (h.p - i) * _ki_derivative(h.q, j - i, z))
    return math.fsum(terms)


def h_value(h, x, r, k=DEFAULT_CONSTANTS):
    """``x (2c(r +- x))^p Ki_q(2c(r +- x))``."""
    z = _z(h, x, r, k)
    if x == 0.0:
        return 0.0
    return x * z ** h.p * _ki(h.q, z)


def h_derivative(h, n, x, r, k=DEFAULT_CONSTANTS):
    """``d^n/dx^n`` of `h_value`.

    ``d^n [x phi(z(x))] = x phi^{(n)} + n phi^{(n-1)}`` with
    ``d/dx = (2c sign) d/dz``; ``phi^{(j)}`` expands by Leibniz over
    ``z^p`` and ``Ki_q``.
    """
    if n < 0 or n > MAX_DERIVATIVE or int(n) != n:
        raise DomainError(f"derivative order must be in 0..{MAX_DERIVATIVE}, got {n!r}")
    n = int(n)
    if n == 0:
        return h_value(h, x, r, k)
    z = _z(h, x, r, k)
    dz = 2.0 * k.c * h.sign
    out = n * dz ** (n - 1) * _phi_derivative(h, n - 1, z)
    if x != 0.0:
        out += x * dz ** n * _phi_derivative(h, n, z)
    return out


def primitive_bundle(h, r, k=DEFAULT_CONSTANTS):
    """`SmoothFunctionBundle` for a single primitive at fixed `r`.

    ``h(-y) = -y phi(2c(r - sign y))``; where that argument leaves the
    domain (``y >= r`` for the plus branch) the reflection is set to zero,
    which only matters when ``r`` is within a few diffuseness lengths of
    ``xi``.
    """
    flipped = HPrimitive(h.p, h.q, -h.sign)

    def reflected(y):
        if 2.0 * k.c * (r - h.sign * y) <= 0.0:
            return 0.0
        return -h_value(flipped, y, r, k)

    return SmoothFunctionBundle(
        value=lambda y: h_value(h, y, r, k),
        derivative=lambda m, y: h_derivative(h, m, y, r, k),
        max_order=MAX_DERIVATIVE,
        reflected=reflected,
        domain_note="" if h.sign > 0 else f"singular at y = r = {r!r}",
        scale=r,
    )


def _pairs():
    for (p, q), coef in G_DECOMPOSITION.items():
        yield p, q, float(coef)


def uehling_h_value(y, r, k=DEFAULT_CONSTANTS):
    """``H(y) = y [g(2c|r-y|) - g(2c(r+y))]`` (even in `y` for ``|y| < r``)."""
    y = abs(y)
    if y == 0.0:
        return 0.0
    return y * (g_kernel(2.0 * k.c * abs(r - y)) - g_kernel(2.0 * k.c * (r + y)))


def uehling_h_derivative(m, y, r, k=DEFAULT_CONSTANTS):
    """``H^{(m)}(y)`` for ``0 <= y < r`` from the primitive decomposition."""
    if not 0.0 <= y < r:
        raise DomainError("derivatives of H exist only for 0 <= y < r")
    terms = []
    for p, q, coef in _pairs():
        terms.append(coef * h_derivative(HPrimitive(p, q, -1), m, y, r, k))
        terms.append(-coef * h_derivative(HPrimitive(p, q, 1), m, y, r, k))
    return math.fsum(terms)


def uehling_head_integral(xi, r, k=DEFAULT_CONSTANTS):
    """``int_0^xi H(y) dy`` for ``xi < r`` through the I(p, q) recurrences.

    With ``z = 2c(r +- y)``,
    ``int_0^xi y z^p Ki_q dy = +-(1/2c) int (z/2c - r) z^p Ki_q dz``.
    """
    if not 0.0 < xi < r:
        raise DomainError("closed head integral needs 0 < xi < r")
    two_c = 2.0 * k.c
    terms = []
    for p, q, coef in _pairs():
        # minus branch, z from 2c(r - xi) to 2cr
        lo, hi = two_c * (r - xi), two_c * r
        minus = (r * i_pq(p, q, lo, hi) - i_pq(p + 1, q, lo, hi) / two_c) / two_c
        # plus branch, z from 2cr to 2c(r + xi)
        lo, hi = two_c * r, two_c * (r + xi)
        plus = (i_pq(p + 1, q, lo, hi) / two_c - r * i_pq(p, q, lo, hi)) / two_c
        terms.append(coef * minus)
        terms.append(-coef * plus)
    return math.fsum(terms)


def uehling_bundle(r, k=DEFAULT_CONSTANTS, *, closed_head=True, ctrl=DEFAULT_ACCURACY):
    """`SmoothFunctionBundle` for the Uehling ``H`` at fixed `r`.

    The residual integrals of the development need ``H(-y)``; on
    ``|y| < r`` this is ``H(y)``, and beyond it the weight ``e^{-n y/a}`` is
    below ``e^{-(xi + r)/a}``, so the even extension is used throughout.
    """
    cache = {}

    def h_cached(y):
        # the residual integrals for successive n share most nodes
        v = cache.get(y)
        if v is None:
            v = cache[y] = uehling_h_value(y, r, k)
        return v

    def residual(lam):
        f = lambda y: h_cached(y) * math.exp(-lam * y)
        head = integrate(f, 0.0, r, ctrl)
        tail = integrate_to_infinity(f, r, ctrl, scale=r)
        return combine([head, tail]).value

    head = (lambda xi: uehling_head_integral(xi, r, k)) if closed_head else None
    return SmoothFunctionBundle(
        value=lambda y: uehling_h_value(y, r, k),
        derivative=lambda m, y: uehling_h_derivative(m, y, r, k),
        max_order=MAX_DERIVATIVE,
        reflected=lambda y: uehling_h_value(y, r, k),
        domain_note=f"logarithmic branch point at y = r = {r!r}",
        head_integral=head,
        residual_integral=residual,
        scale=r,
    )


def _prefactor(r, d, k):
    return -2.0 * k.alpha ** 2 / (3.0 * r) * d.rho0


def _direct(r, d, k, ctrl):
    two_c = 2.0 * k.c

    def f(x):
        return (x * fermi_profile(x, d.xi, d.a)
                * (g_kernel(two_c * abs(r - x)) - g_kernel(two_c * (r + x))))

    cut = d.xi + TAIL_DIFFUSENESS * d.a
    points = sorted({0.0, d.xi, r, cut})
    pieces = [integrate(f, lo, hi, ctrl) for lo, hi in zip(points[:-1], points[1:])]
    pieces.append(integrate_to_infinity(f, points[-1], ctrl, scale=d.a))
    return combine(pieces)


def _sommerfeld(r, d, k, ctrl, n_max, residual_terms):
    bundle = uehling_bundle(r, k, ctrl=ctrl)
    return sommerfeld_breakdown(bundle, d.xi, d.a, n_max, residual_terms, ctrl)


def uehling_fermi(r, d, method="direct", ctrl=DEFAULT_ACCURACY, k=DEFAULT_CONSTANTS, *,
                  n_max=10, residual_terms=20, force=False, full_output=False):
    """Uehling potential of the Fermi distribution `d` at distance `r` (bohr).

    Parameters
    ----------
    r : float
        Distance, ``r > 0``.
    d : FermiDistribution
        Charge density; carries the nuclear charge.
    method : {"direct", "sommerfeld"}
    n_max, residual_terms : int
        Truncation of the Sommerfeld development.
    force : bool
        Use the Sommerfeld development even inside the guard zone
        ``r <= xi + 10a`` (still requires ``r > xi``).  For studies only.
    full_output : bool
        Return a `PotentialResult`.

    Warns
    -----
    RegimeWarning
        When the Sommerfeld route falls back to direct quadrature.
    """
    if not (r > 0.0 and math.isfinite(r)):
        raise DomainError(f"r must be positive and finite, got {r!r}")
    if method not in ("direct", "sommerfeld"):
        raise DomainError(f"unknown method {method!r}")
    pref = _prefactor(r, d, k)
    flags = ()
    if method == "sommerfeld":
        guard = d.xi + GUARD_DIFFUSENESS * d.a
        if r > guard or (force and r > d.xi):
            res = _sommerfeld(r, d, k, ctrl, n_max, residual_terms)
            # the last kept term bounds the truncation error of the series
            est = abs(pref) * (abs(res.series[-1]) + res.est_error)
            out = PotentialResult(pref * res.value, est, "sommerfeld", ())
            return out if full_output else out.value
        flags = (f"sommerfeld route needs r > xi + {GUARD_DIFFUSENESS:g}a = {guard:.6g}; "
                 f"fell back to direct at r = {r:.6g}",)
        warnings.warn(flags[0], RegimeWarning, stacklevel=2)
    res = _direct(r, d, k, ctrl)
    out = PotentialResult(pref * res.value, abs(pref) * res.est_error, "direct", flags)
    return out if full_output else out.value

