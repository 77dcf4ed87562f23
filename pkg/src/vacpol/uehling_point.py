r"""Uehling potential of a point nucleus.

The potential is

.. math::
    \delta V(r) = -\frac{2\alpha Z}{3\pi r} U(2cr),\qquad
    U(z) = \int_1^\infty \sqrt{t^2-1}\Big(\frac{1}{t^2}+\frac{1}{2t^4}\Big)e^{-zt}\,dt

and the finite-nucleus kernel is ``g = -U'``,

.. math::
    g(z) = \int_1^\infty \sqrt{t^2-1}\Big(\frac{1}{t^3}+\frac{1}{2t^5}\Big)e^{-zt}\,dt .

With ``t = cosh u`` both become finite sums of Bickley functions:
``U = K0 - Ki2/2 - Ki4/2`` and ``g = Ki1 - Ki3/2 - Ki5/2``.  Two further
closed forms of `g` follow from ``Ki_{n+1}`` recurrences.  The quadrature
route integrates the defining integrals directly and is the arbiter.
"""

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, RegimeWarning
from .quadrature import integrate, integrate_to_infinity
from .results import PotentialResult
from .specfun import DEFAULT_ACCURACY, EULER_GAMMA, bessel_k, bickley, e1

G_AT_ZERO = 9.0 * math.pi / 32.0
_EPS = np.finfo(float).eps

# validity limits of the two asymptotic regimes, in units of cr
SMALL_R_LIMIT = 0.1
LARGE_R_LIMIT = 5.0


@dataclass(frozen=True)
class PhysicalConstants:
    """Fine-structure constant and speed of light in atomic units.

    ``c`` is stored as ``1/alpha``; for the default value the product
    ``alpha * c`` is exactly 1.0 in double precision.
    """

    alpha: float = 7.2973525693e-3
    c: float = field(init=False)

    def __post_init__(self):
        if not self.alpha > 0.0:
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        object.__setattr__(self, "c", 1.0 / self.alpha)


DEFAULT_CONSTANTS = PhysicalConstants()


class GForm(enum.Enum):
    """Route used to evaluate `g_kernel`."""

    KI135 = "ki135"
    K0_KI1_KI2 = "k0_ki1_ki2"
    K0_K1_KI1 = "k0_k1_ki1"
    QUADRATURE = "quadrature"


class Method(enum.Enum):
    """Evaluation route for `uehling_point`."""

    QUADRATURE = "quadrature"
    BICKLEY = "bickley"
    MEZO = "mezo"
    ASYMPTOTIC_SMALL = "asymptotic_small"
    ASYMPTOTIC_LARGE = "asymptotic_large"
    PYYKKO_FIT = "pyykko_fit"


def _g_integrand(z):
    def f(t):
        s = np.sqrt((t - 1.0) * (t + 1.0))
        return s * (1.0 / t ** 3 + 0.5 / t ** 5) * np.exp(-z * (t - 1.0))
    return f


def _u_integrand(z):
    def f(t):
        s = np.sqrt((t - 1.0) * (t + 1.0))
        return s * (1.0 / t ** 2 + 0.5 / t ** 4) * np.exp(-z * (t - 1.0))
    return f


def _scaled_tail(integrand, z, ctrl):
    # integrand carries e^{-z(t-1)}; the e^{-z} is restored afterwards
    scale = 1.0 / z if z > 0.0 else 1.0
    res = integrate_to_infinity(integrand, 1.0, ctrl, scale=scale, vectorized=True)
    damp = math.exp(-z)
    return res.value * damp, res.est_error * damp, res.converged


def g_quadrature(z, ctrl=DEFAULT_ACCURACY):
    """``g(z)`` and its error estimate by direct quadrature of the definition."""
    if z < 0.0:
        raise DomainError(f"g(z) requires z >= 0, got {z!r}")
    value, err, _ = _scaled_tail(_g_integrand(z), z, ctrl)
    return value, err


def g_kernel(z, form=GForm.KI135, ctrl=DEFAULT_ACCURACY):
    """Finite-nucleus Uehling kernel ``g(z)``.

    Parameters
    ----------
    z : float
        Non-negative argument.
    form : GForm
        ``KI135``: ``Ki1 - Ki3/2 - Ki5/2``.
        ``K0_KI1_KI2``: ``(9/16 + z^2/48) Ki1 - (7z/16 + z^3/48) K0 + (19z/48 + z^3/48) Ki2``.
        ``K0_K1_KI1``: ``-(21z + z^3)/48 K0 + (19z^2 + z^4)/48 K1 + (27 - 18z^2 - z^4)/48 Ki1``.
        ``QUADRATURE``: the defining integral.

    Notes
    -----
    The last two forms cancel at large `z`; relative accuracy degrades to
    about ``1e-12`` (second form) and ``1e-11`` (third form) at ``z = 20``.
    ``g(0) = 9 pi/32`` for every form.
    """
    if not isinstance(form, GForm):
        form = GForm(form)
    if z < 0.0 or math.isnan(z):
        raise DomainError(f"g(z) requires z >= 0, got {z!r}")
    if form is GForm.QUADRATURE:
        return g_quadrature(z, ctrl)[0]
    if form is GForm.KI135:
        return bickley(1, z, ctrl) - 0.5 * bickley(3, z, ctrl) - 0.5 * bickley(5, z, ctrl)
    if z == 0.0:
        return G_AT_ZERO
    z2 = z * z
    if form is GForm.K0_KI1_KI2:
        return math.fsum([
            (9.0 / 16.0 + z2 / 48.0) * bickley(1, z, ctrl),
            -(7.0 * z / 16.0 + z * z2 / 48.0) * bessel_k(0, z),
            (19.0 * z / 48.0 + z * z2 / 48.0) * bickley(2, z, ctrl),
        ])
    return math.fsum([
        -(21.0 * z + z * z2) / 48.0 * bessel_k(0, z),
        (19.0 * z2 + z2 * z2) / 48.0 * bessel_k(1, z),
        (27.0 - 18.0 * z2 - z2 * z2) / 48.0 * bickley(1, z, ctrl),
    ])


def g_kernel_printed(z, form):
    """The three closed forms of `g` exactly as they appear in the source
    derivation, before correction.  Kept only to measure how far each
    misprint is from the quadrature value."""
    if not isinstance(form, GForm):
        form = GForm(form)
    z2 = z * z
    if form is GForm.KI135:
        return -bickley(1, z) + 0.5 * bickley(3, z) + 0.5 * bickley(5, z)
    if form is GForm.K0_KI1_KI2:
        return ((7.0 / 16.0 + z2 / 48.0) * bessel_k(0, z)
                - (9.0 / 16.0 + z2 / 48.0) * bickley(1, z)
                - (19.0 * z / 48.0 + z * z2 / 48.0) * bickley(2, z))
    if form is GForm.K0_K1_KI1:
        return ((21.0 + z2 + 48.0) / 48.0 * bessel_k(0, z)
                - (19.0 * z2 + z2 * z2) / 48.0 * bessel_k(1, z)
                - (27.0 - 18.0 * z2 - z2 * z2) / 48.0 * bickley(1, z))
    raise DomainError("no printed variant of the quadrature form")


def point_kernel_U(z, ctrl=DEFAULT_ACCURACY):
    """``U(z) = K0(z) - Ki2(z)/2 - Ki4(z)/2``, the point-nucleus kernel.

    Diverges like ``ln(2/z) - gamma_E - 5/6`` as ``z -> 0``.
    """
    if not z > 0.0:
        raise DomainError(f"U(z) requires z > 0, got {z!r}")
    return bessel_k(0, z) - 0.5 * bickley(2, z, ctrl) - 0.5 * bickley(4, z, ctrl)


def point_kernel_U_quadrature(z, ctrl=DEFAULT_ACCURACY):
    """``U(z)`` and its error estimate from the defining integral."""
    if not z > 0.0:
        raise DomainError(f"U(z) requires z > 0, got {z!r}")
    value, err, _ = _scaled_tail(_u_integrand(z), z, ctrl)
    return value, err


def mezo_kernel(w, ctrl=DEFAULT_ACCURACY):
    """``6 int_0^1 x(1-x) E1(w / sqrt(x(1-x))) dx``, which equals ``U(2w)``.

    The hyperbolic sine/cosine-integral form of the potential is reduced
    with ``Shi - Chi = E1`` so no exponentially large terms are formed.
    The integrand is symmetric about ``x = 1/2``.
    """
    if not w > 0.0:
        raise DomainError(f"w must be positive, got {w!r}")

    def f(x):
        q = x * (1.0 - x)
        return q * e1(w / np.sqrt(q))

    res = integrate(f, 0.0, 0.5, ctrl, vectorized=True)
    return 12.0 * res.value, 12.0 * res.est_error


def pyykko_fit(r, Z, k=DEFAULT_CONSTANTS, c1=2.0 / (3.0 * math.pi)):
    """Two-parameter interpolating fit of the point Uehling potential.

    ``-(alpha Z / r) [ e^{-d1 r^2} c1 (ln(alpha/r) - c2)
    + (1 - e^{-d1 r^2})/c3 * e^{-2r/alpha} / (d2 (r/alpha)^0.5 + (r/alpha)^1.5) ]``

    with ``c2 = 5/6 + gamma_E``, ``c3 = 4 sqrt(pi)``, ``d1 = 0.678e7`` and
    ``d2 = 1.4302``.  The logarithm is ``ln(alpha/r) = ln(1/(cr))`` so that
    the first term reproduces the small-r law; `c1` defaults to ``2/(3 pi)``.
    """
    if not r > 0.0:
        raise DomainError(f"r must be positive, got {r!r}")
    c2 = 5.0 / 6.0 + EULER_GAMMA
    c3 = 4.0 * math.sqrt(math.pi)
    s = r / k.alpha
    damp = math.exp(-PYYKKO_D1 * r * r)
    near = damp * c1 * (math.log(k.alpha / r) - c2)
    far = (-math.expm1(-PYYKKO_D1 * r * r)) / c3 * math.exp(-2.0 * s) / (PYYKKO_D2 * math.sqrt(s) + s ** 1.5)
    return -k.alpha * Z / r * (near + far)


PYYKKO_D1 = 0.678e7
PYYKKO_D2 = 1.4302
PYYKKO_C1_PRINTED = 2.0 / (2.0 * math.pi)


def small_r_asymptote(r, Z, k=DEFAULT_CONSTANTS):
    """Leading small-r law ``-(2 alpha Z/(3 pi r)) (ln(1/(cr)) - gamma_E - 5/6)``."""
    return -2.0 * k.alpha * Z / (3.0 * math.pi * r) * (
        -math.log(k.c * r) - EULER_GAMMA - 5.0 / 6.0)


def large_r_asymptote(r, Z, k=DEFAULT_CONSTANTS):
    """Leading large-r law ``-(alpha Z/(4 sqrt(pi) r)) e^{-2cr}/(cr)^{3/2}``."""
    cr = k.c * r
    return -k.alpha * Z / (4.0 * math.sqrt(math.pi) * r) * math.exp(-2.0 * cr) / cr ** 1.5


def uehling_point(r, Z=1.0, method=Method.BICKLEY, k=DEFAULT_CONSTANTS,
                  ctrl=DEFAULT_ACCURACY, *, full_output=False):
    """Uehling potential of a point charge `Z` at distance `r` (bohr).

    Parameters
    ----------
    r : float
        Distance in bohr, ``r > 0``.
    Z : float
        Nuclear charge.
    method : Method or str
        ``quadrature``, ``bickley`` and ``mezo`` are exact routes;
        ``asymptotic_small`` (valid for ``cr < 0.1``), ``asymptotic_large``
        (``cr > 5``) and ``pyykko_fit`` are approximations.
    full_output : bool
        Return a `PotentialResult` instead of a float.

    Warns
    -----
    RegimeWarning
        When an asymptotic law is used outside its regime.  The warning is
        also recorded in ``PotentialResult.flags``.
    """
    if not isinstance(method, Method):
        method = Method(method)
    if not r > 0.0 or math.isinf(r):
        raise DomainError(f"r must be positive and finite, got {r!r}")
    if not Z > 0.0:
        raise DomainError(f"Z must be positive, got {Z!r}")
    cr = k.c * r
    pref = -2.0 * k.alpha * Z / (3.0 * math.pi * r)
    flags = ()
    if method is Method.QUADRATURE:
        u, err = point_kernel_U_quadrature(2.0 * cr, ctrl)
        value, est = pref * u, abs(pref) * err
    elif method is Method.BICKLEY:
        u = point_kernel_U(2.0 * cr, ctrl)
        value = pref * u
        # K0 and the two Bickley terms partly cancel at large z
        scale = bessel_k(0, 2.0 * cr)
        est = abs(pref) * max(ctrl.rel_tol, 16 * _EPS) * scale
    elif method is Method.MEZO:
        u, err = mezo_kernel(cr, ctrl)
        value, est = pref * u, abs(pref) * err
    elif method is Method.ASYMPTOTIC_SMALL:
        value, est = small_r_asymptote(r, Z, k), 0.0
        if cr > SMALL_R_LIMIT:
            flags = (f"asymptotic_small used at cr={cr:.6g} > {SMALL_R_LIMIT}",)
    elif method is Method.ASYMPTOTIC_LARGE:
        value, est = large_r_asymptote(r, Z, k), 0.0
        if cr < LARGE_R_LIMIT:
            flags = (f"asymptotic_large used at cr={cr:.6g} < {LARGE_R_LIMIT}",)
    else:
        value, est = pyykko_fit(r, Z, k), 0.0
    for msg in flags:
        warnings.warn(msg, RegimeWarning, stacklevel=2)
    if full_output:
        return PotentialResult(float(value), float(est), method.value, flags)
    return float(value)
