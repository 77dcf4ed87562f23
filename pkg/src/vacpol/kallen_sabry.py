r"""Källén-Sabry (two-loop) vacuum-polarization potential.

.. math::
    V_{KS}(r) = \frac{\alpha^3}{\pi^2 r}\int_0^\infty x\rho(x)
    \big[L_0(2c|r-x|) - L_0(2c(r+x))\big]\,dx,\qquad
    L_0(x) = \int_x^\infty L_1(u)\,du,\qquad
    L_1(u) = \int_1^\infty F(t)\,e^{-ut}\,dt

with `rho` normalized to ``Z``.  Exchanging the order of integration gives
``L_0(x) = int_1^inf F(t) e^{-xt}/t dt``, a single quadrature.

``F`` contains ``f(t)``, evaluated from its dilogarithm closed form

.. math::
    f(t) = \frac{2\pi^2}{3} - \ln\eta\,\ln\frac{(\eta^4-1)(\eta^2-1)}{\eta^2}
    + \mathrm{Li}_2(-\eta^{-2}) - 2\,\mathrm{Re}\,\mathrm{Li}_2(\eta^2),
    \qquad \eta = t + \sqrt{t^2-1},

where ``(eta^4 - 1)(eta^2 - 1)/eta^2 = 4 (eta^2 + 1)(t^2 - 1)`` removes the
``0 * inf`` at ``t = 1``.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from .errors import DomainError
from .fermi_nucleus import fermi_profile
from .quadrature import combine, integrate, integrate_to_infinity
from .results import PotentialResult
from .specfun import DEFAULT_ACCURACY, AccuracyControl, dilog, re_dilog
from .uehling_point import DEFAULT_CONSTANTS

PI2 = math.pi ** 2
F_AT_ONE = PI2 / 4.0
FIT_NAMES = ("a", "b", "c", "d", "e", "f")
FIT_MIN_U = 3.0


def _f_array(t):
    t = np.asarray(t, dtype=float)
    tm1 = (t - 1.0) * (t + 1.0)
    ln_eta = np.arccosh(t)
    eta2 = np.exp(2.0 * ln_eta)
    out = np.empty_like(t)
    at_one = tm1 == 0.0
    rest = ~at_one
    out[at_one] = F_AT_ONE
    if np.any(rest):
        e2 = eta2[rest]
        out[rest] = (2.0 * PI2 / 3.0
                     - ln_eta[rest] * np.log(4.0 * (e2 + 1.0) * tm1[rest])
                     + dilog(-1.0 / e2)
                     - 2.0 * re_dilog(e2))
    return out


def f_exact(t):
    """``f(t)`` for ``t >= 1`` from the dilogarithm closed form.

    ``f(1) = pi^2/4`` and ``f(t) -> 0`` as ``t -> inf``.  Accepts arrays.
    The closed form cancels at large `t` (terms of order ``ln^2 t``), so the
    absolute error grows like ``eps ln^2 t``.
    """
    if np.ndim(t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 1.0) or np.any(np.isnan(arr)):
            raise DomainError("f(t) requires t >= 1")
        return _f_array(arr)
    if not t >= 1.0:
        raise DomainError(f"f(t) requires t >= 1, got {t!r}")
    return float(_f_array(np.array([t]))[0])


def _f_integrand_near(s):
    # integrand of f in terms of s = x - 1, exact for tiny offsets
    x = 1.0 + s
    xm1 = s * (2.0 + s)
    root = np.sqrt(xm1)
    return ((3.0 * x * x - 1.0) * np.log1p(s + root) / (x * xm1)
            - np.log(8.0 * x * xm1) / root)


def _f_integrand_far(x):
    # both terms behave like 3 ln(2x)/x; with u = 1/x^2, q = sqrt(1-u) the
    # leading parts are combined by hand so only O(ln x/x^3) remains
    u = 1.0 / (x * x)
    q = np.sqrt(1.0 - u)
    lead = np.log(2.0 * x) * u * (2.0 - q) / (x * (1.0 + q) * (1.0 - u))
    delta = np.log1p(-0.5 * u / (1.0 + q))      # arccosh x - ln 2x
    return (lead + (3.0 * x * x - 1.0) / (x * (x * x - 1.0)) * delta
            - np.log1p(-u) / (x * q))


def _f_integrand_offset(s):
    s = np.asarray(s, dtype=float)
    far = s >= 1.0
    out = np.empty_like(s)
    out[~far] = _f_integrand_near(s[~far])
    out[far] = _f_integrand_far(1.0 + s[far])
    return out


def f_integral(t, ctrl=DEFAULT_ACCURACY):
    """``f(t) = int_t^inf [(3x^2-1) arccosh(x)/(x(x^2-1)) - ln(8x(x^2-1))/sqrt(x^2-1)] dx``.

    Independent of the closed form; the lower limit `t` is the reading
    under which ``f(inf) = 0`` and ``f(1)`` equals the closed-form value.
    The range is integrated in ``s = x - 1``.
    """
    if not t >= 1.0:
        raise DomainError(f"f(t) requires t >= 1, got {t!r}")
    s0 = t - 1.0
    near = integrate(_f_integrand_offset, s0, s0 + 1.0, ctrl, vectorized=True)
    far = integrate_to_infinity(_f_integrand_offset, s0 + 1.0, ctrl, scale=t, vectorized=True)
    return combine([near, far]).value


def l1_integrand(t):
    """``F(t)``, the bracket multiplying ``e^{-ut}`` in ``L1``."""
    t = np.asarray(t, dtype=float)
    tm1 = (t - 1.0) * (t + 1.0)
    s = np.sqrt(tm1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_term = np.where(tm1 > 0.0, s * np.log(8.0 * t * np.where(tm1 > 0.0, tm1, 1.0)), 0.0)
    return ((2.0 / (3.0 * t ** 5) - 8.0 / (3.0 * t)) * f_exact(t)
            + (2.0 / (3.0 * t ** 4) + 4.0 / (3.0 * t ** 2)) * log_term
            + s * (2.0 / (9.0 * t ** 6) + 7.0 / (108.0 * t ** 4) + 13.0 / (54.0 * t ** 2))
            + (2.0 / (9.0 * t ** 7) + 5.0 / (4.0 * t ** 5) + 2.0 / (3.0 * t ** 3) - 44.0 / (9.0 * t))
            * np.arccosh(t))


def _laplace(u, power, ctrl):
    # int_1^inf F(t) e^{-u t} / t^power dt, with e^{-u} factored out
    def f(t):
        return l1_integrand(t) * np.exp(-u * (t - 1.0)) / t ** power

    # F ~ ln t / t, so without the 1/t the decay length is 1/u
    scale = 1.0 / u if power == 0 else 1.0 / max(u, 0.1)
    res = integrate_to_infinity(f, 1.0, ctrl, scale=scale, vectorized=True)
    damp = math.exp(-u)
    return res.value * damp, res.est_error * damp, res.converged


def ks_l1(u, ctrl=DEFAULT_ACCURACY, *, full_output=False):
    """``L1(u) = int_1^inf F(t) e^{-ut} dt`` by quadrature, ``u > 0``.

    With `full_output` returns ``(value, est_error, converged)``.
    """
    if not u > 0.0:
        raise DomainError(f"L1(u) requires u > 0, got {u!r}")
    out = _laplace(u, 0, ctrl)
    return out if full_output else out[0]


def ks_l0_direct(x, ctrl=DEFAULT_ACCURACY, *, full_output=False):
    """``L0(x) = int_x^inf L1 = int_1^inf F(t) e^{-xt}/t dt``, ``x > 0``."""
    if not x > 0.0:
        raise DomainError(f"L0(x) requires x > 0, got {x!r}")
    out = _laplace(x, 1, ctrl)
    return out if full_output else out[0]


@dataclass(frozen=True)
class KSKernelTable:
    """``L1`` and ``L0`` sampled on a logarithmic grid.

    Between nodes ``e^u L0(u)`` is interpolated by cubic Hermite polynomials
    in ``ln u`` with the exact slopes that ``L0' = -L1`` provides.
    ``interpolation_error`` is the largest deviation from direct evaluation
    measured at grid midpoints, relative to ``|L0|``.
    """

    u_grid: np.ndarray
    l1_values: np.ndarray
    l0_values: np.ndarray
    tolerance: float
    interpolation_error: float
    ctrl: AccuracyControl
    spline: object = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        u = self.u_grid
        scaled = np.exp(u) * self.l0_values
        slope = u * (scaled - np.exp(u) * self.l1_values)
        object.__setattr__(self, "spline", CubicHermiteSpline(np.log(u), scaled, slope))

    @property
    def u_min(self):
        return float(self.u_grid[0])

    @property
    def u_max(self):
        return float(self.u_grid[-1])

    def l0(self, u):
        """``L0(u)``; outside the grid falls back to direct quadrature."""
        if self.u_min <= u <= self.u_max:
            return float(self.spline(math.log(u))) * math.exp(-u)
        return _l0_cached(float(u), self.ctrl)

    def with_error(self, err):
        return KSKernelTable(self.u_grid, self.l1_values, self.l0_values, self.tolerance,
                             err, self.ctrl)


@lru_cache(maxsize=100_000)
def _l0_cached(u, ctrl):
    return ks_l0_direct(u, ctrl)


def build_kernel_table(u_min=1e-6, u_max=80.0, per_decade=20, ctrl=AccuracyControl(rel_tol=1e-11)):
    """Sample ``L1`` and ``L0`` and measure the interpolation error."""
    if not 0.0 < u_min < u_max:
        raise DomainError("need 0 < u_min < u_max")
    n = int(math.ceil(per_decade * math.log10(u_max / u_min))) + 1
    u = np.geomspace(u_min, u_max, n)
    l1 = np.array([ks_l1(v, ctrl) for v in u])
    l0 = np.array([ks_l0_direct(v, ctrl) for v in u])
    table = KSKernelTable(u, l1, l0, ctrl.rel_tol, 0.0, ctrl)
    mids = np.sqrt(u[:-1] * u[1:])[:: max(1, len(u) // 40)]
    worst = max(abs(table.l0(m) / ks_l0_direct(m, ctrl) - 1.0) for m in mids)
    return table.with_error(float(worst))


@lru_cache(maxsize=8)
def default_kernel_table(per_decade=20):
    """Process-wide cached table on ``[1e-6, 80]``."""
    return build_kernel_table(per_decade=per_decade)


def ks_l0(x, ctrl=DEFAULT_ACCURACY, table=None):
    """``L0(x)`` through the cached kernel table (direct quadrature off-grid)."""
    if not x > 0.0:
        raise DomainError(f"L0(x) requires x > 0, got {x!r}")
    table = table or default_kernel_table()
    return table.l0(x)


def ks_potential(r, d, ctrl=DEFAULT_ACCURACY, k=DEFAULT_CONSTANTS, *, table=None,
                 full_output=False):
    """Källén-Sabry potential of the Fermi distribution `d` at `r` (bohr).

    The integrand is split at ``x = r`` where ``L0(2c|r-x|)`` has a kink.
    The error estimate adds the table's measured interpolation error.
    """
    if not (r > 0.0 and math.isfinite(r)):
        raise DomainError(f"r must be positive and finite, got {r!r}")
    table = table or default_kernel_table()
    two_c = 2.0 * k.c

    def l0(u):
        return table.l0(u) if u > 0.0 else l0_at_zero()

    def f(x):
        return x * fermi_profile(x, d.xi, d.a) * (l0(two_c * abs(r - x)) - l0(two_c * (r + x)))

    def f_abs(x):
        return x * fermi_profile(x, d.xi, d.a) * (abs(l0(two_c * abs(r - x)))
                                                  + abs(l0(two_c * (r + x))))

    cut = d.xi + 60.0 * d.a
    points = sorted({0.0, d.xi, r, cut})
    res = combine([integrate(f, lo, hi, ctrl) for lo, hi in zip(points[:-1], points[1:])]
                  + [integrate_to_infinity(f, points[-1], ctrl, scale=d.a)])
    pref = k.alpha ** 3 / (PI2 * r) * d.rho0
    # the interpolation error is relative to each L0 term separately
    loose = AccuracyControl(rel_tol=1e-4)
    scale = math.fsum([integrate(f_abs, lo, hi, loose).value for lo, hi in zip(points[:-1], points[1:])]
                      + [integrate_to_infinity(f_abs, points[-1], loose, scale=d.a).value])
    est = abs(pref) * (res.est_error + table.interpolation_error * scale)
    out = PotentialResult(pref * res.value, est, "ks_table", ())
    return out if full_output else out.value


def ks_point(r, Z=1.0, ctrl=DEFAULT_ACCURACY, k=DEFAULT_CONSTANTS):
    """Point-nucleus limit ``alpha^2 Z L1(2cr)/(pi^3 r)``."""
    if not r > 0.0:
        raise DomainError(f"r must be positive, got {r!r}")
    return k.alpha ** 2 * Z * ks_l1(2.0 * k.c * r, ctrl) / (PI2 * math.pi * r)


@lru_cache(maxsize=1)
def l0_at_zero():
    """``L0(0) = int_1^inf F(t)/t dt`` (finite)."""
    def f(t):
        return l1_integrand(t) / t

    return integrate_to_infinity(f, 1.0, AccuracyControl(rel_tol=1e-11), scale=1.0,
                                 vectorized=True).value


@dataclass(frozen=True)
class FitCoefficients:
    """Coefficients of the large-u interpolating form
    ``L1(u) = (a + b u^0.5 + c u + d u^1.5 + e u^2 + f u^2.5) e^-u / u^3.5`` (``u > 3``)."""

    a: float
    b: float
    c: float
    d: float
    e: float
    f: float

    def l1(self, u):
        if not u > FIT_MIN_U:
            raise DomainError(f"the fit form applies only for u > {FIT_MIN_U}")
        s = math.sqrt(u)
        poly = self.a + s * (self.b + s * (self.c + s * (self.d + s * (self.e + s * self.f))))
        return poly * math.exp(-u) / u ** 3.5

    def l0(self, u, ctrl=DEFAULT_ACCURACY):
        """``int_u^inf`` of the fit, so that ``L0 -> 0`` at infinity."""
        return integrate_to_infinity(self.l1, u, ctrl, scale=1.0).value


def load_fit_coefficients(path):
    """Read ``name=value`` lines (names a..f) into `FitCoefficients`.

    Blank lines and lines starting with ``#`` are skipped.
    """
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            name, sep, val = line.partition("=")
            name = name.strip()
            if not sep or name not in FIT_NAMES:
                raise DomainError(f"{path}:{lineno}: expected one of {FIT_NAMES} as name=value")
            try:
                values[name] = float(val)
            except ValueError:
                raise DomainError(f"{path}:{lineno}: {val.strip()!r} is not a number") from None
    missing = [n for n in FIT_NAMES if n not in values]
    if missing:
        raise DomainError(f"{path}: missing coefficients {missing}")
    return FitCoefficients(**values)
