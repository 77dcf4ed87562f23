"""Self-verification: property checks, oracle comparisons and a misprint
report.

Every closed form in the package is compared with an independent route,
usually adaptive quadrature of the defining integral.  `run_suite`
returns a `VerifyReport`; its exit code is 0 only if every check passes.

The misprint section evaluates formulas exactly as they were printed in
the source derivation next to their corrected versions, both measured
against the same oracle, so each correction is shown to be forced.
"""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kallen_sabry as ks
from . import uehling_fermi as uf
from . import uehling_point as up
from .errors import DomainError
from .fermi_nucleus import (fermi_moment, fermi_profile, i_pq, l_npq,
                            make_fermi, moment_closed, polynomial_bundle, power_exp_integral,
                            sommerfeld_breakdown, sommerfeld_coefficient)
from .quadrature import combine, integrate, integrate_to_infinity
from .specfun import (EULER_GAMMA, AccuracyControl, bessel_k, bickley, bickley_asymptotic,
                      bickley_regime, bickley_series, bickley_trapezoid, dilog, e1,
                      e1_derivative, harmonic_phi, k0_derivative, k0_derivative_coeffs,
                      polylog_neg_exp, re_dilog, shi_chi, upper_gamma, zeta_even)
from .specfun.bickley import gamma_half

SUITES = ("specfun", "uehling", "fermi", "ks", "all")
G0 = 9.0 * math.pi / 32.0
PHYS_Z = 82.0
_TIGHT = AccuracyControl(rel_tol=1e-13)


@dataclass(frozen=True)
class Check:
    """One verified statement.

    ``passed`` is ``measured <= threshold`` (after tolerance scaling).
    Pure measurements use an infinite threshold.
    """

    suite: str
    name: str
    measured: float
    threshold: float
    passed: bool
    note: str = ""

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        thr = "report" if math.isinf(self.threshold) else f"<= {self.threshold:.3g}"
        tail = f"  ({self.note})" if self.note else ""
        return f"{tag}  [{self.suite}] {self.name}: {self.measured:.3e} {thr}{tail}"


@dataclass(frozen=True)
class Misprint:
    """A printed formula, its correction, and their deviations from the oracle."""

    name: str
    printed: str
    corrected: str
    printed_deviation: float
    corrected_deviation: float
    tolerance: float

    @property
    def passed(self):
        # the correction must agree and the printed form must visibly not
        return (self.corrected_deviation <= self.tolerance
                and self.printed_deviation > 100.0 * self.tolerance)

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag}  [misprint] {self.name}: printed {self.printed_deviation:.3e}, "
                f"corrected {self.corrected_deviation:.3e} (tol {self.tolerance:.1e})\n"
                f"        printed:   {self.printed}\n"
                f"        corrected: {self.corrected}")


@dataclass
class VerifyReport:
    suite: str
    tol_scale: float
    checks: list = field(default_factory=list)
    misprints: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks) and all(m.passed for m in self.misprints)

    @property
    def exit_code(self):
        return 0 if self.passed else 1

    def failures(self):
        return ([c for c in self.checks if not c.passed]
                + [m for m in self.misprints if not m.passed])

    def render(self):
        out = [f"vacpol verify suite={self.suite} tol_scale={self.tol_scale:g}"]
        out += [c.line() for c in self.checks]
        if self.misprints:
            out.append("misprint ledger (deviation from the quadrature oracle):")
            out += [m.line() for m in self.misprints]
        n_fail = len(self.failures())
        n_all = len(self.checks) + len(self.misprints)
        out.append(f"summary: {n_all - n_fail}/{n_all} passed, {n_fail} failed "
                   f"in {self.seconds:.1f} s")
        return "\n".join(out) + "\n"


class _Collector:
    def __init__(self, suite, scale):
        self.suite, self.scale, self.items = suite, scale, []

    def add(self, name, measured, threshold, note=""):
        thr = threshold * self.scale if math.isfinite(threshold) else threshold
        measured = float(measured)
        ok = bool(measured <= thr) if math.isfinite(measured) else False
        self.items.append(Check(self.suite, name, measured, thr, ok, note))

    def report(self, name, measured, note=""):
        self.add(name, measured, math.inf, note)


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0.0 else abs(a)


def _fd(f, x, h):
    return (f(x + h) - f(x - h)) / (2.0 * h)


def _fermi_oracle(h, d, upper=None):
    """``int_0^upper f(y) h(y) dy`` by quadrature (``upper=None`` means infinity)."""
    def f(y):
        return h(y) * fermi_profile(y, d.xi, d.a)

    pts = [0.0, d.xi, d.xi + 60.0 * d.a] if upper is None else [0.0, d.xi, upper]
    parts = [integrate(f, lo, hi, _TIGHT) for lo, hi in zip(pts[:-1], pts[1:])]
    if upper is None:
        parts.append(integrate_to_infinity(f, pts[-1], _TIGHT, scale=d.a))
    return combine(parts).value


# ---------------------------------------------------------------- specfun

def _sech_integrand(n, z):
    # e^{-z(cosh t - 1)} sech^n t; cosh overflows harmlessly to inf far out
    def f(t):
        with np.errstate(over="ignore"):
            ch = np.cosh(t)
            return np.exp(-z * (ch - 1.0)) / ch ** n
    return f


def _ki_quadrature(n, z):
    res = integrate_to_infinity(_sech_integrand(n, z), 0.0, _TIGHT,
                                scale=1.0 / math.sqrt(max(z, 1e-3)), vectorized=True)
    return res.value * math.exp(-z)


def _suite_specfun(c):
    z = 1e-8
    c.add("K0(z) + ln(z/2) + gamma_E at z=1e-8", abs(bessel_k(0, z) + math.log(z / 2) + EULER_GAMMA), 1e-12)
    c.add("z K1(z) - 1 at z=1e-8", abs(z * bessel_k(1, z) - 1.0), 1e-12)
    c.add("K0(1) vs quadrature of exp(-cosh t)", _rel(bessel_k(0, 1.0), _ki_quadrature(0, 1.0)), 1e-11)

    exact = {1: math.pi / 2, 2: 1.0, 3: math.pi / 4, 4: 2.0 / 3.0}
    c.add("Ki_n(0) for n=1..4 (pi/2, 1, pi/4, 2/3)",
          max(_rel(bickley(n, 0.0), v) for n, v in exact.items()), 1e-15)
    c.add("Ki_5(1) vs quadrature", _rel(bickley(5, 1.0), _ki_quadrature(5, 1.0)), 1e-11)

    worst = 0.0
    for n in range(3, 9):
        for z in (0.1, 1.0, 10.0):
            res = ((n - 1) * bickley(n, z) - (n - 2) * bickley(n - 2, z)
                   - z * (bickley(n - 3, z) - bickley(n - 1, z)))
            worst = max(worst, abs(res) / bickley(n, z))
    c.add("Bickley recursion residual, n=3..8, z in {0.1,1,10}", worst, 1e-10)

    zs = np.geomspace(1e-3, 30.0, 30)
    c.add("Ki_2(z) = z (K1(z) - Ki_1(z)) on [1e-3, 30]",
          max(_rel(z * (bessel_k(1, z) - bickley(1, z)), bickley(2, z)) for z in zs), 1e-10)

    worst = 0.0
    for n in range(5):
        lhs = bickley(n + 1, 0.5) - bickley(n + 1, 3.0)
        rhs = integrate(lambda y, n=n: bickley(n, y), 0.5, 3.0, _TIGHT).value
        worst = max(worst, _rel(lhs, rhs))
    c.add("Ki_{n+1}(a) - Ki_{n+1}(b) = int_a^b Ki_n, n=0..4", worst, 1e-10)

    worst = 0.0
    for n in range(1, 9):
        worst = max(worst, _rel(bickley_series(n, 2.0), bickley_trapezoid(n, 2.0)))
        zc = next(z for z in np.arange(15.0, 400.0, 1.0) if bickley_regime(n, z) == "asymptotic")
        worst = max(worst, _rel(bickley_asymptotic(n, zc)[0], bickley_trapezoid(n, zc)))
    c.add("Bickley regime overlap (series|trapezoid, asymptotic|trapezoid)", worst, 1e-10)

    c.add("e1(z) + gamma_E + ln z at z=1e-10", abs(e1(1e-10) + EULER_GAMMA + math.log(1e-10)), 1e-9)
    z = 500.0
    c.add("z e^z E1(z) - 1 at z=500 (first correction 1/z)", abs(e1(z) * z * math.exp(z) - 1.0), 1.01 / z)
    e1_quad = integrate_to_infinity(lambda t: math.exp(-2.0 * (t - 1.0)) / t, 1.0, _TIGHT,
                                    scale=0.5).value * math.exp(-2.0)
    c.add("E1(2) vs quadrature", _rel(e1(2.0), e1_quad), 1e-12)

    worst = 0.0
    for n in range(1, 5):
        prev = e1 if n == 1 else (lambda x, n=n: e1_derivative(n - 1, x))
        worst = max(worst, _rel(e1_derivative(n, 1.5), _fd(prev, 1.5, 1e-4)))
    c.add("E1 derivatives vs finite differences, n=1..4", worst, 1e-6)
    z = 1.3
    c.add("E1'' = e^-z (1+z)/z^2", _rel(e1_derivative(2, z), math.exp(-z) * (1 + z) / z ** 2), 1e-14)

    g_quad = integrate_to_infinity(lambda t: t * t * math.exp(-(t - 1.0)), 1.0, _TIGHT).value / math.e
    c.add("Gamma(3, 1) vs quadrature; Gamma(4, 0) = 6",
          max(_rel(upper_gamma(3, 1.0), g_quad), _rel(upper_gamma(4, 0.0), 6.0)), 1e-12)
    c.add("Phi(1)=0, Phi(2)=1, Phi(4)=11/6",
          max(abs(harmonic_phi(1)), abs(harmonic_phi(2) - 1), abs(harmonic_phi(4) - 11 / 6)), 1e-15)

    w = 2.293
    direct = math.fsum((-math.exp(-w)) ** q / q ** 3 for q in range(1, 80))
    c.add("Li_s(-e^-w): s=1,2 at w=0 and s=3 at w=2.293 vs partial sums",
          max(_rel(polylog_neg_exp(1, 0.0), -math.log(2)),
              _rel(polylog_neg_exp(2, 0.0), -math.pi ** 2 / 12),
              _rel(polylog_neg_exp(3, w), direct)), 1e-13)
    pv = combine([integrate(lambda t: -math.log(abs(1.0 - 4.0 * t)) / t, lo, hi, _TIGHT)
                  for lo, hi in ((0.0, 0.25), (0.25, 1.0))]).value
    c.add("Li2(1), Li2(-1) and Re Li2(4) vs principal-value quadrature",
          max(_rel(dilog(1.0), math.pi ** 2 / 6), _rel(dilog(-1.0), -math.pi ** 2 / 12),
              _rel(re_dilog(4.0), pv)), 1e-11)

    s, ch = shi_chi(1e-6)
    c.add("Shi(z)/z -> 1 and Chi(z) - gamma_E - ln z -> 0 at z=1e-6",
          max(abs(s / 1e-6 - 1), abs(ch - EULER_GAMMA - math.log(1e-6))), 1e-11)
    zs = np.geomspace(0.01, 30.0, 40)
    dev = [_rel(shi_chi(z)[0] - shi_chi(z)[1], e1(z)) for z in zs]
    limit = max(z for z, v in zip(zs, dev) if v <= 1e-11)
    c.add("Shi - Chi = E1 on [0.01, 30]", max(dev), 1e-11,
          note=f"holds up to z={limit:.2f}; beyond, the two ~e^z/2z terms cancel below double precision")

    worst = 0.0
    for k in range(1, 7):
        worst = max(worst, _rel(k0_derivative(k, 1.7), _fd(lambda x, k=k: k0_derivative(k - 1, x), 1.7, 1e-4)))
    c.add("d^k K0/dz^k expansion vs finite differences, k=1..6", worst, 1e-6)
    ok = (k0_derivative_coeffs(0).coeffs == {0: 1} and k0_derivative_coeffs(1).coeffs == {1: -1}
          and k0_derivative_coeffs(2).coeffs == {0: 0.5, 2: 0.5})
    c.add("K0 derivative coefficients for k=0,1,2", 0.0 if ok else 1.0, 0.0)


# ---------------------------------------------------------------- uehling

def _suite_uehling(c, k=up.DEFAULT_CONSTANTS):
    forms = list(up.GForm)
    for form in forms:
        c.add(f"g(0) [{form.value}] vs 9 pi/32 = {G0:.10f}", abs(up.g_kernel(0.0, form) - G0), 1e-11,
              note=f"measured {up.g_kernel(0.0, form):.12f}")

    zs = np.geomspace(1e-3, 30.0, 50)
    worst = 0.0
    for z in zs:
        vals = [up.g_kernel(float(z), f) for f in forms]
        worst = max(worst, (max(vals) - min(vals)) / abs(vals[-1]))
    c.add("g forms pairwise agreement on 50 z in [1e-3, 30]", worst, 1e-9)

    vals = [up.g_kernel(float(z)) for z in np.concatenate([[0.0], zs])]
    bad = sum(1 for a, b in zip(vals, vals[1:]) if not b < a) + sum(1 for v in vals if not v > 0)
    c.add("g positive and strictly decreasing (violations)", bad, 0.0)
    z = 1e-4
    c.add("g(z) - 9pi/32 - z ln z relative to z ln z at z=1e-4",
          abs(up.g_kernel(z) - G0 - z * math.log(z)) / abs(z * math.log(z)), 0.5)
    z = 1e-6
    c.add("U(z) - ln(2/z) + gamma_E + 5/6 at z=1e-6",
          abs(up.point_kernel_U(z) - math.log(2 / z) + EULER_GAMMA + 5 / 6), 1e-5)
    c.add("U(1) vs quadrature", _rel(up.point_kernel_U(1.0), up.point_kernel_U_quadrature(1.0, _TIGHT)[0]),
          1e-10)

    worst = 0.0
    for cr in (1e-3, 0.1, 1.0, 10.0):
        r = cr / k.c
        v = [up.uehling_point(r, 1.0, m) for m in (up.Method.QUADRATURE, up.Method.BICKLEY, up.Method.MEZO)]
        worst = max(worst, (max(v) - min(v)) / abs(v[1]))
    c.add("point potential: quadrature, Bickley and E1 routes, cr in {1e-3,0.1,1,10}", worst, 1e-8)

    for cr, tol in ((1e-4, 1e-2), (1e-6, 1e-3)):
        r = cr / k.c
        c.add(f"small-r law ratio at cr={cr:g}",
              abs(up.uehling_point(r) / up.small_r_asymptote(r, 1.0) - 1.0), tol)
    for cr, tol in ((10.0, 0.15), (20.0, 0.08)):
        r = cr / k.c
        ratio = up.uehling_point(r, 1.0, up.Method.QUADRATURE) / up.large_r_asymptote(r, 1.0)
        c.add(f"large-r law |ratio - 1| at cr={cr:g}", abs(ratio - 1.0), tol,
              note="first correction to the ratio is -29/(16 cr); the 0.08 bound is"
                   " first met near cr = 21" if cr == 20.0 else "")

    r = 0.3 / k.c
    per_z = [up.uehling_point(r, Z) / Z for Z in (1.0, 7.5, 82.0)]
    c.add("linear in Z", (max(per_z) - min(per_z)) / abs(per_z[0]), 4e-16)
    neg = sum(1 for cr in np.geomspace(1e-6, 40.0, 25) if not up.uehling_point(cr / k.c) < 0.0)
    c.add("dV < 0 for all r (violations)", neg, 0.0)

    c.add("fit constants stored as printed (d1=0.678e7, d2=1.4302)",
          abs(up.PYYKKO_D1 - 0.678e7) + abs(up.PYYKKO_D2 - 1.4302), 0.0)
    r = 1e-5 / k.c
    c.add("fit / small-r law at cr=1e-5", abs(up.pyykko_fit(r, 1.0) / up.small_r_asymptote(r, 1.0) - 1), 0.05)


# ---------------------------------------------------------------- fermi

def _suite_fermi(c, k=up.DEFAULT_CONSTANTS):
    d = make_fermi(PHYS_Z)
    m2 = fermi_moment(d, 2, "quadrature", _TIGHT)
    c.add("4 pi rho0 int x^2 f = Z (quadrature)", _rel(4 * math.pi * d.rho0 * m2, PHYS_Z), 1e-10)
    c.add("moments k=0..8: closed form vs quadrature",
          max(_rel(fermi_moment(d, j), fermi_moment(d, j, "quadrature", _TIGHT)) for j in range(9)), 1e-10)
    c.add("moment(2) = xi^3 N / 3", _rel(fermi_moment(d, 2), d.xi ** 3 * d.N / 3), 1e-12)

    worst = 0.0
    for deg in range(6):
        coeffs = [(-0.7) ** j / d.xi ** j for j in range(deg + 1)]
        b = polynomial_bundle(coeffs)
        val = sommerfeld_breakdown(b, d.xi, d.a).value
        worst = max(worst, _rel(val, _fermi_oracle(lambda y: float(b.value(y)), d)))
    r = 20.0 * d.xi
    for (p, q) in sorted(uf.G_DECOMPOSITION):
        for sign in (1, -1):
            h = uf.HPrimitive(p, q, sign)
            val = sommerfeld_breakdown(uf.primitive_bundle(h, r, k), d.xi, d.a).value
            ref = _fermi_oracle(lambda y, h=h: uf.h_value(h, y, r, k), d, None if sign > 0 else r)
            worst = max(worst, _rel(val, ref))
    c.add("Sommerfeld development vs quadrature (polynomials deg<=5, H[p,q] at r=20 xi)", worst, 1e-6)

    res = sommerfeld_breakdown(uf.uehling_bundle(r, k), d.xi, d.a, n_max=10)
    direct = _fermi_oracle(lambda y: uf.uehling_h_value(y, r, k), d)
    sums = res.partial_sums()
    stable = next(i + 1 for i in range(len(sums))
                  if all(abs(s - res.value) <= 0.01 * abs(res.value) for s in sums[i:]))
    c.add("Uehling H at r=20 xi: series terms needed for 1% stability", stable, 10)
    c.add("Uehling H at r=20 xi: development (with residual) vs quadrature", _rel(res.value, direct), 1e-6)
    c.report("residual term |R| / |total| at physical xi/a", abs(res.residual / res.value),
             note=f"xi/a = {d.xi / d.a:.4f}; without R the error would be {_rel(res.value - res.residual, direct):.2e}")

    worst_i = worst_l = 0.0
    for gamma, delta in ((0.5, 3.0), (1.0, 10.0)):
        for p in range(7):
            for q in range(7 - p):
                ref_i = integrate(lambda y: y ** p * bickley(q, y), gamma, delta, _TIGHT).value
                worst_i = max(worst_i, _rel(i_pq(p, q, gamma, delta), ref_i))
                ref_l = integrate(lambda y: y ** p * math.exp(-2.0 * y) * bickley(q, y), gamma, delta,
                                  _TIGHT).value
                worst_l = max(worst_l, _rel(l_npq(p, q, 2.0, gamma, delta), ref_l))
    c.add("I(p,q) recurrence vs quadrature, p+q<=6, two intervals", worst_i, 1e-9)
    c.add("L(p,q) recurrence (lambda=2) vs quadrature, p+q<=6, two intervals", worst_l, 1e-9)
    c.add("int y^k e^{-lam y} via Gamma(k+1, .) vs quadrature, k=0..4",
          max(_rel(power_exp_integral(j, 1.7, 0.5, 3.0),
                   integrate(lambda y: y ** j * math.exp(-1.7 * y), 0.5, 3.0, _TIGHT).value)
              for j in range(5)), 1e-12)

    # finite nucleus potential
    sixteen = []
    for r_fac in (5.0,):
        r5 = r_fac * d.xi
        v_dir = uf.uehling_fermi(r5, d, "direct")
        v_som = uf.uehling_fermi(r5, d, "sommerfeld", force=True)
        sixteen.append(_rel(v_som, v_dir))
    c.add("direct vs Sommerfeld at r=5 xi, Z=82", sixteen[0], 1e-5,
          note=f"r=5 xi lies inside xi+10a={(d.xi + uf.GUARD_DIFFUSENESS * d.a) / d.xi:.2f} xi where"
               " the log branch point at y=r spoils the derivative series")
    r10 = 10.0 * d.xi
    c.add("direct vs Sommerfeld at r=10 xi, Z=82",
          _rel(uf.uehling_fermi(r10, d, "sommerfeld"), uf.uehling_fermi(r10, d)), 1e-5)
    v8 = uf.uehling_fermi(r10, d, "sommerfeld", n_max=8)
    v12 = uf.uehling_fermi(r10, d, "sommerfeld", n_max=12)
    c.add("Sommerfeld n_max 8 -> 12 change at r=10 xi", _rel(v12, v8), 1e-5)

    rfar = 1000.0 * d.xi
    point = up.uehling_point(rfar, PHYS_Z)
    dev = _rel(uf.uehling_fermi(rfar, d), point)
    c.add("point-charge limit at r=1000 xi", dev, 1e-6,
          note="physical finite-size shift ~ (2c)^2 <x^2>/6 at this xi")
    devs = []
    for shrink in (10.0, 100.0):
        ds = make_fermi(PHYS_Z, d.xi / shrink, d.a / shrink)
        devs.append(_rel(uf.uehling_fermi(rfar, ds), point))
    c.add("point-charge limit at r=1000 xi with xi, a scaled by 1/100", devs[1], 1e-6)
    c.add("finite-size shift scales as xi^2 (|ratio/100 - 1| for xi/10)", abs(dev / devs[0] / 100 - 1), 0.05)

    worst = 0.0
    rr = 3.0 * d.xi
    for (p, q) in sorted(uf.G_DECOMPOSITION):
        for sign in (1, -1):
            h = uf.HPrimitive(p, q, sign)
            for n in range(2, 6):
                x = 0.9 * d.xi
                fd = _fd(lambda t: uf.h_derivative(h, n - 1, t, rr, k), x, 1e-4 * d.xi)
                worst = max(worst, _rel(uf.h_derivative(h, n, x, rr, k), fd))
    c.add("H[p,q] derivatives n=2..5 vs finite differences", worst, 1e-6)
    h = uf.HPrimitive(0, 0, 1)
    x = 0.7 * d.xi
    z = 2 * k.c * (rr + x)
    c.add("d/dx [x K0(2c(r+x))] = K0 - 2cx K1",
          _rel(uf.h_derivative(h, 1, x, rr, k), bessel_k(0, z) - 2 * k.c * x * bessel_k(1, z)), 1e-14)

    worst = 0.0
    for r_fac in (0.5, 1.0, 2.0):
        a = uf.uehling_fermi(r_fac * d.xi, d, full_output=True)
        b = uf.uehling_fermi(r_fac * d.xi, d, ctrl=AccuracyControl(rel_tol=0.5e-12), full_output=True)
        worst = max(worst, abs(a.value - b.value) / (2 * (a.est_error + b.est_error) + 1e-300))
    c.add("direct route invariant under halving tolerance (in units of 2x est_error)", worst, 1.0)

    v = lambda r: uf.uehling_fermi(r, d)
    h_small, h_slope = 1e-6 * d.xi, 1e-3 * d.xi
    c.add("dV continuous across r = xi", _rel(v(d.xi + h_small), v(d.xi - h_small)), 1e-5)
    left = (v(d.xi) - v(d.xi - h_slope)) / h_slope
    right = (v(d.xi + h_slope) - v(d.xi)) / h_slope
    c.add("dV' continuous across r = xi (one-sided differences)", _rel(left, right), 1e-2)
    neg = sum(1 for f in (0.1, 1.0, 3.0, 30.0, 1e3) if not v(f * d.xi) < 0.0)
    c.add("finite-nucleus dV < 0 (violations)", neg, 0.0)


# ---------------------------------------------------------------- ks

def _suite_ks(c, k=up.DEFAULT_CONSTANTS):
    c.add("f(1) = pi^2/4", abs(ks.f_exact(1.0) - math.pi ** 2 / 4), 1e-12)
    c.add("|f(100)|", abs(ks.f_exact(100.0)), 1e-3)
    ts = np.linspace(1.1, 20.0, 12)
    c.add("closed-form f vs int_t^inf integral, t in [1.1, 20]",
          max(_rel(ks.f_exact(float(t)), ks.f_integral(float(t))) for t in ts), 1e-8,
          note="limits read as int_t^inf; int_1^inf would give a t-independent constant")
    c.add("closed-form f vs integral at t = 1", _rel(ks.f_exact(1.0), ks.f_integral(1.0)), 1e-8)

    worst = 0.0
    for x in (0.5, 2.0, 5.0):
        fd = _fd(lambda u: ks.ks_l0_direct(u, _TIGHT), x, 1e-3 * x)
        worst = max(worst, _rel(-fd, ks.ks_l1(x, _TIGHT)))
    c.add("dL0/dx = -L1 by finite differences", worst, 1e-5)

    table = ks.default_kernel_table()
    us = np.geomspace(0.05, 30.0, 200)
    l0 = [table.l0(float(u)) for u in us]
    c.add("tabulated L0 monotone on [0.05, 30] (violations)",
          sum(1 for a, b in zip(l0, l0[1:]) if not b > a), 0.0, note="L0 is negative and rises to 0")
    worst = max(_rel(-_fd(table.l0, u, 1e-4 * u), ks.ks_l1(u, _TIGHT)) for u in (0.05, 0.3, 2.0, 10.0, 30.0))
    c.add("tabulated L0 derivative = -L1 on [0.05, 30]", worst, 1e-5)
    c.add("kernel table interpolation error (midpoints)", table.interpolation_error, 1e-6)

    d = make_fermi(PHYS_Z)
    r = 5.0 * d.xi
    coarse = ks.ks_potential(r, d, full_output=True)
    fine = ks.ks_potential(r, d, table=ks.default_kernel_table(40), full_output=True)
    c.add("KS potential under doubled table resolution (in units of 2x est_error)",
          abs(coarse.value - fine.value) / (2 * coarse.est_error), 1.0)
    d1 = make_fermi(1.0)
    c.add("KS potential linear in Z", _rel(ks.ks_potential(r, d) / PHYS_Z, ks.ks_potential(r, d1)), 1e-13)
    rfar = 1000.0 * d.xi
    c.report("KS finite-nucleus vs point kernel at r=1000 xi",
             _rel(ks.ks_potential(rfar, d), ks.ks_point(rfar, PHYS_Z)))
    r1 = 1.0 / k.c
    c.report("V_KS / dV_Uehling at cr=1 (expected O(alpha))",
             abs(ks.ks_point(r1, 1.0) / up.uehling_point(r1, 1.0)))


# ---------------------------------------------------------------- misprints

def _bickley_series_printed(n, z):
    """Ascending Ki_n series with the log part in powers of ``(z/2)^k``."""
    poly = math.fsum((-z / 2) ** j / (math.factorial(j) * math.factorial(n - j - 1)) * gamma_half(n - j) ** 2
                     for j in range(n)) * 2.0 ** (n - 2)
    lg = EULER_GAMMA + math.log(z / 2)
    terms = []
    for j in range(60):
        coef = (z / 2) ** j * (math.comb(2 * j, j) / math.factorial(n + 2 * j))
        terms.append(coef * (harmonic_phi(j + 1) - harmonic_phi(2 * j + 1) + harmonic_phi(2 * j + n + 1) - lg))
    return poly + (-z) ** n * math.fsum(terms)


def _moment_variant(xi, a, k, *, leading=None, coefficient=None, sommerfeld=None, residual=None):
    lead = xi ** (k + 1) / (k + 1) if leading is None else leading
    terms = [lead]
    for n in range((k - 1) // 2 + 1 if k >= 1 else 0):
        coef = math.perm(k, 2 * n + 1) if coefficient is None else coefficient(k, n)
        som = sommerfeld_coefficient(n) if sommerfeld is None else sommerfeld(n)
        terms.append(coef * a ** (2 * n + 2) * som * xi ** (k - 2 * n - 1))
    if residual is None:
        terms.append((-1) ** (k + 1) * math.factorial(k) * a ** (k + 1) * polylog_neg_exp(k + 1, xi / a))
    else:
        terms.append(residual)
    return math.fsum(terms)


def misprint_ledger(k=up.DEFAULT_CONSTANTS):
    """Printed and corrected forms of each known formula misprint.

    Returns a list of `Misprint`, each carrying both deviations from an
    independent quadrature or finite-difference oracle.
    """
    out = []
    z = 1.0
    g_ref = up.g_quadrature(z, _TIGHT)[0]
    for form, printed, corrected in (
            (up.GForm.KI135, "g = -Ki1 + Ki3/2 + Ki5/2", "g = Ki1 - Ki3/2 - Ki5/2"),
            (up.GForm.K0_KI1_KI2, "g = (7/16+z^2/48)K0 - (9/16+z^2/48)Ki1 - (19z/48+z^3/48)Ki2",
             "g = (9/16+z^2/48)Ki1 - (7z/16+z^3/48)K0 + (19z/48+z^3/48)Ki2"),
            (up.GForm.K0_K1_KI1, "g = (21+z^2+48)/48 K0 - (19z^2+z^4)/48 K1 - (27-18z^2-z^4)/48 Ki1",
             "g = -(21z+z^3)/48 K0 + (19z^2+z^4)/48 K1 + (27-18z^2-z^4)/48 Ki1")):
        out.append(Misprint(f"g kernel form {form.value} at z=1", printed, corrected,
                            _rel(up.g_kernel_printed(z, form), g_ref), _rel(up.g_kernel(z, form), g_ref),
                            1e-10))

    gam, dlt = 0.5, 3.0
    ref = integrate(lambda y: bickley(1, y), gam, dlt, _TIGHT).value
    printed = gam * bickley(1, gam) - dlt * bickley(1, gam) - i_pq(1, 0, gam, dlt)
    out.append(Misprint("I(p,q) recurrence, (p,q)=(0,1) on [0.5, 3]",
                        "I(p,q) = [g^{p+1}Ki_q(g) - d^{p+1}Ki_q(g) - I(p+1,q-1)]/(p+1)",
                        "I(p,q) = [d^{p+1}Ki_q(d) - g^{p+1}Ki_q(g) + I(p+1,q-1)]/(p+1)",
                        _rel(printed, ref), _rel(i_pq(0, 1, gam, dlt), ref), 1e-11))

    d = make_fermi(PHYS_Z)
    xi, a = d.xi, d.a
    ref2 = fermi_moment(d, 2, "quadrature", _TIGHT)
    out.append(Misprint("moment leading term, k=2", "xi^k/(k+1)", "xi^{k+1}/(k+1)",
                        _rel(_moment_variant(xi, a, 2, leading=xi ** 2 / 3), ref2),
                        _rel(moment_closed(xi, a, 2), ref2), 1e-10))
    printed_r = math.factorial(2) * math.fsum((-1) ** n * math.exp(-n * xi / a) / n ** 3 for n in range(1, 3))
    out.append(Misprint("moment residual sum, k=2", "R = k! sum_{n=1}^{k} (-1)^n e^{-n xi/a}/n^{k+1}",
                        "R = (-1)^{k+1} k! a^{k+1} Li_{k+1}(-e^{-xi/a}) (all n)",
                        _rel(_moment_variant(xi, a, 2, residual=printed_r), ref2),
                        _rel(moment_closed(xi, a, 2), ref2), 1e-10))
    ref4 = fermi_moment(d, 4, "quadrature", _TIGHT)
    out.append(Misprint("moment series coefficient, k=4", "(2n+1) C(k, 2n+1)", "k!/(k-2n-1)!",
                        _rel(_moment_variant(xi, a, 4, coefficient=lambda kk, n: (2 * n + 1) * math.comb(kk, 2 * n + 1)),
                             ref4),
                        _rel(moment_closed(xi, a, 4), ref4), 1e-10))
    out.append(Misprint("Sommerfeld weight, k=4 moment", "(2 - 1/2^n) zeta(2n+2)", "(2 - 1/2^{2n}) zeta(2n+2)",
                        _rel(_moment_variant(xi, a, 4, sommerfeld=lambda n: (2 - 2.0 ** -n) * zeta_even(2 * n + 2)),
                             ref4),
                        _rel(moment_closed(xi, a, 4), ref4), 1e-10))

    # residual of the development for an even H: sign and reflection both matter
    quad = polynomial_bundle([0.0, 0.0, 1.0])
    good = sommerfeld_breakdown(quad, xi, a)
    printed_res = [-rterm for rterm in good.residuals]  # (-1)^n int H(y) = -(corrected) for even H
    printed_val = good.head + math.fsum(good.series) + math.fsum(printed_res)
    out.append(Misprint("development residual for H(y)=y^2",
                        "R = sum (-1)^n e^{-n xi/a} int_0^inf H(y) e^{-ny/a} dy",
                        "R = sum (-1)^{n-1} e^{-n xi/a} int_0^inf H(-y) e^{-ny/a} dy",
                        _rel(printed_val, ref2), _rel(good.value, ref2), 1e-10))

    z = 1.0
    fd = _fd(e1, z, 1e-5)
    out.append(Misprint("incomplete gamma kernel in d^n E1/dz^n, n=1 at z=1",
                        "Gamma(n,z) = int_z^inf t^n e^-t dt", "Gamma(n,z) = int_z^inf t^{n-1} e^-t dt",
                        _rel(-upper_gamma(2, z) / z, fd), _rel(e1_derivative(1, z), fd), 1e-8))
    lam, kk = 2.0, 3
    ref = integrate(lambda y: y ** kk * math.exp(-lam * y), 0.5, 3.0, _TIGHT).value
    gam_diff = upper_gamma(kk + 1, 0.5 * lam) - upper_gamma(kk + 1, 3.0 * lam)
    out.append(Misprint("power-exponential integral, k=3 (p read as 0)",
                        "[Gamma(k+1,g an) - Gamma(k+1,d an)]/(an)^{p+1}",
                        "[Gamma(k+1,g an) - Gamma(k+1,d an)]/(an)^{k+1}",
                        _rel(gam_diff / lam, ref), _rel(power_exp_integral(kk, lam, 0.5, 3.0), ref), 1e-12))

    fd2 = _fd(lambda x: -bessel_k(1, x), 1.7, 1e-5)
    out.append(Misprint("second derivative of K0 at z=1.7", "d^k K0/dz^k = (-1)^k K_k", "K0'' = (K0 + K2)/2",
                        _rel(bessel_k(2, 1.7), fd2), _rel(k0_derivative(2, 1.7), fd2), 1e-8))
    ref = _ki_quadrature(3, 1.0)
    out.append(Misprint("Ki_n ascending series, n=3 at z=1", "log part in powers (z/2)^k",
                        "log part in powers (z/2)^{2k}",
                        _rel(_bickley_series_printed(3, 1.0), ref), _rel(bickley_series(3, 1.0), ref), 1e-11))

    r = 1e-5 / k.c
    exact = up.uehling_point(r, 1.0)
    out.append(Misprint("fit coefficient c1 (vs exact potential at cr=1e-5)", "c1 = 2/(2 pi)", "c1 = 2/(3 pi)",
                        _rel(up.pyykko_fit(r, 1.0, c1=up.PYYKKO_C1_PRINTED), exact),
                        _rel(up.pyykko_fit(r, 1.0), exact), 1e-3))

    rfar = 1000.0 * d.xi
    ds = make_fermi(PHYS_Z, d.xi / 100, d.a / 100)
    point = up.uehling_point(rfar, PHYS_Z)
    v = uf.uehling_fermi(rfar, ds)
    out.append(Misprint("finite-nucleus prefactor, Z=82 vs point charge at r=1000 xi (xi/100)",
                        "extra explicit Z with rho normalized to Z", "rho carries Z, no extra factor",
                        _rel(PHYS_Z * v, point), _rel(v, point), 1e-6))
    return out


def _check_cli_determinism(c):
    from .cli import main_to_string
    args = ["point", "--r-min", "1e-4", "--r-max", "1", "--points", "6", "--Z", "82"]
    first, second = main_to_string(args), main_to_string(args)
    c.add("identical point runs give byte-identical CSV", 0.0 if first == second else 1.0, 0.0)


def run_suite(suite="all", tol_scale=1.0):
    """Run one suite and return its `VerifyReport`.

    Parameters
    ----------
    suite : {"specfun", "uehling", "fermi", "ks", "all"}
    tol_scale : float
        Multiplies every finite threshold (misprint tolerances excluded).
    """
    if suite not in SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {SUITES}")
    if not (tol_scale > 0.0 and math.isfinite(tol_scale)):
        raise DomainError(f"tol_scale must be positive, got {tol_scale!r}")
    start = time.perf_counter()
    report = VerifyReport(suite, tol_scale)
    runners = {"specfun": _suite_specfun, "uehling": _suite_uehling, "fermi": _suite_fermi, "ks": _suite_ks}
    for name in (runners if suite == "all" else [suite]):
        col = _Collector(name, tol_scale)
        runners[name](col)
        report.checks += col.items
    if suite == "all":
        col = _Collector("cli", tol_scale)
        _check_cli_determinism(col)
        report.checks += col.items
        report.misprints = misprint_ledger()
    report.seconds = time.perf_counter() - start
    return report
