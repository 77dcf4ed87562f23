import functools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vacpol.errors import ContractError, DomainError, RegimeWarning
from vacpol.fermi_nucleus import (BOHR_FM, DEFAULT_A, DEFAULT_XI, SmoothFunctionBundle, density,
                                  diffuseness_from_thickness, fermi_moment, fermi_profile, i_pq,
                                  l_npq, l_npq_quadrature, make_fermi, moment_closed,
                                  normalization_factor, polynomial_bundle, power_exp_integral,
                                  sommerfeld_breakdown, sommerfeld_coefficient,
                                  sommerfeld_integrate)
from vacpol.quadrature import integrate, integrate_to_infinity
from vacpol.specfun import AccuracyControl, bessel_k, bickley, zeta_even

TIGHT = AccuracyControl(rel_tol=1e-13)
XI, A = DEFAULT_XI, DEFAULT_A


def profile_integral(h, xi=XI, a=A):
    def f(y):
        return h(y) * fermi_profile(y, xi, a)
    return (integrate(f, 0.0, xi, TIGHT).value
            + integrate_to_infinity(f, xi, TIGHT, scale=a).value)


@functools.lru_cache(maxsize=None)
def power_moment(j):
    return profile_integral(lambda y: y ** j)


def ki_quad(p, q, g, d):
    return integrate(lambda y: y ** p * (bessel_k(0, y) if q == 0 else bickley(q, y)), g, d, TIGHT).value


class TestDistribution:
    def test_physical_parameters(self):
        assert DEFAULT_A == pytest.approx(2.3 / (4 * math.log(3)) / BOHR_FM, rel=1e-15)
        assert diffuseness_from_thickness(2.3) == DEFAULT_A
        assert XI / A == pytest.approx(2.2928, abs=1e-4)

    def test_normalization_series(self):
        direct = 1 + math.pi ** 2 * (A / XI) ** 2 + 6 * (A / XI) ** 3 * math.fsum(
            (-1) ** (n - 1) * math.exp(-n * XI / A) / n ** 3 for n in range(1, 80))
        assert normalization_factor(XI, A) == pytest.approx(direct, rel=1e-12)

    def test_normalization_quadrature(self, lead):
        q = 4 * math.pi * lead.rho0 * fermi_moment(lead, 2, "quadrature")
        assert q == pytest.approx(lead.Z, rel=1e-10)

    @given(st.floats(min_value=0.5, max_value=120.0), st.floats(min_value=1.5, max_value=50.0))
    def test_rho0_identity(self, Z, ratio):
        d = make_fermi(Z, 1e-4, 1e-4 / ratio)
        assert d.rho0 * d.xi ** 3 * d.N == pytest.approx(3 * Z / (4 * math.pi), rel=1e-14)

    def test_sharp_limit(self):
        d = make_fermi(1.0, 1.0, 1e-4)
        assert d.N == pytest.approx(1.0, abs=1e-7)
        assert d.rho0 == pytest.approx(3 / (4 * math.pi), rel=1e-7)

    def test_density_examples(self, hydrogenic):
        d = hydrogenic
        assert density(d, d.xi) == pytest.approx(d.rho0 / 2, rel=1e-15)
        assert density(d, 0.0) == pytest.approx(d.rho0 / (1 + math.exp(-d.xi / d.a)), rel=1e-15)
        assert density(d, 1.0) == 0.0
        assert np.all(np.diff(density(d, np.linspace(0, 10 * d.xi, 50))) < 0)

    @pytest.mark.parametrize("args", [(0.0, XI, A), (1.0, -XI, A), (1.0, XI, 0.0), (1.0, math.inf, A)])
    def test_domain(self, args):
        with pytest.raises(DomainError):
            make_fermi(*args)

    def test_diffuse_warning(self):
        with pytest.warns(RegimeWarning):
            make_fermi(1.0, 1.0, 2.0)


class TestMoments:
    @pytest.mark.parametrize("k", range(9))
    def test_closed_vs_quadrature(self, hydrogenic, k):
        assert fermi_moment(hydrogenic, k) == pytest.approx(fermi_moment(hydrogenic, k, "quadrature"), rel=1e-10)

    def test_k2_is_normalization(self, hydrogenic):
        d = hydrogenic
        assert fermi_moment(d, 2) == pytest.approx(d.xi ** 3 * d.N / 3, rel=1e-13)

    @pytest.mark.parametrize("k", range(6))
    def test_sharp_limit(self, k):
        assert moment_closed(1.0, 1e-5, k) == pytest.approx(1 / (k + 1), rel=1e-8)

    @given(st.integers(0, 7), st.floats(min_value=1.2, max_value=30.0))
    def test_property_vs_quadrature(self, k, ratio):
        a = 1.0 / ratio
        ref = profile_integral(lambda y: y ** k, 1.0, a)
        assert moment_closed(1.0, a, k) == pytest.approx(ref, rel=1e-10)

    def test_errors(self, hydrogenic):
        with pytest.raises(DomainError):
            fermi_moment(hydrogenic, -1)
        with pytest.raises(DomainError):
            fermi_moment(hydrogenic, 2, "series")

    def test_coefficients(self):
        assert sommerfeld_coefficient(0) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
        assert sommerfeld_coefficient(1) == pytest.approx(1.75 * zeta_even(4), rel=1e-15)


class TestSommerfeld:
    def test_constant(self):
        res = sommerfeld_breakdown(polynomial_bundle([1.0]), XI, A)
        assert all(t == 0.0 for t in res.series)
        assert res.value == pytest.approx(XI + res.residual, rel=1e-15)
        assert res.value == pytest.approx(profile_integral(lambda y: 1.0), rel=1e-10)

    def test_linear(self):
        res = sommerfeld_breakdown(polynomial_bundle([0.0, 1.0]), XI, A)
        assert res.head + res.series[0] == pytest.approx(XI ** 2 / 2 + A ** 2 * math.pi ** 2 / 6, rel=1e-15)
        assert res.value == pytest.approx(profile_integral(lambda y: y), rel=1e-10)

    @given(st.lists(st.floats(min_value=-1.0, max_value=1.0, allow_subnormal=False), min_size=1, max_size=6))
    def test_polynomials(self, c):
        scaled = [cj / XI ** j for j, cj in enumerate(c)]
        ref = math.fsum(cj * power_moment(j) for j, cj in enumerate(scaled))
        got = sommerfeld_integrate(polynomial_bundle(scaled), XI, A)
        scale = math.fsum(abs(cj) * power_moment(j) for j, cj in enumerate(scaled))
        assert abs(got - ref) <= 1e-10 * scale

    def test_without_residual_worse(self):
        H = polynomial_bundle([1.0, 0.0, 1.0 / XI ** 2])
        ref = profile_integral(lambda y: 1 + (y / XI) ** 2)
        full = sommerfeld_integrate(H, XI, A)
        bare = sommerfeld_integrate(H, XI, A, residual_terms=0)
        assert abs(full - ref) < 1e-6 * ref < abs(bare - ref)

    def test_quadrature_head(self):
        H = SmoothFunctionBundle(value=np.cos, derivative=lambda m, y: math.cos(y + m * math.pi / 2),
                                 max_order=100, scale=1.0)
        # a = 0.5 needs more series terms than the physical ratio
        assert sommerfeld_integrate(H, 4.0, 0.5, n_max=30) == pytest.approx(
            profile_integral(np.cos, 4.0, 0.5), rel=1e-10)

    def test_partial_sums_converge(self):
        H = SmoothFunctionBundle(value=lambda y: np.exp(-y / XI), max_order=100, scale=XI,
                                 derivative=lambda m, y: (-1 / XI) ** m * math.exp(-y / XI),
                                 head_integral=lambda x: XI * -math.expm1(-x / XI),
                                 residual_integral=lambda lam: 1.0 / (lam - 1.0 / XI))
        res = sommerfeld_breakdown(H, XI, A)
        sums = res.partial_sums()
        assert res.value == pytest.approx(profile_integral(lambda y: np.exp(-y / XI)), rel=1e-10)
        assert abs(sums[9] / sums[-1] - 1) < 0.01

    def test_contract_error(self):
        H = SmoothFunctionBundle(value=lambda y: y, derivative=lambda m, y: 0.0, max_order=5)
        with pytest.raises(ContractError):
            sommerfeld_integrate(H, XI, A, n_max=3)


class TestLadders:
    def test_i_examples(self):
        g, d = 0.5, 3.0
        assert i_pq(0, 0, g, d) == pytest.approx(bickley(1, g) - bickley(1, d), rel=1e-13)
        assert i_pq(1, 0, g, d) == pytest.approx(g * bessel_k(1, g) - d * bessel_k(1, d), rel=1e-13)
        assert i_pq(0, 1, g, d) == pytest.approx(bickley(2, g) - bickley(2, d), rel=1e-13)
        assert i_pq(2, 2, g, d) == pytest.approx(ki_quad(2, 2, g, d), rel=1e-9)

    @pytest.mark.parametrize("g, d", [(0.5, 3.0), (0.05, 1.2)])
    def test_i_ladder(self, g, d):
        for p in range(7):
            for q in range(7 - p):
                assert i_pq(p, q, g, d) == pytest.approx(ki_quad(p, q, g, d), rel=1e-9)

    @pytest.mark.parametrize("g, d", [(0.5, 3.0), (0.05, 1.2)])
    @pytest.mark.parametrize("lam", [0.3, 2.0, 25.0])
    def test_l_ladder(self, g, d, lam):
        for p in range(7):
            for q in range(7 - p):
                assert l_npq(p, q, lam, g, d) == pytest.approx(l_npq_quadrature(p, q, lam, g, d), rel=1e-9)

    def test_l_example_against_independent_oracle(self):
        ref = integrate(lambda y: y * math.exp(-2 * y) * bickley(1, y), 0.5, 3.0, TIGHT).value
        assert l_npq(1, 1, 2.0, 0.5, 3.0) == pytest.approx(ref, rel=1e-9)

    def test_l_small_lambda(self):
        assert l_npq(2, 1, 1e-8, 0.5, 3.0) == pytest.approx(i_pq(2, 1, 0.5, 3.0), rel=1e-7)

    @pytest.mark.parametrize("k", range(5))
    def test_power_exp(self, k):
        ref = integrate(lambda y: y ** k * math.exp(-1.7 * y), 0.5, 3.0, TIGHT).value
        assert power_exp_integral(k, 1.7, 0.5, 3.0) == pytest.approx(ref, rel=1e-12)

    @pytest.mark.parametrize("f", [lambda: i_pq(0, 0, 1.0, 1.0), lambda: l_npq(0, 0, 1.0, 2.0, 1.0),
                                   lambda: l_npq(0, 0, 0.0, 1.0, 2.0), lambda: power_exp_integral(1, 1.0, 0.0, 1.0)])
    def test_domain(self, f):
        with pytest.raises(DomainError):
            f()
