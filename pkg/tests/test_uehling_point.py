import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from vacpol.errors import DomainError, RegimeWarning
from vacpol.specfun import EULER_GAMMA, bickley
from vacpol.uehling_point import (DEFAULT_CONSTANTS, G_AT_ZERO, PYYKKO_C1_PRINTED, PYYKKO_D1,
                                  PYYKKO_D2, GForm, Method, PhysicalConstants, g_kernel,
                                  g_kernel_printed, g_quadrature, large_r_asymptote, mezo_kernel,
                                  point_kernel_U, point_kernel_U_quadrature, pyykko_fit,
                                  small_r_asymptote, uehling_point)

C = DEFAULT_CONSTANTS.c
CLOSED = (GForm.KI135, GForm.K0_KI1_KI2, GForm.K0_K1_KI1)


def test_constants():
    assert DEFAULT_CONSTANTS.alpha * DEFAULT_CONSTANTS.c == 1.0
    with pytest.raises(DomainError):
        PhysicalConstants(alpha=0.0)


class TestGKernel:
    @pytest.mark.parametrize("form", CLOSED)
    def test_value_at_zero(self, form):
        assert g_kernel(0.0, form) == pytest.approx(9 * math.pi / 32, rel=1e-14)
        assert G_AT_ZERO == 9 * math.pi / 32

    def test_forms_agree(self):
        z = np.geomspace(1e-3, 30.0, 50)
        for x in z:
            ref = g_kernel(x, GForm.QUADRATURE)
            for form in CLOSED:
                assert g_kernel(x, form) == pytest.approx(ref, rel=1e-9)

    def test_quadrature_error_estimate(self):
        val, err = g_quadrature(1.0)
        assert 0.0 <= err < 1e-12 * val

    @pytest.mark.parametrize("form", CLOSED)
    def test_printed_forms_are_wrong(self, form):
        ref = g_kernel(1.0, GForm.QUADRATURE)
        assert abs(g_kernel_printed(1.0, form) / ref - 1) > 0.1

    def test_small_z_law(self):
        z = 1e-4
        assert abs(g_kernel(z) - G_AT_ZERO - z * math.log(z)) / abs(z * math.log(z)) <= 0.5

    @given(st.floats(min_value=0.0, max_value=40.0), st.floats(min_value=1e-3, max_value=5.0))
    def test_positive_decreasing(self, z, dz):
        assert 0.0 < g_kernel(z + dz) < g_kernel(z)

    def test_negative_z(self):
        with pytest.raises(DomainError):
            g_kernel(-1e-3)


class TestUKernel:
    @pytest.mark.parametrize("z", [1e-3, 0.2, 1.0, 5.0, 25.0])
    def test_closed_vs_quadrature(self, z):
        val, err = point_kernel_U_quadrature(z)
        assert point_kernel_U(z) == pytest.approx(val, rel=1e-10)

    def test_small_z(self):
        z = 1e-7
        assert abs(point_kernel_U(z) + EULER_GAMMA + 5 / 6 - math.log(2 / z)) < 1e-5
        assert bickley(4, 0.0) == pytest.approx(2 / 3, rel=1e-15)

    @pytest.mark.parametrize("w", [1e-3, 0.5, 4.0])
    def test_mezo_form(self, w):
        val, err = mezo_kernel(w)
        assert val == pytest.approx(point_kernel_U(2 * w), rel=1e-10)

    def test_domain(self):
        for f in (point_kernel_U, point_kernel_U_quadrature, mezo_kernel):
            with pytest.raises(DomainError):
                f(0.0)


class TestPotential:
    @pytest.mark.parametrize("cr", [1e-3, 0.1, 1.0, 10.0])
    def test_routes_agree(self, cr):
        r = cr / C
        ref = uehling_point(r, 1.0, Method.QUADRATURE)
        for m in (Method.BICKLEY, Method.MEZO):
            assert uehling_point(r, 1.0, m) == pytest.approx(ref, rel=1e-8)

    def test_string_method(self):
        assert uehling_point(1e-3, 1.0, "mezo") == uehling_point(1e-3, 1.0, Method.MEZO)

    @given(st.floats(min_value=1e-8, max_value=0.2))
    def test_negative(self, r):
        assert uehling_point(r) < 0.0

    @given(st.floats(min_value=1e-6, max_value=0.05), st.floats(min_value=0.5, max_value=120.0))
    def test_linear_in_Z(self, r, Z):
        assert uehling_point(r, Z) / Z == pytest.approx(uehling_point(r, 1.0), rel=1e-15)

    def test_small_r_ratio(self):
        r = 1e-6 / C
        assert uehling_point(r) / small_r_asymptote(r, 1.0) == pytest.approx(1.0, abs=0.01)

    def test_large_r_ratio_at_10(self):
        r = 10.0 / C
        assert abs(uehling_point(r, 1.0, Method.QUADRATURE) / large_r_asymptote(r, 1.0) - 1) <= 0.15

    def test_large_r_ratio_approaches_one(self):
        dev = [abs(uehling_point(cr / C) / large_r_asymptote(cr / C, 1.0) - 1) for cr in (10, 20, 40, 80)]
        assert dev == sorted(dev, reverse=True)
        # leading correction -29/(16 cr)
        assert dev[-1] * 80 == pytest.approx(29 / 16, rel=0.05)

    def test_full_output(self):
        res = uehling_point(1e-3, 1.0, Method.QUADRATURE, full_output=True)
        assert res.method == "quadrature" and res.flags == ()
        assert 0.0 < res.est_error < 1e-10 * abs(res.value)

    def test_regime_flags(self):
        with pytest.warns(RegimeWarning):
            res = uehling_point(1.0 / C, 1.0, Method.ASYMPTOTIC_SMALL, full_output=True)
        assert res.flags and "asymptotic_small" in res.flags[0]
        with pytest.warns(RegimeWarning):
            res = uehling_point(1.0 / C, 1.0, Method.ASYMPTOTIC_LARGE, full_output=True)
        assert res.flags
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert not uehling_point(1e-3 / C, 1.0, Method.ASYMPTOTIC_SMALL, full_output=True).flags

    @pytest.mark.parametrize("r, Z", [(0.0, 1.0), (-1.0, 1.0), (math.inf, 1.0), (1e-3, 0.0)])
    def test_domain(self, r, Z):
        with pytest.raises(DomainError):
            uehling_point(r, Z)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            uehling_point(1e-3, 1.0, "nope")


class TestPyykko:
    def test_constants_as_printed(self):
        assert PYYKKO_D1 == 0.678e7
        assert PYYKKO_D2 == 1.4302

    def test_small_r(self):
        r = 1e-5 / C
        assert pyykko_fit(r, 1.0) / small_r_asymptote(r, 1.0) == pytest.approx(1.0, abs=0.05)

    def test_printed_c1_misses_small_r(self):
        r = 1e-5 / C
        assert abs(pyykko_fit(r, 1.0, c1=PYYKKO_C1_PRINTED) / small_r_asymptote(r, 1.0) - 1) > 0.3

    def test_large_r_decay(self):
        a = DEFAULT_CONSTANTS.alpha
        r1, r2 = 0.02, 0.03
        ratio = pyykko_fit(r2, 1.0) / pyykko_fit(r1, 1.0)
        s1, s2 = r1 / a, r2 / a
        shape = (r1 / r2) * (PYYKKO_D2 * s1 ** 0.5 + s1 ** 1.5) / (PYYKKO_D2 * s2 ** 0.5 + s2 ** 1.5)
        assert ratio == pytest.approx(math.exp(-2 * (r2 - r1) / a) * shape, rel=1e-12)

    def test_route(self):
        assert uehling_point(1e-3, 2.0, Method.PYYKKO_FIT) == pyykko_fit(1e-3, 2.0)
