"""Harmonic numbers, polylogarithms of negative exponentials, the
dilogarithm, and even zeta values."""

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from .accuracy import DEFAULT_ACCURACY

PI2_6 = math.pi ** 2 / 6

# x = e^{-w} above which the alternating sum is accelerated
_ACCELERATE_ABOVE = 0.5
_CVZ_TERMS = 26


def harmonic_phi(m):
    """``Phi(m) = 1 + 1/2 + ... + 1/(m-1)``; ``Phi(1) = 0``."""
    if m < 1 or int(m) != m:
        raise DomainError(f"harmonic_phi needs a positive integer, got {m!r}")
    return math.fsum(1.0 / j for j in range(1, int(m)))


def _cvz_alternating(a, n):
    # Cohen-Villegas-Zagier: sum_{k>=0} (-1)^k a(k) for totally monotone a
    d = (3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    s = 0.0
    for k in range(n):
        c = b - c
        s += c * a(k)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return s / d


def polylog_neg_exp(s, w, ctrl=DEFAULT_ACCURACY):
    """``Li_s(-e^-w) = sum_{q>=1} (-e^-w)^q / q^s`` for integer ``s >= 1``, ``w >= 0``.

    Small arguments use the alternating series, stopped when the first
    omitted term (which bounds the error) falls below tolerance.  Near
    ``w = 0`` the series converges slowly and is summed with
    Cohen-Villegas-Zagier acceleration instead.
    """
    if s < 1 or int(s) != s:
        raise DomainError(f"order s must be a positive integer, got {s!r}")
    if w < 0.0:
        raise DomainError(f"w must be >= 0, got {w!r}")
    x = math.exp(-w)
    if x > _ACCELERATE_ABOVE:
        return -x * _cvz_alternating(lambda k: x ** k / (k + 1.0) ** s, _CVZ_TERMS)
    terms = []
    total = 0.0
    for q in range(1, 4 * ctrl.max_terms):
        t = (-x) ** q / q ** s
        nxt = x ** (q + 1) / (q + 1) ** s
        terms.append(t)
        total += t
        if nxt <= 1e-3 * ctrl.rel_tol * abs(total):
            break
    return math.fsum(terms)


def _dilog_series(y):
    # |y| <= 1/2
    terms = []
    p = y
    k = 1
    while True:
        t = p / (k * k)
        terms.append(t)
        if abs(t) <= 1e-18 * abs(terms[0]) or k > 200:
            break
        k += 1
        p *= y
    return math.fsum(terms)


def _dilog_scalar(y):
    if y == 1.0:
        return PI2_6
    if y == 0.0:
        return 0.0
    if y < -1.0:
        return -PI2_6 - 0.5 * math.log(-y) ** 2 - _dilog_scalar(1.0 / y)
    if y < 0.0:
        # Landen: Li2(y) = -Li2(y/(y-1)) - ln^2(1-y)/2, y/(y-1) in (0, 1/2]
        return -_dilog_series(y / (y - 1.0)) - 0.5 * math.log1p(-y) ** 2
    if y <= 0.5:
        return _dilog_series(y)
    # reflection about 1/2
    return PI2_6 - math.log(y) * math.log1p(-y) - _dilog_series(1.0 - y)


def _dilog_series_vec(y):
    # Li2(y) = sum_n B_n w^(n+1)/(n+1)!, w = -ln(1-y); |w| <= ln 2 here and
    # the terms fall like (w/2pi)^n, so B_0, B_1 and ten even terms suffice
    w = -np.log1p(-y)
    w2 = w * w
    out = np.zeros_like(y)
    for c in _BERNOULLI_DILOG[::-1]:
        out = out * w2 + c
    return w - 0.25 * w2 + w * w2 * out


def _dilog_vec(y):
    out = np.empty_like(y)
    one = y == 1.0
    out[one] = PI2_6
    m = y < -1.0
    if np.any(m):
        v = y[m]
        out[m] = -PI2_6 - 0.5 * np.log(-v) ** 2 - _dilog_vec(1.0 / v)
    m = (y >= -1.0) & (y < 0.0)
    if np.any(m):
        v = y[m]
        out[m] = -_dilog_series_vec(v / (v - 1.0)) - 0.5 * np.log1p(-v) ** 2
    m = (y >= 0.0) & (y <= 0.5)
    out[m] = _dilog_series_vec(y[m])
    m = (y > 0.5) & (y < 1.0)
    if np.any(m):
        v = y[m]
        out[m] = PI2_6 - np.log(v) * np.log1p(-v) - _dilog_series_vec(1.0 - v)
    return out


def dilog(y):
    """Dilogarithm ``Li2(y)`` for real ``y <= 1``.

    Accepts a float or an array.  The argument is mapped into
    ``|y| <= 1/2`` by the inversion, Landen and reflection identities and
    the power series is summed there.
    """
    if np.ndim(y) == 0:
        y = float(y)
        if y > 1.0:
            raise DomainError(f"Li2(y) is complex for y > 1 (got {y!r}); use re_dilog")
        return _dilog_scalar(y)
    arr = np.asarray(y, dtype=float)
    if np.any(arr > 1.0) or np.any(np.isnan(arr)):
        raise DomainError("Li2(y) is complex for y > 1; use re_dilog")
    return _dilog_vec(arr.ravel()).reshape(arr.shape)


def re_dilog(y):
    """``Re Li2(y)`` for ``y > 1``: ``pi^2/3 - ln(y)^2/2 - Li2(1/y)``."""
    if np.ndim(y) == 0:
        y = float(y)
        if not y > 1.0:
            raise DomainError(f"re_dilog needs y > 1, got {y!r}")
        return 2.0 * PI2_6 - 0.5 * math.log(y) ** 2 - _dilog_scalar(1.0 / y)
    arr = np.asarray(y, dtype=float)
    if np.any(arr <= 1.0):
        raise DomainError("re_dilog needs y > 1")
    return 2.0 * PI2_6 - 0.5 * np.log(arr) ** 2 - dilog(1.0 / arr)


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli number ``B_n`` as an exact fraction (``B_1 = -1/2``)."""
    if n < 0:
        raise DomainError("Bernoulli index must be >= 0")
    if n == 0:
        return Fraction(1)
    # sum_{k=0}^{n} C(n+1, k) B_k = 0
    acc = sum(math.comb(n + 1, k) * bernoulli(k) for k in range(n))
    return -acc / (n + 1)


# B_2k/(2k+1)! for k = 1..11, the even part of the dilog Bernoulli series
_BERNOULLI_DILOG = np.array([float(bernoulli(2 * k) / math.factorial(2 * k + 1))
                             for k in range(1, 12)])

_EXACT_ZETA_MAX_N = 15


def zeta_even(m):
    """Riemann zeta at an even integer ``m = 2n >= 2``.

    ``zeta(2n) = (-1)^(n+1) B_2n (2 pi)^2n / (2 (2n)!)`` with exact Bernoulli
    numbers for ``n <= 15``; beyond that the direct sum converges in a few
    terms.
    """
    if m < 2 or m % 2:
        raise DomainError(f"zeta_even needs an even integer >= 2, got {m!r}")
    n = m // 2
    if n <= _EXACT_ZETA_MAX_N:
        coef = (-1) ** (n + 1) * bernoulli(2 * n) / (2 * math.factorial(2 * n))
        return float(coef) * (2.0 * math.pi) ** m
    return math.fsum(k ** -float(m) for k in range(1, 12))
