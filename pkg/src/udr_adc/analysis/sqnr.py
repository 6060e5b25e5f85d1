"""Closed-form SQNR of the clipping and folding converters.

All ratios are normalised to unit input variance: ``gamma = v_ref / sigma_x``,
the clipping converter spends all ``n`` bits on ``[-v_ref, v_ref]`` and the
folding converter spends ``n - 2`` bits on the same window. Quantization noise
is the high-rate ``delta**2 / 12`` in both cases.

The Gaussian overload term is two-sided, ``2 * psi(gamma)``, where ``psi`` is
the one-sided tail integral ``E[(X - gamma)**2; X > gamma]``. Pass
``one_sided=True`` to count only ``psi(gamma)``, which is what some
tabulations of this comparison use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.special import erfc

from ..errors import DomainError
from ..signals import DistributionKind

__all__ = [
    "AdcKind",
    "SqnrQuery",
    "q_function",
    "psi",
    "overload_variance",
    "overload_variance_quadrature",
    "quantization_noise",
    "sqnr_udr",
    "sqnr_std",
    "sqnr_std_quadrature",
    "sqnr",
    "to_db",
    "crossover_gamma",
]

SQRT2 = math.sqrt(2.0)
SQRT3 = math.sqrt(3.0)
SQRT2PI = math.sqrt(2.0 * math.pi)


class AdcKind(str, enum.Enum):
    STANDARD = "standard"
    UDR = "udr"


@dataclass(frozen=True)
class SqnrQuery:
    distribution: DistributionKind
    n: int
    gamma: float
    adc: AdcKind = AdcKind.STANDARD

    def __post_init__(self):
        object.__setattr__(self, "distribution", DistributionKind(self.distribution))
        object.__setattr__(self, "adc", AdcKind(self.adc))
        _check_bits(self.n)
        _check_gamma(self.gamma)


def _check_bits(n):
    if int(n) != n or n < 3:
        raise DomainError(f"n must be an integer >= 3, got {n}")


def _check_gamma(gamma):
    if not (np.all(np.asarray(gamma) > 0) and np.all(np.isfinite(gamma))):
        raise DomainError(f"gamma must be positive and finite, got {gamma}")


def _out(x):
    return float(x) if np.ndim(x) == 0 else x


def to_db(ratio):
    return _out(10.0 * np.log10(ratio))


def q_function(x):
    """Standard normal upper tail probability ``P(X > x)``."""
    return _out(0.5 * erfc(np.asarray(x, dtype=np.float64) / SQRT2))


def psi(gamma):
    """One-sided normalised overload ``(1 + g**2) Q(g) - g exp(-g**2/2) / sqrt(2 pi)``."""
    g = np.asarray(gamma, dtype=np.float64)
    return _out((1.0 + g * g) * q_function(g) - g * np.exp(-0.5 * g * g) / SQRT2PI)


def overload_variance(distribution, gamma, one_sided=False):
    """Clipping distortion power of the standard converter, relative to the input variance."""
    distribution = DistributionKind(distribution)
    g = np.asarray(gamma, dtype=np.float64)
    if np.any(g < 0):
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    if distribution is DistributionKind.UNIFORM:
        ov = np.where(g <= SQRT3, np.clip(1.0 - g / SQRT3, 0.0, None) ** 3, 0.0)
    elif distribution is DistributionKind.GAUSSIAN:
        ov = psi(g) if one_sided else 2.0 * np.asarray(psi(g))
    else:
        ov = np.exp(-SQRT2 * g)
    return _out(ov)


def _pdf(distribution):
    if distribution is DistributionKind.UNIFORM:
        return lambda x: 1.0 / (2.0 * SQRT3) if abs(x) <= SQRT3 else 0.0
    if distribution is DistributionKind.GAUSSIAN:
        return lambda x: math.exp(-0.5 * x * x) / SQRT2PI
    b = 1.0 / SQRT2
    return lambda x: math.exp(-abs(x) / b) / (2.0 * b)


def overload_variance_quadrature(distribution, gamma, epsrel=1e-13):
    """``2 * integral_{gamma}^{inf} (x - gamma)**2 f(x) dx`` by adaptive quadrature.

    Uses the density directly and never touches the closed forms, so it can
    serve as an independent check on :func:`overload_variance`.
    """
    distribution = DistributionKind(distribution)
    if gamma < 0:
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    f = _pdf(distribution)
    if distribution is DistributionKind.UNIFORM:
        if gamma >= SQRT3:
            return 0.0
        upper = SQRT3
    else:
        upper = math.inf
    val, _ = integrate.quad(
        lambda x: (x - gamma) ** 2 * f(x), gamma, upper, epsabs=0.0, epsrel=epsrel, limit=500
    )
    return 2.0 * val


def quantization_noise(n, gamma):
    """``delta**2 / 12`` of an ``n``-bit quantizer over ``[-gamma, gamma]``."""
    g = np.asarray(gamma, dtype=np.float64)
    return _out(g * g / (3.0 * 4.0**n))


def sqnr_udr(n, gamma):
    """Folding converter: ``n - 2`` quantizer bits and no overload, ``3 * 4**n / (16 gamma**2)``."""
    _check_bits(n)
    _check_gamma(gamma)
    g = np.asarray(gamma, dtype=np.float64)
    return _out(3.0 * 4.0**n / (16.0 * g * g))


def sqnr_std(distribution, n, gamma, one_sided=False):
    """Clipping converter: ``1 / (gamma**2 / (3 * 4**n) + overload)``."""
    _check_bits(n)
    _check_gamma(gamma)
    return _out(
        1.0 / (quantization_noise(n, gamma) + np.asarray(overload_variance(distribution, gamma, one_sided)))
    )


def sqnr_std_quadrature(distribution, n, gamma):
    _check_bits(n)
    _check_gamma(gamma)
    return 1.0 / (quantization_noise(n, gamma) + overload_variance_quadrature(distribution, gamma))


def sqnr(query: SqnrQuery, one_sided=False):
    if query.adc is AdcKind.UDR:
        return sqnr_udr(query.n, query.gamma)
    return sqnr_std(query.distribution, query.n, query.gamma, one_sided)


def _advantage(distribution, n, one_sided):
    """log(SQNR_udr / SQNR_std): positive where folding wins."""

    def d(g):
        return np.log(sqnr_udr(n, g)) - np.log(sqnr_std(distribution, n, g, one_sided))

    return d


def crossover_gamma(
    distribution,
    n,
    lo=1e-3,
    hi=10.0,
    points=400,
    xtol=1e-12,
    one_sided=False,
) -> Optional[float]:
    """Loading factor where both converters have equal SQNR.

    A log-spaced scan over ``[lo, hi]`` brackets sign changes of the SQNR
    difference and bisection refines the bracket to ``xtol``. Below the
    returned value the folding converter wins. If several crossings exist the
    largest is returned; ``None`` means no crossing in the scanned range.
    """
    _check_bits(n)
    if not 0 < lo < hi:
        raise DomainError(f"need 0 < lo < hi, got {lo}, {hi}")
    d = _advantage(DistributionKind(distribution), n, one_sided)
    grid = np.geomspace(lo, hi, points)
    s = np.sign(d(grid))
    changes = np.flatnonzero(s[:-1] * s[1:] < 0)
    exact = np.flatnonzero(s == 0)
    if exact.size and (not changes.size or exact[-1] > changes[-1]):
        return float(grid[exact[-1]])
    if not changes.size:
        return None
    a, b = float(grid[changes[-1]]), float(grid[changes[-1] + 1])
    fa = d(a)
    while b - a > xtol:
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        fm = d(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)
