"""Flash-converter area and quantizer dynamic-power comparisons.

``lambda`` here is the folding factor ``v_max / v_ref``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from ..errors import DomainError

__all__ = [
    "HwQuery",
    "FlashArea",
    "extra_bits",
    "flash_area_model",
    "dynamic_power_ratio",
    "dynamic_power_au",
]


@dataclass(frozen=True)
class HwQuery:
    n1: int
    lam: float

    def __post_init__(self):
        if int(self.n1) != self.n1 or self.n1 < 1:
            raise DomainError(f"n1 must be an integer >= 1, got {self.n1}")
        if not (self.lam >= 1 and math.isfinite(self.lam)):
            raise DomainError(f"folding factor must be >= 1, got {self.lam}")


class FlashArea(NamedTuple):
    n2: int
    comparators_std: int
    resistors_std: int
    comparators_udr: int
    resistors_udr: int


def extra_bits(lam: float) -> int:
    """``ceil(log2(lam))`` computed without trusting ``log2`` at powers of two."""
    if not lam >= 1:
        raise DomainError(f"folding factor must be >= 1, got {lam}")
    k = max(0, math.ceil(math.log2(lam)))
    while k > 0 and 2 ** (k - 1) >= lam:
        k -= 1
    while 2**k < lam:
        k += 1
    return k


def flash_area_model(q: HwQuery) -> FlashArea:
    """Comparator and resistor counts at equal quantization step.

    A flash converter with ``b`` bits needs ``2**(b-1)`` comparators and
    ``2**b`` resistors; the clipping converter needs
    ``n2 = n1 + ceil(log2 lam)`` bits to cover ``v_max``.
    """
    n2 = q.n1 + extra_bits(q.lam)
    return FlashArea(n2, 2 ** (n2 - 1), 2**n2, 2 ** (q.n1 - 1), 2**q.n1)


def dynamic_power_ratio(lam: float) -> float:
    """``P_udr / P_std = 1 / lam**2`` at equal clock rate, with the supply scaled by ``1/lam``."""
    if not lam >= 1:
        raise DomainError(f"folding factor must be >= 1, got {lam}")
    return 1.0 / (lam * lam)


def dynamic_power_au(resolution: float, lam: float, n1: int) -> tuple[float, float]:
    """Arbitrary-unit ``(P_std, P_udr)`` for unit capacitance and unit clock.

    The folding quantizer runs from a supply equal to its window,
    ``v_ref = resolution * 2**n1 / 2``; the clipping one needs ``lam`` times
    that. Only the ratio between the two is meaningful.
    """
    if not resolution > 0:
        raise DomainError(f"resolution must be positive, got {resolution}")
    v_udr = resolution * 2**n1 / 2.0
    v_std = lam * v_udr
    return v_std**2, v_std**2 * dynamic_power_ratio(lam)
