"""Modulo-folding front end.

Two views of the same fold are provided. :func:`modulo_fold` is the ideal
centred modulo applied in one shot. :func:`fold_step` and :func:`fold_sample`
model the counter/feedback circuit one counter-clock cycle at a time: the
unsigned counter ``CNT_OUT`` is scaled by the fold span with the polarity of
the input, the residue is compared against the fold window, and the counter
moves by one according to the polarities of the residue and the input.

The fold window is half open, ``[-v_ref, v_ref)`` for the bipolar converter,
so ``+v_ref`` folds to ``-v_ref`` with one wrap. A unipolar variant with
window ``[0, v_ref)`` and span ``v_ref`` models positive-only quantizers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import (
    ConfigError,
    CorruptionError,
    DomainError,
    NonConvergenceError,
    SaturationError,
)

__all__ = [
    "AdcConfig",
    "ResetCode",
    "FoldState",
    "FoldResult",
    "TableRow",
    "INITIAL_STATE",
    "counter_logic",
    "modulo_fold",
    "fold_step",
    "fold_sample",
    "validate_timing",
]


@dataclass(frozen=True)
class AdcConfig:
    """Converter parameters.

    ``total_bits`` counts the two reset bits; the quantizer gets
    ``total_bits - 2``. Clock periods are optional and only needed by
    :func:`validate_timing`.
    """

    v_ref: float
    total_bits: int = 11
    counter_bits: int = 8
    t_clk_sh: Optional[float] = None
    t_clk_cnt: Optional[float] = None
    tau: Optional[float] = None
    unipolar: bool = False

    def __post_init__(self):
        if not (self.v_ref > 0 and math.isfinite(self.v_ref)):
            raise ConfigError(f"v_ref must be positive, got {self.v_ref}")
        if int(self.total_bits) != self.total_bits or self.total_bits < 3:
            raise ConfigError(f"total_bits must be an integer >= 3, got {self.total_bits}")
        if int(self.counter_bits) != self.counter_bits or self.counter_bits < 1:
            raise ConfigError(f"counter_bits must be an integer >= 1, got {self.counter_bits}")

    @property
    def quant_bits(self) -> int:
        return self.total_bits - 2

    @property
    def low(self) -> float:
        """Lower edge of the fold window."""
        return 0.0 if self.unipolar else -self.v_ref

    @property
    def span(self) -> float:
        """Width of the fold window, i.e. the voltage removed per wrap."""
        return self.v_ref if self.unipolar else 2.0 * self.v_ref

    @property
    def high(self) -> float:
        return self.low + self.span

    @property
    def delta(self) -> float:
        """Quantization step of the ``quant_bits`` quantizer over the fold window."""
        return self.span / 2**self.quant_bits

    @property
    def counter_limit(self) -> int:
        return 2**self.counter_bits


class ResetCode(enum.IntEnum):
    """Two-bit reset side information ``R1R0``. Pattern ``10`` is unused."""

    NO_RESET = 0b00
    POSITIVE = 0b01
    NEGATIVE = 0b11

    @classmethod
    def from_bits(cls, bits, index=None):
        if bits == 0b10:
            raise CorruptionError("reset pattern 10 is never emitted", index=index)
        try:
            return cls(bits)
        except ValueError:
            raise CorruptionError(f"invalid reset bits {bits!r}", index=index) from None

    @classmethod
    def from_step(cls, step):
        if step > 0:
            return cls.POSITIVE
        if step < 0:
            return cls.NEGATIVE
        return cls.NO_RESET

    @property
    def step(self) -> int:
        """Change of the signed fold count, in units of the fold span."""
        return {0b00: 0, 0b01: 1, 0b11: -1}[self.value]


class TableRow(NamedTuple):
    delta_cnt: int
    delta_z: int  # in units of the fold span
    reset: ResetCode


def counter_logic(eom: bool, sign_mod: bool, sign_in: bool) -> TableRow:
    """Counter and reset truth table for one counter-clock cycle."""
    if eom:
        return TableRow(0, 0, ResetCode.NO_RESET)
    delta_cnt = 1 if sign_mod == sign_in else -1
    # z = (+/-1 by SIGN_IN) * CNT_OUT * span
    delta_z = delta_cnt if sign_in else -delta_cnt
    return TableRow(delta_cnt, delta_z, ResetCode.from_step(delta_z))


@dataclass(frozen=True)
class FoldState:
    """Registers of the modulo circuit between counter-clock cycles.

    ``v_mod`` is the residue seen by the comparator on the cycle that set the
    flags. It is kept for diagnostics only.
    """

    cnt_out: int = 0
    sign_in: bool = True
    sign_mod: bool = True
    eom: bool = True
    v_mod: float = 0.0

    @property
    def signed_count(self) -> int:
        return self.cnt_out if self.sign_in else -self.cnt_out


INITIAL_STATE = FoldState()


@dataclass(frozen=True)
class FoldResult:
    v_mod: float
    fold_count: int
    reset: ResetCode
    cycles_used: int
    growth_violation: bool = False


def _residue(x: float, count: int, low: float, span: float):
    """``(v, in_window)`` for the residue ``x - count*span`` against ``[low, low + span)``.

    Rounding to nearest is monotone and both edges are floats, so the float
    residue can only misjudge membership when it lands exactly on an edge.
    Those cases are settled in exact rational arithmetic, and an exact residue
    just below the top edge that rounds onto it is pulled back inside.
    """
    high = low + span
    p = count * span
    v = x - p
    if v != low and v != high:
        return v, low <= v < high
    r = Fraction(x) - Fraction(p)
    inside = low <= r < high
    if inside and v == high:
        v = math.nextafter(high, -math.inf)
    return v, inside


def _fold_scalar(x, low, span):
    high = low + span
    m = math.floor((x - low) / span)
    for _ in range(4):
        v, inside = _residue(x, m, low, span)
        if inside:
            return v, m
        m += 1 if v >= high else -1
    raise AssertionError(f"fold of {x!r} did not settle")  # pragma: no cover


def modulo_fold(x, v_ref, unipolar=False):
    """Fold ``x`` into the window, returning ``(v_mod, m)`` with ``x = v_mod + m*span``.

    The identity is exact except for the rounding of ``m*span`` and of the
    final subtraction. Works on scalars (returns ``float, int``) and arrays
    (returns two arrays).
    """
    if not v_ref > 0:
        raise DomainError(f"v_ref must be positive, got {v_ref}")
    low = 0.0 if unipolar else -v_ref
    span = v_ref if unipolar else 2.0 * v_ref
    high = low + span
    xa = np.asarray(x, dtype=np.float64)
    m = np.floor((xa - low) / span)
    v = xa - m * span
    # floor() of a rounded quotient can be off by one at the window edges
    m = m + (v >= high) - (v < low)
    v = xa - m * span
    edge = np.flatnonzero((v <= low) | (v >= high))
    if edge.size:
        v, m = np.atleast_1d(v).copy(), np.atleast_1d(m).copy()
        flat = np.atleast_1d(xa)
        for i in edge.tolist():
            v[i], m[i] = _fold_scalar(float(flat[i]), low, span)
        v, m = v.reshape(xa.shape), m.reshape(xa.shape)
    if xa.ndim == 0:
        return float(v), int(m)
    return v, m.astype(np.int64)


def fold_step(state: FoldState, v_in: float, config: AdcConfig, index=None) -> FoldState:
    """Advance the modulo circuit by one counter-clock cycle."""
    sign_in = v_in >= 0.0
    signed = state.cnt_out if sign_in else -state.cnt_out
    v_mod, eom = _residue(v_in, signed, config.low, config.span)
    sign_mod = v_mod >= 0.0
    cnt = state.cnt_out
    if not eom:
        cnt += counter_logic(eom, sign_mod, sign_in).delta_cnt
        if not 0 <= cnt < config.counter_limit:
            raise SaturationError(
                f"counter would reach {cnt}, outside [0, {config.counter_limit})", index=index
            )
    return FoldState(cnt, sign_in, sign_mod, eom, v_mod)


def fold_sample(
    prev: FoldState,
    v_in: float,
    config: AdcConfig,
    max_cycles: int = 64,
    index=None,
) -> tuple[FoldResult, FoldState]:
    """Run the circuit on one held sample until end-of-modulo.

    The counter starts from the previous sample's value. The reset code is the
    sign of the change in the signed fold count. A change larger than one, or
    more than two counter cycles, means the sampling-rate condition was broken;
    the result is still returned with ``growth_violation`` set.
    """
    state = prev
    for cycle in range(1, max_cycles + 1):
        state = fold_step(state, v_in, config, index=index)
        if state.eom:
            break
    else:
        raise NonConvergenceError(f"no end-of-modulo after {max_cycles} cycles", index=index)
    step = state.signed_count - prev.signed_count
    result = FoldResult(
        v_mod=state.v_mod,
        fold_count=state.signed_count,
        reset=ResetCode.from_step(step),
        cycles_used=cycle,
        growth_violation=cycle > 2 or abs(step) > 1,
    )
    return result, state


def validate_timing(config: AdcConfig) -> bool:
    """True when the hold period covers two counter cycles plus the quantizer delay."""
    periods = (config.t_clk_sh, config.t_clk_cnt, config.tau)
    if any(p is None for p in periods):
        raise ConfigError("t_clk_sh, t_clk_cnt and tau must all be set")
    if any(p < 0 for p in periods):
        raise DomainError(f"clock periods must be non-negative, got {periods}")
    return config.t_clk_sh >= 2.0 * config.t_clk_cnt + config.tau
