"""Sample stream -> modulo stream conversion with per-sample diagnostics."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .codec import ModuloStream
from .errors import ConfigError, SaturationError
from .frontend import INITIAL_STATE, AdcConfig, ResetCode, fold_sample, modulo_fold
from .quantizer import quantize_codes
from .signals import SampleStream, max_increment

__all__ = ["Conversion", "encode"]


@dataclass(frozen=True, eq=False)
class Conversion:
    """Result of :func:`encode`: the output stream and what happened per sample."""

    stream: ModuloStream
    config: AdcConfig
    v_mod: np.ndarray
    folds: np.ndarray
    cycles: np.ndarray
    violations: np.ndarray  # sample indices breaking the sampling-rate condition
    max_increment: float

    def summary(self) -> dict:
        resets = Counter(int(r) for r in self.stream.resets)
        hist = Counter(int(m) for m in self.folds)
        return {
            "samples": int(self.folds.size),
            "v_ref": self.config.v_ref,
            "total_bits": self.config.total_bits,
            "quant_bits": self.config.quant_bits,
            "unipolar": self.config.unipolar,
            "sample_rate": self.stream.header.sample_rate,
            "resets": {
                "none": resets[ResetCode.NO_RESET],
                "positive": resets[ResetCode.POSITIVE],
                "negative": resets[ResetCode.NEGATIVE],
            },
            "fold_histogram": {str(k): hist[k] for k in sorted(hist)},
            "max_abs_fold": int(np.max(np.abs(self.folds))),
            "max_cycles_used": int(self.cycles.max()) if self.cycles.size else 0,
            "growth_violations": int(self.violations.size),
            "first_violation": int(self.violations[0]) if self.violations.size else None,
            "max_increment_volts": self.max_increment,
            "max_increment_allowed_volts": self.config.span,
        }


def encode(
    stream: SampleStream,
    config: AdcConfig,
    engine: str = "circuit",
    max_cycles: int = 64,
) -> Conversion:
    """Fold, reset-encode and quantize every sample of ``stream``.

    ``engine="circuit"`` steps the counter state machine sample by sample;
    ``engine="ideal"`` applies the one-shot modulo to the whole array and
    derives reset codes from consecutive fold counts. Both raise
    :class:`SaturationError` when the fold count does not fit the counter.
    """
    x = stream.samples
    if engine == "circuit":
        n = x.size
        v_mod = np.empty(n)
        folds = np.empty(n, dtype=np.int64)
        cycles = np.empty(n, dtype=np.int64)
        resets = np.empty(n, dtype=np.uint8)
        bad = []
        state = INITIAL_STATE
        for k, v in enumerate(x.tolist()):
            res, state = fold_sample(state, v, config, max_cycles=max_cycles, index=k)
            v_mod[k] = res.v_mod
            folds[k] = res.fold_count
            cycles[k] = res.cycles_used
            resets[k] = res.reset
            if res.growth_violation:
                bad.append(k)
        violations = np.array(bad, dtype=np.int64)
    elif engine == "ideal":
        v_mod, folds = modulo_fold(x, config.v_ref, unipolar=config.unipolar)
        over = np.flatnonzero(np.abs(folds) >= config.counter_limit)
        if over.size:
            raise SaturationError(
                f"fold count {folds[over[0]]} exceeds the {config.counter_bits}-bit counter",
                index=int(over[0]),
            )
        steps = np.diff(folds, prepend=0)
        resets = np.select(
            [steps > 0, steps < 0], [ResetCode.POSITIVE, ResetCode.NEGATIVE], ResetCode.NO_RESET
        ).astype(np.uint8)
        # the counter is unsigned and moves one step per cycle, plus the final check
        counters = np.abs(folds)
        cycles = np.abs(np.diff(counters, prepend=0)) + 1
        violations = np.flatnonzero((np.abs(steps) > 1) | (cycles > 2))
    else:
        raise ConfigError(f"unknown engine {engine!r}")

    codes = quantize_codes(v_mod, config)
    out = ModuloStream.from_records(config, stream.sample_rate, resets, codes)
    return Conversion(out, config, v_mod, folds, cycles, violations, max_increment(stream))
