"""Named converter and test-signal configurations used by the command line."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError
from .frontend import AdcConfig
from .signals import SignalSpec, SinusoidMixture

__all__ = ["Preset", "PRESETS", "get_preset"]

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class Preset:
    name: str
    v_ref: float
    total_bits: int
    sample_rate: Optional[float] = None
    unipolar: bool = False
    full_scale: Optional[float] = None  # volts mapped to PCM full scale
    signal: Optional[SignalSpec] = None
    description: str = ""

    def config(self, **overrides) -> AdcConfig:
        kw = dict(v_ref=self.v_ref, total_bits=self.total_bits, unipolar=self.unipolar)
        kw.update(overrides)
        return AdcConfig(**kw)


# Four equal tones phased so that x(0) = 0 and all of them peak together at
# t = 50 ms, reaching 1.2 V: six times the 0.2 V window half-width.
_FOUR_TONES = SinusoidMixture.of(
    (0.3, 30.0, -HALF_PI),
    (0.3, 70.0, -HALF_PI),
    (0.3, 200.0, HALF_PI),
    (0.3, 300.0, HALF_PI),
)

# 2.5 - 1.5 cos(2 pi 100 t) - cos(2 pi 300 t): spans [0, 5] V, peak at t = 5 ms.
_PROTO_WAVE = SinusoidMixture.of(
    (2.5, 0.0, HALF_PI),
    (1.5, 100.0, -HALF_PI),
    (1.0, 300.0, -HALF_PI),
)

PRESETS = {
    "fig5": Preset(
        "fig5",
        v_ref=0.2,
        total_bits=11,
        sample_rate=53_000.0,
        signal=SignalSpec(_FOUR_TONES, duration=0.1, sample_rate=53_000.0),
        description="four tones up to 1.2 V peak, 0.2 V window, 9 + 2 bits at 53 kHz",
    ),
    "fig6": Preset(
        "fig6",
        v_ref=0.2,
        total_bits=11,
        full_scale=1.2,
        description="speech recording scaled to 1.2 V full scale, 0.2 V window, 9 + 2 bits",
    ),
    "proto": Preset(
        "proto",
        v_ref=1.65,
        total_bits=12,
        sample_rate=200_000.0,
        unipolar=True,
        signal=SignalSpec(_PROTO_WAVE, duration=0.01, sample_rate=200_000.0),
        description="positive-only 5 V peak input, 1.65 V unipolar window, 12 bits at 200 ksps",
    ),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
