"""Undo the fold: add the accumulated reset offsets back onto the dequantized residues."""

from __future__ import annotations

import math

import numpy as np

from .codec import ModuloStream
from .errors import DomainError
from .frontend import ResetCode
from .quantizer import dequantize
from .signals import SampleStream

__all__ = ["reset_steps", "accumulate_resets", "reconstruct", "srer"]

_STEP = np.zeros(4, dtype=np.int64)
_STEP[ResetCode.POSITIVE] = 1
_STEP[ResetCode.NEGATIVE] = -1


def reset_steps(resets) -> np.ndarray:
    """Map reset patterns to ``+1 / -1 / 0``; rejects pattern ``10``."""
    if isinstance(resets, np.ndarray) and resets.dtype.kind in "ui":
        r = resets.astype(np.int64)
        bad = np.flatnonzero((r < 0) | (r > 3) | (r == 0b10))
        if bad.size:
            ResetCode.from_bits(int(r[bad[0]]), index=int(bad[0]))
        return _STEP[r]
    return np.array(
        [ResetCode.from_bits(int(c), index=i).step for i, c in enumerate(resets)], dtype=np.int64
    )


def accumulate_resets(resets, v_ref: float, span: float = None) -> np.ndarray:
    """Running offset ``z[k] = span * (#positive - #negative in resets[0..k])``.

    ``span`` defaults to ``2 * v_ref``, the bipolar fold span.
    """
    if span is None:
        span = 2.0 * v_ref
    return np.cumsum(reset_steps(resets)) * span


def reconstruct(stream: ModuloStream) -> SampleStream:
    config = stream.header.config()
    z = accumulate_resets(stream.resets, config.v_ref, span=config.span)
    y = dequantize(stream.codes, config)
    return SampleStream(np.asarray(y) + z, stream.header.sample_rate)


def srer(reference, estimate) -> float:
    """Signal-to-reconstruction-error ratio in dB; ``math.inf`` for a perfect match."""
    ref = reference.samples if isinstance(reference, SampleStream) else np.asarray(reference, float)
    est = estimate.samples if isinstance(estimate, SampleStream) else np.asarray(estimate, float)
    if ref.shape != est.shape:
        raise DomainError(f"length mismatch: {ref.size} vs {est.size}")
    err = float(np.sum((ref - est) ** 2))
    sig = float(np.sum(ref**2))
    if err == 0.0:
        return math.inf
    if sig == 0.0:
        return -math.inf
    return 10.0 * math.log10(sig / err)
