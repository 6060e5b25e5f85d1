"""Behavioural SAR quantizer and the clipping baseline converter.

Codes are offset binary over the fold window: code ``k`` covers
``[low + k*delta, low + (k+1)*delta)`` and dequantizes to the cell midpoint.
Every code path compares against the same thresholds ``(s - offset) * delta``
so the bitwise SAR searches and the vectorised path agree bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .frontend import AdcConfig

__all__ = [
    "CodeWord",
    "sar_quantize",
    "sar_offset_binary",
    "sar_sign_magnitude",
    "quantize_codes",
    "dequantize",
    "quantize_standard",
]


@dataclass(frozen=True)
class CodeWord:
    code: int
    sign_mod: bool


def _offset(bits, unipolar):
    return 0 if unipolar else 2 ** (bits - 1)


def _search(predicate, bits):
    """Successive approximation: largest code in ``[0, 2**bits)`` with ``predicate`` true.

    ``predicate`` must be monotone (true up to some code, false after) and true at 0.
    """
    code = 0
    for bit in range(bits - 1, -1, -1):
        trial = code | (1 << bit)
        if predicate(trial):
            code = trial
    return code


def sar_offset_binary(v, bits, delta, unipolar=False):
    """Conventional SAR: keep a bit while the DAC level does not exceed ``v``."""
    off = _offset(bits, unipolar)
    return _search(lambda s: v >= (s - off) * delta, bits)


def sar_sign_magnitude(v, bits, delta):
    """Bipolar SAR that searches on ``|v|`` and inverts the result for negative inputs.

    For ``v < 0`` the DAC reference is negated and each bit is kept while
    ``|v|`` strictly exceeds the mirrored DAC level. The final word is XORed
    bitwise with ``NOT SIGN_MOD``.
    """
    off = _offset(bits, False)
    sign_mod = v >= 0
    if sign_mod:
        raw = _search(lambda s: v >= (s - off) * delta, bits)
    else:
        raw = _search(lambda s: -v > (s - off) * delta, bits)
    mask = 0 if sign_mod else 2**bits - 1
    return raw ^ mask


def _check_range(v, config):
    va = np.asarray(v, dtype=np.float64)
    if np.any(~((va >= config.low) & (va < config.high))):
        raise DomainError(
            f"quantizer input outside [{config.low}, {config.high}): "
            f"min {va.min()!r}, max {va.max()!r}"
        )


def sar_quantize(v_mod: float, config: AdcConfig) -> CodeWord:
    """Quantize one folded sample with ``config.quant_bits`` SAR cycles."""
    _check_range(v_mod, config)
    bits, delta = config.quant_bits, config.delta
    if config.unipolar:
        code = sar_offset_binary(v_mod, bits, delta, unipolar=True)
    else:
        code = sar_sign_magnitude(v_mod, bits, delta)
    return CodeWord(code, bool(v_mod >= 0))


def _codes(v, bits, delta, unipolar):
    """Same result as the bitwise search: largest ``s`` with ``v >= (s - off) * delta``."""
    off = _offset(bits, unipolar)
    top = 2**bits - 1
    # integer-valued floats keep the threshold products identical to int * delta
    code = np.divide(v, delta, out=np.empty(np.shape(v)))
    np.floor(code, out=code)
    code += off
    np.clip(code, 0, top, out=code)
    # the rounded quotient can land one cell off; settle against the exact thresholds
    t = code - off
    t *= delta
    code -= (v < t) & (code > 0)
    t = code + (1 - off)
    t *= delta
    code += (v >= t) & (code < top)
    return code.astype(np.int64)


def quantize_codes(v_mod, config: AdcConfig) -> np.ndarray:
    """Vectorised offset-binary SAR over an array of folded samples."""
    v = np.asarray(v_mod, dtype=np.float64)
    _check_range(v, config)
    return _codes(v, config.quant_bits, config.delta, config.unipolar)


def dequantize(word, config: AdcConfig):
    """Mid-cell reconstruction ``low + (code + 0.5) * delta``.

    Accepts a :class:`CodeWord`, an integer code or an array of codes.
    """
    code = word.code if isinstance(word, CodeWord) else word
    c = np.asarray(code)
    if np.any((c < 0) | (c >= 2**config.quant_bits)):
        raise DomainError(f"code outside [0, {2**config.quant_bits})")
    out = config.low + (c + 0.5) * config.delta
    return float(out) if np.ndim(out) == 0 else out


def quantize_standard(x, v_ref: float, bits: int):
    """Clipping bipolar ADC with ``bits`` bits over ``[-v_ref, v_ref]``.

    Inputs beyond the range saturate to the extreme levels.
    """
    if bits < 1:
        raise DomainError(f"bits must be >= 1, got {bits}")
    if not v_ref > 0:
        raise DomainError(f"v_ref must be positive, got {v_ref}")
    delta = 2.0 * v_ref / 2**bits
    xc = np.minimum(np.maximum(np.asarray(x, dtype=np.float64), -v_ref), v_ref)
    out = -v_ref + (_codes(xc, bits, delta, False) + 0.5) * delta
    return float(out) if np.ndim(out) == 0 else out
