"""Behavioural model of a self-resetting (modulo) ADC and its SQNR/area/power analyses."""

from .adc import Conversion, encode
from .codec import ModuloStream, StreamHeader, pack, unpack
from .frontend import (
    AdcConfig,
    FoldResult,
    FoldState,
    ResetCode,
    counter_logic,
    fold_sample,
    fold_step,
    modulo_fold,
    validate_timing,
)
from .quantizer import CodeWord, dequantize, quantize_codes, quantize_standard, sar_quantize
from .reconstruct import accumulate_resets, reconstruct, srer
from .signals import (
    DistributionKind,
    RandomProcess,
    SampleStream,
    SignalSpec,
    Sinusoid,
    SinusoidMixture,
    generate,
    lipschitz_bound,
    max_sampling_period,
    read_csv,
    read_pcm_audio,
    write_csv,
    write_pcm_audio,
)

__version__ = "0.1.0"
