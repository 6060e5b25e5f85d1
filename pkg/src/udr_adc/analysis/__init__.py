"""SQNR, Monte Carlo and hardware-cost analyses."""

from .hardware import (
    FlashArea,
    HwQuery,
    dynamic_power_au,
    dynamic_power_ratio,
    extra_bits,
    flash_area_model,
)
from .montecarlo import MonteCarloResult, converter_error, monte_carlo_sqnr, stratified_inputs
from .sqnr import (
    AdcKind,
    SqnrQuery,
    crossover_gamma,
    overload_variance,
    overload_variance_quadrature,
    psi,
    q_function,
    quantization_noise,
    sqnr,
    sqnr_std,
    sqnr_std_quadrature,
    sqnr_udr,
    to_db,
)
