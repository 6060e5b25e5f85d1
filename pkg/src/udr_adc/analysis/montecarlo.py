"""Empirical SQNR of both converters from random draws."""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from ..errors import DomainError
from ..frontend import AdcConfig, modulo_fold
from ..quantizer import dequantize, quantize_codes, quantize_standard
from ..signals import draw, lower_quantile
from .sqnr import AdcKind, SqnrQuery

__all__ = ["MonteCarloResult", "monte_carlo_sqnr", "converter_error", "stratified_inputs"]

MIN_SAMPLES = 10_000
BATCHES = 20


class MonteCarloResult(NamedTuple):
    sqnr: float
    stderr: float
    samples: int
    workers: int

    @property
    def db(self):
        return 10.0 * math.log10(self.sqnr)

    @property
    def stderr_db(self):
        # first-order propagation through 10 log10
        return 10.0 / math.log(10.0) * self.stderr / self.sqnr


def converter_error(x, query: SqnrQuery):
    """Per-sample error ``x - x_hat`` of the converter with ``v_ref = gamma``.

    For the clipping converter, clipped samples are measured against the
    saturation level itself so their error is pure overload.
    """
    v_ref = query.gamma
    if query.adc is AdcKind.STANDARD:
        clipped = np.minimum(np.maximum(x, -v_ref), v_ref)
        return np.where(clipped != x, x - clipped, x - quantize_standard(x, v_ref, query.n))
    config = AdcConfig(v_ref=v_ref, total_bits=query.n)
    v_mod, m = modulo_fold(x, v_ref)
    return x - (dequantize(quantize_codes(v_mod, config), config) + m * config.span)


# Tail strata cover tail probabilities from TAIL_START down to TAIL_FLOOR on a
# log grid; everything below TAIL_FLOOR is one last stratum.
TAIL_START = 1e-3
TAIL_FLOOR = 1e-40
TAIL_SHARE = 0.05


@functools.lru_cache(maxsize=8)
def _half_strata(count):
    """Stratum left edges and widths over lower-tail probabilities ``[0, 1/2]``."""
    half = count // 2
    tail = max(2, int(count * TAIL_SHARE))
    body = half - tail
    if body < 1:
        raise DomainError(f"too few samples to stratify: {count}")
    edges = np.concatenate(
        ([0.0], np.geomspace(TAIL_FLOOR, TAIL_START, tail), np.linspace(TAIL_START, 0.5, body + 1)[1:])
    )
    return edges[:-1], np.diff(edges)


@functools.lru_cache(maxsize=8)
def _batch_index(count):
    return np.arange(count) % BATCHES


def stratified_inputs(distribution, count, rng):
    """Unit-variance draws, one per stratum, with the stratum probabilities as weights.

    Each half of the distribution is cut into strata: equal-probability ones
    in the body and, beyond tail probability ``TAIL_START``, strata whose
    probabilities shrink geometrically down to ``TAIL_FLOOR``. The rare
    large-amplitude samples that dominate clipping distortion are thus
    sampled densely and weighted accordingly. Upper-half samples are
    mirrored lower-half draws, which keeps tail probabilities far below
    ``eps`` representable. ``sum(w * g(x))`` is an unbiased estimate of
    ``E[g(X)]``.
    """
    left, width = _half_strata(count)
    k = left.size
    p = np.concatenate((left, left)) + np.concatenate((width, width)) * rng.random(2 * k)
    x = lower_quantile(distribution, 1.0, p)
    x[k:] *= -1.0
    w = np.concatenate((width, width))
    if 2 * k < count:
        # odd count: the spare sample sits at the median with zero weight
        x = np.append(x, 0.0)
        w = np.append(w, 0.0)
    return x, w


def _worker(query, count, seed_seq, stratified):
    rng = np.random.default_rng(seed_seq)
    if stratified:
        x, w = stratified_inputs(query.distribution, count, rng)
    else:
        x, w = draw(query.distribution, 1.0, count, rng), np.full(count, 1.0 / count)
    e = converter_error(x, query)
    # interleaved batches so each one spans the whole distribution
    batch = _batch_index(count)
    sig = np.bincount(batch, weights=w * x * x, minlength=BATCHES)
    err = np.bincount(batch, weights=w * e * e, minlength=BATCHES)
    return sig, err


def monte_carlo_sqnr(
    query: SqnrQuery, samples: int, seed: int = 0, workers: int = 1, stratified: bool = True
):
    """Estimate SQNR from ``samples`` unit-variance draws with ``v_ref = gamma``.

    Samples are split over ``workers`` independently seeded chunks (children
    of ``numpy.random.SeedSequence(seed)``), so results depend on both
    ``seed`` and ``workers``. By default each chunk is a weighted stratified
    sample (see :func:`stratified_inputs`), which keeps the rare clipped
    samples of heavy-tailed inputs from dominating the variance;
    ``stratified=False`` draws i.i.d. samples instead. The standard error
    comes from ``20 * workers`` interleaved batch means.
    """
    if samples < MIN_SAMPLES:
        raise DomainError(f"need at least {MIN_SAMPLES} samples, got {samples}")
    if workers < 1:
        raise DomainError(f"workers must be >= 1, got {workers}")
    children = np.random.SeedSequence(seed).spawn(workers)
    counts = [samples // workers + (i < samples % workers) for i in range(workers)]
    flags = [stratified] * workers
    if workers == 1:
        parts = [_worker(query, counts[0], children[0], stratified)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_worker, [query] * workers, counts, children, flags))
    sig = np.concatenate([p[0] for p in parts])
    err = np.concatenate([p[1] for p in parts])
    ratio = sig.sum() / err.sum()
    per_batch = sig / err
    stderr = per_batch.std(ddof=1) / math.sqrt(per_batch.size)
    return MonteCarloResult(float(ratio), float(stderr), samples, workers)
