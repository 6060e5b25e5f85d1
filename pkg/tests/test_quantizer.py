import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udr_adc.errors import DomainError
from udr_adc.frontend import AdcConfig
from udr_adc.quantizer import (
    CodeWord,
    dequantize,
    quantize_codes,
    quantize_standard,
    sar_offset_binary,
    sar_quantize,
    sar_sign_magnitude,
)


def _probe_points(bits, delta, off):
    """Cell midpoints, exact edges and their float neighbours across the window."""
    k = np.arange(2**bits) - off
    edges = k * delta
    pts = np.concatenate(
        [
            edges,
            np.nextafter(edges, -np.inf),
            np.nextafter(edges, np.inf),
            edges + 0.5 * delta,
        ]
    )
    lo, hi = -off * delta, (2**bits - off) * delta
    return pts[(pts >= lo) & (pts < hi)]


class TestCodes:
    def test_midscale(self, cfg11):
        assert sar_quantize(0.0, cfg11) == CodeWord(256, True)

    def test_bottom_edge(self, cfg11):
        assert sar_quantize(-0.2, cfg11) == CodeWord(0, False)

    def test_offset_binary_map(self, cfg11):
        # 0.3 V above the bottom edge in 0.4/512 V steps
        assert sar_quantize(0.1, cfg11).code == 384

    def test_top_cell(self, cfg11):
        assert sar_quantize(math.nextafter(0.2, 0), cfg11).code == 511

    @pytest.mark.parametrize("v", [0.2, -0.2000001, 1.0, math.nan])
    def test_out_of_window(self, cfg11, v):
        with pytest.raises(DomainError):
            sar_quantize(v, cfg11)
        with pytest.raises(DomainError):
            quantize_codes(np.array([0.0, v]), cfg11)

    def test_unipolar_codes(self):
        cfg = AdcConfig(v_ref=1.65, total_bits=12, unipolar=True)
        assert sar_quantize(0.0, cfg).code == 0
        assert sar_quantize(1.649, cfg).code == 1023
        assert sar_quantize(0.825, cfg).code == 512


class TestSarPathsAgree:
    """The sign-magnitude search with XOR inversion must reproduce offset binary."""

    @pytest.mark.parametrize("bits", range(1, 11))
    def test_exhaustive(self, bits):
        delta = 0.4 / 2**bits
        off = 2 ** (bits - 1)
        pts = _probe_points(bits, delta, off)
        ob = [sar_offset_binary(v, bits, delta) for v in pts.tolist()]
        sm = [sar_sign_magnitude(v, bits, delta) for v in pts.tolist()]
        assert ob == sm
        assert np.array_equal(quantize_codes(pts, AdcConfig(v_ref=0.2, total_bits=bits + 2)), ob)

    @pytest.mark.parametrize("bits", [1, 3, 6, 10])
    def test_unipolar_vectorised_matches_search(self, bits):
        cfg = AdcConfig(v_ref=1.65, total_bits=bits + 2, unipolar=True)
        pts = _probe_points(bits, cfg.delta, 0)
        ob = [sar_offset_binary(v, bits, cfg.delta, unipolar=True) for v in pts.tolist()]
        assert np.array_equal(quantize_codes(pts, cfg), ob)

    @given(v=st.floats(min_value=-0.2, max_value=0.2, exclude_max=True))
    @settings(max_examples=500, deadline=None)
    def test_random(self, v):
        cfg = AdcConfig(v_ref=0.2, total_bits=11)
        word = sar_quantize(v, cfg)
        assert word.code == sar_offset_binary(v, 9, cfg.delta)
        assert quantize_codes(np.array([v]), cfg)[0] == word.code

    def test_case2_keeps_bit_on_strict_excess(self):
        # v = -delta sits on an edge: |v| equals a DAC level, so that bit is dropped
        bits, delta = 4, 0.025
        assert sar_sign_magnitude(-delta, bits, delta) == sar_offset_binary(-delta, bits, delta) == 7


class TestDequantize:
    def test_bottom_cell(self, cfg11):
        assert dequantize(0, cfg11) == pytest.approx(-0.2 + 0.5 * 0.4 / 512)
        assert dequantize(0, cfg11) == pytest.approx(-0.19961, abs=1e-5)

    def test_midscale(self, cfg11):
        assert dequantize(CodeWord(256, True), cfg11) == pytest.approx(3.906e-4, rel=1e-3)

    def test_array(self, cfg11):
        out = dequantize(np.array([0, 511]), cfg11)
        np.testing.assert_allclose(out, [-0.2 + cfg11.delta / 2, 0.2 - cfg11.delta / 2])

    @pytest.mark.parametrize("code", [-1, 512])
    def test_invalid_code(self, cfg11, code):
        with pytest.raises(DomainError):
            dequantize(code, cfg11)

    def test_round_trip_error_bound(self, cfg11, rng):
        v = rng.uniform(-0.2, 0.2, 10**4)
        err = dequantize(quantize_codes(v, cfg11), cfg11) - v
        assert np.max(np.abs(err)) <= cfg11.delta / 2 * (1 + 1e-12)

    def test_error_variance_is_delta_squared_over_twelve(self, cfg11, rng):
        v = rng.uniform(-0.2, 0.2, 10**6)
        err = dequantize(quantize_codes(v, cfg11), cfg11) - v
        assert abs(np.var(err) / (cfg11.delta**2 / 12) - 1) < 0.02


class TestStandardQuantizer:
    def test_clips_to_top_level(self):
        delta = 0.4 / 2**8
        assert quantize_standard(0.4, 0.2, 8) == pytest.approx(0.2 - delta / 2)
        assert quantize_standard(-5.0, 0.2, 8) == pytest.approx(-0.2 + delta / 2)

    def test_mid_rise_at_zero(self):
        delta = 0.4 / 2**8
        assert abs(quantize_standard(0.0, 0.2, 8)) == pytest.approx(delta / 2)

    def test_in_range_error(self, rng):
        x = rng.uniform(-1.0, 1.0, 10**4)
        assert np.max(np.abs(quantize_standard(x, 1.0, 10) - x)) <= 1.0 / 2**10 * (1 + 1e-12)

    def test_monotone(self, rng):
        x = np.sort(rng.uniform(-3, 3, 10**4))
        assert np.all(np.diff(quantize_standard(x, 1.0, 6)) >= 0)

    def test_equals_clip_then_in_range_quantizer(self, rng):
        x = rng.normal(scale=0.5, size=5000)
        cfg = AdcConfig(v_ref=0.4, total_bits=10)  # 8 quantizer bits over [-0.4, 0.4)
        xc = np.clip(x, -0.4, math.nextafter(0.4, 0))
        expected = dequantize(quantize_codes(xc, cfg), cfg)
        np.testing.assert_array_equal(quantize_standard(x, 0.4, 8), expected)

    @pytest.mark.parametrize("bits, v_ref", [(0, 1.0), (8, 0.0)])
    def test_domain(self, bits, v_ref):
        with pytest.raises(DomainError):
            quantize_standard(0.1, v_ref, bits)
