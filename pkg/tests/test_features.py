import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emgrt.errors import DataError, ParameterError
from emgrt.features import VARIANCE_FLOOR, FeatureVector, extract, iemg, ln_var, rss
from emgrt.signal import SignalWindow
from emgrt.synthdata import oracle_feature_vector


class TestIemg:
    def test_abs_sum(self):
        assert iemg([1.0, -2.0, 3.0]) == 6.0

    def test_zeros(self):
        assert iemg(np.zeros(17)) == 0.0

    def test_single_sample(self):
        assert iemg([-5.0]) == 5.0

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            iemg([])


class TestLnVar:
    def test_two_samples(self):
        assert ln_var([1.0, -1.0]) == pytest.approx(math.log(2.0), abs=1e-12)

    def test_constant_hits_floor(self):
        assert ln_var([7.0, 7.0, 7.0]) == math.log(VARIANCE_FLOOR)

    def test_hand_computed(self):
        # mean 2, squared deviations (4 + 0 + 4) / 2 = 4
        assert ln_var([0.0, 2.0, 4.0]) == pytest.approx(math.log(4.0), abs=1e-12)

    def test_needs_two_samples(self):
        with pytest.raises(ParameterError):
            ln_var([1.0])


class TestRss:
    def test_three_four_five(self):
        assert rss([3.0, 4.0]) == 5.0

    def test_zeros(self):
        assert rss(np.zeros(9)) == 0.0

    def test_ones(self):
        assert rss([1.0, 1.0, 1.0, 1.0]) == 2.0

    def test_empty_rejected(self):
        with pytest.raises(ParameterError):
            rss([])


class TestExtract:
    def test_eight_channels_give_24_entries(self):
        rng = np.random.default_rng(0)
        fv = extract(SignalWindow(rng.normal(size=(50, 8))))
        assert len(fv) == 24

    def test_zero_window_layout(self):
        fv = extract(SignalWindow(np.zeros((4, 2))))
        expected = [0.0, 0.0, math.log(VARIANCE_FLOOR), math.log(VARIANCE_FLOOR), 0.0, 0.0]
        np.testing.assert_allclose(fv.values, expected)

    def test_hand_computed_blocks(self):
        data = np.zeros((4, 2))
        data[:, 0] = [3.0, 4.0, 0.0, 0.0]
        fv = extract(SignalWindow(data))
        np.testing.assert_allclose(fv.iemg_block, [7.0, 0.0])
        np.testing.assert_allclose(fv.rss_block, [5.0, 0.0])

    def test_error_names_channel(self):
        data = np.zeros((5, 3))
        data[2, 1] = np.inf
        with pytest.raises(DataError, match="channel 1"):
            extract(SignalWindow(data))

    def test_matches_oracle_on_random_windows(self):
        rng = np.random.default_rng(42)
        for _ in range(200):
            win = SignalWindow(rng.normal(0.0, rng.uniform(2.0, 100.0), (50, 8)))
            fast = extract(win).values
            ref = oracle_feature_vector(win)
            rel = np.abs(fast - ref) / np.maximum(np.abs(ref), 1e-300)
            assert rel.max() < 1e-12

    def test_channel_permutation_permutes_blocks(self):
        rng = np.random.default_rng(7)
        data = rng.normal(0.0, 3.0, (30, 5))
        perm = rng.permutation(5)
        base = extract(SignalWindow(data))
        permuted = extract(SignalWindow(data[:, perm]))
        np.testing.assert_array_equal(permuted.iemg_block, base.iemg_block[perm])
        np.testing.assert_array_equal(permuted.ln_var_block, base.ln_var_block[perm])
        np.testing.assert_array_equal(permuted.rss_block, base.rss_block[perm])

    @settings(max_examples=120, deadline=None)
    @given(
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        scale=st.floats(min_value=0.01, max_value=1000.0, allow_nan=False),
    )
    def test_scaling_law(self, seed, scale):
        rng = np.random.default_rng(seed)
        data = rng.normal(0.0, 4.0, (40, 3))
        base = extract(SignalWindow(data))
        scaled = extract(SignalWindow(scale * data))
        np.testing.assert_allclose(scaled.iemg_block, scale * base.iemg_block, rtol=1e-9)
        np.testing.assert_allclose(scaled.rss_block, scale * base.rss_block, rtol=1e-9)
        # both variances sit far above the floor for this data
        np.testing.assert_allclose(
            scaled.ln_var_block, base.ln_var_block + 2.0 * math.log(scale), rtol=0, atol=1e-8
        )


class TestFeatureVector:
    def test_rejects_wrong_length(self):
        with pytest.raises(ParameterError):
            FeatureVector(np.zeros(7), channel_count=2)

    def test_rejects_negative_iemg(self):
        values = np.zeros(6)
        values[0] = -1.0
        with pytest.raises(DataError):
            FeatureVector(values, channel_count=2)

    def test_rejects_non_finite(self):
        values = np.zeros(6)
        values[3] = np.nan
        with pytest.raises(DataError):
            FeatureVector(values, channel_count=2)
