import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emgrt.errors import DataError, ParameterError
from emgrt.signal import EmgRecording, SignalWindow, WindowingConfig, segment, validate


def rec_of(shape, fill=0.0, rate=200.0):
    return EmgRecording(np.full(shape, fill), sample_rate_hz=rate)


class TestEmgRecording:
    def test_converts_to_float64_and_freezes(self):
        rec = EmgRecording(np.arange(20, dtype=np.int16).reshape(10, 2))
        assert rec.samples.dtype == np.float64
        with pytest.raises(ValueError):
            rec.samples[0, 0] = 1.0

    def test_rejects_ragged(self):
        with pytest.raises(DataError):
            EmgRecording([[1.0, 2.0], [3.0]])

    def test_rejects_1d(self):
        with pytest.raises(DataError):
            EmgRecording(np.zeros(10))

    def test_rejects_bad_rate(self):
        with pytest.raises(ParameterError):
            rec_of((10, 2), rate=0.0)

    def test_duration(self):
        assert rec_of((1000, 8)).duration_s == pytest.approx(5.0)


class TestWindowingConfig:
    def test_defaults_match_reference_timing(self):
        cfg = WindowingConfig()
        assert (cfg.window_len_samples, cfg.stride_samples) == (50, 25)

    def test_from_millis(self):
        cfg = WindowingConfig.from_millis(250.0, 125.0, 200.0)
        assert (cfg.window_len_samples, cfg.stride_samples) == (50, 25)

    @pytest.mark.parametrize("w,s", [(1, 1), (0, 1), (10, 0), (10, 11), (10, -2)])
    def test_rejects_bad_lengths(self, w, s):
        with pytest.raises(ParameterError):
            WindowingConfig(w, s)


class TestSegment:
    def test_count_and_last_start(self):
        wins = segment(rec_of((1000, 2)), WindowingConfig(50, 25))
        assert len(wins) == 39
        assert wins[-1].start_index == 950

    def test_single_window_boundary(self):
        wins = segment(rec_of((50, 2)), WindowingConfig(50, 25))
        assert len(wins) == 1
        assert wins[0].start_index == 0

    def test_insufficient_samples(self):
        with pytest.raises(DataError, match="insufficient samples"):
            segment(rec_of((49, 2)), WindowingConfig(50, 25))

    def test_non_finite_rejected(self):
        bad = np.zeros((100, 2))
        bad[5, 1] = np.nan
        with pytest.raises(DataError, match="invalid signal"):
            segment(EmgRecording(bad), WindowingConfig(50, 25))

    def test_windows_are_read_only_views(self):
        rec = rec_of((100, 3), fill=2.0)
        win = segment(rec, WindowingConfig(10, 5))[0]
        with pytest.raises(ValueError):
            win.data[0, 0] = 9.0
        assert win.data.base is rec.samples

    def test_deterministic_and_side_effect_free(self):
        rng = np.random.default_rng(0)
        rec = EmgRecording(rng.normal(size=(333, 4)))
        before = rec.samples.copy()
        a = segment(rec, WindowingConfig(50, 17))
        b = segment(rec, WindowingConfig(50, 17))
        assert len(a) == len(b)
        for wa, wb in zip(a, b):
            assert wa.start_index == wb.start_index
            np.testing.assert_array_equal(wa.data, wb.data)
        np.testing.assert_array_equal(rec.samples, before)

    @settings(max_examples=150, deadline=None)
    @given(
        w=st.integers(min_value=2, max_value=120),
        stride=st.integers(min_value=1, max_value=120),
        extra=st.integers(min_value=0, max_value=500),
    )
    def test_count_formula_property(self, w, stride, extra):
        stride = min(stride, w)
        t = w + extra
        wins = segment(rec_of((t, 1)), WindowingConfig(w, stride))
        assert len(wins) == (t - w) // stride + 1
        for k, win in enumerate(wins):
            assert win.start_index == k * stride
            assert win.n_samples == w

    def test_abutting_windows_reconstruct_prefix(self):
        rng = np.random.default_rng(1)
        rec = EmgRecording(rng.normal(size=(105, 3)))
        wins = segment(rec, WindowingConfig(20, 20))
        stacked = np.vstack([w.data for w in wins])
        np.testing.assert_array_equal(stacked, rec.samples[: len(wins) * 20])


class TestSignalWindow:
    def test_needs_two_samples(self):
        with pytest.raises(DataError):
            SignalWindow(np.zeros((1, 4)))

    def test_shape_properties(self):
        win = SignalWindow(np.zeros((6, 4)), start_index=12)
        assert (win.n_samples, win.channel_count, win.start_index) == (6, 4, 12)


class TestValidate:
    def test_all_zero_recording_ok(self):
        assert validate(rec_of((100, 8))).ok

    def test_nan_reported_with_indices(self):
        arr = np.zeros((10, 8))
        arr[5, 2] = np.nan
        report = validate(arr, sample_rate_hz=200.0)
        assert not report.ok
        assert (report.issues[0].row, report.issues[0].channel) == (5, 2)
        assert "row 5" in str(report)

    def test_ragged_is_shape_error(self):
        report = validate([[1.0, 2.0], [3.0]])
        assert not report.ok
        assert report.issues[0].kind == "shape"

    def test_bad_rate_reported_not_raised(self):
        report = validate(np.zeros((5, 2)), sample_rate_hz=-1.0)
        assert not report.ok
        assert any(issue.kind == "sample-rate" for issue in report.issues)
