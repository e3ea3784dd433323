"""Multichannel EMG containers and sliding-window segmentation."""

from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, ParameterError

DEFAULT_SAMPLE_RATE_HZ = 200.0
DEFAULT_CHANNEL_COUNT = 8
# 250 ms windows stepped by 125 ms at the 200 Hz acquisition rate.
DEFAULT_WINDOW_LEN_SAMPLES = 50
DEFAULT_STRIDE_SAMPLES = 25


@dataclass(frozen=True)
class EmgRecording:
    """A continuous multichannel surface-EMG recording.

    ``samples`` holds one row per time step and one column per channel,
    in signed ADC units. The array is copied to float64 and frozen on
    construction, so recordings are safe to share across threads.
    Finiteness is not enforced here; ``validate`` reports on it and
    ``segment`` rejects non-finite input.
    """

    samples: np.ndarray
    sample_rate_hz: float = DEFAULT_SAMPLE_RATE_HZ

    def __post_init__(self):
        try:
            arr = np.array(self.samples, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise DataError(f"invalid signal: samples are not a rectangular numeric array ({exc})") from exc
        if arr.ndim != 2:
            raise DataError(f"invalid signal: samples must be 2-D (time x channels), got {arr.ndim}-D")
        if arr.shape[1] < 1:
            raise DataError("invalid signal: recording needs at least one channel")
        if not self.sample_rate_hz > 0:
            raise ParameterError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def channel_count(self) -> int:
        return self.samples.shape[1]

    @property
    def duration_s(self) -> float:
        return self.n_samples / self.sample_rate_hz


@dataclass(frozen=True)
class SignalWindow:
    """One fixed-length slice of a recording (rows = samples, cols = channels).

    ``data`` is kept as a read-only view when sliced from a frozen
    recording; ``start_index`` is the sample offset into the source.
    At least two samples are required so the variance feature's N-1
    divisor is defined.
    """

    data: np.ndarray
    start_index: int = 0

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise DataError(f"window data must be 2-D (time x channels), got {arr.ndim}-D")
        if arr.shape[0] < 2:
            raise DataError(f"window must hold at least 2 samples, got {arr.shape[0]}")
        object.__setattr__(self, "data", arr)

    @property
    def n_samples(self) -> int:
        return self.data.shape[0]

    @property
    def channel_count(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class WindowingConfig:
    """Sliding-window parameters, in samples."""

    window_len_samples: int = DEFAULT_WINDOW_LEN_SAMPLES
    stride_samples: int = DEFAULT_STRIDE_SAMPLES

    def __post_init__(self):
        w, s = self.window_len_samples, self.stride_samples
        if int(w) != w or w < 2:
            raise ParameterError(f"window_len_samples must be an integer >= 2, got {w}")
        if int(s) != s or not 0 < s <= w:
            raise ParameterError(f"stride_samples must satisfy 0 < stride <= window length, got {s}")
        object.__setattr__(self, "window_len_samples", int(w))
        object.__setattr__(self, "stride_samples", int(s))

    @classmethod
    def from_millis(cls, window_ms: float, stride_ms: float, sample_rate_hz: float) -> "WindowingConfig":
        """Convert millisecond lengths to sample counts at the given rate."""
        if sample_rate_hz <= 0:
            raise ParameterError(f"sample_rate_hz must be positive, got {sample_rate_hz}")
        return cls(
            window_len_samples=int(round(window_ms * sample_rate_hz / 1000.0)),
            stride_samples=int(round(stride_ms * sample_rate_hz / 1000.0)),
        )


def segment(rec: EmgRecording, cfg: WindowingConfig) -> list[SignalWindow]:
    """Split a recording into overlapping analysis windows.

    Window k covers samples [k*stride, k*stride + window_len); the count
    is floor((T - window_len) / stride) + 1 and any trailing partial
    window is dropped. Windows are read-only views into the recording.

    Raises:
        DataError: if the recording is shorter than one window
            ("insufficient samples") or contains non-finite values
            ("invalid signal").
    """
    arr = rec.samples
    w = cfg.window_len_samples
    s = cfg.stride_samples
    if arr.shape[0] < w:
        raise DataError(f"insufficient samples: recording has {arr.shape[0]} rows, window needs {w}")
    if not np.isfinite(arr).all():
        raise DataError("invalid signal: recording contains non-finite samples")
    count = (arr.shape[0] - w) // s + 1
    return [SignalWindow(arr[k * s : k * s + w], start_index=k * s) for k in range(count)]


@dataclass(frozen=True)
class ValidationIssue:
    kind: str  # "shape" | "non-finite" | "sample-rate"
    message: str
    row: int | None = None
    channel: int | None = None


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[ValidationIssue, ...] = field(default=())

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(issue.message for issue in self.issues)


def validate(rec, sample_rate_hz: float | None = None) -> ValidationReport:
    """Check a recording (or raw sample array) and report every problem found.

    Confirms the samples form a rectangular 2-D array of finite values
    and that the sample rate is positive. Returns a structured report
    instead of raising, listing the row/channel of each offending entry.
    """
    issues: list[ValidationIssue] = []
    if isinstance(rec, EmgRecording):
        arr = rec.samples
        rate = rec.sample_rate_hz
    else:
        rate = sample_rate_hz
        try:
            arr = np.asarray(rec, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            issues.append(ValidationIssue("shape", f"samples are not a rectangular numeric array ({exc})"))
            return ValidationReport(ok=False, issues=tuple(issues))
    if arr.ndim != 2:
        issues.append(ValidationIssue("shape", f"samples must be 2-D (time x channels), got {arr.ndim}-D"))
        return ValidationReport(ok=False, issues=tuple(issues))
    bad = np.argwhere(~np.isfinite(arr))
    for row, ch in bad:
        issues.append(
            ValidationIssue(
                "non-finite",
                f"non-finite sample at row {int(row)}, channel {int(ch)}",
                row=int(row),
                channel=int(ch),
            )
        )
    if rate is not None and not rate > 0:
        issues.append(ValidationIssue("sample-rate", f"sample rate must be positive, got {rate}"))
    return ValidationReport(ok=not issues, issues=tuple(issues))
