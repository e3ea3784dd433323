"""Per-channel time-domain features and the composite feature vector.

Three scalars summarise each channel of a window: integrated EMG (sum of
absolute values, an activation onset index), the natural log of the
sample variance (a power-density proxy that amplifies small values), and
the root sum square (tracks muscle strength variation). The composite
vector concatenates them block-wise: [IEMG ch1..chc | lnVAR ch1..chc |
RSS ch1..chc], giving 3*c entries (24 for the 8-channel configuration).
"""

from dataclasses import dataclass

import numpy as np

from .errors import DataError, ParameterError
from .signal import SignalWindow

# Keeps lnVAR finite on constant windows (relaxed muscle / idle ADC).
VARIANCE_FLOOR = 1e-12


def iemg(channel) -> float:
    """Integrated EMG: sum of absolute sample values."""
    x = np.asarray(channel, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ParameterError("iemg needs a non-empty 1-D sample array")
    return float(np.abs(x).sum())


def ln_var(channel, floor: float = VARIANCE_FLOOR) -> float:
    """Natural log of the unbiased sample variance, floored at ``floor``."""
    x = np.asarray(channel, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ParameterError("ln_var needs at least 2 samples (variance divides by N-1)")
    v = float(x.var(ddof=1))
    return float(np.log(max(v, floor)))


def rss(channel) -> float:
    """Root sum square: sqrt of the sum of squared samples."""
    x = np.asarray(channel, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ParameterError("rss needs a non-empty 1-D sample array")
    return float(np.sqrt((x * x).sum()))


@dataclass(frozen=True)
class FeatureVector:
    """Composite per-window features in block-major channel order."""

    values: np.ndarray
    channel_count: int

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        c = self.channel_count
        if v.ndim != 1 or c < 1 or v.size != 3 * c:
            raise ParameterError(f"feature vector must have 3 x {c} entries, got shape {v.shape}")
        if not np.isfinite(v).all():
            raise DataError("feature vector contains non-finite entries")
        if (v[:c] < 0).any() or (v[2 * c :] < 0).any():
            raise DataError("IEMG and RSS blocks must be non-negative")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size

    @property
    def iemg_block(self) -> np.ndarray:
        return self.values[: self.channel_count]

    @property
    def ln_var_block(self) -> np.ndarray:
        return self.values[self.channel_count : 2 * self.channel_count]

    @property
    def rss_block(self) -> np.ndarray:
        return self.values[2 * self.channel_count :]


def extract(window: SignalWindow, floor: float = VARIANCE_FLOOR) -> FeatureVector:
    """Compute the three features channel-wise and concatenate block-major."""
    data = window.data
    if not np.isfinite(data).all():
        bad_ch = int(np.argwhere(~np.isfinite(data))[0, 1])
        raise DataError(f"feature extraction failed on channel {bad_ch}: non-finite samples")
    iemg_block = np.abs(data).sum(axis=0)
    lnvar_block = np.log(np.maximum(data.var(axis=0, ddof=1), floor))
    rss_block = np.sqrt((data * data).sum(axis=0))
    values = np.concatenate([iemg_block, lnvar_block, rss_block])
    return FeatureVector(values=values, channel_count=data.shape[1])
