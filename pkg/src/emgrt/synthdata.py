"""Seeded synthetic EMG generation and naive reference oracles.

The signal model is amplitude-modulated Gaussian noise: sample (t, ch)
is gain[ch] * noise_std[ch] * envelope(t) * z with z ~ N(0, 1) and a
rectangular burst envelope (1 during a burst, 0 between) at the
profile's duty cycle. That is deliberately not a physiological model;
it is the minimal process that gives every class a distinct magnitude
and variance signature across channels, which is exactly what the three
time-domain features measure.

The oracle_* functions at the bottom are straight-line loop
re-implementations of the feature, projection, and classifier math.
They share no code with the fast paths and exist solely so tests can
cross-check them.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .pipeline import MOTION_LABELS
from .signal import EmgRecording

PRNG_ALGORITHM = "pcg64"


@dataclass(frozen=True)
class ClassProfile:
    """Per-class generator parameters.

    channel_gains scale each channel's noise amplitude (>= 0, zero for
    silent channels); noise_std is the base per-channel deviation (> 0);
    burst_duty is the fraction of each burst period the envelope is on.
    """

    channel_gains: np.ndarray  # (c,)
    noise_std: np.ndarray  # (c,)
    burst_duty: float = 1.0
    burst_period_samples: int = 20

    def __post_init__(self):
        gains = np.asarray(self.channel_gains, dtype=np.float64)
        stds = np.asarray(self.noise_std, dtype=np.float64)
        if gains.ndim != 1 or gains.shape != stds.shape:
            raise ParameterError("channel_gains and noise_std must be 1-D and the same length")
        if (gains < 0).any():
            raise ParameterError("channel gains must be non-negative")
        if (stds <= 0).any():
            raise ParameterError("noise stds must be positive")
        if not 0.0 <= self.burst_duty <= 1.0:
            raise ParameterError(f"burst_duty must lie in [0, 1], got {self.burst_duty}")
        if self.burst_period_samples < 1:
            raise ParameterError(f"burst_period_samples must be >= 1, got {self.burst_period_samples}")
        gains.setflags(write=False)
        stds.setflags(write=False)
        object.__setattr__(self, "channel_gains", gains)
        object.__setattr__(self, "noise_std", stds)

    @property
    def channel_count(self) -> int:
        return self.channel_gains.size

    def envelope(self, n_samples: int) -> np.ndarray:
        """Rectangular burst envelope: 1 for the on-part of each period."""
        on = int(round(self.burst_duty * self.burst_period_samples))
        t = np.arange(n_samples)
        return ((t % self.burst_period_samples) < on).astype(np.float64)

    def duty_fraction(self) -> float:
        """Realized on-fraction after rounding to whole samples."""
        return round(self.burst_duty * self.burst_period_samples) / self.burst_period_samples


# Channel on/off patterns for the eight active motions; any two differ in
# at least four channels so their feature signatures stay far apart.
_ACTIVE_MASKS = {
    "hand-open": (1, 1, 1, 1, 0, 0, 0, 0),
    "hand-close": (0, 0, 0, 0, 1, 1, 1, 1),
    "wrist-flexion": (1, 1, 0, 0, 1, 1, 0, 0),
    "wrist-extension": (0, 0, 1, 1, 0, 0, 1, 1),
    "wrist-pronation": (1, 0, 1, 0, 1, 0, 1, 0),
    "wrist-supination": (0, 1, 0, 1, 0, 1, 0, 1),
    "wrist-ulnar-flexion": (1, 0, 0, 1, 1, 0, 0, 1),
    "wrist-radial-flexion": (0, 1, 1, 0, 0, 1, 1, 0),
}
_ACTIVE_DUTIES = {
    "hand-open": 1.0,
    "hand-close": 1.0,
    "wrist-flexion": 0.9,
    "wrist-extension": 0.9,
    "wrist-pronation": 0.8,
    "wrist-supination": 0.8,
    "wrist-ulnar-flexion": 0.7,
    "wrist-radial-flexion": 1.0,
}
_ON_GAIN_BASE = 4.0
_ON_GAIN_STEP = 0.25
_OFF_GAIN = 0.3
_RELAX_GAIN = 0.2


def default_profiles(channel_count: int = 8) -> dict[str, ClassProfile]:
    """One profile per motion, in the stable class order.

    Active motions get a distinct on/off channel mask with graded gains
    (patterns repeat cyclically when channel_count != 8); relaxation is
    uniform low noise on every channel.
    """
    if channel_count < 1:
        raise ParameterError(f"channel_count must be positive, got {channel_count}")
    profiles: dict[str, ClassProfile] = {}
    for label in MOTION_LABELS:
        if label == "relaxation":
            gains = np.full(channel_count, _RELAX_GAIN)
            duty = 1.0
        else:
            mask = _ACTIVE_MASKS[label]
            gains = np.array(
                [_ON_GAIN_BASE + _ON_GAIN_STEP * ch if mask[ch % 8] else _OFF_GAIN for ch in range(channel_count)]
            )
            duty = _ACTIVE_DUTIES[label]
        profiles[label] = ClassProfile(
            channel_gains=gains,
            noise_std=np.ones(channel_count),
            burst_duty=duty,
        )
    return profiles


def expected_feature_vector(profile: ClassProfile, window_len: int, floor: float = 1e-12) -> np.ndarray:
    """Analytic expectation of the composite features for one window.

    Uses E|z| = sigma * sqrt(2/pi) for the IEMG block, the time-averaged
    second moment for the variance and RSS blocks. RSS is approximated
    by sqrt(E[sum x^2]) (tight for the window sizes used here).
    """
    sigma = profile.channel_gains * profile.noise_std
    duty = profile.duty_fraction()
    iemg = window_len * duty * sigma * math.sqrt(2.0 / math.pi)
    var = duty * sigma**2
    lnvar = np.log(np.maximum(var, floor))
    rss = math.sqrt(window_len * duty) * sigma
    return np.concatenate([iemg, lnvar, rss])


def gen_session(motion: str, duration_s: float = 5.0, rate_hz: float = 200.0,
                profile: ClassProfile | None = None, seed=0) -> EmgRecording:
    """Generate one motion session as amplitude-modulated Gaussian noise.

    ``profile`` defaults to the motion's entry in ``default_profiles()``.
    Deterministic for a given seed (PCG64 behind numpy's Generator).
    """
    if not duration_s > 0:
        raise ParameterError(f"duration_s must be positive, got {duration_s}")
    if not rate_hz > 0:
        raise ParameterError(f"rate_hz must be positive, got {rate_hz}")
    if profile is None:
        if motion not in MOTION_LABELS:
            raise ParameterError(f"no default profile for motion '{motion}'; pass one explicitly")
        profile = default_profiles()[motion]
    n = int(round(duration_s * rate_hz))
    if n < 2:
        raise ParameterError(f"duration {duration_s}s at {rate_hz} Hz yields {n} samples; need at least 2")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, profile.channel_count))
    sigma = profile.channel_gains * profile.noise_std
    samples = z * sigma[None, :] * profile.envelope(n)[:, None]
    return EmgRecording(samples=samples, sample_rate_hz=rate_hz)


@dataclass(frozen=True)
class SyntheticCorpus:
    """Labeled recordings plus everything needed to regenerate them."""

    recordings: tuple[tuple[str, EmgRecording], ...]
    session_seeds: tuple[int, ...]
    profiles: dict[str, ClassProfile]
    duration_s: float
    rate_hz: float
    prng: str = PRNG_ALGORITHM


def gen_corpus(session_seeds, duration_s: float = 5.0, rate_hz: float = 200.0,
               profiles: dict[str, ClassProfile] | None = None) -> SyntheticCorpus:
    """One session per (seed, class); seeded as PCG64((session_seed, class_index)).

    Byte-for-byte reproducible from its arguments; distinct seeds give
    distinct recordings.
    """
    session_seeds = tuple(int(s) for s in session_seeds)
    if not session_seeds:
        raise ParameterError("at least one session seed is required")
    if profiles is None:
        profiles = default_profiles()
    recordings = []
    for s in session_seeds:
        for k, (label, profile) in enumerate(profiles.items()):
            rec = gen_session(label, duration_s=duration_s, rate_hz=rate_hz,
                              profile=profile, seed=(s, k))
            recordings.append((label, rec))
    return SyntheticCorpus(
        recordings=tuple(recordings),
        session_seeds=session_seeds,
        profiles=dict(profiles),
        duration_s=float(duration_s),
        rate_hz=float(rate_hz),
    )


# --- Naive oracles -------------------------------------------------------
#
# Pure-Python loop implementations, deliberately independent of the
# numpy fast paths above them in the package.


def oracle_feature_vector(window, floor: float = 1e-12) -> np.ndarray:
    """Loop re-implementation of the composite feature extraction."""
    data = window.data if hasattr(window, "data") else np.asarray(window, dtype=np.float64)
    n, c = data.shape
    iemg_block = [0.0] * c
    lnvar_block = [0.0] * c
    rss_block = [0.0] * c
    for ch in range(c):
        abs_sum = 0.0
        total = 0.0
        for t in range(n):
            x = float(data[t, ch])
            abs_sum += abs(x)
            total += x
        mu = total / n
        sq_dev = 0.0
        sq_sum = 0.0
        for t in range(n):
            x = float(data[t, ch])
            d = x - mu
            sq_dev += d * d
            sq_sum += x * x
        var = sq_dev / (n - 1)
        iemg_block[ch] = abs_sum
        lnvar_block[ch] = math.log(var if var > floor else floor)
        rss_block[ch] = math.sqrt(sq_sum)
    return np.array(iemg_block + lnvar_block + rss_block)


def oracle_project(f, mean, components) -> np.ndarray:
    """Loop re-implementation of (f - mean) @ components.T."""
    f = np.asarray(f, dtype=np.float64)
    mean = np.asarray(mean, dtype=np.float64)
    components = np.asarray(components, dtype=np.float64)
    p, h = components.shape
    out = [0.0] * p
    for i in range(p):
        acc = 0.0
        for j in range(h):
            acc += (float(f[j]) - float(mean[j])) * float(components[i, j])
        out[i] = acc
    return np.array(out)


def oracle_project_kernel(f, train_vectors, gamma, dual_coefs, kernel_mean) -> np.ndarray:
    """Loop re-implementation of the centered Gaussian dual expansion."""
    f = np.asarray(f, dtype=np.float64)
    X = np.asarray(train_vectors, dtype=np.float64)
    A = np.asarray(dual_coefs, dtype=np.float64)
    km = np.asarray(kernel_mean, dtype=np.float64)
    j_count, h = X.shape
    k = [0.0] * j_count
    for i in range(j_count):
        d2 = 0.0
        for j in range(h):
            d = float(f[j]) - float(X[i, j])
            d2 += d * d
        k[i] = math.exp(-d2 / (2.0 * gamma * gamma))
    p = A.shape[0]
    out = [0.0] * p
    for r in range(p):
        acc = 0.0
        for i in range(j_count):
            acc += float(A[r, i]) * (k[i] - float(km[i]))
        out[r] = acc
    return np.array(out)


def oracle_predict(s, centers, widths, weights, bias):
    """Loop re-implementation of the RBF forward pass; returns (scores, class)."""
    s = np.asarray(s, dtype=np.float64)
    centers = np.asarray(centers, dtype=np.float64)
    widths = np.asarray(widths, dtype=np.float64)
    weights = np.asarray(weights, dtype=np.float64)
    bias = np.asarray(bias, dtype=np.float64)
    m, p = centers.shape
    psi = [0.0] * m
    for j in range(m):
        d2 = 0.0
        for i in range(p):
            d = float(s[i]) - float(centers[j, i])
            d2 += d * d
        psi[j] = math.exp(-d2 / (2.0 * float(widths[j]) ** 2))
    v = weights.shape[0]
    scores = [0.0] * v
    for r in range(v):
        acc = float(bias[r])
        for j in range(m):
            acc += float(weights[r, j]) * psi[j]
        scores[r] = acc
    best = 0
    for r in range(1, v):
        if scores[r] > scores[best]:
            best = r
    return np.array(scores), best
