"""End-to-end training, evaluation, and latency benchmarking.

Training segments labeled recordings into windows, extracts the
composite features into a training matrix, fits the discriminant
projection, projects the matrix into the scatter matrix, and trains the
RBF readout. Evaluation runs the per-window chain extract -> project ->
predict; the benchmark times that chain against a hard deadline.
"""

import enum
import time
from dataclasses import dataclass, field

import numpy as np

from . import classifier, features, projection
from .classifier import Prediction, RbfModel
from .errors import DataError, ParameterError
from .projection import KernelProjectionModel, LinearProjectionModel, TrainingMatrix
from .signal import EmgRecording, SignalWindow, WindowingConfig, segment

DEFAULT_DEADLINE_MS = 128.0
_ZSCORE_STD_FLOOR = 1e-12


class MotionClass(enum.IntEnum):
    """The nine wrist-hand motions, with their stable integer encoding."""

    HAND_OPEN = 0
    HAND_CLOSE = 1
    WRIST_FLEXION = 2
    WRIST_EXTENSION = 3
    WRIST_PRONATION = 4
    WRIST_SUPINATION = 5
    WRIST_ULNAR_FLEXION = 6
    WRIST_RADIAL_FLEXION = 7
    RELAXATION = 8

    @property
    def label(self) -> str:
        return self.name.lower().replace("_", "-")

    @classmethod
    def from_label(cls, label: str) -> "MotionClass":
        try:
            return cls[label.upper().replace("-", "_")]
        except KeyError:
            raise ParameterError(f"unknown motion label '{label}'") from None


MOTION_LABELS: tuple[str, ...] = tuple(m.label for m in MotionClass)


@dataclass(frozen=True)
class PipelineConfig:
    """Reference configuration for training and evaluation.

    Defaults match the 8-channel, 200 Hz, nine-motion setup: 250 ms
    windows stepped by 125 ms, an 8-dimensional projection, and a
    14-node classifier.
    """

    windowing: WindowingConfig = field(default_factory=WindowingConfig)
    sample_rate_hz: float = 200.0
    channel_count: int = 8
    class_names: tuple[str, ...] = MOTION_LABELS
    variance_floor: float = features.VARIANCE_FLOOR
    zscore: bool = False
    projection_kind: str = "linear"  # "linear" | "kernel"
    n_components: int | None = None  # defaults to n_classes - 1
    fisher_ridge: float = projection.DEFAULT_FISHER_RIDGE
    kernel_gamma: float | None = None  # None -> median heuristic
    kernel_ridge: float = projection.DEFAULT_KERNEL_RIDGE
    n_centers: int = classifier.DEFAULT_N_CENTERS
    output_ridge: float = classifier.DEFAULT_OUTPUT_RIDGE
    include_bias: bool = True

    def __post_init__(self):
        if self.projection_kind not in ("linear", "kernel"):
            raise ParameterError(f"projection_kind must be 'linear' or 'kernel', got '{self.projection_kind}'")
        if self.channel_count < 1:
            raise ParameterError(f"channel_count must be positive, got {self.channel_count}")
        if not self.sample_rate_hz > 0:
            raise ParameterError(f"sample_rate_hz must be positive, got {self.sample_rate_hz}")
        names = tuple(self.class_names)
        if len(names) < 2 or len(set(names)) != len(names):
            raise ParameterError("class_names must hold at least 2 distinct labels")
        object.__setattr__(self, "class_names", names)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def resolved_components(self) -> int:
        return self.n_components if self.n_components is not None else self.n_classes - 1


@dataclass(frozen=True)
class TrainedPipeline:
    """Immutable bundle of everything the evaluation phase needs."""

    config: PipelineConfig
    projection_model: LinearProjectionModel | KernelProjectionModel
    rbf_model: RbfModel
    seed: int
    feature_mean: np.ndarray | None = None  # set when config.zscore
    feature_std: np.ndarray | None = None
    version: str = "1"

    def __post_init__(self):
        if self.projection_model.n_components != self.rbf_model.n_dims:
            raise ParameterError(
                f"projection emits {self.projection_model.n_components} dims but the "
                f"classifier expects {self.rbf_model.n_dims}"
            )
        if self.rbf_model.n_classes != self.config.n_classes:
            raise ParameterError(
                f"classifier has {self.rbf_model.n_classes} outputs for {self.config.n_classes} classes"
            )
        if self.config.zscore != (self.feature_mean is not None and self.feature_std is not None):
            raise ParameterError("feature_mean/feature_std must be present exactly when zscore is enabled")

    @property
    def class_names(self) -> tuple[str, ...]:
        return self.config.class_names


@dataclass(frozen=True)
class EvaluationReport:
    """Per-class and total accuracy with the supporting confusion matrix."""

    class_names: tuple[str, ...]
    confusion: np.ndarray  # (v, v) ints, rows = true class
    per_class_accuracy: np.ndarray  # (v,) percent, NaN where no windows
    total_accuracy: float  # percent
    window_counts: np.ndarray  # (v,) ints

    def format_table(self) -> str:
        """Fixed-column text table: one row per motion plus a total row."""
        width = max(len(n) for n in self.class_names + ("total",))
        lines = [f"{'motion':<{width}}  {'windows':>8}  {'accuracy_pct':>12}"]
        for i, name in enumerate(self.class_names):
            acc = self.per_class_accuracy[i]
            acc_s = f"{acc:12.2f}" if np.isfinite(acc) else f"{'n/a':>12}"
            lines.append(f"{name:<{width}}  {int(self.window_counts[i]):>8}  {acc_s}")
        lines.append(f"{'total':<{width}}  {int(self.window_counts.sum()):>8}  {self.total_accuracy:12.2f}")
        return "\n".join(lines)


@dataclass(frozen=True)
class LatencyReport:
    """Per-window wall-clock times against a hard deadline."""

    times_ms: np.ndarray
    deadline_ms: float
    mean_ms: float
    p95_ms: float
    p99_ms: float
    max_ms: float
    miss_count: int

    def format_table(self) -> str:
        lines = [
            f"{'metric':<14}  {'value':>12}",
            f"{'windows':<14}  {self.times_ms.size:>12}",
            f"{'mean_ms':<14}  {self.mean_ms:>12.4f}",
            f"{'p95_ms':<14}  {self.p95_ms:>12.4f}",
            f"{'p99_ms':<14}  {self.p99_ms:>12.4f}",
            f"{'max_ms':<14}  {self.max_ms:>12.4f}",
            f"{'deadline_ms':<14}  {self.deadline_ms:>12.4f}",
            f"{'misses':<14}  {self.miss_count:>12}",
        ]
        return "\n".join(lines)


def _segment_features(recordings, config: PipelineConfig):
    """Windows -> feature rows and integer labels, with per-class counts."""
    index = {name: i for i, name in enumerate(config.class_names)}
    rows, labels = [], []
    for label, rec in recordings:
        if label not in index:
            raise DataError(f"unknown class label '{label}'")
        if rec.channel_count != config.channel_count:
            raise DataError(
                f"recording has {rec.channel_count} channels, configuration expects {config.channel_count}"
            )
        for win in segment(rec, config.windowing):
            rows.append(features.extract(win, floor=config.variance_floor).values)
            labels.append(index[label])
    return np.array(rows), np.array(labels, dtype=np.int64)


def train_pipeline(recordings, config: PipelineConfig | None = None, seed: int = 0) -> TrainedPipeline:
    """Train projection and classifier from labeled recordings.

    ``recordings`` is a sequence of (label, EmgRecording) pairs. Every
    configured class must contribute at least two windows after
    segmentation; a missing class raises a DataError naming it.
    """
    config = config or PipelineConfig()
    if not recordings:
        raise DataError("empty corpus: no labeled recordings to train on")
    G, y = _segment_features(recordings, config)
    counts = np.bincount(y, minlength=config.n_classes) if y.size else np.zeros(config.n_classes, dtype=int)
    for i, name in enumerate(config.class_names):
        if counts[i] < 2:
            raise DataError(f"class '{name}' has {int(counts[i])} training windows; at least 2 are required")
    feature_mean = feature_std = None
    if config.zscore:
        feature_mean = G.mean(axis=0)
        feature_std = np.maximum(G.std(axis=0), _ZSCORE_STD_FLOOR)
        G = (G - feature_mean) / feature_std
    train_mat = TrainingMatrix(features=G, labels=y, n_classes=config.n_classes)
    p = config.resolved_components()
    if config.projection_kind == "linear":
        proj_model = projection.train_linear_fisher(train_mat, p=p, ridge=config.fisher_ridge)
    else:
        proj_model = projection.train_kernel_fisher(
            train_mat, p=p, gamma=config.kernel_gamma, ridge=config.kernel_ridge
        )
    scatter = projection.make_scatter(proj_model, train_mat)
    rbf = classifier.train(
        scatter,
        n_centers=config.n_centers,
        ridge=config.output_ridge,
        seed=seed,
        class_names=config.class_names,
        include_bias=config.include_bias,
    )
    return TrainedPipeline(
        config=config,
        projection_model=proj_model,
        rbf_model=rbf,
        seed=int(seed),
        feature_mean=feature_mean,
        feature_std=feature_std,
    )


def evaluate_window(pipe: TrainedPipeline, window: SignalWindow) -> Prediction:
    """Per-window evaluation: extract features, project, classify."""
    cfg = pipe.config
    if window.data.shape != (cfg.windowing.window_len_samples, cfg.channel_count):
        raise DataError(
            f"window shape {window.data.shape} does not match configured "
            f"({cfg.windowing.window_len_samples}, {cfg.channel_count})"
        )
    x = features.extract(window, floor=cfg.variance_floor).values
    if pipe.feature_mean is not None:
        x = (x - pipe.feature_mean) / pipe.feature_std
    if isinstance(pipe.projection_model, LinearProjectionModel):
        s = projection.project(pipe.projection_model, x)
    else:
        s = projection.project_kernel(pipe.projection_model, x)
    return classifier.predict(pipe.rbf_model, s)


def evaluate_corpus(pipe: TrainedPipeline, recordings) -> EvaluationReport:
    """Apply the moving-window scheme to each recording and aggregate accuracy."""
    if not recordings:
        raise DataError("empty corpus: nothing to evaluate")
    cfg = pipe.config
    index = {name: i for i, name in enumerate(cfg.class_names)}
    v = cfg.n_classes
    confusion = np.zeros((v, v), dtype=np.int64)
    for label, rec in recordings:
        if label not in index:
            raise DataError(f"unknown class label '{label}'")
        true_idx = index[label]
        for win in segment(rec, cfg.windowing):
            pred = evaluate_window(pipe, win)
            confusion[true_idx, pred.decided_class] += 1
    counts = confusion.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        per_class = np.where(counts > 0, 100.0 * np.diag(confusion) / np.maximum(counts, 1), np.nan)
    total = 100.0 * np.trace(confusion) / confusion.sum()
    return EvaluationReport(
        class_names=cfg.class_names,
        confusion=confusion,
        per_class_accuracy=per_class,
        total_accuracy=float(total),
        window_counts=counts,
    )


def bench_latency(pipe: TrainedPipeline, windows, deadline_ms: float = DEFAULT_DEADLINE_MS,
                  repetitions: int = 1, warmup: int = 10) -> LatencyReport:
    """Time evaluate_window per window on a monotonic sub-microsecond clock.

    The first ``warmup`` evaluations (at least 10) are excluded so the
    statistics reflect steady state; times are gathered over all
    repetitions of the window list.
    """
    windows = list(windows)
    if not windows:
        raise ParameterError("bench_latency needs at least one window")
    if repetitions < 1:
        raise ParameterError(f"repetitions must be >= 1, got {repetitions}")
    warmup = max(int(warmup), 10)
    for i in range(warmup):
        evaluate_window(pipe, windows[i % len(windows)])
    times = np.empty(len(windows) * repetitions)
    k = 0
    for _ in range(repetitions):
        for win in windows:
            t0 = time.perf_counter_ns()
            evaluate_window(pipe, win)
            times[k] = (time.perf_counter_ns() - t0) / 1e6
            k += 1
    return LatencyReport(
        times_ms=times,
        deadline_ms=float(deadline_ms),
        mean_ms=float(times.mean()),
        p95_ms=float(np.percentile(times, 95)),
        p99_ms=float(np.percentile(times, 99)),
        max_ms=float(times.max()),
        miss_count=int((times > deadline_ms).sum()),
    )
