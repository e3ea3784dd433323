"""Real-time wrist-hand motion recognition from multichannel surface EMG.

The toolchain: segment continuous recordings into overlapping windows,
reduce each window to three time-domain features per channel, project
the composite vector onto a class-separable subspace with a (linear or
kernelized) Fisher discriminant, and classify with a Gaussian RBF
network. Budget-conscious by design: per-window evaluation is a handful
of small dense operations, benchmarked against a hard deadline.
"""

from .classifier import (
    Prediction,
    RbfModel,
    activations,
    fit_centers,
    fit_output_weights,
    fit_widths,
    predict,
)
from .classifier import train as train_rbf
from .errors import DataError, EmgrtError, NumericError, ParameterError
from .features import VARIANCE_FLOOR, FeatureVector, extract, iemg, ln_var, rss
from .io import load_dataset, load_model, save_dataset, save_model
from .pipeline import (
    MOTION_LABELS,
    EvaluationReport,
    LatencyReport,
    MotionClass,
    PipelineConfig,
    TrainedPipeline,
    bench_latency,
    evaluate_corpus,
    evaluate_window,
    train_pipeline,
)
from .projection import (
    KernelProjectionModel,
    LinearProjectionModel,
    ScatterMatrix,
    TrainingMatrix,
    make_scatter,
    median_pairwise_distance,
    project,
    project_kernel,
    project_rows,
    train_kernel_fisher,
    train_linear_fisher,
)
from .signal import (
    EmgRecording,
    SignalWindow,
    ValidationReport,
    WindowingConfig,
    segment,
    validate,
)
from .synthdata import (
    ClassProfile,
    SyntheticCorpus,
    default_profiles,
    expected_feature_vector,
    gen_corpus,
    gen_session,
    oracle_feature_vector,
    oracle_predict,
    oracle_project,
    oracle_project_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "ClassProfile",
    "DataError",
    "EmgRecording",
    "EmgrtError",
    "EvaluationReport",
    "FeatureVector",
    "KernelProjectionModel",
    "LatencyReport",
    "LinearProjectionModel",
    "MOTION_LABELS",
    "MotionClass",
    "NumericError",
    "ParameterError",
    "PipelineConfig",
    "Prediction",
    "RbfModel",
    "ScatterMatrix",
    "SignalWindow",
    "SyntheticCorpus",
    "TrainedPipeline",
    "TrainingMatrix",
    "VARIANCE_FLOOR",
    "ValidationReport",
    "WindowingConfig",
    "activations",
    "bench_latency",
    "default_profiles",
    "evaluate_corpus",
    "evaluate_window",
    "expected_feature_vector",
    "extract",
    "fit_centers",
    "fit_output_weights",
    "fit_widths",
    "gen_corpus",
    "gen_session",
    "iemg",
    "ln_var",
    "load_dataset",
    "load_model",
    "make_scatter",
    "median_pairwise_distance",
    "oracle_feature_vector",
    "oracle_predict",
    "oracle_project",
    "oracle_project_kernel",
    "predict",
    "project",
    "project_kernel",
    "project_rows",
    "rss",
    "save_dataset",
    "save_model",
    "segment",
    "train_kernel_fisher",
    "train_linear_fisher",
    "train_pipeline",
    "train_rbf",
    "validate",
]
