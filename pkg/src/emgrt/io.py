"""Dataset ingestion and bit-exact model persistence.

Dataset files are plain text tables, one row per sample::

    # rate_hz=200.0 channels=8
    timestamp_index,ch1,...,ch8,label
    0,-1.25,...,hand-open

The metadata line is mandatory and precedes the header (further ``#``
comment lines after it are ignored). Timestamp indices must increase
strictly; contiguous same-label runs load as one recording each.

Model files are versioned, line-oriented key-value text::

    EMGRT-MODEL v1
    [meta]
    seed = 0
    classes = hand-open,...
    end = 0
    [windowing]
    ...

Every real number is serialized as lowercase hexadecimal floating point
(``float.hex()``), so a save/load round trip reproduces bit-identical
predictions. Arrays are declared as ``key = vector N`` or ``key =
matrix R C`` followed by their row-major values, one line per row. Each
section closes with ``end = <count>``, the number of hex-float values
in the section, which is verified on load to catch truncation.
"""

import re
from pathlib import Path

import numpy as np

from .classifier import RbfModel
from .errors import DataError
from .pipeline import MOTION_LABELS, PipelineConfig, TrainedPipeline
from .projection import KernelProjectionModel, LinearProjectionModel
from .signal import EmgRecording, WindowingConfig

MODEL_MAGIC = "EMGRT-MODEL v1"

_META_RE = re.compile(r"^#\s*rate_hz=(\S+)\s+channels=(\d+)\s*$")


# --- Dataset files --------------------------------------------------------


def save_dataset(recordings, path, extra_comments=()) -> None:
    """Write labeled recordings as one contiguous run per recording."""
    recordings = list(recordings)
    if not recordings:
        raise DataError("refusing to write an empty dataset")
    rate = recordings[0][1].sample_rate_hz
    channels = recordings[0][1].channel_count
    for label, rec in recordings:
        if rec.sample_rate_hz != rate or rec.channel_count != channels:
            raise DataError("all recordings in a dataset must share sample rate and channel count")
    lines = [f"# rate_hz={rate!r} channels={channels}"]
    for comment in extra_comments:
        lines.append(f"# {comment}")
    lines.append("timestamp_index," + ",".join(f"ch{i + 1}" for i in range(channels)) + ",label")
    ts = 0
    for label, rec in recordings:
        for row in rec.samples:
            lines.append(f"{ts}," + ",".join(repr(float(x)) for x in row) + f",{label}")
            ts += 1
    Path(path).write_text("\n".join(lines) + "\n")


def load_dataset(path, class_names=MOTION_LABELS) -> list[tuple[str, EmgRecording]]:
    """Parse a dataset file into (label, recording) pairs.

    Raises DataError with the offending line number for malformed rows,
    unknown labels, or non-monotone timestamps.
    """
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines:
        raise DataError(f"{path}: empty file")
    meta = _META_RE.match(lines[0])
    if not meta:
        raise DataError(f"{path}: line 1: expected metadata line '# rate_hz=<value> channels=<c>'")
    try:
        rate = float(meta.group(1))
    except ValueError:
        raise DataError(f"{path}: line 1: bad rate_hz value '{meta.group(1)}'") from None
    channels = int(meta.group(2))
    known = set(class_names)
    n_cols = channels + 2

    lineno = 1
    while lineno < len(lines) and lines[lineno].startswith("#"):
        lineno += 1
    if lineno >= len(lines):
        raise DataError(f"{path}: missing header row")
    header = lines[lineno].split(",")
    expected_header = ["timestamp_index"] + [f"ch{i + 1}" for i in range(channels)] + ["label"]
    if header != expected_header:
        raise DataError(f"{path}: line {lineno + 1}: header must be '{','.join(expected_header)}'")

    recordings: list[tuple[str, EmgRecording]] = []
    run_rows: list[list[float]] = []
    run_label: str | None = None
    prev_ts = -1

    def flush():
        if run_rows:
            recordings.append((run_label, EmgRecording(np.array(run_rows), sample_rate_hz=rate)))
            run_rows.clear()

    for i in range(lineno + 1, len(lines)):
        line = lines[i]
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != n_cols:
            raise DataError(f"{path}: line {i + 1}: expected {n_cols} columns, got {len(parts)}")
        try:
            ts = int(parts[0])
        except ValueError:
            raise DataError(f"{path}: line {i + 1}: bad timestamp_index '{parts[0]}'") from None
        if ts <= prev_ts:
            raise DataError(f"{path}: line {i + 1}: timestamp_index {ts} is not increasing")
        prev_ts = ts
        label = parts[-1]
        if label not in known:
            raise DataError(f"{path}: line {i + 1}: unknown label '{label}'")
        try:
            values = [float(tok) for tok in parts[1:-1]]
        except ValueError:
            raise DataError(f"{path}: line {i + 1}: non-numeric channel value") from None
        if label != run_label:
            flush()
            run_label = label
        run_rows.append(values)
    flush()
    if not recordings:
        raise DataError(f"{path}: no data rows")
    return recordings


# --- Model files ----------------------------------------------------------


class _ModelWriter:
    def __init__(self):
        self.lines = [MODEL_MAGIC]
        self._count = 0

    def section(self, name: str):
        self.lines.append(f"[{name}]")
        self._count = 0

    def scalar(self, key: str, value):
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, (int, np.integer)):
            text = str(int(value))
        elif isinstance(value, float):
            text = float(value).hex()
            self._count += 1
        else:
            text = str(value)
        self.lines.append(f"{key} = {text}")

    def array(self, key: str, arr: np.ndarray):
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim == 1:
            self.lines.append(f"{key} = vector {arr.size}")
            self.lines.append(" ".join(v.hex() for v in arr.tolist()))
        elif arr.ndim == 2:
            self.lines.append(f"{key} = matrix {arr.shape[0]} {arr.shape[1]}")
            for row in arr.tolist():
                self.lines.append(" ".join(v.hex() for v in row))
        else:
            raise DataError(f"cannot serialize {arr.ndim}-D array '{key}'")
        self._count += arr.size

    def end_section(self):
        self.lines.append(f"end = {self._count}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def save_model(pipe: TrainedPipeline, path) -> None:
    """Serialize a trained pipeline; bit-exact and deterministic."""
    w = _ModelWriter()
    cfg = pipe.config

    w.section("meta")
    w.scalar("seed", pipe.seed)
    w.scalar("version", pipe.version)
    w.scalar("classes", ",".join(cfg.class_names))
    w.end_section()

    w.section("windowing")
    w.scalar("window_len_samples", cfg.windowing.window_len_samples)
    w.scalar("stride_samples", cfg.windowing.stride_samples)
    w.scalar("sample_rate_hz", float(cfg.sample_rate_hz))
    w.scalar("channel_count", cfg.channel_count)
    w.end_section()

    w.section("features")
    w.scalar("variance_floor", float(cfg.variance_floor))
    w.scalar("zscore", cfg.zscore)
    if cfg.zscore:
        w.array("feature_mean", pipe.feature_mean)
        w.array("feature_std", pipe.feature_std)
    w.end_section()

    w.section("projection")
    model = pipe.projection_model
    if isinstance(model, LinearProjectionModel):
        w.scalar("kind", "linear")
        w.scalar("p", model.n_components)
        w.scalar("ridge", float(cfg.fisher_ridge))
        w.array("mean", model.mean)
        w.array("components", model.components)
        w.array("eigenvalues", model.eigenvalues)
    else:
        w.scalar("kind", "kernel")
        w.scalar("p", model.n_components)
        w.scalar("ridge", float(cfg.kernel_ridge))
        w.scalar("gamma", float(model.gamma))
        w.array("train_vectors", model.train_vectors)
        w.array("kernel_mean", model.kernel_mean)
        w.array("dual_coefs", model.dual_coefs)
        w.array("eigenvalues", model.eigenvalues)
    w.end_section()

    w.section("classifier")
    rbf = pipe.rbf_model
    w.scalar("ridge", float(cfg.output_ridge))
    w.scalar("include_bias", cfg.include_bias)
    w.array("centers", rbf.centers)
    w.array("widths", rbf.widths)
    w.array("weights", rbf.weights)
    w.array("bias", rbf.bias)
    w.end_section()

    Path(path).write_text(w.text())


class _SectionData(dict):
    """Parsed key->value map plus the declared/observed value counts."""

    declared: int | None = None
    observed: int = 0


def _parse_model_text(text: str, path) -> dict[str, _SectionData]:
    lines = text.splitlines()
    if not lines or lines[0] != MODEL_MAGIC:
        head = lines[0] if lines else ""
        if head.startswith("EMGRT-MODEL"):
            raise DataError(f"{path}: unsupported version '{head}' (expected '{MODEL_MAGIC}')")
        raise DataError(f"{path}: not a model file (missing '{MODEL_MAGIC}' magic line)")
    sections: dict[str, _SectionData] = {}
    current: _SectionData | None = None
    current_name = ""
    i = 1
    while i < len(lines):
        line = lines[i]
        i += 1
        if not line.strip():
            continue
        if line.startswith("[") and line.endswith("]"):
            if current is not None and current.declared is None:
                raise DataError(f"{path}: integrity error: section [{current_name}] has no trailing value count")
            current_name = line[1:-1]
            current = _SectionData()
            sections[current_name] = current
            continue
        if current is None:
            raise DataError(f"{path}: line {i}: content outside any section")
        if "=" not in line:
            raise DataError(f"{path}: line {i}: expected 'key = value', got '{line}'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "end":
            try:
                current.declared = int(value)
            except ValueError:
                raise DataError(f"{path}: line {i}: bad value count '{value}'") from None
            if current.declared != current.observed:
                raise DataError(
                    f"{path}: integrity error in section [{current_name}]: "
                    f"declared {current.declared} values, found {current.observed}"
                )
            continue
        if value.startswith("vector ") or value.startswith("matrix "):
            kind, *dims = value.split()
            try:
                dims = [int(d) for d in dims]
            except ValueError:
                raise DataError(f"{path}: line {i}: bad array declaration '{value}'") from None
            rows = 1 if kind == "vector" else dims[0]
            cols = dims[0] if kind == "vector" else dims[1]
            data = []
            for _ in range(rows):
                if i >= len(lines):
                    raise DataError(f"{path}: integrity error: truncated array '{key}' in section [{current_name}]")
                tokens = lines[i].split()
                i += 1
                if len(tokens) != cols:
                    raise DataError(f"{path}: line {i}: array '{key}' row has {len(tokens)} values, expected {cols}")
                try:
                    data.append([float.fromhex(t) for t in tokens])
                except ValueError:
                    raise DataError(f"{path}: line {i}: array '{key}' holds a non-hex-float value") from None
            arr = np.array(data)
            current[key] = arr[0] if kind == "vector" else arr
            current.observed += arr.size
        else:
            if value.startswith("0x") or value.startswith("-0x"):
                current.observed += 1
            current[key] = value
    if current is not None and current.declared is None:
        raise DataError(f"{path}: integrity error: section [{current_name}] has no trailing value count")
    return sections


def _req(sections, name: str, path) -> _SectionData:
    if name not in sections:
        raise DataError(f"{path}: missing section [{name}]")
    return sections[name]


def _get(section: _SectionData, key: str, path, convert=None):
    if key not in section:
        raise DataError(f"{path}: missing key '{key}'")
    value = section[key]
    if convert is None:
        return value
    try:
        return convert(value)
    except (ValueError, TypeError) as exc:
        raise DataError(f"{path}: bad value for '{key}': {exc}") from exc


def _to_bool(text: str) -> bool:
    if text not in ("true", "false"):
        raise ValueError(f"expected true/false, got '{text}'")
    return text == "true"


def load_model(path) -> TrainedPipeline:
    """Parse a model file back into a trained pipeline.

    Raises DataError for a missing/unsupported magic line, missing
    sections or keys, and value-count (integrity) mismatches.
    """
    sections = _parse_model_text(Path(path).read_text(), path)
    meta = _req(sections, "meta", path)
    windowing = _req(sections, "windowing", path)
    feats = _req(sections, "features", path)
    proj = _req(sections, "projection", path)
    clf = _req(sections, "classifier", path)

    class_names = tuple(_get(meta, "classes", path).split(","))
    zscore = _get(feats, "zscore", path, _to_bool)
    kind = _get(proj, "kind", path)
    if kind not in ("linear", "kernel"):
        raise DataError(f"{path}: unknown projection kind '{kind}'")

    if kind == "linear":
        proj_model = LinearProjectionModel(
            mean=_get(proj, "mean", path),
            components=_get(proj, "components", path),
            eigenvalues=_get(proj, "eigenvalues", path),
        )
        fisher_ridge = _get(proj, "ridge", path, float.fromhex)
        kernel_ridge = PipelineConfig.__dataclass_fields__["kernel_ridge"].default
        kernel_gamma = None
    else:
        proj_model = KernelProjectionModel(
            train_vectors=_get(proj, "train_vectors", path),
            gamma=_get(proj, "gamma", path, float.fromhex),
            dual_coefs=_get(proj, "dual_coefs", path),
            kernel_mean=_get(proj, "kernel_mean", path),
            eigenvalues=_get(proj, "eigenvalues", path),
        )
        fisher_ridge = PipelineConfig.__dataclass_fields__["fisher_ridge"].default
        kernel_ridge = _get(proj, "ridge", path, float.fromhex)
        kernel_gamma = proj_model.gamma

    rbf = RbfModel(
        centers=_get(clf, "centers", path),
        widths=_get(clf, "widths", path),
        weights=_get(clf, "weights", path),
        bias=_get(clf, "bias", path),
        class_names=class_names,
    )

    config = PipelineConfig(
        windowing=WindowingConfig(
            window_len_samples=_get(windowing, "window_len_samples", path, int),
            stride_samples=_get(windowing, "stride_samples", path, int),
        ),
        sample_rate_hz=_get(windowing, "sample_rate_hz", path, float.fromhex),
        channel_count=_get(windowing, "channel_count", path, int),
        class_names=class_names,
        variance_floor=_get(feats, "variance_floor", path, float.fromhex),
        zscore=zscore,
        projection_kind=kind,
        n_components=int(_get(proj, "p", path, int)),
        fisher_ridge=fisher_ridge,
        kernel_gamma=kernel_gamma,
        kernel_ridge=kernel_ridge,
        n_centers=rbf.n_centers,
        output_ridge=_get(clf, "ridge", path, float.fromhex),
        include_bias=_get(clf, "include_bias", path, _to_bool),
    )
    return TrainedPipeline(
        config=config,
        projection_model=proj_model,
        rbf_model=rbf,
        seed=_get(meta, "seed", path, int),
        feature_mean=_get(feats, "feature_mean", path) if zscore else None,
        feature_std=_get(feats, "feature_std", path) if zscore else None,
        version=_get(meta, "version", path),
    )
