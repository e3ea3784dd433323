"""Command-line front end: gen, train, eval, bench, and predict.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 numeric
failure. Report files embed the seed and the full argument list so any
run can be reproduced.
"""

import argparse
import shlex
import sys
from pathlib import Path

from . import io as model_io
from .errors import DataError, NumericError, ParameterError
from .pipeline import (
    DEFAULT_DEADLINE_MS,
    PipelineConfig,
    bench_latency,
    evaluate_corpus,
    evaluate_window,
    train_pipeline,
)
from .projection import DEFAULT_FISHER_RIDGE, DEFAULT_KERNEL_RIDGE
from .signal import WindowingConfig, segment
from .synthdata import default_profiles, gen_corpus

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="emgrt", description="EMG wrist-hand motion recognition pipeline")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="write a synthetic labeled corpus")
    gen.add_argument("--out", required=True, help="output dataset path")
    gen.add_argument("--seed", type=int, default=0, help="first session seed")
    gen.add_argument("--sessions", type=int, default=10, help="sessions per motion")
    gen.add_argument("--duration-s", type=float, default=5.0, help="session length in seconds")
    gen.add_argument("--rate-hz", type=float, default=200.0, help="sample rate")
    gen.add_argument("--channels", type=int, default=8, help="channel count")

    train = sub.add_parser("train", help="train a pipeline from a dataset")
    train.add_argument("--dataset", required=True)
    train.add_argument("--model", required=True, help="output model path")
    train.add_argument("--window-ms", type=float, default=250.0)
    train.add_argument("--stride-ms", type=float, default=125.0)
    train.add_argument("--window-samples", type=int, default=None, help="override --window-ms")
    train.add_argument("--stride-samples", type=int, default=None, help="override --stride-ms")
    train.add_argument("--projection", choices=("linear", "kernel"), default="linear")
    train.add_argument("--gamma", type=float, default=None, help="kernel bandwidth (default: median heuristic)")
    train.add_argument("--reg", type=float, default=None, help="projection regularization factor")
    train.add_argument("--centers", type=int, default=14, help="RBF hidden nodes M")
    train.add_argument("--ridge", type=float, default=1e-6, help="readout ridge")
    train.add_argument("--components", type=int, default=None, help="projection dimension p")
    train.add_argument("--zscore", action="store_true", help="standardize features before projection")
    train.add_argument("--seed", type=int, default=0)

    ev = sub.add_parser("eval", help="accuracy report for a dataset")
    ev.add_argument("--dataset", required=True)
    ev.add_argument("--model", required=True)
    ev.add_argument("--out", default=None, help="report path (default: stdout)")

    bench = sub.add_parser("bench", help="per-window latency against a deadline")
    bench.add_argument("--dataset", required=True)
    bench.add_argument("--model", required=True)
    bench.add_argument("--deadline-ms", type=float, default=DEFAULT_DEADLINE_MS)
    bench.add_argument("--repetitions", type=int, default=1)
    bench.add_argument("--out", default=None, help="report path (default: stdout)")

    pred = sub.add_parser("predict", help="stream per-window class decisions")
    pred.add_argument("--dataset", required=True)
    pred.add_argument("--model", required=True)
    pred.add_argument("--out", default=None, help="output path (default: stdout)")

    return parser


def _header(command: str, seed, argv) -> str:
    return f"# emgrt {command}\n# seed={seed}\n# args={shlex.join(list(argv))}\n"


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
        print(f"report -> {out}")
    else:
        sys.stdout.write(text)


def _cmd_gen(args, argv) -> int:
    profiles = default_profiles(args.channels)
    corpus = gen_corpus(
        range(args.seed, args.seed + args.sessions),
        duration_s=args.duration_s,
        rate_hz=args.rate_hz,
        profiles=profiles,
    )
    model_io.save_dataset(
        corpus.recordings,
        args.out,
        extra_comments=(
            f"generator seed={args.seed} sessions={args.sessions} prng={corpus.prng}",
            f"args={shlex.join(list(argv))}",
        ),
    )
    print(f"wrote {len(corpus.recordings)} recordings ({args.sessions} sessions x {len(profiles)} motions) to {args.out}")
    return EXIT_OK


def _cmd_train(args, argv) -> int:
    recordings = model_io.load_dataset(args.dataset)
    rate = recordings[0][1].sample_rate_hz
    channels = recordings[0][1].channel_count
    if args.window_samples is not None or args.stride_samples is not None:
        if args.window_samples is None or args.stride_samples is None:
            raise ParameterError("--window-samples and --stride-samples must be given together")
        windowing = WindowingConfig(args.window_samples, args.stride_samples)
    else:
        windowing = WindowingConfig.from_millis(args.window_ms, args.stride_ms, rate)
    config = PipelineConfig(
        windowing=windowing,
        sample_rate_hz=rate,
        channel_count=channels,
        zscore=args.zscore,
        projection_kind=args.projection,
        n_components=args.components,
        fisher_ridge=args.reg if args.reg is not None else DEFAULT_FISHER_RIDGE,
        kernel_gamma=args.gamma,
        kernel_ridge=args.reg if args.reg is not None else DEFAULT_KERNEL_RIDGE,
        n_centers=args.centers,
        output_ridge=args.ridge,
    )
    pipe = train_pipeline(recordings, config, seed=args.seed)
    model_io.save_model(pipe, args.model)
    print(f"trained {args.projection} pipeline (seed {args.seed}) on {len(recordings)} recordings; model -> {args.model}")
    return EXIT_OK


def _cmd_eval(args, argv) -> int:
    pipe = model_io.load_model(args.model)
    recordings = model_io.load_dataset(args.dataset, class_names=pipe.class_names)
    report = evaluate_corpus(pipe, recordings)
    _emit(_header("eval", pipe.seed, argv) + report.format_table() + "\n", args.out)
    return EXIT_OK


def _cmd_bench(args, argv) -> int:
    pipe = model_io.load_model(args.model)
    recordings = model_io.load_dataset(args.dataset, class_names=pipe.class_names)
    windows = [w for _, rec in recordings for w in segment(rec, pipe.config.windowing)]
    report = bench_latency(pipe, windows, deadline_ms=args.deadline_ms, repetitions=args.repetitions)
    _emit(_header("bench", pipe.seed, argv) + report.format_table() + "\n", args.out)
    return EXIT_OK


def _cmd_predict(args, argv) -> int:
    pipe = model_io.load_model(args.model)
    recordings = model_io.load_dataset(args.dataset, class_names=pipe.class_names)
    lines = [_header("predict", pipe.seed, argv) + "recording_index,window_start,decided_class"]
    for ri, (_, rec) in enumerate(recordings):
        for win in segment(rec, pipe.config.windowing):
            pred = evaluate_window(pipe, win)
            lines.append(f"{ri},{win.start_index},{pipe.class_names[pred.decided_class]}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "bench": _cmd_bench,
    "predict": _cmd_predict,
}


def run(argv) -> int:
    """Parse argv (program name excluded) and execute one subcommand."""
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, argv)
    except ParameterError as exc:
        print(f"emgrt {args.command}: parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"emgrt {args.command}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"emgrt {args.command}: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run(sys.argv[1:]))
