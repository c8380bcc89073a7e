"""Command line interface.

Subcommands: ``generate``, ``ingest``, ``cluster``, ``eval``, ``bench``.
Every command writing files also writes a ``manifest.json`` recording its
argv, resolved configuration, seeds and paths; ``medshift <argv...>`` from a
manifest reproduces the data outputs byte for byte.

Exit codes:

====  =============================================
0     success
2     usage error (bad or missing flags)
3     ParseError: malformed input file
4     InvalidConfig
5     MissingParameter
6     engine failure
7     LengthMismatch
8     I/O error
9     other invalid input (e.g. rows that are not histograms)
====  =============================================

On failure a JSON object ``{"error", "message", "exit_code"}`` is printed to
standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from importlib import metadata
from pathlib import Path

import numpy as np

from . import __version__
from .bench import DEFAULT_CONFIG, parse_bench_config, run_bench
from .clustering import MergePolicy, cluster_dataset, dbscan_wasserstein, kmeans_wasserstein
from .datagen import SynthConfig, gen_synthetic, ingest_directory
from .evaluation import adjusted_rand_index
from .exceptions import (
    EngineError,
    InputError,
    InvalidConfig,
    LengthMismatch,
    MedshiftError,
    MissingParameter,
    ParseError,
)
from .fileio import read_labels, read_matrix, write_json, write_labels, write_matrix
from .modeseek import EngineConfig

EXIT_CODES = [
    (ParseError, 3),
    (InvalidConfig, 4),
    (MissingParameter, 5),
    (EngineError, 6),
    (LengthMismatch, 7),
    (OSError, 8),
    (InputError, 9),
]


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return __version__


def _manifest(command, argv, config, inputs, outputs, seeds, started):
    return {
        "command": command,
        "argv": list(argv),
        "config": config,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "seeds": seeds,
        "version": _version(),
        "duration_seconds": round(time.perf_counter() - started, 6),
    }


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_generate(args, argv):
    started = time.perf_counter()
    config = SynthConfig(
        per_class=args.per_class,
        samples_per_histogram=args.samples,
        bins=args.bins,
        sigma=args.sigma,
        rng_seed=args.seed,
    )
    dataset = gen_synthetic(config)
    out = _out_dir(args.out)
    paths = [out / "histograms.csv", out / "labels.csv"]
    write_matrix(paths[0], dataset.histograms)
    write_labels(paths[1], dataset.labels)
    write_json(
        out / "manifest.json",
        _manifest("generate", argv, config.as_dict(), [], paths, {"dataset": args.seed}, started),
    )
    print(f"wrote {len(dataset.labels)} histograms with {config.bins} bins to {out}")
    return 0


def cmd_ingest(args, argv):
    started = time.perf_counter()
    lo, hi = args.range
    hists, names = ingest_directory(args.input, args.bins, (lo, hi))
    out = _out_dir(args.out)
    path = out / "histograms.csv"
    write_matrix(path, hists)
    config = {"bins": args.bins, "range": [lo, hi], "sources": names}
    write_json(
        out / "manifest.json",
        _manifest("ingest", argv, config, [args.input], [path], {}, started),
    )
    print(f"wrote {len(names)} histograms to {path}")
    return 0


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            flag = "--" + name.replace("_", "-")
            raise MissingParameter(f"--algo {args.algo} requires {flag}")


def cmd_cluster(args, argv):
    started = time.perf_counter()
    X = read_matrix(args.input)
    bin_width = args.support_width / X.shape[1]
    seeds = {}
    if args.algo in ("wms", "median-shift", "mean-shift"):
        _require(args, "h")
        if args.algo == "wms":
            scale, distance = bin_width, "wasserstein1"
        elif args.algo == "median-shift":
            scale, distance = 1.0, "l1"
        else:
            scale, distance = 1.0, "sqeuclidean"
        config = EngineConfig.create(args.h / scale, distance, max_iterations=args.max_iter)
        policy = MergePolicy(args.merge_radius / scale) if args.merge_radius else None
        result = cluster_dataset(
            X, args.algo, config, policy, keep_trajectories=False, n_jobs=args.threads
        )
    elif args.algo == "kmws":
        _require(args, "k")
        result = kmeans_wasserstein(X, args.k, args.seed, args.max_iter)
        seeds["kmws"] = args.seed
    else:
        _require(args, "eps", "min_pts")
        result = dbscan_wasserstein(X, args.eps / bin_width, args.min_pts)

    out = _out_dir(args.out)
    paths = [out / "labels.csv", out / "modes.csv"]
    write_labels(paths[0], result.labels)
    write_matrix(paths[1], result.modes.reshape(len(result.modes), X.shape[1]))
    config = {
        "algo": args.algo,
        "h": args.h,
        "k": args.k,
        "eps": args.eps,
        "min_pts": args.min_pts,
        "support_width": args.support_width,
        "bin_width": bin_width,
        "engine": result.config,
        "diagnostics": {k: v for k, v in result.diagnostics.items() if k != "core_sample_indices"},
    }
    write_json(
        out / "manifest.json",
        _manifest("cluster", argv, config, [args.input], paths, seeds, started),
    )
    print(f"{args.algo}: {result.n_clusters} clusters over {len(result.labels)} points")
    return 0


def cmd_eval(args, argv):
    pred = read_labels(args.pred)
    truth = read_labels(args.truth)
    ari = adjusted_rand_index(pred, truth)
    summary = {
        "ari": ari,
        "n": int(len(pred)),
        "clusters_pred": int(len(np.unique(pred))),
        "clusters_true": int(len(np.unique(truth))),
    }
    out = Path(args.out) if args.out else Path(args.pred).parent / "eval.json"
    write_json(out, summary)
    print(f"ari={ari:.6f}")
    return 0


def cmd_bench(args, argv):
    started = time.perf_counter()
    text = Path(args.config).read_text() if args.config else DEFAULT_CONFIG
    config = parse_bench_config(text)
    if args.seed is not None:
        config.dataset = SynthConfig(**{**vars(config.dataset), "rng_seed": args.seed})
    report = run_bench(config, n_jobs=args.threads)
    out = _out_dir(args.out)
    csv_path, table_path = out / "report.csv", out / "report.txt"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=report.COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(report.records())
    table = report.render()
    table_path.write_text(table + "\n")
    write_json(
        out / "manifest.json",
        _manifest(
            "bench", argv, config.as_dict(), [args.config] if args.config else [],
            [csv_path, table_path], {"dataset": config.dataset.rng_seed}, started,
        ),
    )
    print(table)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="medshift", description="Median shift and Wasserstein median shift clustering"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate the synthetic two-class histogram dataset")
    p.add_argument("--per-class", type=int, default=50)
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--samples", type=int, default=100, help="samples per histogram")
    p.add_argument("--sigma", type=float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest", help="turn a directory of series files into histograms")
    p.add_argument("--in", dest="input", required=True, help="directory, one series per file")
    p.add_argument("--bins", type=int, required=True)
    p.add_argument("--range", type=float, nargs=2, required=True, metavar=("LO", "HI"))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("cluster", help="cluster a histogram CSV")
    p.add_argument("--algo", required=True,
                   choices=["wms", "median-shift", "mean-shift", "kmws", "dbscan-ws"])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--h", type=float, help="bandwidth (shift family)")
    p.add_argument("--k", type=int, help="number of clusters (kmws)")
    p.add_argument("--eps", type=float, help="neighborhood radius (dbscan-ws)")
    p.add_argument("--min-pts", type=int, help="core point threshold (dbscan-ws)")
    p.add_argument("--merge-radius", type=float, help="default: h / 2")
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0, help="initialization seed (kmws)")
    p.add_argument("--support-width", type=float, default=1.0,
                   help="width of the histogram support; Wasserstein distances use "
                        "bin width support-width / n_bins")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("eval", help="adjusted Rand index of two label files")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--out", help="JSON summary path (default: eval.json next to --pred)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("bench", help="run the synthetic benchmark")
    p.add_argument("--config", help="key = value benchmark config (default: built-in grid)")
    p.add_argument("--seed", type=int, default=None, help="override the dataset seed")
    p.add_argument("--out", required=True)
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, argv)
    except (MedshiftError, OSError) as exc:
        code = next((c for cls, c in EXIT_CODES if isinstance(exc, cls)), 6)
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}),
            file=sys.stderr,
        )
        return code


if __name__ == "__main__":
    sys.exit(main())
