"""Command-line interface: ``eegfc <command> [options]``."""

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from . import __version__
from .connectivity import epoch_graph, write_graph_dump
from .dataset import STIMULI, DatasetError, Stimulus, default_layout, filter_by_stimulus, load_manifest
from .experiments import DEFAULT_RHO_TH, emit_plot, run_comparison, run_sweep
from .features import build_feature_matrix, write_feature_csv
from .learners import KINDS, ClassifierSpec, canonical_kind, cross_validate
from .synthgen import PRESETS, GenerationError, generate_preset, save

log = logging.getLogger("eegfc")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_IO = 4
EXIT_COMPUTE = 5

EPILOG = """\
exit codes:
  0  success
  2  usage error (unknown command or flag, malformed flag value)
  3  invalid input (bad manifest or epoch file, out-of-range value)
  4  I/O failure (file cannot be read or written)
  5  computation failure (e.g. covariance repair or solver failure)

Errors are reported on stderr as one JSON object:
  {"error": "<kind>", "exit_code": <n>, "message": "..."}
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_thresholds(text):
    """Parse ``lo:hi:step`` (inclusive of ``hi`` when step divides the range) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"threshold range must be lo:hi:step, got {text!r}")
        lo, hi, step = (float(p) for p in parts)
        if step <= 0 or hi < lo:
            raise ValueError(f"invalid threshold range {text!r}")
        span = (hi - lo) / step
        n = math.floor(span + 1e-9)
        if abs(span - round(span)) <= 1e-9:
            n = round(span)
        return [round(lo + i * step, 10) for i in range(n + 1)]
    return [float(t) for t in text.split(",") if t.strip()]


def _stimulus(text):
    try:
        return Stimulus(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown stimulus {text!r}; choose from {', '.join(s.value for s in STIMULI)}")


def _classifier(text):
    try:
        return canonical_kind(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _rho(text):
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError(f"rho-th must lie in (0, 1), got {text}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for folds and learners (default 0)")
    common.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1, help="worker cap for parallel sections")
    common.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    data = _Parser(add_help=False)
    data.add_argument("--manifest", required=True, type=Path, help="dataset manifest JSON")
    data.add_argument("--out", type=Path, default=Path("results"), help="output directory (default ./results)")
    data.add_argument("--stimulus", type=_stimulus, help="restrict to one stimulus type")

    rho = _Parser(add_help=False)
    rho.add_argument("--rho-th", type=_rho, default=DEFAULT_RHO_TH, help="correlation threshold (default 0.8)")

    cv = _Parser(add_help=False)
    cv.add_argument("--folds", type=int, default=10, help="cross-validation folds (default 10)")

    parser = _Parser(
        prog="eegfc",
        description="EEG functional-connectivity graphs, graph features and age-group classification.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset", epilog=EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--preset", choices=PRESETS, default="high-separation")
    p.add_argument("--epochs-per-group", type=_positive_int, default=500)
    p.add_argument("--samples", type=int, default=700, help="time samples per epoch (default 700)")
    p.add_argument("--channels", type=int, default=31, help="channel count (default 31)")
    p.add_argument("--stimuli", default="A", help="comma-separated stimulus types (default A)")
    p.add_argument("--out", type=Path, required=True, help="dataset directory")

    p = sub.add_parser("graphs", parents=[common, data, rho], help="write thresholded graphs as JSON lines")
    p = sub.add_parser("features", parents=[common, data, rho], help="write the feature matrix as CSV")

    p = sub.add_parser("classify", parents=[common, data, rho, cv], help="cross-validate one classifier")
    p.add_argument("--classifier", type=_classifier, default="random_forest", help=f"one of {', '.join(KINDS)} (aliases: rf, lr, svm)")

    p = sub.add_parser("sweep", parents=[common, data, cv], help="accuracy as a function of the threshold")
    p.add_argument("--thresholds", default="0.5:0.95:0.05", help="lo:hi:step or comma list (default 0.5:0.95:0.05)")
    p.add_argument("--classifier", type=_classifier, default="random_forest")

    p = sub.add_parser("compare", parents=[common, data, rho, cv], help="compare classifiers at one threshold")
    p.add_argument("--classifiers", default=",".join(KINDS), help="comma-separated classifiers (default all four)")
    return parser


def _load(args):
    ds = load_manifest(args.manifest, workers=args.threads)
    if args.stimulus is not None:
        ds = filter_by_stimulus(ds, args.stimulus)
        if len(ds) == 0:
            raise DatasetError(f"no epochs with stimulus {args.stimulus.value} in {args.manifest}")
    return ds


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_synth(args):
    stimuli = [Stimulus(s.strip()) for s in args.stimuli.split(",") if s.strip()]
    ds = generate_preset(
        args.preset,
        epochs_per_group=args.epochs_per_group,
        n_samples=args.samples,
        layout=default_layout(args.channels),
        stimuli=stimuli,
        seed=args.seed,
    )
    manifest = save(ds, args.out)
    log.info("wrote %d epochs to %s", len(ds), manifest)
    return {"manifest": manifest.name, "epochs": len(ds)}


def cmd_graphs(args):
    ds = _load(args)
    graphs = [epoch_graph(ep, args.rho_th) for ep in ds.epochs]
    write_graph_dump(args.out / "graphs.jsonl", graphs)
    return {"graphs": "graphs.jsonl"}


def cmd_features(args):
    ds = _load(args)
    fm = build_feature_matrix(ds, args.rho_th, workers=args.threads)
    write_feature_csv(args.out / "features.csv", fm)
    return {"features": "features.csv", "rows": len(fm), "columns": len(fm.column_names)}


def cmd_classify(args):
    ds = _load(args)
    stimuli = ds.stimuli()
    if len(stimuli) != 1:
        raise ValueError(f"dataset holds stimuli {[s.value for s in stimuli]}; pass --stimulus")
    spec = ClassifierSpec(args.classifier, seed=args.seed)
    fm = build_feature_matrix(ds, args.rho_th, workers=args.threads)
    report = cross_validate(spec, fm, args.folds, args.seed, workers=args.threads, rho_th=args.rho_th, stimulus=stimuli[0])
    report.sampling_rate_hz = ds.sampling_rate_hz
    _write(args.out / "report.json", report.to_json())
    log.info("%s on %s: mean accuracy %.4f", spec.kind, stimuli[0].value, report.mean_accuracy)
    return {"report": "report.json"}


def cmd_sweep(args):
    thresholds = parse_thresholds(args.thresholds)
    ds = _load(args)
    spec = ClassifierSpec(args.classifier, seed=args.seed)
    result = run_sweep(ds, thresholds, spec, args.folds, args.seed, workers=args.threads)
    _write(args.out / "sweep.csv", result.to_csv())
    emit_plot(result, args.out / "sweep.svg")
    return {"sweep": "sweep.csv", "plot": "sweep.svg", "thresholds": thresholds}


def cmd_compare(args):
    ds = _load(args)
    kinds = [canonical_kind(k.strip()) for k in args.classifiers.split(",") if k.strip()]
    specs = [ClassifierSpec(k, seed=args.seed) for k in kinds]
    result = run_comparison(ds, args.rho_th, specs, args.folds, args.seed, workers=args.threads)
    _write(args.out / "comparison.csv", result.to_csv())
    _write(args.out / "comparison.json", result.to_json())
    return {"comparison": "comparison.csv"}


COMMANDS = {
    "synth": cmd_synth,
    "graphs": cmd_graphs,
    "features": cmd_features,
    "classify": cmd_classify,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
}


def _config_echo(args, outputs):
    config = {}
    for key, value in sorted(vars(args).items()):
        if key == "log_level":
            continue
        if isinstance(value, Path):
            value = str(value)
        elif hasattr(value, "value"):
            value = value.value
        config[key] = value
    return {"version": __version__, "config": config, "outputs": outputs}


def _fail(kind, code, message):
    sys.stderr.write(json.dumps({"error": kind, "exit_code": code, "message": message}) + "\n")
    return code


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail("usage", EXIT_USAGE, str(exc))
    except ValueError as exc:
        return _fail("usage", EXIT_USAGE, str(exc))
    logging.basicConfig(level=args.log_level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    if getattr(args, "folds", 2) < 2:
        return _fail("invalid", EXIT_INVALID, "--folds must be >= 2")
    try:
        if args.command == "sweep":
            # validate before any work
            thresholds = parse_thresholds(args.thresholds)
            if not thresholds or any(not 0 < t < 1 for t in thresholds):
                raise ValueError(f"thresholds must lie in (0, 1): {args.thresholds}")
        args.out.mkdir(parents=True, exist_ok=True)
        outputs = COMMANDS[args.command](args)
        _write(args.out / "run.json", json.dumps(_config_echo(args, outputs), indent=2) + "\n")
    except (GenerationError, ArithmeticError) as exc:
        return _fail("compute", EXIT_COMPUTE, str(exc))
    except (DatasetError, ValueError) as exc:
        if isinstance(exc.__cause__, OSError):
            return _fail("io", EXIT_IO, str(exc))
        return _fail("invalid", EXIT_INVALID, str(exc))
    except OSError as exc:
        return _fail("io", EXIT_IO, str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
