"""Command-line entry point: ``puretomo {compare,fid-vs-dim,vis-vs-purity,single}``.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 unsupported
dimension.
"""

import argparse
import json
import sys

from .errors import TomographyError, UnsupportedDimensionError
from .experiments import ConfigError, ExperimentIOError, default_config, run_study

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_UNSUPPORTED_DIM = 4

COMMANDS = {
    "compare": "compare-d7",
    "fid-vs-dim": "fidelity-vs-dim",
    "vis-vs-purity": "visibility-vs-purity",
    "single": "single-shot",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}") from None


def _int_list(text):
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of integers, got {text!r}") from None


def _lambda_grid(text):
    """Either a list ``0,0.5,1`` or a range ``start:stop:step`` (stop inclusive)."""
    if ":" in text:
        try:
            start, stop, step = (float(x) for x in text.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
        if step <= 0:
            raise argparse.ArgumentTypeError("range step must be positive")
        n = int(round((stop - start) / step))
        return [round(start + i * step, 12) for i in range(n + 1)]
    return _float_list(text)


def build_parser():
    parser = _Parser(prog="puretomo", description="Adaptive 4d-3 outcome pure-state tomography studies.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, help_text in (
        ("compare", "adaptive vs MUB tomography on the same states (prime d)"),
        ("fid-vs-dim", "mean fidelity versus dimension for several dark-count rates"),
        ("vis-vs-purity", "purity residual versus white-noise weight"),
        ("single", "reconstruct one state and print a report"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON file with configuration values; flags override it")
        p.add_argument("--dim", type=int, help="single dimension")
        p.add_argument("--dims", type=_int_list, help="dimension list, e.g. 4,8,16")
        p.add_argument("--trials", type=int)
        p.add_argument("--mu", type=float, help="mean photons per pulse")
        p.add_argument("--pulses", type=int, help="pulses per setting")
        p.add_argument("--dark", type=float, action="append", help="dark counts per pulse (repeatable)")
        p.add_argument("--lambda-grid", type=_lambda_grid, help="noise weights, list or start:stop:step")
        p.add_argument("--seed", type=int)
        p.add_argument("--exact", action="store_true", default=None, help="use exact Born probabilities")
        p.add_argument("--out", help="CSV output path")
        p.add_argument("--state", help="uniform, basis-K, random, or comma-separated amplitudes")
        p.add_argument("--workers", type=int, help="worker processes (results do not depend on it)")
    return parser


_CONFIG_KEYS = {
    "dims",
    "trials",
    "mu",
    "pulses",
    "dark_rates",
    "lambda_grid",
    "seed",
    "output_path",
    "exact_mode",
    "state",
    "workers",
}


def _load_config_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ExperimentIOError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    if "dim" in data:
        data["dims"] = [data.pop("dim")]
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return data


def config_from_args(args):
    study = COMMANDS[args.command]
    values = _load_config_file(args.config) if args.config else {}
    if args.dims is not None and args.dim is not None:
        raise ConfigError("use either --dim or --dims, not both")
    flags = {
        "dims": [args.dim] if args.dim is not None else args.dims,
        "trials": args.trials,
        "mu": args.mu,
        "pulses": args.pulses,
        "dark_rates": args.dark,
        "lambda_grid": args.lambda_grid,
        "seed": args.seed,
        "output_path": args.out,
        "exact_mode": args.exact,
        "state": args.state,
        "workers": args.workers,
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    try:
        return default_config(study, **values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None


def _print_summary(result, out):
    for line in result.config.header_lines():
        print(line, file=out)
    if result.summary_columns:
        print(",".join(result.summary_columns), file=out)
        for row in result.summary:
            print(",".join(str(v) for v in row), file=out)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        result = run_study(config, write=True)
    except UnsupportedDimensionError as exc:
        print(f"puretomo: unsupported dimension: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED_DIM
    except ExperimentIOError as exc:
        print(f"puretomo: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TomographyError as exc:
        print(f"puretomo: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if result.report:
        sys.stdout.write(result.report)
    elif config.output_path is None:
        sys.stdout.write(result.to_csv())
    else:
        _print_summary(result, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
