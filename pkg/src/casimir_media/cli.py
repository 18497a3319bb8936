import argparse
import logging
import sys
from typing import List, Optional

from rich.console import Console
from rich.markup import escape

from . import __version__
from .config import RunConfig, load_config
from .data_storage.dataset import SweepDataset
from .errors import CasimirError, ConfigError, ConvergenceError, DomainError
from .logs import configure_logging, verbosity_level
from .sweep import FLOAT_FORMAT, eval_point, run, write_result

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTATION = 1
EXIT_INPUT = 2

out = Console(highlight=False, soft_wrap=True)
err = Console(stderr=True, highlight=False, soft_wrap=True)


def _load(args, geometry: Optional[str]) -> RunConfig:
    cfg = load_config(args.config)
    if geometry is not None and cfg.geometry != geometry:
        raise ConfigError(
            f"'casimir {geometry}' needs a {geometry} configuration, got {cfg.geometry}",
            field="geometry",
        )
    return cfg.with_overrides(
        out=args.out, fmt=args.format, variant=args.lifshitz_variant, workers=args.workers
    )


def _report(cfg: RunConfig, x: float) -> int:
    values = eval_point(cfg, x)
    parts = [f"{k}={FLOAT_FORMAT % v}" for k, v in values.items()]
    out.print(f"{cfg.geometry} " + " ".join(parts), markup=False)
    return EXIT_OK


def _sweep(cfg: RunConfig, log_level: int) -> int:
    result = run(cfg, log_level)
    target = cfg.output.path
    if target is None:
        if cfg.output.format == "hdf5":
            raise ConfigError("hdf5 output needs a path (--out)", field="output.path")
        target = sys.stdout
    if not write_result(result, target, cfg.output.format):
        err.print(f"[red]could not write {escape(str(target))}")
        return EXIT_COMPUTATION
    for row in result.failures:
        err.print(f"[red]{cfg.sweep.axis}={row[0]!r}: {escape(row[-1])}")
    return EXIT_COMPUTATION if result.failures else EXIT_OK


def evaluate(args) -> int:
    """pair / surface / slab / sweep: one point with --point, otherwise the whole sweep."""
    cfg = _load(args, args.geometry)
    if args.point is not None:
        return _report(cfg, args.point)
    return _sweep(cfg, verbosity_level(args.verbose))


def show(args) -> int:
    ds = SweepDataset(args.file)
    ds.print_tree()
    for key, value in ds.metadata.items():
        out.print(f"# {key} = {value}", markup=False)
    return EXIT_OK


def _add_run_options(p: argparse.ArgumentParser):
    p.add_argument("--config", required=True, help="YAML run configuration")
    p.add_argument("--out", help="output file (default: config output.path, else stdout)")
    p.add_argument("--format", choices=("csv", "json", "hdf5"), help="output format")
    p.add_argument("--lifshitz-variant", choices=("tan", "tanh"), help="slab Lifshitz factor")
    p.add_argument("--point", type=float, help="evaluate a single abscissa and print it")
    p.add_argument("--workers", type=int, help="worker processes for sweeps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir", description="Atom-atom and medium-medium dispersion forces in dilute gases"
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")
    parser.add_argument("--log-file", help="also log to this rotating file")
    sub = parser.add_subparsers(dest="command")

    for geometry, text in (
        ("pair", "two atoms at distance R"),
        ("surface", "excited atom above a gas half-space"),
        ("slab", "force between two gas slabs"),
    ):
        p = sub.add_parser(geometry, help=text)
        _add_run_options(p)
        p.set_defaults(func=evaluate, geometry=geometry)

    p_sweep = sub.add_parser("sweep", help="run the sweep of any configuration")
    _add_run_options(p_sweep)
    p_sweep.set_defaults(func=evaluate, geometry=None)

    p_show = sub.add_parser("show", help="print the structure of an HDF5 sweep archive")
    p_show.add_argument("file")
    p_show.set_defaults(func=show)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(verbosity_level(args.verbose), args.log_file)
    if not hasattr(args, "func"):
        parser.print_help()
        return EXIT_INPUT
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        err.print(f"[red]error:[/red] {escape(str(exc))}")
        return EXIT_INPUT
    except ConvergenceError as exc:
        err.print(f"[red]convergence failure:[/red] {escape(str(exc))}")
        return EXIT_COMPUTATION
    except CasimirError as exc:
        err.print(f"[red]error:[/red] {escape(str(exc))}")
        return EXIT_COMPUTATION
    except Exception:
        err.print_exception(max_frames=20)
        return EXIT_COMPUTATION


if __name__ == "__main__":
    sys.exit(main())
