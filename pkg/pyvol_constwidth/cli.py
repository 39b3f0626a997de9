"""
Command-line front end.

    pyvol-constwidth radius-table --from 2 --to 10 --format csv
    pyvol-constwidth bounds --solve-s --format json
    pyvol-constwidth width-check -n 100 --samples 100000 --seed 7

Tables and records go to standard output or `--out`; summaries, PASS/FAIL
lines and logging go to standard error. Exit status is 0 on success, 1
when a check fails and 2 on bad usage.
"""
import argparse
import csv
import io
import json
import logging
import math
import os
import sys

from . import bounds, lowdim, verify
from .exceptions import ConstWidthError
from .volume import MC_REJECTION_MAX_N, exact_volume, mc_volume, mc_volume_radial, radius_table

logger = logging.getLogger(__name__)

COMMANDS = ("radius-table", "volume", "width-check", "bounds", "verify", "mesh", "boundary2d", "plot-data")
FORMATS = ("csv", "json")
OUT_DIR_ENV = "PYVOL_CW_OUT_DIR"
SIGNIFICANT_DIGITS = 12

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class RunConfig:
    """
    Validated options of one CLI invocation. Identical configs give
    identical output bytes.
    """

    def __init__(
        self,
        command: str,
        n: int = None,
        n_from: int = None,
        n_to: int = None,
        step: int = 1,
        samples: int = 10 ** 6,
        seed: int = 0,
        tol: float = 1e-12,
        format: str = "csv",
        out: str = None,
        method: str = "quadrature",
        level: int = 5,
        colorize: bool = False,
        points: int = 200,
        solve_s: bool = False,
        alpha: float = None,
        beta: float = None,
        hand_check: bool = False,
        shape: str = "disk-segment",
        verbose: bool = False,
    ):
        if command not in COMMANDS:
            raise ValueError("`command` must be one of {}".format(list(COMMANDS)))
        if format not in FORMATS:
            raise ValueError("`format` must be one of {}".format(list(FORMATS)))
        self.command = command
        self.n = n
        self.n_from = n_from
        self.n_to = n_to
        self.step = step
        self.samples = samples
        self.seed = seed
        self.tol = tol
        self.format = format
        self.out = out
        self.method = method
        self.level = level
        self.colorize = colorize
        self.points = points
        self.solve_s = solve_s
        self.alpha = alpha
        self.beta = beta
        self.hand_check = hand_check
        self.shape = shape
        self.verbose = verbose

    @classmethod
    def from_args(cls, args: argparse.Namespace):
        kwargs = {k: v for k, v in vars(args).items() if v is not None}
        return cls(**kwargs)

    def output_path(self):
        """
        None for standard output; relative paths resolve against
        $PYVOL_CW_OUT_DIR when it is set.
        """
        if self.out is None or self.out == "-":
            return None
        base = os.environ.get(OUT_DIR_ENV)
        if base and not os.path.isabs(self.out):
            return os.path.join(base, self.out)
        return self.out

    def __str__(self):
        return str(self.to_dict())

    def to_dict(self):
        return dict(vars(self))


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer, got {!r}".format(text))
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer, got {}".format(value))
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer seed, got {!r}".format(text))
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a number, got {!r}".format(text))
    if not (value > 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError("expected a positive finite number, got {}".format(value))
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, help="output format (default csv)")
    common.add_argument("-o", "--out", type=str, help="output file, '-' for standard output")
    common.add_argument("-v", "--verbose", action="store_true", default=None, help="debug logging on standard error")

    sampling = argparse.ArgumentParser(add_help=False)
    sampling.add_argument("--samples", type=_positive_int, help="sample count (default 10^6)")
    sampling.add_argument("--seed", type=_seed, help="random seed (default 0)")

    parser = argparse.ArgumentParser(
        prog="pyvol-constwidth",
        description="volume, width and bounds of an explicit body of constant width 2 in R^n",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("radius-table", parents=[common], help="effective radius next to its bounds")
    p.add_argument("--from", dest="n_from", type=_positive_int, required=True)
    p.add_argument("--to", dest="n_to", type=_positive_int, required=True)
    p.add_argument("--step", type=_positive_int)

    p = sub.add_parser("volume", parents=[common, sampling], help="volume of M by quadrature or Monte Carlo")
    p.add_argument("-n", type=_positive_int, required=True)
    p.add_argument("--method", choices=("quadrature", "mc_rejection", "mc_radial", "all"))
    p.add_argument("--tol", type=_positive_float, help="membership tolerance for rejection sampling")

    p = sub.add_parser("width-check", parents=[common, sampling], help="max |width - 2| over random directions")
    p.add_argument("-n", type=_positive_int, required=True)

    p = sub.add_parser("bounds", parents=[common], help="optimal triangle, s and the bound chain")
    p.add_argument("--solve-s", dest="solve_s", action="store_true", default=None)
    p.add_argument("--hand-check", dest="hand_check", action="store_true", default=None)
    p.add_argument("-n", type=_positive_int, help="also report the bounds on r_n")
    p.add_argument("--alpha", type=_positive_float)
    p.add_argument("--beta", type=_positive_float)

    sub.add_parser("verify", parents=[common, sampling], help="run every cross-check")

    p = sub.add_parser("mesh", parents=[common], help="triangle mesh of M in R^3 as Wavefront OBJ")
    p.add_argument("--level", type=_positive_int, help="subdivision level (default 5)")
    p.add_argument("--colorize", action="store_true", default=None, help="group faces by octant")

    p = sub.add_parser("boundary2d", parents=[common], help="boundary of M in R^2 as a polyline")
    p.add_argument("--points", type=_positive_int, help="points per arc (default 200)")

    p = sub.add_parser("plot-data", parents=[common], help="outlines of A or of a triangle T_{alpha,beta}")
    p.add_argument("--shape", choices=("disk-segment", "triangle"))
    p.add_argument("--points", type=_positive_int)
    p.add_argument("--alpha", type=_positive_float)
    p.add_argument("--beta", type=_positive_float)
    return parser


def _number(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float("{:.{}g}".format(x, SIGNIFICANT_DIGITS))


def _csv_cell(x):
    x = _number(x)
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "{:.{}g}".format(x, SIGNIFICANT_DIGITS)
    return str(x)


def _rounded(obj):
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return _number(obj)


def render_csv(records: list, header: list = None) -> str:
    out = io.StringIO()
    header = header or list(records[0].keys())
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for rec in records:
        writer.writerow([_csv_cell(rec.get(k)) for k in header])
    return out.getvalue()


def render_json(payload) -> str:
    return json.dumps(_rounded(payload), indent=2, ensure_ascii=False) + "\n"


def _render(config: RunConfig, records: list, payload=None, header: list = None) -> str:
    if config.format == "json":
        return render_json(records if payload is None else payload)
    return render_csv(records, header)


def _emit(config: RunConfig, data):
    path = config.output_path()
    if isinstance(data, str):
        data = data.encode("utf-8")
    if path is None:
        sys.stdout.flush()
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    with open(path, "wb") as f:
        f.write(data)
    logger.info("wrote %d bytes to %s", len(data), path)


def _report(line: str):
    print(line, file=sys.stderr)


def cmd_radius_table(config: RunConfig) -> int:
    table = radius_table(config.n_from, config.n_to, config.step)
    rows = [r.to_dict() for r in table]
    _emit(config, _render(config, rows, payload=table.to_dict()))
    if table.threshold is None:
        _report("empirical threshold: none, the last computed row has r_n >= 0.9")
    else:
        _report("empirical threshold: r_n < 0.9 for every computed n >= {}".format(table.threshold))
    return EXIT_OK


def cmd_volume(config: RunConfig) -> int:
    methods = ("quadrature", "mc_rejection", "mc_radial") if config.method == "all" else (config.method,)
    results = []
    for method in methods:
        if method == "quadrature":
            results.append(exact_volume(config.n))
        elif method == "mc_rejection":
            if config.method == "all" and config.n > MC_REJECTION_MAX_N:
                logger.warning("skipping rejection sampling for n=%d", config.n)
                continue
            results.append(mc_volume(config.n, config.samples, config.seed, tol=config.tol))
        else:
            results.append(mc_volume_radial(config.n, config.samples, config.seed))
    _emit(config, _render(config, [r.to_dict() for r in results]))
    return EXIT_OK


def cmd_width_check(config: RunConfig) -> int:
    worst = verify.max_width_deviation(config.n, config.samples, config.seed)
    passed = worst < verify.WIDTH_TOL
    record = {
        "n": config.n,
        "samples": config.samples,
        "seed": config.seed,
        "max_width_deviation": worst,
        "passed": passed,
    }
    _emit(config, _render(config, [record], payload=record))
    _report("{} width-check n={}: max |width - 2| = {:.3e}".format("PASS" if passed else "FAIL", config.n, worst))
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_bounds(config: RunConfig) -> int:
    record = {}
    if config.solve_s or not (config.n or config.alpha or config.hand_check):
        record.update(bounds.minimize_s().to_dict())
    if config.hand_check:
        tri = bounds.hand_check()
        record["hand_check_alpha"] = tri.alpha
        record["hand_check_beta"] = tri.beta
        record["hand_check_sum_of_squares"] = tri.s_candidate ** 2
        record["hand_check_feasible"] = tri.feasible
    if (config.alpha is None) != (config.beta is None):
        raise argparse.ArgumentTypeError("--alpha and --beta go together")
    if config.alpha is not None:
        tri = bounds.triangle_feasible(config.alpha, config.beta)
        record.update({k: v for k, v in tri.to_dict().items() if k not in ("lhs", "rhs")})
        if config.n and tri.feasible:
            record["r_triangle_upper"] = bounds.triangle_upper_bound(config.n, config.alpha, config.beta)
    if config.n:
        record["n"] = config.n
        record["r_schramm_lower"] = bounds.schramm_lower_bound(config.n)
        record["r_eq4_upper"] = bounds.best_triangle_upper_bound(config.n)
    _emit(config, _render(config, [record], payload=record))
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    results = verify.run_all(config.samples, config.seed)
    for r in results:
        _report(r.line())
    passed = all(r.passed for r in results)
    records = [r.to_dict() for r in results]
    _emit(config, _render(config, records, payload={"passed": passed, "checks": records}))
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_mesh(config: RunConfig) -> int:
    mesh = lowdim.mesh_3d(config.level)
    path = config.output_path()
    if path is None:
        _emit(config, lowdim.export_obj(mesh, colorize_by_octant=config.colorize))
    else:
        lowdim.write_obj(mesh, path, colorize_by_octant=config.colorize)
        logger.info("wrote mesh to %s", path)
    _report("mesh level {}: {} vertices, {} faces, volume {:.12g}".format(
        config.level, len(mesh.vertices), len(mesh.faces), mesh.signed_volume()))
    return EXIT_OK


def _point_rows(points) -> list:
    return [{"x": x, "y": y} for x, y in points]


def cmd_boundary2d(config: RunConfig) -> int:
    poly = lowdim.boundary_polyline_2d(config.points)
    rows = _point_rows(poly.to_rows())
    _emit(config, _render(config, rows, payload=[[r["x"], r["y"]] for r in rows], header=["x", "y"]))
    _report("perimeter {:.12g} (2 pi = {:.12g})".format(poly.perimeter(), 2.0 * math.pi))
    return EXIT_OK


def cmd_plot_data(config: RunConfig) -> int:
    if (config.alpha is None) != (config.beta is None):
        raise argparse.ArgumentTypeError("--alpha and --beta go together")
    if config.shape == "triangle":
        if config.alpha is None:
            opt = bounds.minimize_s()
            alpha, beta = opt.alpha_star, opt.beta_star
        else:
            alpha, beta = config.alpha, config.beta
        points = lowdim.triangle_plot_data(alpha, beta)
    else:
        points = lowdim.disk_segment_plot_data(config.points)
    rows = _point_rows(points)
    _emit(config, _render(config, rows, payload=[[r["x"], r["y"]] for r in rows], header=["x", "y"]))
    return EXIT_OK


HANDLERS = {
    "radius-table": cmd_radius_table,
    "volume": cmd_volume,
    "width-check": cmd_width_check,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "mesh": cmd_mesh,
    "boundary2d": cmd_boundary2d,
    "plot-data": cmd_plot_data,
}


def run(config: RunConfig) -> int:
    """
    Dispatch `config` to its command. Bad parameters map to exit 2, failed
    checks and numerical failures to exit 1.
    """
    try:
        return HANDLERS[config.command](config)
    except (ValueError, argparse.ArgumentTypeError) as e:
        _report("error: {}".format(e))
        return EXIT_USAGE
    except ConstWidthError as e:
        _report("error: {}".format(e))
        if hasattr(e, "dump"):
            logger.debug(e.dump())
        return EXIT_CHECK_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    return run(RunConfig.from_args(args))
