"""Command-line interface: ``mwright fit|sample|density|gof|simulate``.

Exit codes: 0 success, 1 internal error, 2 input error, 3 estimation error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

import numpy as np

from . import __version__
from .core import MWrightParams, Variant, pdf
from .errors import EstimationError, InputError, MWrightError
from .estimate import are_mean_median, fit
from .sampling import RngStream, sample_mwright
from .sim_harness import PRESETS, Case, Combo, SimPlan, run_bias_mad, run_coverage
from .stats_util import gof_simulated

log = logging.getLogger("mwright")

EXIT_OK, EXIT_INTERNAL, EXIT_INPUT, EXIT_ESTIMATION = 0, 1, 2, 3


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_column(path, column=None) -> np.ndarray:
    """Numeric column of a CSV file.

    ``column`` is a header name or a 0-based index (default 0).  A header is
    assumed when the first row's selected cell is not numeric.  Blank cells
    are skipped; any other non-numeric cell is an :class:`InputError`.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path} contains no data")

    first = [c.strip() for c in rows[0]]
    if column is None:
        idx = 0
    elif str(column).lstrip("-").isdigit():
        idx = int(column)
    else:
        if str(column) not in first:
            raise InputError(f"column {column!r} not found in header of {path}")
        idx = first.index(str(column))
    if idx < 0 or idx >= len(first):
        raise InputError(f"column index {idx} out of range (row 1 has {len(first)} columns)")
    has_header = not _is_number(first[idx])
    start = 1 if has_header else 0

    values = []
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if idx >= len(row):
            raise InputError(f"row {lineno} has no column {idx}")
        cell = row[idx].strip()
        if not cell:
            continue
        try:
            values.append(float(cell))
        except ValueError:
            raise InputError(f"row {lineno}: non-numeric value {cell!r} in column {idx}") from None
    return np.array(values, dtype=float)


def _write(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(output, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {output}: {exc}") from exc


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _g(x) -> str:
    return "nan" if x is None else f"{x:.6g}"


def _params_from_args(args) -> MWrightParams:
    try:
        return MWrightParams(args.alpha, args.rho, args.mu, Variant.parse(args.variant))
    except (ValueError, MWrightError) as exc:
        raise InputError(str(exc)) from exc


def cmd_fit(args) -> int:
    data = read_column(args.input, args.column)
    res = fit(data, args.variant, args.level, RngStream(args.seed), mu=args.known_mu,
              location=args.location, quantile=args.quantile,
              quantile_draws=args.quantile_draws, published_cov=args.published_cov)
    doc = res.to_dict(seed=args.seed)
    if args.gof:
        doc["gof_mean_p"] = gof_simulated(data, res.params, args.gof,
                                          RngStream(args.seed, 1))
    if args.format == "json":
        _write(json.dumps(doc, indent=2) + "\n", args.output)
    elif args.format == "csv":
        rows = []
        for name in ("alpha", "rho", "mu"):
            ci = doc["ci"][name]
            rows.append([name, repr(doc["params"][name]),
                         repr(ci[0]) if ci else "", repr(ci[1]) if ci else ""])
        rows.append(["corr_alpha_rho", repr(doc["corr_alpha_rho"]), "", ""])
        if "gof_mean_p" in doc:
            rows.append(["gof_mean_p", repr(doc["gof_mean_p"]), "", ""])
        _write(_csv_text(["quantity", "estimate", "lower", "upper"], rows), args.output)
    else:
        p = res.params
        lines = [f"{p.variant.value} M-Wright fit, n = {res.n} ({res.n_used} used), "
                 f"{100 * args.level:g}% intervals"]
        for name, ci in (("mu", res.ci_mu), ("alpha", res.ci_alpha), ("rho", res.ci_rho)):
            bounds = f"({_g(ci.lower)}, {_g(ci.upper)})  [{ci.method.value}]" if ci else "(known)"
            lines.append(f"  {name:<6}{_g(getattr(p, name)):>12}  {bounds}")
        lines.append(f"  corr(alpha, rho) = {_g(res.corr_alpha_rho)}")
        lines.append(f"  location estimator: {res.location_estimator_used.value}")
        if "gof_mean_p" in doc:
            lines.append(f"  mean KS p-value over {args.gof} simulated sets: "
                         f"{_g(doc['gof_mean_p'])}")
        lines.extend(f"  note: {d}" for d in res.diagnostics)
        _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_sample(args) -> int:
    p = _params_from_args(args)
    if args.n < 1:
        raise InputError("-n must be >= 1")
    x = sample_mwright(p, RngStream(args.seed, args.stream), args.n)
    if args.format == "json":
        _write(json.dumps({"params": p.as_dict(), "seed": args.seed, "stream": args.stream,
                           "draws": x.tolist()}) + "\n", args.output)
    else:
        _write(_csv_text(["x"], [[repr(float(v))] for v in x]), args.output)
    return EXIT_OK


def cmd_density(args) -> int:
    if args.points < 2:
        raise InputError("--points must be >= 2")
    if not args.to > args.start:
        raise InputError("--to must exceed --from")
    grid = np.linspace(args.start, args.to, args.points)
    if args.curve == "are":
        if args.start <= 0 or args.to >= 1:
            raise InputError("the ARE curve needs 0 < --from < --to < 1")
        ys = [are_mean_median(a) for a in grid]
        header = ["alpha", "are"]
    else:
        p = _params_from_args(args)
        ys = [float(pdf(p, x)) for x in grid]
        header = ["x", "pdf"]
    if args.format == "json":
        _write(json.dumps({header[0]: grid.tolist(), header[1]: ys}) + "\n", args.output)
    else:
        _write(_csv_text(header, [[repr(float(a)), repr(b)] for a, b in zip(grid, ys)]),
               args.output)
    return EXIT_OK


def cmd_gof(args) -> int:
    data = read_column(args.input, args.column)
    if args.alpha is None:
        params = fit(data, args.variant, 0.95, RngStream(args.seed),
                     quantile="exact").params
    else:
        if args.rho is None or args.mu is None:
            raise InputError("--alpha needs --rho and --mu as well")
        params = _params_from_args(args)
    mean_p = gof_simulated(data, params, args.sims, RngStream(args.seed, 1))
    doc = {"params": params.as_dict(), "sims": args.sims, "mean_p": mean_p, "seed": args.seed}
    if args.format == "json":
        _write(json.dumps(doc, indent=2) + "\n", args.output)
    elif args.format == "csv":
        _write(_csv_text(["alpha", "rho", "mu", "variant", "sims", "mean_p"],
                         [[repr(params.alpha), repr(params.rho), repr(params.mu),
                           params.variant.value, args.sims, repr(mean_p)]]), args.output)
    else:
        _write(f"mean KS p-value over {args.sims} simulated sets: {_g(mean_p)}\n", args.output)
    return EXIT_OK


def _parse_combo(text: str, case: Case) -> Combo:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise InputError(f"bad --combo {text!r}; expected alpha,rho[,mu]") from None
    if len(vals) not in (2, 3):
        raise InputError(f"bad --combo {text!r}; expected alpha,rho[,mu]")
    if case is Case.ONE_SIDED_MU_ZERO and len(vals) == 3 and vals[2] != 0:
        raise InputError("case one-sided-mu-zero needs mu = 0")
    try:
        return Combo.make(vals[0], vals[1], vals[2] if len(vals) == 3 else 0.0, case)
    except (ValueError, MWrightError) as exc:
        raise InputError(str(exc)) from exc


def cmd_simulate(args) -> int:
    if args.preset:
        kind, combos = PRESETS[args.preset]
        if kind != args.study:
            raise InputError(f"preset {args.preset} is a {kind} study, not {args.study}")
        combos = list(combos)
    else:
        if not args.combo:
            raise InputError("give --preset or at least one --combo")
        combos = [_parse_combo(c, Case(args.case)) for c in args.combo]
    try:
        plan = SimPlan(combos=combos, sample_sizes=args.sizes, replicates=args.replicates,
                       level=args.level, bootstrap_b=args.bootstrap_b, seed=args.seed,
                       bootstrap_max_n=args.bootstrap_max_n, quantile=args.quantile,
                       quantile_draws=args.quantile_draws, symmetric_location=args.location,
                       threads=args.threads)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.study == "bias-mad":
        report = run_bias_mad(plan)
    else:
        report = run_coverage(plan, include_bootstrap=not args.no_bootstrap)
    _write(report.to_json() if args.format == "json" else report.to_csv(), args.output)
    return EXIT_OK


def _level(text: str) -> float:
    v = float(text)
    if not 0.0 < v < 1.0:
        raise argparse.ArgumentTypeError("level must lie in (0, 1)")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mwright", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("text", "json", "csv"), default="text"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--output", "-o", help="output file (default: stdout)")
        p.add_argument("--seed", type=_seed, default=0)

    def params(p, required=True):
        p.add_argument("--variant", choices=["one-sided", "symmetric"], default="one-sided")
        p.add_argument("--alpha", type=float, required=required)
        p.add_argument("--rho", type=float, default=None if not required else 1.0)
        p.add_argument("--mu", type=float, default=None if not required else 0.0)

    p = sub.add_parser("fit", help="fit a dataset column")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--column", help="header name or 0-based index (default 0)")
    p.add_argument("--variant", choices=["one-sided", "symmetric"], default="one-sided")
    p.add_argument("--level", type=_level, default=0.95)
    p.add_argument("--location", choices=["auto", "mean", "median"], default="auto",
                   help="symmetric location rule")
    p.add_argument("--known-mu", type=float, default=None, help="treat mu as known")
    p.add_argument("--quantile", choices=["monte-carlo", "exact"], default="monte-carlo")
    p.add_argument("--quantile-draws", type=_positive_int, default=10 ** 6)
    p.add_argument("--published-cov", action="store_true",
                   help="alpha-rho cross covariance in its uncorrected form")
    p.add_argument("--gof", type=int, default=0, metavar="SIMS",
                   help="also report the mean KS p-value over SIMS simulated sets")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sample", help="draw random variates")
    params(p)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--stream", type=_seed, default=0)
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("density", help="density or ARE curve on a grid")
    p.add_argument("--curve", choices=["pdf", "are"], default="pdf")
    p.add_argument("--variant", choices=["one-sided", "symmetric"], default="one-sided")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("gof", help="simulated two-sample KS goodness of fit")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--column")
    params(p, required=False)
    p.add_argument("--sims", type=_positive_int, default=100)
    common(p)
    p.set_defaults(func=cmd_gof)

    p = sub.add_parser("simulate", help="bias/MAD or coverage study")
    p.add_argument("study", choices=["bias-mad", "coverage"])
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--combo", action="append", help="alpha,rho[,mu]; repeatable")
    p.add_argument("--case", choices=[c.value for c in Case], default=Case.ONE_SIDED_MU_ZERO.value)
    p.add_argument("--sizes", type=_positive_int, nargs="+", default=[100, 1000, 10000])
    p.add_argument("--replicates", type=_positive_int, default=1000)
    p.add_argument("--level", type=_level, default=0.95)
    p.add_argument("--bootstrap-b", type=_positive_int, default=1000)
    p.add_argument("--bootstrap-max-n", type=int, default=1000,
                   help="skip bootstrap columns above this sample size")
    p.add_argument("--no-bootstrap", action="store_true")
    p.add_argument("--quantile", choices=["monte-carlo", "exact"], default="monte-carlo")
    p.add_argument("--quantile-draws", type=_positive_int, default=10 ** 6)
    p.add_argument("--location", choices=["auto", "mean", "median"], default="mean")
    p.add_argument("--threads", type=_positive_int, default=1)
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "simulate" and args.preset and args.combo:
        parser.error("--preset and --combo are mutually exclusive")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"mwright: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EstimationError as exc:
        print(f"mwright: estimation error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except MWrightError as exc:
        print(f"mwright: error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - last-resort mapping
        log.exception("internal error")
        print(f"mwright: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
