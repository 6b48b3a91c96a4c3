"""Command-line front end.

Subcommands: ``fit``, ``eval``, ``sample``, ``plotdata``, ``compare`` and
``report``. Machine-readable output goes to stdout; ``--verbose`` adds
human-readable tables on stderr.

Exit codes: 0 success, 1 usage or input error, 2 fit did not converge.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from pathlib import Path
from typing import Sequence

import numpy as np

from ._numeric import IntegrationError
from .data import DataError, Dataset, resolve_data
from .estimation import FitError, FitResult, fit_mle, log_likelihood
from .family import KwGMODistribution
from .models import ModelSpec
from .series import SeriesApproximationWarning, moment, renyi_entropy

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2
FUNCTIONS = ("pdf", "cdf", "sf", "hrf", "rhrf", "chrf", "quantile")


class UsageError(Exception):
    """Bad command-line input; reported on stderr with exit code 1."""


def _fmt(value: float) -> str:
    # Twelve significant digits, dot decimal separator regardless of locale.
    return format(float(value), ".12g")


def _parse_assignments(items: Sequence[str] | None, what: str) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in items or ():
        for part in item.split(","):
            name, sep, value = part.partition("=")
            if not sep:
                raise UsageError(f"{what} expects name=value, got {part!r}")
            try:
                out[name.strip()] = float(value)
            except ValueError:
                raise UsageError(f"{what}: {value!r} is not a number") from None
    return out


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"{what}: could not parse {text!r} as numbers") from None


def _spec_from_args(args, model: str | None = None) -> ModelSpec:
    try:
        return ModelSpec.parse(
            model or args.model,
            _parse_assignments(getattr(args, "fix", None), "--fix"),
            _parse_assignments(getattr(args, "option", None), "--option"),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _parse_params(spec: ModelSpec, text: str) -> dict[str, float]:
    if "=" in text:
        values: object = _parse_assignments([text], "--params")
    else:
        values = _parse_floats(text, "--params")
    try:
        return spec.as_mapping(values)  # type: ignore[arg-type]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _distribution_from_args(args) -> tuple[ModelSpec, dict[str, float], KwGMODistribution]:
    """Model and parameters from ``--report`` or ``--model`` plus ``--params``."""
    if getattr(args, "report", None):
        try:
            fit = FitResult.from_json(Path(args.report).read_text(encoding="utf-8"))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"cannot read fit report {args.report}: {exc}") from None
        spec, params = fit.spec, dict(fit.estimates)
    else:
        if not args.model or args.params is None:
            raise UsageError("give --model with --params, or --report")
        spec = _spec_from_args(args)
        params = _parse_params(spec, args.params)
    try:
        return spec, params, spec.build(params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load(args) -> Dataset:
    try:
        return resolve_data(args.data, column=args.column)
    except (OSError, DataError) as exc:
        raise UsageError(f"cannot load data {args.data!r}: {exc}") from None


def _verbose_fit_table(fit: FitResult) -> str:
    lines = [f"{fit.model} on {fit.data} (n={fit.n}, k={fit.k})"]
    lines.append(f"{'param':<8}{'estimate':>14}{'se':>14}{'ci_low':>14}{'ci_high':>14}")
    for name, est in fit.estimates.items():
        if name in fit.se:
            lo, hi = fit.ci[name]
            lines.append(f"{name:<8}{est:>14.6g}{fit.se[name]:>14.6g}{lo:>14.6g}{hi:>14.6g}")
        else:
            lines.append(f"{name:<8}{est:>14.6g}{'fixed':>14}")
    lines.append(f"loglik {fit.loglik:.6f}  AIC {fit.aic:.4f}  BIC {fit.bic:.4f}  "
                 f"CAIC {fit.caic:.4f}  HQIC {fit.hqic:.4f}  converged {fit.converged}")
    return "\n".join(lines)


# -- subcommands -------------------------------------------------------------
def cmd_fit(args) -> int:
    spec = _spec_from_args(args)
    data = _load(args)
    try:
        fit = fit_mle(spec, data, n_starts=args.starts, seed=args.seed, level=args.level)
    except (ValueError, FitError) as exc:
        raise UsageError(str(exc)) from None
    print(fit.to_json())
    if args.verbose:
        print(_verbose_fit_table(fit), file=sys.stderr)
    return EXIT_OK if fit.converged else EXIT_NOT_CONVERGED


def cmd_eval(args) -> int:
    _, _, dist = _distribution_from_args(args)
    points = np.array(_parse_floats(args.at, "--at"))
    if points.size == 0:
        raise UsageError("--at needs at least one point")
    try:
        values = np.atleast_1d(getattr(dist, args.function)(points))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for t, v in zip(points, values):
        print(f"{_fmt(t)}\t{_fmt(v)}")
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.n < 1:
        raise UsageError("-n must be a positive integer")
    _, _, dist = _distribution_from_args(args)
    draws = dist.sample(args.n, seed=args.seed)
    sys.stdout.write("".join(f"{float(x)!r}\n" for x in draws))
    return EXIT_OK


def histogram_density(values: np.ndarray, bins: int, grid: np.ndarray) -> np.ndarray:
    """Height of the normalized histogram bar above each grid point (0 outside)."""
    lo, hi = float(values.min()), float(values.max())
    heights, edges = np.histogram(values, bins=bins, range=(lo, hi) if hi > lo else None, density=True)
    idx = np.searchsorted(edges, grid, side="right") - 1
    # The right-most edge belongs to the last bar.
    idx = np.where(grid == edges[-1], bins - 1, idx)
    inside = (idx >= 0) & (idx < bins)
    return np.where(inside, heights[np.clip(idx, 0, bins - 1)], 0.0)


def default_grid_range(dist: KwGMODistribution, values: np.ndarray) -> tuple[float, float]:
    """Span of the data widened to the fitted 1e-4 and 1 - 1e-4 quantiles.

    A support edge at zero is used as the lower end when it lies close to the
    bulk of the fitted mass.
    """
    lo, hi = float(values.min()), float(values.max())
    q_lo, q_hi = (float(x) for x in dist.ppf_unchecked(np.array([1e-4, 1 - 1e-4])))
    if math.isfinite(q_lo):
        lo = min(lo, q_lo)
    if math.isfinite(q_hi):
        hi = max(hi, q_hi)
    lower = dist.support.lower
    if math.isfinite(lower) and lower >= 0 and lo - lower < 0.05 * (hi - lo):
        lo = lower
    return lo, hi


def _parse_grid(text: str | None) -> tuple[int, tuple[float, float] | None]:
    if text is None:
        return 200, None
    parts = text.split(":")
    try:
        if len(parts) == 1:
            count, span = int(parts[0]), None
        elif len(parts) == 3:
            count, span = int(parts[2]), (float(parts[0]), float(parts[1]))
        else:
            raise ValueError
    except ValueError:
        raise UsageError("--grid expects N or LOW:HIGH:N") from None
    if count < 2 or (span is not None and not span[0] < span[1]):
        raise UsageError("--grid needs at least 2 points and LOW < HIGH")
    return count, span


def cmd_plotdata(args) -> int:
    _, _, dist = _distribution_from_args(args)
    data = _load(args)
    values = np.asarray(data.values)
    bins = args.bins if args.bins is not None else math.ceil(math.sqrt(values.size))
    if bins < 1:
        raise UsageError("--bins must be at least 1")
    count, span = _parse_grid(args.grid)
    lo, hi = span if span is not None else default_grid_range(dist, values)
    grid = np.linspace(lo, hi, count)
    density = np.atleast_1d(dist.pdf(grid))
    hist = histogram_density(values, bins, grid)

    ordered = np.sort(values)
    ecdf = np.arange(1, ordered.size + 1) / ordered.size
    fitted_cdf = np.atleast_1d(dist.cdf(ordered))

    prefix = Path(args.out_prefix)
    density_path = prefix.with_name(prefix.name + "_density.csv")
    cdf_path = prefix.with_name(prefix.name + "_cdf.csv")
    try:
        with open(density_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "density_fitted", "hist_density"])
            writer.writerows((_fmt(t), _fmt(f), _fmt(h)) for t, f, h in zip(grid, density, hist))
        with open(cdf_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "cdf_fitted", "ecdf"])
            writer.writerows((_fmt(t), _fmt(c), _fmt(e)) for t, c, e in zip(ordered, fitted_cdf, ecdf))
    except OSError as exc:
        raise UsageError(f"cannot write plot data: {exc}") from None
    print(json.dumps({"density": str(density_path), "cdf": str(cdf_path), "bins": bins, "grid_points": count}))
    return EXIT_OK


COMPARE_COLUMNS = ("rank", "model", "k", "loglik", "aic", "bic", "caic", "hqic", "converged")


def rank_fits(fits: Sequence[FitResult]) -> list[FitResult]:
    """Ascending AIC, ties broken by BIC."""
    return sorted(fits, key=lambda f: (f.aic, f.bic))


def cmd_compare(args) -> int:
    models = [m for group in args.model for m in group.split(",") if m.strip()]
    if len(models) < 2:
        raise UsageError("compare needs at least two models")
    data = _load(args)
    fits, failures = [], []
    for text in models:
        try:
            spec = ModelSpec.parse(text)
            fits.append(fit_mle(spec, data, n_starts=args.starts, seed=args.seed, level=args.level))
        except (ValueError, FitError) as exc:
            failures.append((text, str(exc)))
    print("\t".join(COMPARE_COLUMNS))
    for rank, fit in enumerate(rank_fits(fits), start=1):
        row = [str(rank), fit.model, str(fit.k)] + [
            _fmt(getattr(fit, key)) for key in ("loglik", "aic", "bic", "caic", "hqic")
        ] + [str(fit.converged).lower()]
        print("\t".join(row))
    for text, message in failures:
        print(f"-\t{text}\terror: {message}")
    if args.verbose:
        for fit in rank_fits(fits):
            print(_verbose_fit_table(fit), file=sys.stderr)
    return EXIT_OK if fits else EXIT_USAGE


def _safe(func):
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SeriesApproximationWarning)
            value = float(func())
        return value if math.isfinite(value) else None
    except (IntegrationError, ValueError, OverflowError):
        return None


def cmd_report(args) -> int:
    spec, params, dist = _distribution_from_args(args)
    moments = {str(s): _safe(lambda s=s: moment(dist, s)) for s in range(1, args.moments + 1)}
    mean, second = moments.get("1"), moments.get("2")
    variance = second - mean * mean if mean is not None and second is not None else None
    probs = (0.1, 0.25, 0.5, 0.75, 0.9)
    doc = {
        "model": spec.name,
        "params": params,
        "mean": mean,
        "variance": variance,
        "moments": moments,
        "quantiles": {str(p): float(dist.ppf(p)) for p in probs},
        "renyi_entropy": {str(d): _safe(lambda d=d: renyi_entropy(dist, d)) for d in args.renyi},
    }
    if args.data:
        data = _load(args)
        ll = log_likelihood(spec, params, data)
        doc["data"] = data.name
        doc["loglik"] = ll if math.isfinite(ll) else None
    print(json.dumps(doc, indent=2))
    return EXIT_OK


# -- parser ------------------------------------------------------------------
def _add_model_args(p: argparse.ArgumentParser, *, report: bool) -> None:
    p.add_argument("--model", help="model string such as kwgmo:weibull, gmo:exp, kw:lomax or weibull")
    p.add_argument("--params", help="values as name=value pairs or a list in parameter order")
    p.add_argument("--fix", action="append", metavar="NAME=VALUE", help="hold a parameter fixed")
    p.add_argument("--option", action="append", metavar="KEY=VALUE",
                   help="baseline constant (t_min for ep, k for ew:logratio)")
    if report:
        p.add_argument("--report", help="take model and estimates from a fit report JSON file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kwgmo", description="Kumaraswamy generalized Marshall-Olkin lifetime models.")
    parser.add_argument("--verbose", action="store_true", help="human-readable tables on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def data_args(p, required=True):
        p.add_argument("--data", required=required, help="builtin:<id> or a file path")
        p.add_argument("--column", type=int, default=0, help="zero-based column in the data file")

    p = sub.add_parser("fit", help="maximum likelihood fit; JSON report on stdout")
    p.add_argument("--model", required=True)
    p.add_argument("--fix", action="append", metavar="NAME=VALUE")
    p.add_argument("--option", action="append", metavar="KEY=VALUE")
    data_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=20)
    p.add_argument("--level", type=float, default=0.95)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate pdf, cdf, sf, hrf, rhrf, chrf or quantile")
    _add_model_args(p, report=True)
    p.add_argument("--function", choices=FUNCTIONS, default="pdf")
    p.add_argument("--at", required=True, help="points (probabilities for quantile), comma separated")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sample", help="seeded inversion draws, one per line")
    _add_model_args(p, report=True)
    p.add_argument("-n", "--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("plotdata", help="fitted density/histogram and cdf/ecdf CSV files")
    _add_model_args(p, report=True)
    data_args(p)
    p.add_argument("--bins", type=int, default=None, help="histogram bars (default ceil(sqrt(n)))")
    p.add_argument("--grid", default=None, help="N or LOW:HIGH:N density grid (default 200 points)")
    p.add_argument("--out-prefix", default="plot")
    p.set_defaults(func=cmd_plotdata)

    p = sub.add_parser("compare", help="fit several models and rank them by AIC")
    p.add_argument("--model", action="append", required=True, help="repeat or comma-separate models")
    data_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=20)
    p.add_argument("--level", type=float, default=0.95)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="moments, quantiles and entropy of a parameterized model")
    _add_model_args(p, report=True)
    data_args(p, required=False)
    p.add_argument("--moments", type=int, default=4)
    p.add_argument("--renyi", type=float, nargs="*", default=[0.5, 2.0])
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # Accept --verbose anywhere on the line.
    verbose = "--verbose" in argv
    argv = [a for a in argv if a != "--verbose"]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    args.verbose = verbose
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"kwgmo {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
