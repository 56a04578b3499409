"""Command-line surface: curve samples, moment tables, Fourier data and
the self-validation report, as CSV or JSON on stdout.

Exit codes: 0 success / all checks passed, 1 validation failure,
2 usage error, 3 resource or budget error.  Output is a pure function
of the flags (seeded randomness, no environment lookups), so identical
invocations produce byte-identical bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass

from . import closedform, fourier, oracle, validate
from .bernoulli import u_moment_bernoulli
from .digits import Params, expand

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

ZOOM_DEPTH_CAP = 50  # beyond this, float64 cannot tell neighbouring cells apart


class ZoomDepthError(RuntimeError):
    """Zoom window requires a depth past the representable cap."""


@dataclass(frozen=True)
class RunConfig:
    lam: float = 0.5
    depth: int = oracle.DEFAULT_DEPTH
    n_max: int = 6
    harmonics: int = 32
    tol: float = 1e-9
    output_format: str = "csv"
    seed: int = 0

    def __post_init__(self):
        Params(self.lam)  # rejects |lam| >= 1
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.n_max < 0 or self.harmonics < 0 or self.depth < 0:
            raise ValueError("depth, nmax and harmonics must be >= 0")
        if self.output_format not in ("csv", "json"):
            raise ValueError("format must be csv or json")

    @property
    def params(self) -> Params:
        return Params(self.lam)


def _f(x: float) -> str:
    return f"{x:.17g}"


def _emit_csv(sections: list[tuple[list[str], list[list]]]) -> None:
    w = csv.writer(sys.stdout, lineterminator="\n")
    for header, rows in sections:
        w.writerow(header)
        for row in rows:
            w.writerow([c if isinstance(c, str) else _f(c) for c in row])


def cmd_curve(cfg: RunConfig, which: str, samples: int, window: tuple[float, float]) -> int:
    a, b = window
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if not (-1.0 <= a < b <= 1.0):
        raise ValueError("window must satisfy -1 <= a < b <= 1")
    # enough depth that each sample sees its own cell
    need = math.ceil(math.log2(samples / (b - a)))
    depth = max(cfg.depth, need)
    if depth > ZOOM_DEPTH_CAP:
        raise ZoomDepthError(
            f"window needs depth {depth}, cap is {ZOOM_DEPTH_CAP} (float64 limit)"
        )
    p = cfg.params
    eval_fn = oracle.v_trunc if which == "v" else oracle.u_trunc
    rows = []
    step = (b - a) / samples
    for t in range(samples):
        e = expand(a + (t + 0.5) * step, depth)
        rows.append([e.midpoint(), eval_fn(e, p)])
    if cfg.output_format == "csv":
        _emit_csv([(["x", "value"], rows)])
    else:
        json.dump(
            {"which": which, "lam": cfg.lam, "depth": depth,
             "rows": [{"x": x, "value": v} for x, v in rows]},
            sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_moments(cfg: RunConfig) -> int:
    p = cfg.params
    rows = []
    for n in range(cfg.n_max + 1):
        o = oracle.integrate_v_power(n, p, cfg.depth)
        closed = closedform.v_power_rec(n, p)
        rows.append(["v_power", str(n), closed, closedform.v_power_det(n, p),
                     o.value, o.truncation_bound, abs(closed - o.value)])
    for n in range(cfg.n_max + 1):
        o = oracle.integrate_v_monomial(n, p, cfg.depth)
        closed = closedform.v_moment(n, p)
        rows.append(["v_moment", str(n), closed, "", o.value, o.truncation_bound,
                     abs(closed - o.value)])
    for n in range(cfg.n_max + 1):
        o = oracle.integrate_u_monomial(n, p, cfg.depth)
        closed = closedform.u_moment(n, p)
        rows.append(["u_moment", str(n), closed, u_moment_bernoulli(n, p),
                     o.value, o.truncation_bound, abs(closed - o.value)])
    header = ["kind", "N", "closed_form", "alt_route", "oracle", "oracle_bound", "abs_err"]
    if cfg.output_format == "csv":
        _emit_csv([(header, rows)])
    else:
        json.dump([dict(zip(header, r)) for r in rows], sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_fourier(cfg: RunConfig, samples: int) -> int:
    p = cfg.params
    cs = fourier.cosine_series(p, cfg.harmonics, cfg.tol)
    coeff_rows = [[str(n), c] for n, c in enumerate(cs.coeffs)]
    grid_depth = min(cfg.depth, ZOOM_DEPTH_CAP)
    sample_rows = []
    for t in range(samples):
        x = -1.0 + (t + 0.5) * (2.0 / samples)
        ref = oracle.v_trunc(expand(x, grid_depth), p)
        sample_rows.append([x, fourier.reconstruct(x, cs), ref])
    if cfg.output_format == "csv":
        _emit_csv([
            (["n", "coeff"], coeff_rows),
            (["x", "reconstruction", "oracle"], sample_rows),
        ])
    else:
        json.dump(
            {"lam": cfg.lam, "coeffs": list(cs.coeffs),
             "samples": [{"x": x, "reconstruction": r, "oracle": o}
                          for x, r, o in sample_rows]},
            sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK


def cmd_validate(cfg: RunConfig, perturb: str | None = None) -> int:
    report = validate.run_validation(
        lam=cfg.lam, depth=cfg.depth, n_max=cfg.n_max, harmonics=cfg.harmonics,
        tol=cfg.tol, seed=cfg.seed, perturb=perturb,
    )
    header = ["identity_id", "lhs_value", "rhs_value", "abs_error", "allowed_bound", "pass"]
    if cfg.output_format == "csv":
        rows = [[e.identity_id, e.lhs_value, e.rhs_value, e.abs_error,
                 e.allowed_bound, str(e.passed).lower()] for e in report.entries]
        _emit_csv([(header, rows)])
    else:
        json.dump(
            {"all_passed": report.all_passed,
             "entries": [
                 {"identity_id": e.identity_id, "lhs_value": e.lhs_value,
                  "rhs_value": e.rhs_value, "abs_error": e.abs_error,
                  "allowed_bound": e.allowed_bound, "pass": e.passed}
                 for e in report.entries]},
            sys.stdout, indent=2)
        sys.stdout.write("\n")
    if not report.all_passed:
        for e in report.entries:
            if not e.passed:
                print(f"FAIL {e.identity_id}: error {e.abs_error:.3e} > "
                      f"bound {e.allowed_bound:.3e}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, top: bool) -> None:
    # shared flags are accepted before or after the subcommand; only the
    # top-level copies carry defaults so subcommand parsing cannot
    # clobber values already set
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--lambda", dest="lam", type=float, default=d(0.5),
                        help="geometric weight, |lambda| < 1 (default 0.5)")
    parser.add_argument("--depth", type=int, default=d(oracle.DEFAULT_DEPTH),
                        help="dyadic cell depth for oracle sums (default 22)")
    parser.add_argument("--nmax", type=int, default=d(6),
                        help="largest moment index (default 6)")
    parser.add_argument("--harmonics", type=int, default=d(32),
                        help="number of cosine harmonics (default 32)")
    parser.add_argument("--tol", type=float, default=d(1e-9),
                        help="quadrature tolerance (default 1e-9)")
    parser.add_argument("--format", dest="output_format", choices=("csv", "json"),
                        default=d("csv"))
    parser.add_argument("--seed", type=int, default=d(0),
                        help="seed for randomized checks")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dyadicwalk",
        description="Return- and loop-counting curves of the dyadic digit walk",
    )
    _add_common(ap, top=True)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curve", help="sample a curve at cell midpoints")
    c.add_argument("--which", choices=("v", "u"), default="v")
    c.add_argument("--samples", type=int, default=512)
    c.add_argument("--window", nargs=2, type=float, default=(-1.0, 1.0),
                   metavar=("A", "B"), help="zoom window inside [-1, 1]")
    _add_common(c, top=False)

    m = sub.add_parser("moments", help="closed-form moment table with oracle columns")
    _add_common(m, top=False)

    f = sub.add_parser("fourier", help="cosine coefficients and reconstruction")
    f.add_argument("--samples", type=int, default=257)
    _add_common(f, top=False)

    v = sub.add_parser("validate", help="run every identity check")
    v.add_argument("--inject-error", dest="inject_error", default=None,
                   help=argparse.SUPPRESS)  # test hook: perturb one entry
    _add_common(v, top=False)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = RunConfig(
            lam=args.lam, depth=args.depth, n_max=args.nmax, harmonics=args.harmonics,
            tol=args.tol, output_format=args.output_format, seed=args.seed,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "curve":
            return cmd_curve(cfg, args.which, args.samples, tuple(args.window))
        if args.command == "moments":
            return cmd_moments(cfg)
        if args.command == "fourier":
            return cmd_fourier(cfg, args.samples)
        if args.command == "validate":
            return cmd_validate(cfg, perturb=args.inject_error)
    except (oracle.CellBudgetError, ZoomDepthError, fourier.QuadratureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
