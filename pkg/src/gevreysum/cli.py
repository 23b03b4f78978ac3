"""Command line front end.

Subcommands: polygon, solve, classify-euler, gevrey, sum, check, report.
Results are emitted as JSON on stdout; failures print an error JSON on
stderr and exit with 1 (input syntax), 2 (domain or convergence) or
3 (numeric failure).  Identical invocations produce byte-identical output.
The environment variable GEVREY_QUAD_TOL overrides the default quadrature
tolerance.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Callable

import numpy as np

from . import borel as bl
from .asymptotics import Sector, check_asymptotic_fit, check_flat_decay, derivative_bounds_check
from .errors import (
    CliUsageError,
    ContinuationError,
    DomainError,
    ExpressionError,
    GevreySumError,
    InsufficientDataError,
    OperatorSyntaxError,
    QuadratureError,
    SeriesFormatError,
    UnderdeterminedError,
    ZeroOperatorError,
)
from .exprs import compile_expression
from .newton import LinearOperator, gevrey_candidates, newton_polygon
from .opparse import parse_operator
from .series import (
    FormalPowerSeries,
    estimate_gevrey_order,
    is_sharp_class,
    load_series,
    loads_series,
    series_to_json,
)
from .solver import euler_alpha, formal_solve, max_solvable_order, recurrence_shift, residual_check

EXIT_PARSE = 1
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3

_PARSE_ERRORS = (
    OperatorSyntaxError,
    SeriesFormatError,
    ExpressionError,
    CliUsageError,
    json.JSONDecodeError,
)
_DOMAIN_ERRORS = (
    DomainError,
    ContinuationError,
    InsufficientDataError,
    UnderdeterminedError,
    ZeroOperatorError,
    ValueError,
)
_NUMERIC_ERRORS = (QuadratureError, ArithmeticError)


def _quad_tol() -> float:
    raw = os.environ.get("GEVREY_QUAD_TOL")
    if raw is None:
        return 1e-10
    try:
        tol = float(raw)
    except ValueError as exc:
        raise CliUsageError(f"GEVREY_QUAD_TOL must be a float, got {raw!r}") from exc
    if not tol > 0:
        raise CliUsageError("GEVREY_QUAD_TOL must be positive")
    return tol


def _load_series_arg(text: str) -> FormalPowerSeries:
    """Series flag values: inline JSON if it starts with '[', else a file path."""
    if text.lstrip().startswith("["):
        return loads_series(text)
    if not os.path.exists(text):
        raise SeriesFormatError(f"series file not found: {text}")
    return load_series(text)


def _parse_complex_pair(text: str, flag: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise CliUsageError(f"{flag} expects 're,im', got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise CliUsageError(f"{flag} expects numbers 're,im', got {text!r}") from exc


def _complex_json(c: complex) -> list[float]:
    return [c.real, c.imag]


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _pad_operator(op: LinearOperator, order: int) -> LinearOperator:
    """Extend polynomial coefficients with exact zeros up to `order`.

    Parsed operators are exact polynomials, so the extension adds genuine
    zero coefficients (never applied to externally supplied truncations).
    """
    coeffs = {
        j: (c if c.truncation_order >= order else c.extended(order))
        for j, c in op.coeffs
    }
    return LinearOperator.from_dict(op.order, coeffs)


def _pad_series(a: FormalPowerSeries, order: int) -> FormalPowerSeries:
    return a if a.truncation_order >= order else a.extended(order)


# ---------------------------------------------------------------------------
# Oracles and continuations from JSON specs
# ---------------------------------------------------------------------------


def _load_json_arg(text: str) -> dict:
    if text.lstrip().startswith("{"):
        data = json.loads(text)
    else:
        if not os.path.exists(text):
            raise CliUsageError(f"spec file not found: {text}")
        with open(text, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    if not isinstance(data, dict):
        raise CliUsageError("spec must be a JSON object")
    return data


def _oracle_from_spec(spec: dict) -> Callable[[complex], complex]:
    kind = spec.get("type")
    if kind == "expr":
        return compile_expression(spec["expr"], var=spec.get("var", "z"))
    if kind == "laplace":
        inner = compile_expression(spec["g"], var=spec.get("var", "u"))
        plan = bl.BorelSumPlan(
            m=float(spec.get("m", 1.0)),
            eta=float(spec.get("eta", 0.0)),
            quad_rel_tol=float(spec.get("tol", 1e-12)),
        )
        return lambda z: bl.laplace_numeric(inner, plan, z)
    raise CliUsageError(f"unknown oracle type {kind!r} (use 'expr' or 'laplace')")


def _continuation_from_flag(text: str | None) -> bl.ClosedFormContinuation | bl.PadeSpec | None:
    if text is None or text == "pade":
        return None
    if text.startswith("pade:"):
        parts = text[len("pade:"):].split(",")
        if len(parts) != 2:
            raise CliUsageError("--continuation pade:L,M expects two integer degrees")
        return bl.PadeSpec(int(parts[0]), int(parts[1]))
    spec = _load_json_arg(text)
    kind = spec.get("type")
    if kind == "closed_form":
        fn = compile_expression(spec["expr"], var=spec.get("var", "u"))
        poles = tuple(complex(p[0], p[1]) for p in spec.get("poles", []))
        return bl.ClosedFormContinuation(fn=fn, poles=poles)
    if kind == "pade":
        return bl.PadeSpec(int(spec["num_deg"]), int(spec["den_deg"]))
    raise CliUsageError(f"unknown continuation type {kind!r}")


def _sector_from_flag(text: str, grid: str | None) -> Sector:
    parts = text.split(",")
    if len(parts) != 3:
        raise CliUsageError(f"--sector expects 'direction,opening,radius', got {text!r}")
    n_radii, n_angles = 12, 9
    if grid is not None:
        gparts = grid.split(",")
        if len(gparts) != 2:
            raise CliUsageError("--grid expects 'n_radii,n_angles'")
        n_radii, n_angles = int(gparts[0]), int(gparts[1])
    try:
        direction, opening, radius = (float(p) for p in parts)
    except ValueError as exc:
        raise CliUsageError(f"--sector expects numbers, got {text!r}") from exc
    return Sector(direction, opening, radius, n_radii=n_radii, n_angles=n_angles)


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_polygon(args: argparse.Namespace) -> dict:
    op = parse_operator(args.operator)
    poly = newton_polygon(op)
    payload = poly.to_json()
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(poly.vertices_csv())
    return payload


def _parse_init(items: list[str]) -> dict[int, complex]:
    init: dict[int, complex] = {}
    for item in items:
        if "=" not in item:
            raise CliUsageError(f"--init expects k=value, got {item!r}")
        key, _, val = item.partition("=")
        try:
            idx = int(key)
        except ValueError as exc:
            raise CliUsageError(f"--init index must be an integer, got {key!r}") from exc
        parts = val.split(",")
        try:
            if len(parts) == 2:
                init[idx] = complex(float(parts[0]), float(parts[1]))
            else:
                init[idx] = complex(float(val), 0.0)
        except ValueError as exc:
            raise CliUsageError(f"--init value must be numeric, got {val!r}") from exc
    return init


def _cmd_solve(args: argparse.Namespace) -> dict:
    op = parse_operator(args.operator)
    rhs = _load_series_arg(args.rhs)
    n = args.N
    shift = recurrence_shift(op)
    level_cap = n - shift
    op = _pad_operator(op, max(level_cap, 0))
    rhs = _pad_series(rhs, max(level_cap, 0))
    if n > max_solvable_order(op, rhs):
        raise CliUsageError(f"-N {n} exceeds the usable truncation of the padded data")
    result = formal_solve(op, rhs, initial=_parse_init(args.init), N=n)
    payload = result.to_json()
    payload["residual"] = residual_check(op, result.solution, rhs)
    return payload


def _cmd_classify_euler(args: argparse.Namespace) -> dict:
    rhs = _load_series_arg(args.rhs)
    n = args.N if args.N is not None else rhs.truncation_order
    rhs = _pad_series(rhs, n)
    heuristic = args.growth is None
    if args.growth is not None:
        parts = args.growth.split(",")
        if len(parts) != 2:
            raise CliUsageError("--growth expects 'M,C'")
        big_m, big_c = float(parts[0]), float(parts[1])
    else:
        big_m, big_c = _fit_growth_envelope(rhs)
    result = euler_alpha(rhs, n, (big_m, big_c))
    return {
        "alpha": _complex_json(result.alpha),
        "verdict": result.verdict,
        "alpha_tail_bound": result.alpha_tail_bound,
        "growth": {"M": big_m, "C": big_c, "fitted": heuristic},
        "heuristic": heuristic,
    }


def _fit_growth_envelope(rhs: FormalPowerSeries) -> tuple[float, float]:
    """Smallest-slope geometric envelope |b_k| <= M C^k covering the data."""
    pts = [(k, math.log(abs(c))) for k, c in enumerate(rhs.coeffs) if k >= 1 and abs(c) > 0]
    if len(pts) < 2:
        return 1.0, 1.0
    ks = np.array([k for k, _ in pts], dtype=float)
    ys = np.array([y for _, y in pts])
    design = np.column_stack([np.ones_like(ks), ks])
    (_, log_c), *_ = np.linalg.lstsq(design, ys, rcond=None)
    log_c = max(float(log_c), math.log(1e-6))
    log_m = float(np.max(ys - log_c * ks))
    return math.exp(max(log_m, math.log(1e-6))), math.exp(log_c)


def _cmd_gevrey(args: argparse.Namespace) -> dict:
    series = _load_series_arg(args.series)
    fit = estimate_gevrey_order(series)
    payload = {
        "s_hat": fit.s_hat,
        "log_C": fit.log_C,
        "log_M": fit.log_M,
        "residual": fit.residual,
        "sharp": None,
        "radius": None,
    }
    s_for_sharpness = args.s if args.s is not None else fit.s_hat
    if s_for_sharpness > 1.05:
        sharp = is_sharp_class(series, s_for_sharpness)
        payload["sharp"] = sharp.sharp
        payload["radius"] = sharp.radius if math.isfinite(sharp.radius) else None
    return payload


def _cmd_sum(args: argparse.Namespace) -> dict:
    series = _load_series_arg(args.series)
    s = args.s
    if not (1.0 < s < 3.0):
        raise DomainError("index outside supported range (1 < s < 3)")
    plan = bl.BorelSumPlan(
        m=1.0 / (s - 1.0),
        eta=args.eta,
        continuation=_continuation_from_flag(args.continuation),
        quad_rel_tol=_quad_tol(),
    )
    z = _parse_complex_pair(args.at, "--at")
    result = bl.borel_sum_detailed(series, s, plan, z)
    return {
        "value": _complex_json(result.value),
        "est_error": result.est_error,
        "domain_ok": result.domain_ok,
        "poles": [_complex_json(p) for p in result.poles],
        "ray_pole_warning": result.ray_pole_warning,
    }


def _cmd_check(args: argparse.Namespace) -> dict:
    oracle = _oracle_from_spec(_load_json_arg(args.f))
    sector = _sector_from_flag(args.sector, args.grid)
    if args.mode == "asymptotic":
        if args.series is None:
            raise CliUsageError("check asymptotic requires --series")
        series = _load_series_arg(args.series)
        fit = check_asymptotic_fit(oracle, series, args.s, sector, n_max=args.n_max)
        payload = {
            "sector": sector.to_json(),
            "s": args.s,
            "M": fit.M,
            "C": fit.C,
            "ok": fit.ok,
            "n_max": fit.n_max,
            "worst_point": _complex_json(fit.worst_point),
        }
        if args.csv:
            _write_remainder_csv(args.csv, oracle, series, sector, args.s, args.n_max)
        return payload
    if args.mode == "flat":
        fit = check_flat_decay(oracle, args.s, sector)
        return {
            "sector": sector.to_json(),
            "s": args.s,
            "B": fit.B,
            "b": fit.b if math.isfinite(fit.b) else None,
            "ok": fit.ok,
        }
    if args.mode == "derivatives":
        fit = derivative_bounds_check(oracle, sector, args.s, k_max=args.k_max)
        return {
            "sector": sector.to_json(),
            "s": args.s,
            "M": fit.M,
            "C": fit.C,
            "ok": fit.ok,
            "skipped": fit.skipped,
        }
    raise CliUsageError(f"unknown check mode {args.mode!r}")


def _write_remainder_csv(
    path: str,
    oracle: Callable[[complex], complex],
    series: FormalPowerSeries,
    sector: Sector,
    s: float,
    n_max: int,
) -> None:
    rows = ["re,im,abs_z,n,remainder"]
    for z in sector.grid():
        fval = complex(oracle(z))
        partial = 0j
        zpow = 1.0 + 0j
        for n in range(n_max + 1):
            rem = abs(fval - partial)
            rows.append(f"{z.real!r},{z.imag!r},{abs(z)!r},{n},{rem!r}")
            partial += series.coeffs[n] * zpow
            zpow *= z
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(rows) + "\n")


def _cmd_report(args: argparse.Namespace) -> dict:
    from . import report

    return report.run_report(args)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); map to exit 1
        raise CliUsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gevreysum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polygon", help="Newton polygon and candidate orders")
    p.add_argument("operator")
    p.add_argument("--csv", help="write polygon vertices CSV to this path")
    p.set_defaults(handler=_cmd_polygon)

    p = sub.add_parser("solve", help="formal power-series solution of P u = rhs")
    p.add_argument("operator")
    p.add_argument("--rhs", required=True, help="series JSON (inline or file path)")
    p.add_argument("--init", action="append", default=[], metavar="K=V",
                   help="value for a free coefficient index (repeatable)")
    p.add_argument("-N", type=int, required=True, help="truncation order of the solution")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("classify-euler", help="alpha classification for z^2*D + 1")
    p.add_argument("--rhs", required=True)
    p.add_argument("-N", type=int, default=None)
    p.add_argument("--growth", default=None, metavar="M,C",
                   help="growth envelope |b_k| <= M C^k; fitted (heuristic) when omitted")
    p.set_defaults(handler=_cmd_classify_euler)

    p = sub.add_parser("gevrey", help="Gevrey order estimate and sharpness test")
    p.add_argument("series")
    p.add_argument("--s", type=float, default=None, help="override order for the sharpness test")
    p.set_defaults(handler=_cmd_gevrey)

    p = sub.add_parser("sum", help="Borel-Laplace sum of a series")
    p.add_argument("series")
    p.add_argument("-s", type=float, required=True)
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--at", required=True, metavar="RE,IM")
    p.add_argument("--continuation", default=None,
                   help="'pade', 'pade:L,M', or a continuation spec JSON/file")
    p.set_defaults(handler=_cmd_sum)

    p = sub.add_parser("check", help="sector certifications against an oracle")
    p.add_argument("mode", choices=["asymptotic", "flat", "derivatives"])
    p.add_argument("--f", required=True, help="oracle spec JSON/file")
    p.add_argument("--series", default=None)
    p.add_argument("-s", type=float, required=True)
    p.add_argument("--sector", required=True, metavar="DIR,OPENING,RADIUS")
    p.add_argument("--grid", default=None, metavar="NR,NA")
    p.add_argument("--n-max", type=int, default=12, dest="n_max")
    p.add_argument("--k-max", type=int, default=6, dest="k_max")
    p.add_argument("--csv", default=None)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("report", help="render figures + CSV for an analysis")
    p.add_argument("mode", choices=["polygon", "gevrey", "asymptotic", "flat"])
    p.add_argument("-o", "--out", required=True, help="output directory")
    p.add_argument("--operator", default=None)
    p.add_argument("--series", default=None)
    p.add_argument("--f", default=None, help="oracle spec JSON/file")
    p.add_argument("-s", type=float, default=2.0)
    p.add_argument("--sector", default=None)
    p.add_argument("--grid", default=None)
    p.add_argument("--n-max", type=int, default=12, dest="n_max")
    p.set_defaults(handler=_cmd_report)

    return parser


def _error_payload(exc: Exception) -> dict:
    payload = {"error": str(exc), "type": type(exc).__name__}
    if isinstance(exc, OperatorSyntaxError):
        payload["position"] = exc.position
    return payload


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload = args.handler(args)
    except _PARSE_ERRORS as exc:
        sys.stderr.write(json.dumps(_error_payload(exc), sort_keys=True) + "\n")
        return EXIT_PARSE
    except _NUMERIC_ERRORS as exc:
        sys.stderr.write(json.dumps(_error_payload(exc), sort_keys=True) + "\n")
        return EXIT_NUMERIC
    except _DOMAIN_ERRORS as exc:
        sys.stderr.write(json.dumps(_error_payload(exc), sort_keys=True) + "\n")
        return EXIT_DOMAIN
    except GevreySumError as exc:
        sys.stderr.write(json.dumps(_error_payload(exc), sort_keys=True) + "\n")
        return EXIT_DOMAIN
    _emit(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
