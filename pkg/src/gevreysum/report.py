"""Report rendering: matplotlib figures written alongside delimited output.

Each report mode writes <mode>.json, <mode>.csv and <mode>.png into the
requested directory and returns the list of written paths.  Figures use the
Agg backend so reports work headless.
"""

from __future__ import annotations

import json
import math
import os
from typing import TYPE_CHECKING

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .errors import CliUsageError  # noqa: E402
from .gammafn import log_gamma  # noqa: E402
from .newton import newton_polygon  # noqa: E402
from .opparse import parse_operator  # noqa: E402
from .series import estimate_gevrey_order  # noqa: E402

if TYPE_CHECKING:
    import argparse


def _require(value, flag: str):
    if value is None:
        raise CliUsageError(f"report mode requires {flag}")
    return value


def run_report(args: "argparse.Namespace") -> dict:
    os.makedirs(args.out, exist_ok=True)
    if args.mode == "polygon":
        written = _report_polygon(args)
    elif args.mode == "gevrey":
        written = _report_gevrey(args)
    elif args.mode == "asymptotic":
        written = _report_asymptotic(args)
    elif args.mode == "flat":
        written = _report_flat(args)
    else:
        raise CliUsageError(f"unknown report mode {args.mode!r}")
    return {"written": sorted(written)}


def _paths(args, *exts: str) -> list[str]:
    return [os.path.join(args.out, f"{args.mode}.{ext}") for ext in exts]


def _report_polygon(args) -> list[str]:
    op = parse_operator(_require(args.operator, "--operator"))
    poly = newton_polygon(op)
    json_path, csv_path, png_path = _paths(args, "json", "csv", "png")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(poly.to_json(), fh, sort_keys=True)
        fh.write("\n")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(poly.vertices_csv())

    fig, ax = plt.subplots(figsize=(5, 4))
    xs = [p[0] for p in poly.base_points]
    ys = [p[1] for p in poly.base_points]
    span = max(2, max(ys) - min(ys) + 2)
    for j, y in poly.base_points:
        ax.fill_betweenx(
            [y, y + span], j - span, [j, j], alpha=0.12, color="tab:blue", linewidth=0
        )
    ax.plot(xs, ys, "o", color="tab:blue", label="base points")
    vx = [p[0] for p in poly.vertices]
    vy = [p[1] for p in poly.vertices]
    ax.plot(vx, vy, "-s", color="tab:red", label="boundary chain")
    ax.plot([vx[-1], vx[-1]], [vy[-1], vy[-1] + span], "--", color="tab:red")
    ax.set_xlabel("derivative order j")
    ax.set_ylabel("vanishing order offset")
    ax.legend()
    slopes = ", ".join(f"{s.numerator}/{s.denominator}" for s in poly.finite_slopes) or "none"
    ax.set_title(f"Newton polygon (finite slopes: {slopes})")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [json_path, csv_path, png_path]


def _report_gevrey(args) -> list[str]:
    from .cli import _load_series_arg

    series = _load_series_arg(_require(args.series, "--series"))
    fit = estimate_gevrey_order(series)
    json_path, csv_path, png_path = _paths(args, "json", "csv", "png")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(
            {"s_hat": fit.s_hat, "log_C": fit.log_C, "log_M": fit.log_M, "residual": fit.residual},
            fh,
            sort_keys=True,
        )
        fh.write("\n")
    ks, logs = [], []
    for k, c in enumerate(series.coeffs):
        if k >= 1 and abs(c) > 0:
            ks.append(k)
            logs.append(math.log(abs(c)))
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("k,log_abs_coeff\n")
        for k, y in zip(ks, logs):
            fh.write(f"{k},{y!r}\n")

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(ks, logs, "o", ms=4, label="log |a_k|")
    model = [
        fit.log_M + fit.log_C * k + (fit.s_hat - 1.0) * log_gamma(k + 1.0) for k in ks
    ]
    ax.plot(ks, model, "-", label=f"fit (s = {fit.s_hat:.3f})")
    ax.set_xlabel("k")
    ax.set_ylabel("log |a_k|")
    ax.legend()
    ax.set_title("Coefficient growth and Gevrey fit")
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [json_path, csv_path, png_path]


def _report_asymptotic(args) -> list[str]:
    from .asymptotics import check_asymptotic_fit
    from .cli import _load_series_arg, _oracle_from_spec, _load_json_arg, _sector_from_flag, _write_remainder_csv

    oracle = _oracle_from_spec(_load_json_arg(_require(args.f, "--f")))
    series = _load_series_arg(_require(args.series, "--series"))
    sector = _sector_from_flag(_require(args.sector, "--sector"), args.grid)
    fit = check_asymptotic_fit(oracle, series, args.s, sector, n_max=args.n_max)
    json_path, csv_path, png_path = _paths(args, "json", "csv", "png")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(
            {
                "s": args.s,
                "M": fit.M,
                "C": fit.C,
                "ok": fit.ok,
                "n_max": fit.n_max,
                "worst_point": [fit.worst_point.real, fit.worst_point.imag],
            },
            fh,
            sort_keys=True,
        )
        fh.write("\n")
    _write_remainder_csv(csv_path, oracle, series, sector, args.s, args.n_max)

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(fit.orders, fit.roots, "o-", label="(sup_z R_n)^(1/n)")
    ax.axhline(fit.C, ls="--", color="tab:red", label=f"C = {fit.C:.3g}")
    ax.set_xlabel("order n")
    ax.set_ylabel("normalised remainder root")
    ax.set_title(f"Asymptotic fit at s = {args.s} ({'ok' if fit.ok else 'fails'})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [json_path, csv_path, png_path]


def _report_flat(args) -> list[str]:
    from .asymptotics import check_flat_decay
    from .cli import _oracle_from_spec, _load_json_arg, _sector_from_flag

    oracle = _oracle_from_spec(_load_json_arg(_require(args.f, "--f")))
    sector = _sector_from_flag(_require(args.sector, "--sector"), args.grid)
    fit = check_flat_decay(oracle, args.s, sector)
    json_path, csv_path, png_path = _paths(args, "json", "csv", "png")
    with open(json_path, "w", encoding="utf-8") as fh:
        json.dump(
            {"s": args.s, "B": fit.B, "b": fit.b if math.isfinite(fit.b) else None, "ok": fit.ok},
            fh,
            sort_keys=True,
        )
        fh.write("\n")
    xs, ys = [], []
    for z in sector.grid():
        av = abs(complex(oracle(z)))
        if av < 1e-305:
            continue
        xs.append(abs(z) ** (-1.0 / (args.s - 1.0)))
        ys.append(math.log(av))
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("inv_scale,log_abs_f\n")
        for x, y in zip(xs, ys):
            fh.write(f"{x!r},{y!r}\n")

    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(xs, ys, "o", ms=4, label="log |f|")
    if xs and math.isfinite(fit.b):
        grid = np.linspace(min(xs), max(xs), 50)
        ax.plot(grid, math.log(max(fit.B, 1e-300)) - fit.b * grid, "-",
                label=f"bound (b = {fit.b:.3f})")
    ax.set_xlabel("|z|^(-1/(s-1))")
    ax.set_ylabel("log |f(z)|")
    ax.set_title(f"Flat decay at s = {args.s} ({'ok' if fit.ok else 'fails'})")
    ax.legend()
    fig.tight_layout()
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return [json_path, csv_path, png_path]
