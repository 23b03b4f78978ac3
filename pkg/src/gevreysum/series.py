"""Truncated formal power series over complex coefficients.

A series is the finite coefficient list a_0..a_N of Sigma a_k z^k; N is the
truncation order.  Binary operations truncate to the shorter operand, so
every reported coefficient is backed by genuine data (no zero padding).
Values are immutable and all operations are pure functions, safe for
concurrent use.

Growth classification fits the model log|a_k| = log M + k log C +
(s - 1) log k! by ordinary least squares in log space; the fitted s is the
estimated Gevrey order (s = 1 for convergent-type growth).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientDataError, SeriesFormatError
from .gammafn import log_gamma

#: coefficients with modulus at or below this are treated as exact zeros in fits
ZERO_COEFF_FLOOR = 1e-300


@dataclass(frozen=True)
class FormalPowerSeries:
    """Coefficients a_0..a_N of a truncated formal power series."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        vals = tuple(complex(c) for c in self.coeffs)
        if not vals:
            raise ValueError("series needs at least one coefficient")
        for c in vals:
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise ValueError("series coefficients must be finite")
        object.__setattr__(self, "coeffs", vals)

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int = 0) -> "FormalPowerSeries":
        return cls((0j,) * (order + 1))

    @classmethod
    def monomial(cls, power: int, coeff: complex = 1.0, order: int | None = None) -> "FormalPowerSeries":
        n = power if order is None else order
        if n < power:
            raise ValueError("truncation order below the monomial power")
        vals = [0j] * (n + 1)
        vals[power] = complex(coeff)
        return cls(tuple(vals))

    def __getitem__(self, k: int) -> complex:
        return self.coeffs[k]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "FormalPowerSeries") -> "FormalPowerSeries":
        return add(self, other)

    def __mul__(self, other: "FormalPowerSeries") -> "FormalPowerSeries":
        return mul(self, other)

    def scaled(self, factor: complex) -> "FormalPowerSeries":
        return FormalPowerSeries(tuple(factor * c for c in self.coeffs))

    def extended(self, order: int) -> "FormalPowerSeries":
        """Append exact zero coefficients up to `order`.

        Only meaningful when the series is known to be an exact polynomial
        (e.g. parsed operator coefficients); it is never applied silently.
        """
        if order < self.truncation_order:
            raise ValueError("extended: target order below current truncation")
        return FormalPowerSeries(self.coeffs + (0j,) * (order - self.truncation_order))

    def truncated(self, order: int) -> "FormalPowerSeries":
        if order > self.truncation_order:
            raise ValueError("truncated: target order above current truncation")
        return FormalPowerSeries(self.coeffs[: order + 1])

    def evaluate(self, z: complex) -> complex:
        """Horner evaluation of the truncated polynomial."""
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)


def add(a: FormalPowerSeries, b: FormalPowerSeries) -> FormalPowerSeries:
    """Coefficient-wise sum, truncated to the shorter operand."""
    n = min(a.truncation_order, b.truncation_order)
    return FormalPowerSeries(tuple(a.coeffs[k] + b.coeffs[k] for k in range(n + 1)))


def mul(a: FormalPowerSeries, b: FormalPowerSeries) -> FormalPowerSeries:
    """Cauchy product, truncated to the shorter operand."""
    n = min(a.truncation_order, b.truncation_order)
    prod = np.convolve(a.as_array(), b.as_array())[: n + 1]
    return FormalPowerSeries(tuple(complex(c) for c in prod))


def derive(a: FormalPowerSeries) -> FormalPowerSeries:
    """Formal derivative; truncation drops by one (zero series for N = 0)."""
    if a.truncation_order == 0:
        return FormalPowerSeries.zero(0)
    return FormalPowerSeries(tuple((k + 1) * a.coeffs[k + 1] for k in range(a.truncation_order)))


@dataclass(frozen=True)
class GevreyFit:
    """Fitted growth model |a_k| ~ M C^k k!^(s-1)."""

    s_hat: float
    log_C: float
    log_M: float
    residual: float


@dataclass(frozen=True)
class SharpnessResult:
    sharp: bool
    radius: float


def _fit_points(a: FormalPowerSeries, min_k: int) -> list[tuple[int, float]]:
    return [
        (k, math.log(abs(a.coeffs[k])))
        for k in range(min_k, a.truncation_order + 1)
        if abs(a.coeffs[k]) > ZERO_COEFF_FLOOR
    ]


def estimate_gevrey_order(a: FormalPowerSeries) -> GevreyFit:
    """Least-squares Gevrey-order estimate from coefficient growth.

    The fit runs over nonzero coefficients with k >= 2 and needs at least
    eight of them; s_hat is clamped below at 1 and the residual is the
    maximum absolute deviation of the unconstrained fit.
    """
    pts = _fit_points(a, min_k=2)
    if len(pts) < 8:
        raise InsufficientDataError(
            "insufficient data: need at least 8 nonzero coefficients with k >= 2"
        )
    ks = np.array([k for k, _ in pts], dtype=float)
    ys = np.array([y for _, y in pts])
    design = np.column_stack([np.ones_like(ks), ks, np.array([log_gamma(k + 1.0) for k in ks])])
    beta, *_ = np.linalg.lstsq(design, ys, rcond=None)
    log_m, log_c, s_minus_1 = (float(b) for b in beta)
    residual = float(np.max(np.abs(design @ beta - ys)))
    return GevreyFit(s_hat=max(1.0, 1.0 + s_minus_1), log_C=log_c, log_M=log_m, residual=residual)


def tail_radius(points: Sequence[tuple[int, float]]) -> float:
    """Cauchy-Hadamard radius from (k, log |c_k|^(1/k)) samples.

    Uses the geometric mean over the last third of the points.  A root
    sequence still decaying there (log-log slope below -1/2, the k-th roots
    of factorially small coefficients) signals an infinite radius.
    """
    if not points:
        raise InsufficientDataError("insufficient data: series has no nonzero coefficients")
    tail = points[-max(3, math.ceil(len(points) / 3)):]
    if len(tail) >= 3:
        xs = np.array([math.log(k) for k, _ in tail])
        ys = np.array([v for _, v in tail])
        slope = float(np.polyfit(xs, ys, 1)[0])
        if slope < -0.5:
            return math.inf
    mean_log_root = sum(v for _, v in tail) / len(tail)
    if mean_log_root < -700.0:
        return math.inf
    return math.exp(-mean_log_root)


def is_sharp_class(a: FormalPowerSeries, s: float) -> SharpnessResult:
    """Check that order s cannot be improved, via a Cauchy-Hadamard radius.

    Estimates the convergence radius R of Sigma a_k z^k / k!^(s-1) from the
    tail of the k-th roots (see tail_radius).  A finite positive band
    1e-6 < R < 1e6 certifies sharpness: no order below s can hold.
    """
    if s <= 1.0:
        raise ValueError("sharpness test requires s > 1")
    pts = [
        (k, (math.log(abs(a.coeffs[k])) - (s - 1.0) * log_gamma(k + 1.0)) / k)
        for k in range(1, a.truncation_order + 1)
        if abs(a.coeffs[k]) > ZERO_COEFF_FLOOR
    ]
    radius = tail_radius(pts)
    return SharpnessResult(sharp=1e-6 < radius < 1e6, radius=radius)


# ---------------------------------------------------------------------------
# JSON literal format (shared with the CLI): array of [re, im] pairs,
# index = power of z.
# ---------------------------------------------------------------------------


def series_to_json(a: FormalPowerSeries) -> list[list[float]]:
    return [[c.real, c.imag] for c in a.coeffs]


def series_from_json(data: object) -> FormalPowerSeries:
    if not isinstance(data, Sequence) or isinstance(data, (str, bytes)) or not data:
        raise SeriesFormatError("series literal must be a nonempty JSON array of [re, im] pairs")
    coeffs = []
    for entry in data:
        if (
            not isinstance(entry, Sequence)
            or len(entry) != 2
            or not all(isinstance(v, (int, float)) for v in entry)
        ):
            raise SeriesFormatError(f"bad series entry {entry!r}: expected [re, im]")
        coeffs.append(complex(entry[0], entry[1]))
    return FormalPowerSeries(tuple(coeffs))


def loads_series(text: str) -> FormalPowerSeries:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SeriesFormatError(f"invalid series JSON: {exc}") from exc
    return series_from_json(data)


def load_series(path: str) -> FormalPowerSeries:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_series(fh.read())


def dump_series(a: FormalPowerSeries, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(series_to_json(a), fh)
        fh.write("\n")


def from_coefficient_fn(fn, order: int) -> FormalPowerSeries:
    """Series with coefficients fn(k) for k = 0..order (test/CLI helper)."""
    return FormalPowerSeries(tuple(complex(fn(k)) for k in range(order + 1)))


def euler_series(order: int) -> FormalPowerSeries:
    """The alternating-factorial series 0, 1, -1, 2, -6, ... up to `order`."""
    coeffs = [0j]
    for k in range(1, order + 1):
        coeffs.append(complex((-1) ** (k - 1) * math.factorial(k - 1)))
    return FormalPowerSeries(tuple(coeffs))


def max_rel_diff(a: Iterable[complex], b: Iterable[complex]) -> float:
    """max_k |a_k - b_k| / (1 + |b_k|), for tolerance checks."""
    return max(
        (abs(x - y) / (1.0 + abs(y)) for x, y in zip(a, b)),
        default=0.0,
    )
