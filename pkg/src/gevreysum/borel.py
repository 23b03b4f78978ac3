"""Formal and numeric Borel-Laplace transforms of index m.

The formal transforms divide or multiply coefficient k by Gamma(1 + k/m).
The numeric Laplace transform of index m along the ray arg u = eta is

    g(z) = (m / z^m) * integral_0^{inf e^{i eta}} f(u) e^{-(u/z)^m} u^{m-1} du,

computed by adaptive Gauss-Kronrod panels on the real ray parameter with a
doubling truncation rule.  The summation pipeline is: formal Borel
transform of index m = 1/(s-1), analytic continuation of the transformed
series (a supplied closed form, or a Pade approximant built from its
coefficients), then the numeric Laplace transform back.

Branches: z^m = exp(m log z) with arg z in (-pi, pi]; ray directions are
normalised into the same interval.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ContinuationError, DomainError, InsufficientDataError, QuadratureError
from .gammafn import gamma
from .quadrature import integrate_adaptive
from .series import ZERO_COEFF_FLOOR, FormalPowerSeries, tail_radius

#: ray distances below this to a continuation pole trigger a warning
POLE_RAY_WARN_DISTANCE = 1e-3

#: Pade denominator systems with condition estimates beyond this are rejected
#: (genuinely degenerate tables sit at 1e16+; benign high-degree fits near 1e13)
PADE_CONDITION_MAX = 1e14

#: default radii for exponential-growth fitting along a ray
GROWTH_SAMPLE_RADII: tuple[float, ...] = tuple(np.geomspace(0.25, 64.0, 16))

_LOG_FLOOR = -745.0
_LOG_CEIL = 745.0


def wrap_angle(x: float) -> float:
    """Reduce an angle into (-pi, pi]."""
    y = math.fmod(x, 2.0 * math.pi)
    if y <= -math.pi:
        y += 2.0 * math.pi
    elif y > math.pi:
        y -= 2.0 * math.pi
    return y


@dataclass(frozen=True)
class GrowthFit:
    """Envelope |f(u)| <= B exp(b |u|^m) valid on all fitted samples."""

    B: float
    b: float
    m: float


@dataclass(frozen=True)
class ClosedFormContinuation:
    """Analytic continuation given as a callable on the ray."""

    fn: Callable[[complex], complex]
    poles: tuple[complex, ...] = ()


@dataclass(frozen=True)
class PadeSpec:
    """Request a Pade continuation with the given degrees."""

    num_deg: int
    den_deg: int


@dataclass(frozen=True)
class BorelSumPlan:
    """Transform index, ray direction, continuation and quadrature settings.

    The index must exceed 1/2; the ray integral is truncated once a doubled
    segment contributes below quad_rel_tol times the running value.
    """

    m: float
    eta: float
    continuation: ClosedFormContinuation | PadeSpec | None = None
    quad_rel_tol: float = 1e-10
    max_doublings: int = 64

    def __post_init__(self):
        if not self.m > 0.5:
            raise ValueError("transform index m must exceed 1/2")
        if not (self.quad_rel_tol > 0):
            raise ValueError("quad_rel_tol must be positive")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be at least 1")
        object.__setattr__(self, "eta", wrap_angle(float(self.eta)))


class PadeApproximant:
    """Rational approximant matching the first num+den+1 series coefficients.

    The denominator (normalised to q_0 = 1) solves a Toeplitz system; a
    condition estimate above 1e12 aborts with ContinuationError.  Poles are
    the denominator roots, reported so ray checks can flag near misses.
    """

    def __init__(self, numerator: np.ndarray, denominator: np.ndarray, condition: float):
        self.numerator = np.asarray(numerator, dtype=complex)
        self.denominator = np.asarray(denominator, dtype=complex)
        self.condition = float(condition)
        if len(self.denominator) > 1:
            roots = np.roots(self.denominator[::-1])
            self.poles: tuple[complex, ...] = tuple(
                sorted((complex(r) for r in roots), key=lambda w: (abs(w), w.real, w.imag))
            )
        else:
            self.poles = ()

    @classmethod
    def from_series(cls, a: FormalPowerSeries, num_deg: int, den_deg: int) -> "PadeApproximant":
        if num_deg < 0 or den_deg < 0:
            raise ValueError("Pade degrees must be nonnegative")
        if num_deg + den_deg + 1 > len(a.coeffs):
            raise ValueError("Pade degrees need num_deg + den_deg + 1 coefficients")
        c = a.as_array()
        L, M = num_deg, den_deg
        if M == 0:
            q = np.array([1.0 + 0j])
            cond = 1.0
        else:
            A = np.zeros((M, M), dtype=complex)
            for r in range(M):
                for s in range(1, M + 1):
                    k = L + 1 + r - s
                    if k >= 0:
                        A[r, s - 1] = c[k]
            rhs = -c[L + 1 : L + 1 + M]
            cond = float(np.linalg.cond(A))
            if not math.isfinite(cond) or cond > PADE_CONDITION_MAX:
                raise ContinuationError("unstable Pade; reduce degrees")
            q = np.concatenate([np.array([1.0 + 0j]), np.linalg.solve(A, rhs)])
        p = np.array(
            [sum(q[j] * c[k - j] for j in range(0, min(k, M) + 1)) for k in range(L + 1)],
            dtype=complex,
        )
        return cls(p, q, cond)

    def __call__(self, u: complex) -> complex:
        num = complex(np.polyval(self.numerator[::-1], u))
        den = complex(np.polyval(self.denominator[::-1], u))
        return num / den


def ray_pole_distance(poles: Sequence[complex], eta: float) -> float:
    """Distance from the closest pole to the ray arg u = eta."""
    best = math.inf
    rot = cmath.exp(-1j * eta)
    for w in poles:
        v = w * rot
        d = abs(v.imag) if v.real >= 0 else abs(v)
        best = min(best, d)
    return best


# ---------------------------------------------------------------------------
# Formal transforms
# ---------------------------------------------------------------------------


def formal_borel(a: FormalPowerSeries, m: float) -> FormalPowerSeries:
    """Divide coefficient k by Gamma(1 + k/m)."""
    if not m > 0:
        raise ValueError("transform index m must be positive")
    return FormalPowerSeries(
        tuple(c / gamma(1.0 + k / m) for k, c in enumerate(a.coeffs))
    )


def formal_laplace(a: FormalPowerSeries, m: float) -> FormalPowerSeries:
    """Multiply coefficient k by Gamma(1 + k/m)."""
    if not m > 0:
        raise ValueError("transform index m must be positive")
    vals = []
    for k, c in enumerate(a.coeffs):
        v = c * gamma(1.0 + k / m)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"coefficient overflow in formal Laplace transform at k={k}")
        vals.append(v)
    return FormalPowerSeries(tuple(vals))


def radius_estimate(a: FormalPowerSeries) -> float:
    """Cauchy-Hadamard radius from the tail of |a_k|^(1/k).

    Geometric mean over the last third of the nonzero indices; +inf when
    the root sequence is still decaying there (see series.tail_radius).
    """
    pts = [
        (k, math.log(abs(c)) / k)
        for k, c in enumerate(a.coeffs)
        if k >= 1 and abs(c) > ZERO_COEFF_FLOOR
    ]
    if len(pts) < 8:
        raise InsufficientDataError("insufficient data: need at least 8 nonzero coefficients")
    return tail_radius(pts)


# ---------------------------------------------------------------------------
# Numeric Laplace transform along a ray
# ---------------------------------------------------------------------------


def _ray_integrand(
    f: Callable[[complex], complex], plan: BorelSumPlan, z: complex
) -> tuple[Callable[[float], complex], complex, float]:
    """Integrand on the real ray parameter plus prefactor and Re (e^{i phi}/|z|)^m."""
    if z == 0:
        raise ValueError("evaluation point z must be nonzero")
    m = plan.m
    phi = wrap_angle(plan.eta - cmath.phase(z))
    c = cmath.exp(m * complex(-math.log(abs(z)), phi))
    ray = cmath.exp(1j * plan.eta)
    prefactor = m * cmath.exp(1j * m * plan.eta) / cmath.exp(m * cmath.log(z))

    def h(t: float) -> complex:
        u = t * ray
        try:
            fu = complex(f(u))
        except OverflowError:
            return complex(math.inf, 0.0)
        tm = t**m
        kernel = cmath.exp(-tm * c)
        weight = tm / t
        return fu * kernel * weight

    return h, prefactor, c.real


def laplace_numeric(
    f: Callable[[complex], complex],
    plan: BorelSumPlan,
    z: complex,
    full_output: bool = False,
):
    """Index-m Laplace transform of f at z along the plan's ray.

    The caller is responsible for the convergence domain (see
    domain_check); outside it the doubling cap is hit and QuadratureError
    is raised with the achieved tolerance.
    """
    h, prefactor, re_c = _ray_integrand(f, plan, z)
    tol = plan.quad_rel_tol
    t_scale = (1.0 / re_c) ** (1.0 / plan.m) if re_c > 0 else 1.0
    T = max(1.0, t_scale)
    acc, err_total = integrate_adaptive(h, 0.0, T, rel_tol=0.25 * tol, abs_tol=1e-305)
    converged = False
    for _ in range(plan.max_doublings):
        scale = max(abs(acc), 1e-300)
        seg, seg_err = integrate_adaptive(
            h, T, 2.0 * T, rel_tol=0.25 * tol, abs_tol=0.25 * tol * scale
        )
        acc += seg
        err_total += seg_err
        T *= 2.0
        scale = max(abs(acc), 1e-300)
        if abs(seg) <= tol * scale and abs(h(T)) * T <= tol * scale:
            converged = True
            break
    if not converged:
        achieved = abs(seg) / max(abs(acc), 1e-300)
        raise QuadratureError("ray integral did not converge within the doubling cap", achieved)
    value = prefactor * acc
    est_error = abs(prefactor) * (err_total + abs(seg))
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise QuadratureError("ray integral evaluated to a non-finite value", math.inf)
    if full_output:
        return value, est_error
    return value


def truncated_laplace_numeric(
    g: Callable[[complex], complex],
    plan: BorelSumPlan,
    rho: float,
    z: complex,
    rho_min: float = 0.0,
) -> complex:
    """Laplace integral restricted to the ray segment (rho_min, rho).

    Always converges (compact segment).  A nonzero rho_min evaluates the
    difference of two truncated sums in one pass, avoiding the catastrophic
    cancellation of subtracting them at small |z|.
    """
    if rho <= rho_min:
        raise ValueError("rho must exceed rho_min")
    h, prefactor, _ = _ray_integrand(g, plan, z)
    tol = plan.quad_rel_tol
    value, _ = integrate_adaptive(h, rho_min, rho, rel_tol=0.25 * tol, abs_tol=1e-305)
    return prefactor * value


def fit_exponential_growth(
    f: Callable[[complex], complex],
    eta: float,
    m: float,
    samples: Sequence[float],
) -> GrowthFit:
    """Fit log|f(t e^{i eta})| ~ log B + b t^m, inflating B to cover all samples."""
    if len(samples) < 8:
        raise ValueError("growth fit needs at least 8 sample radii")
    if any(b <= a for a, b in zip(samples, samples[1:])):
        raise ValueError("sample radii must be strictly increasing")
    ray = cmath.exp(1j * wrap_angle(eta))
    xs = np.array([t**m for t in samples])
    ys = []
    for t in samples:
        av = abs(complex(f(t * ray)))
        if av <= 0.0:
            ys.append(_LOG_FLOOR)
        elif math.isinf(av):
            ys.append(_LOG_CEIL)
        else:
            ys.append(max(_LOG_FLOOR, min(_LOG_CEIL, math.log(av))))
    ys = np.array(ys)
    design = np.column_stack([np.ones_like(xs), xs])
    (log_b0, b), *_ = np.linalg.lstsq(design, ys, rcond=None)
    log_b = float(np.max(ys - b * xs))
    return GrowthFit(B=math.exp(min(log_b, 700.0)), b=float(b), m=m)


def domain_check(plan: BorelSumPlan, z: complex, growth: GrowthFit) -> bool:
    """b |z|^m < cos[m (eta - arg z)] with a positive cosine."""
    if z == 0:
        return False
    if not math.isclose(growth.m, plan.m, rel_tol=1e-9, abs_tol=1e-12):
        raise ValueError("growth fit order does not match the plan index")
    phi = wrap_angle(plan.eta - cmath.phase(z))
    cos_term = math.cos(plan.m * phi)
    return cos_term > 0.0 and growth.b * abs(z) ** plan.m < cos_term


# ---------------------------------------------------------------------------
# Summation pipeline
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BorelSumResult:
    value: complex
    est_error: float
    domain_ok: bool
    poles: tuple[complex, ...]
    growth: GrowthFit
    ray_pole_warning: bool = False
    pade_degrees: tuple[int, int] | None = None


def _resolve_continuation(
    b_series: FormalPowerSeries, plan: BorelSumPlan
) -> tuple[Callable[[complex], complex], tuple[complex, ...], tuple[int, int] | None]:
    cont = plan.continuation
    if isinstance(cont, ClosedFormContinuation):
        return cont.fn, tuple(cont.poles), None
    if cont is None:
        # default degrees floor((N-1)/2); step down while the denominator
        # system is too ill-conditioned (explicit degrees never fall back)
        deg = max(0, (b_series.truncation_order - 1) // 2)
        last_error: ContinuationError | None = None
        while deg >= 1:
            try:
                approx = PadeApproximant.from_series(b_series, deg, deg)
                return approx, approx.poles, (deg, deg)
            except ContinuationError as exc:
                last_error = exc
                deg -= 1
        raise last_error or ContinuationError("unstable Pade; reduce degrees")
    approx = PadeApproximant.from_series(b_series, cont.num_deg, cont.den_deg)
    return approx, approx.poles, (cont.num_deg, cont.den_deg)


def borel_sum_detailed(
    a: FormalPowerSeries,
    s: float,
    plan: BorelSumPlan,
    z: complex,
    growth_samples: Sequence[float] = GROWTH_SAMPLE_RADII,
) -> BorelSumResult:
    """Full pipeline with diagnostics: value, error, poles, growth envelope."""
    if not (1.0 < s < 3.0):
        raise ValueError("index outside supported range (1 < s < 3)")
    m_expected = 1.0 / (s - 1.0)
    if abs(plan.m - m_expected) > 1e-9 * max(1.0, m_expected):
        raise ValueError("plan index m must equal 1/(s - 1)")
    b_series = formal_borel(a, plan.m)
    fn, poles, degrees = _resolve_continuation(b_series, plan)
    warn = False
    if poles and ray_pole_distance(poles, plan.eta) < POLE_RAY_WARN_DISTANCE:
        warn = True
        warnings.warn("summation ray passes within 1e-3 of a continuation pole")
    growth = fit_exponential_growth(fn, plan.eta, plan.m, growth_samples)
    if not domain_check(plan, z, growth):
        raise DomainError("outside convergence domain b|z|^m < cos[m(eta - arg z)]")
    value, est_error = laplace_numeric(fn, plan, z, full_output=True)
    return BorelSumResult(
        value=value,
        est_error=est_error,
        domain_ok=True,
        poles=poles,
        growth=growth,
        ray_pole_warning=warn,
        pade_degrees=degrees,
    )


def borel_sum(a: FormalPowerSeries, s: float, plan: BorelSumPlan, z: complex) -> complex:
    """Borel sum of the series at z: formal Borel, continuation, Laplace."""
    return borel_sum_detailed(a, s, plan, z).value
