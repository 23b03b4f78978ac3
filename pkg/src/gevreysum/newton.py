"""Newton polygon of a linear differential operator at the origin.

The operator P = Sigma c_j(z) d^j contributes one base point (j, o_j - j)
per nonzero coefficient, where o_j is the vanishing order of c_j at 0.  The
polygon is the convex hull of the second quadrants translated to those
points; only its lower-right chain matters, so it is computed by dominance
filtering followed by a monotone convex chain.  Slopes are exact rationals
since base points are integer.  Each positive slope k predicts a candidate
growth order 1 + 1/k for formal solutions; the vertical ray contributes the
convergent candidate 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import ZeroOperatorError
from .series import FormalPowerSeries

#: relative threshold below which a coefficient is treated as zero
VANISHING_TOL = 1e-12


@dataclass(frozen=True)
class LinearOperator:
    """P = Sigma_{j} c_j(z) d^j with truncated-series coefficients.

    `coeffs` maps derivative order j to its series; absent orders are zero.
    The leading coefficient c_order must not be identically zero.
    """

    order: int
    coeffs: tuple[tuple[int, FormalPowerSeries], ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("operator order must be >= 1")
        pairs = tuple(sorted((int(j), c) for j, c in self.coeffs))
        seen = [j for j, _ in pairs]
        if len(set(seen)) != len(seen):
            raise ValueError("duplicate derivative order in operator coefficients")
        if any(j < 0 or j > self.order for j in seen):
            raise ValueError("coefficient order outside [0, operator order]")
        object.__setattr__(self, "coeffs", pairs)
        lead = self.coeff(self.order)
        if lead is None or vanishing_order(lead) is None:
            raise ValueError("leading coefficient must be a nonzero series")

    @classmethod
    def from_dict(cls, order: int, coeffs: Mapping[int, FormalPowerSeries]) -> "LinearOperator":
        return cls(order=order, coeffs=tuple(coeffs.items()))

    def coeff(self, j: int) -> FormalPowerSeries | None:
        for jj, c in self.coeffs:
            if jj == j:
                return c
        return None

    def coeff_dict(self) -> dict[int, FormalPowerSeries]:
        return dict(self.coeffs)


@dataclass(frozen=True)
class NewtonPolygon:
    """Base points, boundary vertices and finite positive slopes."""

    base_points: tuple[tuple[int, int], ...]
    vertices: tuple[tuple[int, int], ...]
    finite_slopes: tuple[Fraction, ...]
    has_vertical_ray: bool = True

    def to_json(self) -> dict:
        return {
            "base_points": [[j, y] for j, y in self.base_points],
            "vertices": [[j, y] for j, y in self.vertices],
            "finite_slopes": [f"{s.numerator}/{s.denominator}" for s in self.finite_slopes],
            "gevrey_candidates": gevrey_candidates(self),
        }

    def vertices_csv(self) -> str:
        lines = ["j,order_offset"]
        lines.extend(f"{j},{y}" for j, y in self.vertices)
        return "\n".join(lines) + "\n"


def vanishing_order(c: FormalPowerSeries) -> int | None:
    """Smallest k with |a_k| above the relative tolerance; None if all below.

    The tolerance is 1e-12 times the largest coefficient modulus, so a
    sub-tolerance leading term is ignored.
    """
    peak = max(abs(v) for v in c.coeffs)
    if peak == 0.0:
        return None
    tol = VANISHING_TOL * peak
    for k, v in enumerate(c.coeffs):
        if abs(v) > tol:
            return k
    return None


def _cross(o: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def newton_polygon(op: LinearOperator) -> NewtonPolygon:
    """Polygon from the base points (j, o_j - j) of the nonzero c_j."""
    base: list[tuple[int, int]] = []
    for j, c in op.coeffs:
        o = vanishing_order(c)
        if o is not None:
            base.append((j, o - j))
    if not base:
        raise ZeroOperatorError("zero operator")
    base.sort()

    # A point is dominated when another quadrant already contains it:
    # larger-or-equal j and smaller-or-equal offset, one strict.
    survivors = [
        p
        for p in base
        if not any(
            q != p and q[0] >= p[0] and q[1] <= p[1]
            for q in base
        )
    ]
    survivors.sort()

    chain: list[tuple[int, int]] = []
    for p in survivors:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= 0:
            chain.pop()
        chain.append(p)

    slopes = tuple(
        Fraction(chain[i + 1][1] - chain[i][1], chain[i + 1][0] - chain[i][0])
        for i in range(len(chain) - 1)
    )
    assert all(s > 0 for s in slopes)
    return NewtonPolygon(
        base_points=tuple(base),
        vertices=tuple(chain),
        finite_slopes=slopes,
    )


def gevrey_candidates(poly: NewtonPolygon) -> list[float]:
    """Sorted candidate orders {1 + 1/k} for the finite slopes, plus 1."""
    cands = {1.0}
    for k in poly.finite_slopes:
        cands.add(float(1 + Fraction(1) / k))
    return sorted(cands)
