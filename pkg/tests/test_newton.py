import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from gevreysum import (
    FormalPowerSeries,
    LinearOperator,
    gevrey_candidates,
    newton_polygon,
    parse_operator,
    vanishing_order,
)
from gevreysum.errors import ZeroOperatorError


def random_operator(rng: random.Random, max_order=4, max_vanishing=5) -> LinearOperator:
    n = rng.randint(1, max_order)
    coeffs = {}
    for j in range(n + 1):
        if j < n and rng.random() < 0.3:
            continue
        o = rng.randint(0, max_vanishing)
        vals = [0j] * o + [complex(rng.choice([-2, -1, 1, 2]))]
        vals += [complex(rng.randint(-2, 2)) for _ in range(rng.randint(0, 3))]
        coeffs[j] = FormalPowerSeries(tuple(vals))
    return LinearOperator.from_dict(n, coeffs)


def rasterized_hull_slopes(op: LinearOperator, span: int = 40) -> tuple[Fraction, ...]:
    """Brute-force oracle: rasterize the translated quadrants on a bounded
    grid, hull the union with qhull, read the finite positive slopes off the
    boundary edges joining genuine base points."""
    base = []
    for j, c in op.coeffs:
        o = vanishing_order(c)
        if o is not None:
            base.append((j, o - j))
    pts = set()
    for x0, y0 in base:
        for dx in range(span + 1):
            for dy in range(span + 1):
                pts.add((x0 - dx, y0 + dy))
    arr = np.array(sorted(pts), dtype=float)
    hull = ConvexHull(arr)
    verts = [tuple(map(int, arr[v])) for v in hull.vertices]
    base_set = set(base)
    slopes = set()
    for i in range(len(verts)):
        a, b = verts[i], verts[(i + 1) % len(verts)]
        if a in base_set and b in base_set and a[0] != b[0]:
            s = Fraction(b[1] - a[1], b[0] - a[0])
            if s > 0:
                slopes.add(s)
    return tuple(sorted(slopes))


# ---------------------------------------------------------------------------
# vanishing orders
# ---------------------------------------------------------------------------


def test_vanishing_order_monomial():
    assert vanishing_order(FormalPowerSeries((0, 0, 1))) == 2


def test_vanishing_order_constant():
    assert vanishing_order(FormalPowerSeries((1,))) == 0


def test_vanishing_order_ignores_subtolerance_prefix():
    c = FormalPowerSeries((1e-15, 0, 0, 1))
    assert vanishing_order(c) == 3


def test_vanishing_order_zero_series():
    assert vanishing_order(FormalPowerSeries.zero(4)) is None


# ---------------------------------------------------------------------------
# polygons for the worked operators
# ---------------------------------------------------------------------------


def test_euler_operator_polygon():
    poly = newton_polygon(parse_operator("z^2*D + 1"))
    assert poly.base_points == ((0, 0), (1, 1))
    assert poly.finite_slopes == (Fraction(1, 1),)
    assert poly.has_vertical_ray
    assert gevrey_candidates(poly) == [1.0, 2.0]


def test_ordinary_point_operator_polygon():
    poly = newton_polygon(parse_operator("D^2 + z*D + z"))
    assert poly.base_points == ((0, 1), (1, 0), (2, -2))
    assert poly.finite_slopes == ()
    assert poly.vertices == ((2, -2),)
    assert gevrey_candidates(poly) == [1.0]


def test_second_order_cusp_operator_polygon():
    poly = newton_polygon(parse_operator("z^3*D^2 + D + 1"))
    assert poly.base_points == ((0, 0), (1, -1), (2, 1))
    assert poly.finite_slopes == (Fraction(2, 1),)
    assert rasterized_hull_slopes(parse_operator("z^3*D^2 + D + 1")) == (Fraction(2),)


def test_candidates_from_slope_two():
    poly = newton_polygon(parse_operator("z^3*D^2 + D + 1"))
    assert gevrey_candidates(poly) == [1.0, 1.5]


# ---------------------------------------------------------------------------
# invariance properties
# ---------------------------------------------------------------------------


def test_polygon_invariant_under_coefficient_scaling():
    base = parse_operator("z^3*D^2 + z*D + 1")
    scaled = LinearOperator.from_dict(
        2, {j: c.scaled(7.5 - 3j) for j, c in base.coeffs}
    )
    assert newton_polygon(base).finite_slopes == newton_polygon(scaled).finite_slopes
    assert newton_polygon(base).vertices == newton_polygon(scaled).vertices


def test_interior_point_does_not_change_polygon():
    op = parse_operator("z^3*D^2 + 1")
    with_interior = parse_operator("z^3*D^2 + z^3*D + 1")  # (1, 2) is interior
    a, b = newton_polygon(op), newton_polygon(with_interior)
    assert a.vertices == b.vertices
    assert a.finite_slopes == b.finite_slopes


def test_brute_force_oracle_agreement():
    rng = random.Random(20240809)
    for _ in range(60):
        op = random_operator(rng)
        assert tuple(newton_polygon(op).finite_slopes) == rasterized_hull_slopes(op)


def test_zero_operator_rejected():
    with pytest.raises(ValueError, match="nonzero"):
        LinearOperator.from_dict(1, {1: FormalPowerSeries.zero(3)})
    with pytest.raises(ZeroOperatorError, match="zero operator"):
        op = LinearOperator.from_dict(1, {1: FormalPowerSeries((1,))})
        object.__setattr__(op, "coeffs", ((1, FormalPowerSeries.zero(2)),))
        newton_polygon(op)


def test_polygon_json_export():
    payload = newton_polygon(parse_operator("z^2*D + 1")).to_json()
    assert payload["finite_slopes"] == ["1/1"]
    assert payload["gevrey_candidates"] == [1.0, 2.0]
    assert payload["base_points"] == [[0, 0], [1, 1]]
    csv = newton_polygon(parse_operator("z^2*D + 1")).vertices_csv()
    assert csv.splitlines()[0] == "j,order_offset"
    assert "1,1" in csv
