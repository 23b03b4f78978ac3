import json
import math
import random

import pytest

from conftest import random_series
from gevreysum import (
    FormalPowerSeries,
    add,
    derive,
    estimate_gevrey_order,
    is_sharp_class,
    mul,
    series_from_json,
    series_to_json,
)
from gevreysum.errors import InsufficientDataError, SeriesFormatError
from gevreysum.gammafn import log_gamma
from gevreysum.series import euler_series, loads_series, max_rel_diff


def brute_force_product(a, b, order):
    """Independent convolution oracle (plain double loop)."""
    out = [0j] * (order + 1)
    for i, va in enumerate(a.coeffs):
        for j, vb in enumerate(b.coeffs):
            if i + j <= order:
                out[i + j] += va * vb
    return out


# ---------------------------------------------------------------------------
# add / mul / derive examples
# ---------------------------------------------------------------------------


def test_add_cancellation():
    one_plus = FormalPowerSeries((1, 1))
    one_minus = FormalPowerSeries((1, -1))
    assert add(one_plus, one_minus).coeffs == (2 + 0j, 0j)


def test_add_zero_identity():
    s = FormalPowerSeries((2, 3, 4))
    assert add(s, FormalPowerSeries.zero(2)).coeffs == s.coeffs


def test_add_euler_doubles_coefficients():
    doubled = add(euler_series(12), euler_series(12))
    for k in range(1, 13):
        expected = 2 * (-1) ** (k - 1) * math.factorial(k - 1)
        assert doubled.coeffs[k] == expected


def test_add_truncates_to_shorter():
    a = FormalPowerSeries((1, 2, 3, 4))
    b = FormalPowerSeries((1, 1))
    assert add(a, b).truncation_order == 1


def test_mul_difference_of_squares():
    res = mul(FormalPowerSeries((1, 1)), FormalPowerSeries((1, -1)))
    assert res.coeffs == (1 + 0j, 0j)  # z^2 term is beyond the shared truncation


def test_mul_one_identity():
    s = FormalPowerSeries((1, 2, 3))
    one = FormalPowerSeries((1, 0, 0))
    assert mul(s, one).coeffs == s.coeffs


def test_mul_geometric_telescopes():
    geo = FormalPowerSeries((1,) * 11)
    lin = FormalPowerSeries((1, -1)).extended(10)
    res = mul(geo, lin)
    assert res.coeffs[0] == 1
    assert all(c == 0 for c in res.coeffs[1:])
    assert res.coeffs == tuple(brute_force_product(geo, lin, 10))


def test_mul_matches_brute_force(rng):
    for _ in range(25):
        a = random_series(rng, rng.randint(0, 12))
        b = random_series(rng, rng.randint(0, 12))
        n = min(a.truncation_order, b.truncation_order)
        assert max_rel_diff(mul(a, b).coeffs, brute_force_product(a, b, n)) < 1e-14


def test_derive_monomial():
    assert derive(FormalPowerSeries((0, 1))).coeffs == (1 + 0j,)


def test_derive_exp_fixed_point():
    exp10 = FormalPowerSeries(tuple(1 / math.factorial(k) for k in range(11)))
    der = derive(exp10)
    assert der.truncation_order == 9
    assert max_rel_diff(der.coeffs, exp10.coeffs[:10]) < 1e-15


def test_derive_euler_series():
    der = derive(euler_series(12))
    for k in range(12):
        assert der.coeffs[k] == (k + 1) * (-1) ** k * math.factorial(k)


def test_derive_constant_is_zero_series():
    z = derive(FormalPowerSeries((5,)))
    assert z.coeffs == (0j,)


# ---------------------------------------------------------------------------
# algebra properties (fixed random corpus)
# ---------------------------------------------------------------------------


def test_commutativity_and_associativity(rng):
    for _ in range(20):
        a = random_series(rng, rng.randint(2, 10))
        b = random_series(rng, rng.randint(2, 10))
        c = random_series(rng, rng.randint(2, 10))
        assert max_rel_diff(add(a, b).coeffs, add(b, a).coeffs) < 1e-12
        assert max_rel_diff(mul(a, b).coeffs, mul(b, a).coeffs) < 1e-12
        left = mul(mul(a, b), c)
        right = mul(a, mul(b, c))
        assert max_rel_diff(left.coeffs, right.coeffs) < 1e-12
        addl = add(add(a, b), c)
        addr = add(a, add(b, c))
        assert max_rel_diff(addl.coeffs, addr.coeffs) < 1e-12


def test_leibniz_rule(rng):
    for _ in range(20):
        a = random_series(rng, rng.randint(2, 10))
        b = random_series(rng, rng.randint(2, 10))
        lhs = derive(mul(a, b))
        rhs = add(mul(derive(a), b), mul(a, derive(b)))
        n = min(lhs.truncation_order, rhs.truncation_order)
        assert max_rel_diff(lhs.coeffs[: n + 1], rhs.coeffs[: n + 1]) < 1e-12


def gevrey_like(rng: random.Random, s: float, order: int) -> FormalPowerSeries:
    return FormalPowerSeries(
        tuple(
            rng.uniform(0.5, 2.0)
            * math.exp((s - 1.0) * log_gamma(k + 1.0))
            * complex(math.cos(0.3 * k), math.sin(0.3 * k))
            for k in range(order + 1)
        )
    )


def test_product_preserves_gevrey_class(rng):
    for s in (1.5, 2.0):
        a = gevrey_like(rng, s, 34)
        b = gevrey_like(rng, s, 34)
        assert abs(estimate_gevrey_order(a).s_hat - s) < 0.15
        prod_fit = estimate_gevrey_order(mul(a, b))
        assert prod_fit.s_hat <= s + 0.2


def test_scale_invariance_of_order_estimate():
    a = euler_series(40)
    lam = 3.7 - 2.2j
    f1 = estimate_gevrey_order(a)
    f2 = estimate_gevrey_order(a.scaled(lam))
    assert abs(f1.s_hat - f2.s_hat) < 1e-9
    assert abs(f1.log_C - f2.log_C) < 1e-9
    assert abs(f2.log_M - f1.log_M - math.log(abs(lam))) < 1e-9


# ---------------------------------------------------------------------------
# Gevrey order estimation
# ---------------------------------------------------------------------------


def test_estimate_euler_series_is_order_two():
    fit = estimate_gevrey_order(euler_series(40))
    assert 1.9 <= fit.s_hat <= 2.1
    assert fit.residual < 1.0


def test_estimate_bounded_coefficients_order_one():
    fit = estimate_gevrey_order(FormalPowerSeries((1,) * 41))
    assert 1.0 <= fit.s_hat <= 1.1


def test_estimate_squared_factorials_order_three():
    sq = FormalPowerSeries(tuple(complex(math.factorial(k)) ** 2 for k in range(31)))
    fit = estimate_gevrey_order(sq)
    assert 2.9 <= fit.s_hat <= 3.1


def test_estimate_requires_enough_data():
    with pytest.raises(InsufficientDataError, match="insufficient data"):
        estimate_gevrey_order(FormalPowerSeries((1, 1, 1, 1, 1)))


def test_estimate_clamps_below_one():
    decays = FormalPowerSeries(tuple(1 / math.factorial(k) for k in range(25)))
    assert estimate_gevrey_order(decays).s_hat == 1.0


# ---------------------------------------------------------------------------
# sharpness
# ---------------------------------------------------------------------------


def test_sharpness_euler_series():
    res = is_sharp_class(euler_series(40), 2.0)
    assert res.sharp
    assert 0.9 <= res.radius <= 1.35


def test_sharpness_rejects_bounded_coefficients():
    res = is_sharp_class(FormalPowerSeries((1,) * 41), 2.0)
    assert not res.sharp
    assert res.radius == math.inf


def test_sharpness_geometric_factorial():
    ser = FormalPowerSeries(tuple(complex(math.factorial(k) * 2.0**k) for k in range(31)))
    res = is_sharp_class(ser, 2.0)
    assert res.sharp
    assert abs(res.radius - 0.5) < 1e-6


def test_sharpness_requires_s_above_one():
    with pytest.raises(ValueError, match="requires s > 1"):
        is_sharp_class(euler_series(20), 1.0)


# ---------------------------------------------------------------------------
# construction and JSON format
# ---------------------------------------------------------------------------


def test_rejects_non_finite_coefficients():
    with pytest.raises(ValueError, match="finite"):
        FormalPowerSeries((1.0, math.inf))
    with pytest.raises(ValueError, match="finite"):
        FormalPowerSeries((complex(math.nan, 0),))


def test_json_round_trip(rng):
    a = random_series(rng, 9)
    again = series_from_json(json.loads(json.dumps(series_to_json(a))))
    assert again.coeffs == a.coeffs


def test_json_rejects_malformed():
    with pytest.raises(SeriesFormatError):
        series_from_json([[1.0]])
    with pytest.raises(SeriesFormatError):
        series_from_json("nope")
    with pytest.raises(SeriesFormatError):
        loads_series("[[1, 2,")


def test_extended_appends_exact_zeros():
    s = FormalPowerSeries((1, 2)).extended(4)
    assert s.coeffs == (1 + 0j, 2 + 0j, 0j, 0j, 0j)
    with pytest.raises(ValueError):
        FormalPowerSeries((1, 2, 3)).extended(1)
