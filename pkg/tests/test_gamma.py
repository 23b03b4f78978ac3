import math

import pytest

from gevreysum.gammafn import gamma, log_gamma


def test_integers_exact():
    for n in range(1, 171):
        assert gamma(float(n)) == float(math.factorial(n - 1))


def test_against_stdlib_gamma():
    # stdlib gamma is the independent oracle for the Lanczos path
    x = 0.5
    while x < 140.0:
        ref = math.gamma(x)
        assert abs(gamma(x) - ref) <= 1e-13 * ref, x
        x += 0.1379


def test_log_gamma_against_stdlib():
    x = 0.5
    while x < 400.0:
        ref = math.lgamma(x)
        assert abs(log_gamma(x) - ref) <= 1e-11 * max(1.0, abs(ref)), x
        x += 0.7717


def test_half_integer_values():
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-15
    assert abs(gamma(1.5) - 0.5 * math.sqrt(math.pi)) < 1e-15


def test_overflow_returns_inf():
    assert gamma(172.0) == math.inf
    assert gamma(500.0) == math.inf


def test_domain_error_below_half():
    with pytest.raises(ValueError):
        gamma(0.3)
    with pytest.raises(ValueError):
        log_gamma(0.0)
