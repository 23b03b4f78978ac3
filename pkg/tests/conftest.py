"""Shared fixtures and independent oracle helpers for the test suite."""

from __future__ import annotations

import contextlib
import io
import math
import random

import pytest
import scipy.integrate as si

from gevreysum import FormalPowerSeries

# Independent oracle values, frozen from scipy.integrate.quad and
# cross-checked against closed forms (e*E1(1) and the sine/cosine
# integrals); see test_borel.py for the runtime recomputation guards.
GOMPERTZ = 0.5963473623231941  # integral_0^inf e^-t/(1+t) dt
I_KERNEL = 0.6214496242358135 + 0.3433779615564271j  # integral_0^inf e^-t/(1-it) dt
HALF_EXP_HALF = 0.3032653298563167  # (1/2) e^(-1/2)


def quad_oracle(fn, a=0.0, b=math.inf, **kw):
    """scipy QUADPACK reference integral (real integrand)."""
    kw.setdefault("epsabs", 1e-13)
    kw.setdefault("epsrel", 1e-13)
    val, _ = si.quad(fn, a, b, **kw)
    return val


def complex_quad_oracle(fn, a=0.0, b=math.inf, **kw):
    return complex(
        quad_oracle(lambda t: fn(t).real, a, b, **kw),
        quad_oracle(lambda t: fn(t).imag, a, b, **kw),
    )


def random_series(rng: random.Random, order: int, scale: float = 2.0) -> FormalPowerSeries:
    return FormalPowerSeries(
        tuple(
            complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
            for _ in range(order + 1)
        )
    )


@pytest.fixture
def rng():
    return random.Random(20130704)


def run_cli(argv, env=None, monkeypatch=None):
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    from gevreysum.cli import main

    if env and monkeypatch is not None:
        for key, value in env.items():
            monkeypatch.setenv(key, value)
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(list(argv))
    return code, out.getvalue(), err.getvalue()
