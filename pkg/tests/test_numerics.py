import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from datatypes import MaximizerSettings, QuadratureSettings
from errors import NumericalError
from numerics import integrate, integrate_tail, maximize_scalar


def test_integrate_identity():
    assert integrate(lambda x: x, 0, 1) == pytest.approx(0.5, abs=1e-9)


def test_integrate_empty_and_reversed_intervals():
    assert integrate(math.exp, 3, 3) == 0.0
    with pytest.raises(ValueError):
        integrate(math.exp, 3, 2)


def test_integrate_uniform_density():
    assert integrate(lambda x: 1 / 50, 75, 125) == pytest.approx(1.0, abs=1e-8)


def test_integrate_truncated_exponential_mean():
    rate, z = 0.01, 53
    closed_form = (1 - math.exp(-rate * z)) / rate - z * math.exp(-rate * z)
    assert integrate(lambda x: x * rate * math.exp(-rate * x), 0, z) == pytest.approx(closed_form, abs=1e-9)


def test_integrate_handles_kinks_at_breakpoints():
    value = integrate(lambda x: abs(x - 1.3), 0, 2, breakpoints=[1.3, 5.0])
    assert value == pytest.approx((1.3 ** 2 + 0.7 ** 2) / 2, abs=1e-9)


def test_integrate_reports_non_convergence():
    settings = QuadratureSettings(max_subdivisions=1)
    with pytest.raises(NumericalError) as info:
        integrate(lambda x: math.sin(1000 * x), 0, 100, settings)
    assert math.isfinite(info.value.estimate)


@pytest.mark.parametrize("rate", [0.005, 0.01, 0.1, 1.0])
def test_integrate_tail_exponential_density(rate):
    assert integrate_tail(lambda x: rate * math.exp(-rate * x), 0, scale=1 / rate) == pytest.approx(1, abs=1e-8)


def test_integrate_tail_from_offset():
    assert integrate_tail(lambda x: 0.01 * math.exp(-0.01 * x), 100, scale=100) == pytest.approx(math.exp(-1), abs=1e-8)


def test_integrate_tail_default_scale():
    assert integrate_tail(lambda x: math.exp(-x), 0) == pytest.approx(1, abs=1e-8)


def test_integrate_tail_normal_half():
    mu, sigma = 100.0, 10.0
    density = lambda x: math.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    assert integrate_tail(density, mu, scale=sigma) == pytest.approx(0.5, abs=1e-8)


def test_integrate_tail_rejects_bad_scale():
    with pytest.raises(ValueError):
        integrate_tail(math.exp, 0, scale=0)


def test_maximize_smooth_peak():
    z_star, value = maximize_scalar(lambda z: -(z - 3) ** 2, MaximizerSettings(0, 10))
    assert z_star == pytest.approx(3, abs=1e-6)
    assert value == pytest.approx(0, abs=1e-10)


def test_maximize_constant_function_returns_bracket_point():
    z_star, value = maximize_scalar(lambda z: 2.5, MaximizerSettings(1, 10))
    assert 1 <= z_star <= 10
    assert value == 2.5


def test_maximize_peak_at_edge():
    z_star, value = maximize_scalar(lambda z: z, MaximizerSettings(1, 10))
    assert z_star == 10
    assert value == 10


def test_maximize_periodic_versus_exponential_benefit():
    rate, cost = 0.01, 10

    def average_benefit(z):
        return ((1 - math.exp(-rate * z)) / rate - cost) / z

    z_star, value = maximize_scalar(average_benefit, MaximizerSettings(1, 1000))
    assert z_star == pytest.approx(53, abs=2)
    assert value == pytest.approx(0.5875, abs=1e-3)


@given(
    st.floats(min_value=0, max_value=10),
    st.floats(min_value=0.1, max_value=5),
    st.booleans(),
)
def test_maximizer_never_loses_to_its_grid(peak, width, kinked):
    def f(z):
        return -abs(z - peak) * width if kinked else -((z - peak) ** 2) * width

    settings = MaximizerSettings(0, 10, resolution=50)
    z_star, value = maximize_scalar(f, settings)
    grid_best = max(f(float(z)) for z in np.linspace(0, 10, 50))
    assert settings.lo <= z_star <= settings.hi
    assert value == f(z_star)
    assert value >= grid_best


def test_maximizer_is_deterministic():
    f = lambda z: math.sin(z) / z
    assert maximize_scalar(f, MaximizerSettings(1, 20)) == maximize_scalar(f, MaximizerSettings(1, 20))
