import pytest

from errors import ConfigurationError, DropoutOptimalError
from oracles import oracle_exp, oracle_per, periodic_benefit_vs_exponential, reference_benefit
from renewal import Exponential, Normal, Periodic, Uniform


@pytest.mark.parametrize("delta, cost, expected", [(50, 25, 0.48), (50, 49, 0.0), (100, 10, 0.89)])
def test_oracle_per(delta, cost, expected):
    assert oracle_per(delta, cost) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("cost", [50, 75])
def test_oracle_per_dropout(cost):
    with pytest.raises(DropoutOptimalError) as info:
        oracle_per(50, cost)
    assert info.value.benefit == 0.0


@pytest.mark.parametrize("delta, cost", [(0, 5), (50, 0), (50, -1)])
def test_oracle_per_rejects_bad_parameters(delta, cost):
    with pytest.raises(ConfigurationError):
        oracle_per(delta, cost)


def test_oracle_exp_small_cost():
    period, benefit = oracle_exp(0.01, 10)
    assert period == pytest.approx(53, abs=1)
    assert benefit == pytest.approx(0.5875, abs=1e-3)
    assert benefit == periodic_benefit_vs_exponential(0.01, 10, period)


def test_oracle_exp_large_cost():
    period, benefit = oracle_exp(0.01, 90)
    assert period == pytest.approx(389, abs=2)
    assert 0 < benefit < 0.1


def test_oracle_exp_dropout_at_mean_gap():
    with pytest.raises(DropoutOptimalError):
        oracle_exp(0.01, 100)


def test_oracle_exp_benefit_decreases_with_cost():
    benefits = [oracle_exp(0.01, cost)[1] for cost in (10, 30, 50, 70, 90)]
    assert all(later < earlier for earlier, later in zip(benefits, benefits[1:]))


def test_reference_benefit():
    assert reference_benefit(Periodic(50), 25) == pytest.approx(0.48)
    assert reference_benefit(Periodic(50), 60) == 0.0
    assert reference_benefit(Exponential(0.01), 10) == pytest.approx(0.5875, abs=1e-3)
    assert reference_benefit(Uniform(100, 50), 10) is None
    assert reference_benefit(Normal(100, 10), 10) is None
