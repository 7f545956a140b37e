import pytest

from src.config import ENV_TOLERANCE, TOL_DUAL, Tolerances, load_tolerances
from src.errors import ConfigError


def test_defaults():
    tols = load_tolerances(environ={})
    assert tols == Tolerances()
    assert tols.dual == TOL_DUAL


def test_environment_overrides_defaults():
    tols = load_tolerances(environ={ENV_TOLERANCE: "1e-6"})
    assert tols.dual == 1e-6
    assert tols.check == Tolerances().check
    assert tols.tie == Tolerances().tie


def test_flag_overrides_environment():
    tols = load_tolerances(1e-4, environ={ENV_TOLERANCE: "1e-6"})
    assert tols.dual == 1e-4


def test_empty_environment_value_is_ignored():
    assert load_tolerances(environ={ENV_TOLERANCE: ""}) == Tolerances()


@pytest.mark.parametrize("raw", ["abc", "0", "-1e-3", "nan"])
def test_invalid_values(raw):
    with pytest.raises(ConfigError):
        load_tolerances(environ={ENV_TOLERANCE: raw})
    with pytest.raises(ConfigError):
        load_tolerances(raw, environ={})


def test_to_dict_lists_every_tolerance():
    assert set(Tolerances().to_dict()) == {"dual", "rank_factor", "tie", "check", "majorization"}
