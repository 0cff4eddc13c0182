import numpy as np
import pytest

from dmxy import ConfigError, DensityMatrix
from dmxy.model import is_x_state
from dmxy.states import NAMED_STATES, named_state, plus_plus


@pytest.mark.parametrize("name", sorted(NAMED_STATES))
def test_named_states_valid(name):
    rho = named_state(name)
    DensityMatrix(rho).check()
    assert is_x_state(rho)


def test_mixed_fig3_entries():
    rho = named_state("mixed-fig3")
    assert rho[0, 0] == rho[3, 3] == rho[0, 3] == pytest.approx(0.25)
    assert rho[1, 1] == pytest.approx(0.5)


def test_plus_plus_is_not_x():
    assert not is_x_state(plus_plus())


def test_explicit_state():
    rho = named_state("explicit: " + " ".join(str(x) for x in (np.eye(4) / 4).ravel()))
    np.testing.assert_allclose(rho, np.eye(4) / 4)
    with_phase = "explicit: 0.5 0 0 0.25-0.1j 0 0 0 0 0 0 0 0 0.25+0.1j 0 0 0.5"
    assert named_state(with_phase)[0, 3] == 0.25 - 0.1j


@pytest.mark.parametrize("spec", ["explicit: 1 0 0", "explicit: " + "z " * 16, "explicit: " + "1 " * 16, "nope"])
def test_bad_states(spec):
    with pytest.raises(ConfigError):
        named_state(spec)
