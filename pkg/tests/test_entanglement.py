import numpy as np
import pytest

from dmxy import BathParams, NotAnXState, asymptotic_concurrence, concurrence_general, concurrence_x, eof, gibbs_state
from dmxy.entanglement import binary_entropy, concurrence_x_batch, critical_mean_temperature
from dmxy.states import NAMED_STATES, plus_plus

from conftest import FIG45, FIG6, random_density, random_local_unitary, random_x_state

# h((1 + sqrt(0.75)) / 2), mpmath at 40 digits
EOF_HALF = 0.3545789026652698842
# steady-state concurrences from the null vector of the full 16x16 generator
FIG5_INDIRECT_C = 0.05015297957084284
FIG4_COLD_C = 0.0745814129863033
# bisection on the closed form, bracket [0, 100], xtol 1e-10
FIG4_TM_CRIT = 1.7652575891


def _werner(p):
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    return p * np.outer(phi, phi) + (1 - p) * np.eye(4) / 4


def test_bell_and_product():
    assert concurrence_general(NAMED_STATES["bell-psi"]()).value == pytest.approx(1.0, abs=1e-12)
    assert concurrence_general(NAMED_STATES["product-01"]()).value == pytest.approx(0.0, abs=1e-12)


def test_werner_half():
    rho = _werner(0.5)
    assert concurrence_general(rho).value == pytest.approx(0.25, abs=1e-12)
    assert concurrence_x(rho).value == pytest.approx(0.25, abs=1e-14)


def test_phi_bell_x_path():
    rho = np.zeros((4, 4))
    rho[0, 0] = rho[3, 3] = rho[0, 3] = rho[3, 0] = 0.5
    assert concurrence_x(rho).value == pytest.approx(1.0, abs=1e-15)


def test_maximally_mixed():
    assert concurrence_x(np.eye(4) / 4).value == 0.0
    assert concurrence_general(np.eye(4) / 4).value == 0.0


def test_lambdas_sorted():
    res = concurrence_general(_werner(0.7))
    assert list(res.lambdas) == sorted(res.lambdas, reverse=True)
    assert float(res) == res.value


def test_x_path_rejects_general_state():
    with pytest.raises(NotAnXState):
        concurrence_x(plus_plus())


def test_x_vs_general(rng):
    for _ in range(100):
        rho = random_x_state(rng)
        assert abs(concurrence_x(rho).value - concurrence_general(rho).value) < 1e-10


def test_batch_matches_scalar(rng):
    rhos = np.array([random_x_state(rng) for _ in range(50)])
    np.testing.assert_allclose(concurrence_x_batch(rhos), [concurrence_x(r).value for r in rhos], atol=1e-15)


@pytest.mark.parametrize("rank", [1, 2, 4])
def test_local_unitary_invariance(rng, rank):
    for _ in range(20):
        rho = random_density(rng, rank)
        U = random_local_unitary(rng)
        assert abs(concurrence_general(rho).value - concurrence_general(U @ rho @ U.conj().T).value) < 1e-9


def test_eof_values():
    assert eof(0.0) == 0.0
    assert eof(1.0) == 1.0
    assert eof(0.5) == pytest.approx(EOF_HALF, rel=1e-14)


def test_eof_domain():
    with pytest.raises(ValueError):
        eof(1.2)
    with pytest.raises(ValueError):
        eof(-0.1)


def test_eof_increasing():
    c = np.arange(1e-4, 1.0, 1e-4)
    assert np.all(np.diff([eof(x) for x in c]) > 0)


def test_binary_entropy_edges():
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0


def test_vacuum_large_D_is_maximal():
    assert asymptotic_concurrence(FIG6.with_(D=20), BathParams(0.02, 0.02, 0, 0)).value >= 0.99


def test_esd_fig4(quiet):
    assert asymptotic_concurrence(FIG45, BathParams.from_mean(100, 0, 0.02)).value == 0.0
    assert asymptotic_concurrence(FIG45, BathParams.from_mean(0.05, 0, 0.02)).value == pytest.approx(FIG4_COLD_C, abs=1e-12)


def test_critical_mean_temperature():
    assert critical_mean_temperature(FIG45, lo=0.0) == pytest.approx(FIG4_TM_CRIT, abs=1e-8)


def test_critical_mean_temperature_grows_with_dT():
    values = [critical_mean_temperature(FIG45, dT=d) for d in (0, 1, 2, 3)]
    assert np.all(np.diff(values) > 0)


def test_critical_mean_temperature_brackets():
    with pytest.raises(ValueError):
        critical_mean_temperature(FIG45, lo=50.0)


def test_geometry_asymmetry():
    p = FIG45.with_(D=0.5)
    assert asymptotic_concurrence(p, BathParams.from_mean(2, -1, 0.02)).value == 0.0
    assert asymptotic_concurrence(p, BathParams.from_mean(2, 1, 0.02)).value == pytest.approx(FIG5_INDIRECT_C, abs=1e-12)


@pytest.mark.parametrize("T", [0.1, 0.5, 1.0, 2.0])
def test_thermal_consistency(T):
    p = FIG45.with_(D=2.5)
    c = asymptotic_concurrence(p, BathParams(0.02, 0.04, T, T)).value
    assert c == pytest.approx(concurrence_general(gibbs_state(p, T)).value, abs=1e-10)
