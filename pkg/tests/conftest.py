import warnings

import numpy as np
import pytest

from dmxy import BathParams, SystemParams, build_rates, spectrum
from dmxy.errors import NearDegenerateWarning
from dmxy.states import NAMED_STATES

FIG12 = SystemParams(J=1.0, chi=0.9, B=2.0, b=1.0)
FIG3 = SystemParams(J=1.0, chi=0.9, B=2.0, b=0.5)
FIG45 = SystemParams(J=1.0, chi=0.3, B=4.0, b=-3.5)
FIG6 = SystemParams(J=1.0, chi=0.3, B=4.0, b=0.0)
FIG7 = SystemParams(J=1.0, chi=0.3, B=4.0, b=1.0)

X_STATES = ("bell-psi", "product-01", "mixed-fig3", "unpolarized")


def random_draw(rng, gamma=(0.005, 0.05), min_gap=0.2, min_rate=0.0):
    """Random non-degenerate (params, baths) away from the xi = eta point."""
    while True:
        params = SystemParams(
            J=rng.choice([-1, 1]) * rng.uniform(0.3, 2.0),
            chi=rng.uniform(-1, 1),
            B=rng.uniform(-4, 4),
            b=rng.uniform(-3, 3),
            D=rng.uniform(0, 4),
        )
        baths = BathParams(rng.uniform(*gamma), rng.uniform(*gamma), rng.uniform(0, 3), rng.uniform(0, 3))
        if abs(params.xi - params.eta) < min_gap or min(params.xi, params.eta) < 0.1:
            continue
        rates = build_rates(spectrum(params), params, baths)
        if min(rates.X1, rates.Y2) < max(min_rate, 1e-12):
            continue
        return params, baths


def random_draws(n, seed, **kw):
    rng = np.random.default_rng(seed)
    return [random_draw(rng, **kw) for _ in range(n)]


def random_density(rng, rank=4):
    G = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = G @ G.conj().T
    return rho / np.trace(rho).real


def random_x_state(rng):
    """Random valid X state (two positive 2x2 blocks)."""
    a, b_, c, d = rng.dirichlet(np.ones(4))
    z1 = np.sqrt(a * d) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    z2 = np.sqrt(b_ * c) * rng.uniform(0, 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    rho = np.diag([a, b_, c, d]).astype(complex)
    rho[0, 3], rho[3, 0] = z1, np.conj(z1)
    rho[1, 2], rho[2, 1] = z2, np.conj(z2)
    return rho


def random_local_unitary(rng):
    def u2():
        Z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        Q, R = np.linalg.qr(Z)
        return Q * (np.diag(R) / np.abs(np.diag(R)))

    return np.kron(u2(), u2())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=X_STATES)
def x_state(request):
    return NAMED_STATES[request.param]()


@pytest.fixture
def quiet():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearDegenerateWarning)
        yield


# ------------------------------------------------------------- acceptance report

_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    n, title = mark.args
    failed = rep.failed or (rep.when == "call" and rep.outcome != "passed")
    if rep.when == "call" or failed:
        detail = dict(item.user_properties).get("detail", "")
        prev = _ACCEPTANCE.get(n)
        ok = not failed and (prev is None or prev[0])
        _ACCEPTANCE[n] = (ok, title, detail, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        ok, title, detail, dur = _ACCEPTANCE[n]
        extra = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title}{extra} [{dur:.2f}s]")
