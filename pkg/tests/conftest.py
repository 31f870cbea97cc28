import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from probeline.model import DriveField, RelaxationSet

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rate = st.floats(0.1, 10.0)


@st.composite
def relaxation_sets(draw, lo=0.1, hi=10.0):
    r = st.floats(lo, hi)
    gm = draw(r)
    return RelaxationSet(draw(r), draw(r), draw(r), gm, draw(r), draw(st.floats(0.0, 1.0)) * gm)


@st.composite
def drives(draw, g_max=100.0, omega_max=20.0):
    return DriveField(draw(st.floats(0.0, g_max)), draw(st.floats(-omega_max, omega_max)))


def random_model(rng, lo=0.1, hi=10.0):
    g = rng.uniform(lo, hi, 5)
    return RelaxationSet(g[0], g[1], g[2], g[3], g[4], rng.uniform(0, 1) * g[3])


@pytest.fixture
def unit_model():
    return RelaxationSet(1.0, 1.0, 1.0, 1.0, 1.0, 0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


# --- acceptance summary --------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.skipped and rep.passed):
        return
    n = mark.args[0]
    if rep.skipped:
        status = "SKIP"
        detail = rep.longrepr[2] if isinstance(rep.longrepr, tuple) else str(rep.longrepr)
    else:
        status = "PASS" if rep.passed else "FAIL"
        detail = dict(item.user_properties).get("detail", "")
    if status != "PASS" or n not in _CRITERIA:
        _CRITERIA[n] = (status, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
