import numpy as np
import pytest
from hypothesis import settings

from pbitsa.ising import Graph, IsingModel

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def random_model(n, density=0.5, seed=0, with_h=True, integer=False):
    rs = np.random.default_rng(seed)
    couplings = []
    for i in range(n):
        for j in range(i + 1, n):
            if rs.random() < density:
                v = float(rs.choice([-2, -1, 1, 2])) if integer else float(rs.normal())
                couplings.append((i, j, v))
    h = rs.normal(size=n) if with_h else np.zeros(n)
    if integer and with_h:
        h = rs.integers(-2, 3, size=n).astype(float)
    return IsingModel.from_couplings(n, couplings, h=h)


def random_graph(n, m, seed=0, signed=False):
    """Uniform random simple graph with exactly ``m`` edges."""
    rs = np.random.default_rng(seed)
    iu, iv = np.triu_indices(n, 1)
    pick = np.sort(rs.choice(iu.size, size=m, replace=False))
    w = rs.choice([-1.0, 1.0], size=m) if signed else np.ones(m)
    return Graph(n, iu[pick], iv[pick], w)


def toroidal_graph(rows, cols, seed=0):
    """2-D torus with random +-1 weights (degree 4, 2n edges)."""
    rs = np.random.default_rng(seed)
    idx = np.arange(rows * cols).reshape(rows, cols)
    a = np.concatenate([idx.ravel(), idx.ravel()])
    b = np.concatenate([np.roll(idx, -1, axis=1).ravel(), np.roll(idx, -1, axis=0).ravel()])
    u, v = np.minimum(a, b), np.maximum(a, b)
    return Graph(rows * cols, u, v, rs.choice([-1.0, 1.0], size=u.size))


def complete_signed_graph(n, seed=0):
    rs = np.random.default_rng(seed)
    u, v = np.triu_indices(n, 1)
    return Graph(n, u, v, rs.choice([-1.0, 1.0], size=u.size))


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])


# --- acceptance reporting -------------------------------------------------

_ACCEPTANCE = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    if call.excinfo is None:
        outcome = "PASS"
    elif call.excinfo.errisinstance(pytest.xfail.Exception):
        outcome = "NON-BLOCKING"
    elif call.excinfo.errisinstance(pytest.skip.Exception):
        outcome = "SKIP"
    else:
        outcome = "FAIL"
    detail = ""
    if call.excinfo is not None:
        detail = str(call.excinfo.value).strip().splitlines()[0][:160] if str(call.excinfo.value).strip() else ""
    _ACCEPTANCE.append((marker.args[0], marker.args[1], outcome, detail))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


_RANK = {"PASS": 0, "SKIP": 1, "NON-BLOCKING": 2, "FAIL": 3}


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    merged = {}
    for number, title, outcome, detail in _ACCEPTANCE:
        prev = merged.get(number)
        if prev is None or _RANK[outcome] > _RANK[prev[1]]:
            merged[number] = (title, outcome, detail)
    terminalreporter.section("acceptance criteria")
    for number in sorted(merged):
        title, outcome, detail = merged[number]
        line = f"C{number:<2} {outcome:<12} {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
