import pytest

from memspike import NetworkConfig, glyph_dataset, init_network, train
from memspike.network import Sharing


def _trained(side, classes, sharing):
    data = glyph_dataset(side, classes)
    net = init_network(NetworkConfig(side, side, len(classes), sharing), [img for _, img in data])
    return net, train(net, data), data


@pytest.fixture(scope="session")
def zvn_runs():
    return {s: _trained(3, "ZVN", s) for s in Sharing}


@pytest.fixture(scope="session")
def zvnxc_runs():
    return {s: _trained(9, "ZVNXC", s) for s in Sharing}


SUITE_BUDGET_S = 60.0
_start = {}


def pytest_sessionstart(session):
    import time
    _start["t"] = time.perf_counter()


def pytest_sessionfinish(session, exitstatus):
    import time
    _start["elapsed"] = time.perf_counter() - _start["t"]
    if _start["elapsed"] > SUITE_BUDGET_S and session.exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    v = mod.VERDICTS
    for key in [1, 2, 3, 4, 5, 6, 7, "8a", "8b", 9]:
        if key in v:
            ok, detail = v[key]
            tr.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}")
    elapsed = _start.get("elapsed", 0.0)
    tr.write_line(f"criterion 10: {'PASS' if elapsed < SUITE_BUDGET_S else 'FAIL'} - "
                  f"suite wall time {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)")
