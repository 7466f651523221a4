import importlib

import numpy as np
import pytest

from koopspec import _kernels, _pykernels

BACKENDS = ["cython", "python"]


def backend_module(name):
    if name == "python":
        return _pykernels
    try:
        return importlib.import_module("koopspec._ckernels")
    except ImportError:
        pytest.skip("compiled kernels not built")


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per kernel implementation."""
    monkeypatch.setattr(_kernels, "impl", backend_module(request.param))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1])):
        terminalreporter.write_line(line)
