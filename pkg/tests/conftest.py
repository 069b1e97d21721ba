import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))  # for lp_oracle

from nonisocs.sampling import SeedSpec, derive_stream
from nonisocs.sensing import gen_gaussian_matrix
from nonisocs.signals import ConstantModulus, GaussianAmplitude, gen_sparse_signal


def run_slow() -> bool:
    return os.environ.get("NONISOCS_RUN_SLOW", "") == "1"


def small_instance(seed: int, m: int, n: int, k: int, model=None):
    """Seeded (A, x, y) triple for oracle comparisons."""
    model = model or GaussianAmplitude(1.0)
    base = SeedSpec(seed)
    A = gen_gaussian_matrix(m, n, derive_stream(base.child(0)))
    signal = gen_sparse_signal(n, k, model, derive_stream(base.child(2)))
    x = signal.densify()
    return A, signal, A @ x


@pytest.fixture
def rng():
    return derive_stream(SeedSpec(12345))


ACCEPTANCE_LINES: list[str] = []


def record_criterion(label: str, ok: bool, detail: str) -> None:
    """Log one pass/fail line per acceptance criterion, then assert."""
    line = f"{label}: {'PASS' if ok else 'FAIL'} [{detail}]"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def pytest_collection_modifyitems(config, items):
    if run_slow() or config.getoption("-m", default="") == "slow":
        return
    skip = pytest.mark.skip(reason="slow full-scale run; set NONISOCS_RUN_SLOW=1 or -m slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
