from __future__ import annotations

import json
from pathlib import Path

import pytest

from omegacircle import _fallback
from omegacircle.additive import OMEGA, integer_table, value_table
from omegacircle.circle import OmegaPrefix, default_xgrid, fit_coeffs, squarefree_upto
from omegacircle.ntcore import build_factor_table

try:
    from omegacircle import _core
except ImportError:  # pragma: no cover
    _core = None

GOLDEN = Path(__file__).parent / "golden"
BIG = 10**7

BACKENDS = [pytest.param(_fallback, id="numpy")]
if _core is not None:
    BACKENDS.append(pytest.param(_core, id="cython"))

_acceptance: dict[int, tuple[bool, str]] = {}


def record_acceptance(k: int, ok: bool, detail: str) -> None:
    _acceptance[k] = (bool(ok), detail)


def load_golden(name: str) -> dict:
    return json.loads((GOLDEN / name).read_text())


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_acceptance):
        ok, detail = _acceptance[k]
        terminalreporter.write_line(f"ACCEPTANCE {k:2d} {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(params=BACKENDS)
def kern(request):
    return request.param


@pytest.fixture(scope="session")
def small_table():
    return build_factor_table(10**5)


@pytest.fixture(scope="session")
def omega_small(small_table):
    return integer_table(value_table(OMEGA, small_table, 10**5))


@pytest.fixture(scope="session")
def big_table():
    return build_factor_table(BIG)


@pytest.fixture(scope="session")
def big_prefix(big_table):
    return OmegaPrefix(big_table)


@pytest.fixture(scope="session")
def coeffs_m1(big_table, big_prefix):
    return fit_coeffs(big_table, squarefree_upto(big_table, 200), 1, default_xgrid(), prefix=big_prefix)
