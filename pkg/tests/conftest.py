import numpy as np
import pytest

from secure_layered.channel import Scenario, SystemSpec


def random_hermitian(rng, n, psd=False):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a @ a.conj().T if psd else (a + a.conj().T) / 2


def cnormal(rng, n):
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)


def open_spec(n_tx, gammas, gamma_tol=(), p_max=1e6):
    """Unit-noise spec with generous power caps."""
    return SystemSpec(n_tx=n_tx, gamma_req=tuple(gammas), gamma_tol=tuple(gamma_tol),
                      p_max=p_max, noise_power=1.0)


def unit_scenario(rng, n_tx, n_eves=0):
    return Scenario(cnormal(rng, n_tx), tuple(cnormal(rng, n_tx) for _ in range(n_eves)), 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def acceptance_report():
    """Record one pass/fail line per acceptance criterion."""

    def record(criterion: int, ok: bool, detail: str) -> bool:
        _ACCEPTANCE[criterion] = (bool(ok), detail)
        print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
