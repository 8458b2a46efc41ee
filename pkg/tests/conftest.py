import time

import pytest

from greenchain import OscillatorProblem, oscillator_spectrum


def pytest_configure(config):
    config._suite_t0 = time.perf_counter()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    elapsed = time.perf_counter() - config._suite_t0
    terminalreporter.write_line(
        f"[criterion 9] full test suite wall time: {elapsed:.1f} s (budget 60 s single-threaded)"
    )


@pytest.fixture(scope="session")
def unit_box():
    """Oscillator confined to one characteristic length (natural units)."""
    return OscillatorProblem(1.0)


@pytest.fixture(scope="session")
def six_levels(unit_box):
    """The first six levels of the unit-box oscillator, shared across tests."""
    return oscillator_spectrum(unit_box, 6)
