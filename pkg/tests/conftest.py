import numpy as np
import pytest
from hypothesis import strategies as st

from sparsesyk import PauliString


@st.composite
def pauli_strings(draw, n=None, hermitian=False):
    n = draw(st.integers(1, 4)) if n is None else n
    x = draw(st.integers(0, 2**n - 1))
    z = draw(st.integers(0, 2**n - 1))
    phase = draw(st.sampled_from([0, 2] if hermitian else [0, 1, 2, 3]))
    return PauliString(n, x, z, phase)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_pauli(rng, n, phase=None):
    return PauliString(
        n, int(rng.integers(0, 2**n)), int(rng.integers(0, 2**n)),
        int(rng.integers(0, 4)) if phase is None else phase,
    )


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[c])
