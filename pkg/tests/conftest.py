import numpy as np
import pytest
from hypothesis import settings

from nonunital.processes import QuantumProcess, tabulated_process

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def dephasing_transfers(gamma):
    """Qubit transfer matrices with M = diag(gamma, gamma, 1), c = 0."""
    gamma = np.asarray(gamma, dtype=float)
    out = np.zeros(gamma.shape + (4, 4))
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = out[..., 2, 2] = gamma
    out[..., 3, 3] = 1.0
    return out


def recoherence_gamma(t, a=0.1):
    return np.exp(-a * t) * np.cos(t) ** 2


def recoherence_process(a=0.1):
    """Unital dephasing whose coherence dies and revives: not divisible."""
    return QuantumProcess(2, lambda t: dephasing_transfers(recoherence_gamma(t, a)),
                          label=f"recoherence(a={a})")


def pauli_decay_transfers(t):
    """Unital, divisible qubit process M = diag(e^{-t}, e^{-2t}, e^{-t})."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (4, 4))
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = np.exp(-t)
    out[..., 2, 2] = np.exp(-2 * t)
    out[..., 3, 3] = np.exp(-t)
    return out


def depolarizing_transfers(t, d):
    """Unital, divisible depolarizing process in dimension d."""
    t = np.asarray(t, dtype=float)
    out = np.broadcast_to(np.eye(d * d), t.shape + (d * d, d * d)).copy()
    idx = np.arange(1, d * d)
    out[..., idx, idx] = np.exp(-t)[..., None]
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def unital_tabulated():
    times = np.linspace(0.0, 20.0, 801)
    return tabulated_process(times, pauli_decay_transfers(times), label="pauli-decay")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
