import numpy as np
import pytest

from conftest import dephasing_transfers, recoherence_process
from nonunital.channels import compose
from nonunital.errors import (DimensionMismatchError, NonInvertibleProcessError,
                              NotCompletelyPositiveError, NotTracePreservingError)
from nonunital.gadc import GadcProcessParams, gadc_process
from nonunital.processes import (QuantumProcess, TimeGrid, intermediate_map, rhp_g, rhp_g_trace,
                                 rhp_measure, tabulate, tabulated_process)


def rotation_transfers(t, rate=1.3):
    """Unitary rotation about z: divisible, every intermediate map is CP."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (4, 4))
    out[..., 0, 0] = out[..., 3, 3] = 1.0
    c, s = np.cos(rate * t), np.sin(rate * t)
    out[..., 1, 1], out[..., 1, 2], out[..., 2, 1], out[..., 2, 2] = c, -s, s, c
    return out


def test_time_grid():
    g = TimeGrid(10.0, 11)
    assert np.allclose(g.points, np.arange(11.0))
    assert g.h == 1.0
    for bad in [(0.0, 10), (-1.0, 10), (1.0, 1)]:
        with pytest.raises(ValueError):
            TimeGrid(*bad)


def test_composition_law_holds_for_intermediate_map():
    p = gadc_process(GadcProcessParams(5.0))
    mid = intermediate_map(p, 0.7, 1.9)
    assert np.allclose(compose(mid, p.eval(0.7)).matrix, p.eval(1.9).matrix, atol=1e-12)
    assert np.allclose(intermediate_map(p, 1.0, 1.0).matrix, np.eye(4), atol=1e-12)
    with pytest.raises(ValueError):
        intermediate_map(p, 2.0, 1.0)


def test_singular_transfer_raises_with_time():
    p = recoherence_process()
    with pytest.raises(NonInvertibleProcessError) as info:
        intermediate_map(p, np.pi / 2, 2.0)
    assert info.value.time == pytest.approx(np.pi / 2)
    assert "t=" in str(info.value)


def test_rhp_vanishes_for_unitary_and_markovian_processes():
    rot = QuantumProcess(2, rotation_transfers, label="rotation")
    grid = TimeGrid(10.0, 501)
    assert rhp_measure(rot, grid).value <= 1e-8
    assert rhp_measure(gadc_process(GadcProcessParams(0.0)), grid).value <= 1e-6


def test_rhp_witness_on_dephasing():
    # M = diag(gamma, gamma, 1); CP of the intermediate map fails exactly when |gamma| grows
    a = 0.1
    p = recoherence_process(a)
    t = np.array([0.4, 1.2, 2.0, 2.9])
    gamma = np.exp(-a * t) * np.cos(t) ** 2
    dgamma = np.exp(-a * t) * (-a * np.cos(t) ** 2 - np.sin(2 * t))
    # Choi of diag(1, k, k, 1) with k = 1 + eps*rate has trace norm 1 + eps*max(rate, 0)
    expected = np.maximum(dgamma / gamma, 0.0)
    assert np.allclose(rhp_g_trace(p, t), expected, atol=1e-6)


def test_rhp_eps_validation():
    with pytest.raises(ValueError):
        rhp_g(gadc_process(), 1.0, eps=0.0)


def test_tabulated_interpolates_linearly():
    p = gadc_process(GadcProcessParams(2.0))
    times = np.linspace(0, 5, 51)
    tab = tabulate(p, times)
    mid = 0.5 * (p.transfers([1.0])[0] + p.transfers([1.1])[0])
    assert np.allclose(tab.transfers([1.05])[0], mid)
    assert np.allclose(tab.transfers(times), p.transfers(times))
    assert tab.t_end == 5.0
    tab.transfers([5.05])  # one step of extrapolation is allowed
    with pytest.raises(ValueError):
        tab.transfers([6.0])


def test_tabulated_validation():
    times = np.array([0.0, 1.0, 2.0])
    good = dephasing_transfers([1.0, 0.5, 0.25])
    tabulated_process(times, good)

    shifted = good.copy()
    shifted[0, 1, 1] = 0.9
    with pytest.raises(ValueError, match="identity"):
        tabulated_process(times, shifted)

    not_tp = good.copy()
    not_tp[2, 0, 3] = 0.1
    with pytest.raises(NotTracePreservingError, match="t=2.0"):
        tabulated_process(times, not_tp)

    not_cp = dephasing_transfers([1.0, 0.5, 1.2])
    with pytest.raises(NotCompletelyPositiveError) as info:
        tabulated_process(times, not_cp)
    assert info.value.time == 2.0

    with pytest.raises(ValueError):
        tabulated_process([0.0, 2.0, 1.0], good)
    with pytest.raises(ValueError):
        tabulated_process([0.5, 1.0, 2.0], good)
    with pytest.raises(DimensionMismatchError):
        tabulated_process(times, good[:2])


def test_gadc_samples_are_cp():
    times = np.linspace(0, 20, 401)
    tabulated_process(times, gadc_process().transfers(times))


def test_negative_time_rejected():
    with pytest.raises(ValueError):
        gadc_process().transfers([-0.1])


def test_transfer_derivatives_match_closed_form():
    from nonunital.processes import transfer_derivatives
    omega = 5.0
    p = gadc_process(GadcProcessParams(omega))
    t = np.array([0.0, 1e-6, 0.3, 2.0, 7.5])
    dt = transfer_derivatives(p, t)
    eta = np.exp(-t)
    w = np.cos(2 * omega * t) * (1 - eta)
    dw = -2 * omega * np.sin(2 * omega * t) * (1 - eta) + np.cos(2 * omega * t) * eta
    assert np.allclose(dt[:, 3, 3], -eta, atol=1e-8)
    assert np.allclose(dt[:, 1, 1], -0.5 * np.sqrt(eta), atol=1e-8)
    assert np.allclose(dt[:, 3, 0], dw, atol=1e-7)
    assert np.allclose(dt[:, 0], 0.0)
    with pytest.raises(ValueError):
        transfer_derivatives(p, t, step=0.0)
