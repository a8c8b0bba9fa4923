import numpy as np
import pytest

from nonunital import gadc
from nonunital.channels import evolved_densities
from nonunital.distances import bures_distance, fidelity, trace_distance
from nonunital.gadc import GadcParams, GadcProcessParams
from nonunital.measures import trajectory_bloch
from nonunital.processes import rhp_g_trace
from nonunital.states import purity, random_state

OMEGA5 = GadcProcessParams(5.0)

# 30-digit mpmath evaluations, frozen.
G_REFERENCE = {0.3: 0.1778749222320562408, 1.0: 0.79989887861137973067,
               2.5: 0.60303969029737046202}
# Fidelity computed as sum_i sqrt(a_i c_i) of the two (diagonal) evolved states.
FIDELITY_REFERENCE = {(1.0, 2.0): 0.99928362992660001121,
                      (0.5, 3.5): 0.99999395402039234552,
                      (10.0, 0.25): 0.94018969283459915815}


def test_parameter_validation():
    with pytest.raises(ValueError):
        GadcParams(1.2, 0.5)
    with pytest.raises(ValueError):
        GadcParams(0.5, -0.1)
    with pytest.raises(ValueError):
        GadcProcessParams(-1.0)
    with pytest.raises(ValueError):
        gadc.gadc_process(fixed_p=2.0)


def test_kraus_are_trace_preserving():
    for p, eta in [(0.0, 0.0), (0.3, 0.7), (1.0, 1.0)]:
        assert gadc.gadc_kraus(GadcParams(p, eta)).tp_error() < 1e-15


def test_oracle_g_frozen():
    for t, ref in G_REFERENCE.items():
        assert gadc.oracle_g(OMEGA5, t) == pytest.approx(ref, abs=1e-13)


def test_oracle_fidelity_frozen():
    for (tau, t), ref in FIDELITY_REFERENCE.items():
        assert gadc.oracle_fidelity(OMEGA5, tau, t) == pytest.approx(ref, abs=1e-14)


def test_pipeline_fidelity_matches_frozen_values():
    p = gadc.gadc_process(OMEGA5)
    for (tau, t), ref in FIDELITY_REFERENCE.items():
        b_tau = trajectory_bloch(p, [tau])[0]
        tr = p.transfers([t])
        rho0 = evolved_densities(tr, np.zeros(3))[0]
        rho_tau = evolved_densities(tr, b_tau)[0]
        assert fidelity(rho0, rho_tau) == pytest.approx(ref, abs=1e-12)
        assert bures_distance(rho0, rho_tau) == pytest.approx(
            np.sqrt(2 * (1 - ref)), rel=1e-9)


def test_oracle_fidelity_domain_error():
    # the radicand cannot go negative for real GADC parameters; force it
    with pytest.raises(gadc.DomainError):
        gadc.oracle_fidelity(GadcProcessParams(0.0), tau=np.array([50.0]),
                             t=np.array([-3.0]))


def test_trace_distance_oracle(rng):
    p = gadc.gadc_process(OMEGA5)
    t = np.linspace(0, 6, 25)
    tr = p.transfers(t)
    for _ in range(10):
        r1, r2 = random_state(2, rng), random_state(2, rng)
        basis_pairs = evolved_densities(tr, np.stack([_bloch(r1), _bloch(r2)]))
        pipe = trace_distance(basis_pairs[:, 0], basis_pairs[:, 1])
        assert np.allclose(pipe, gadc.oracle_trace_distance(OMEGA5, r1, r2, t), atol=1e-12)


def _bloch(rho):
    return gadc._pauli_coords(rho)


def test_trajectory_distance_oracle():
    p = gadc.gadc_process(OMEGA5)
    t = np.linspace(0, 5, 11)
    tr = p.transfers(t)
    for tau in (0.3, 2.0):
        b = trajectory_bloch(p, [tau])[0]
        pipe = trace_distance(evolved_densities(tr, np.zeros(3)), evolved_densities(tr, b))
        assert np.allclose(pipe, gadc.oracle_trajectory_distance(OMEGA5, tau, t), atol=1e-14)


def test_trajectory_purity_oracle():
    p = gadc.gadc_process(OMEGA5)
    t = np.linspace(0, 5, 101)
    rho = evolved_densities(p.transfers(t), np.zeros(3))
    assert np.allclose(purity(rho), gadc.oracle_trajectory_purity(OMEGA5, t), atol=1e-14)
    # rate oracle against a fine central difference
    h = 1e-6
    fd = (gadc.oracle_trajectory_purity(OMEGA5, t + h)
          - gadc.oracle_trajectory_purity(OMEGA5, t - h)) / (2 * h)
    assert np.allclose(fd[1:], gadc.oracle_trajectory_purity_rate(OMEGA5, t)[1:], atol=1e-6)


def test_g_pipeline_agrees_with_oracle_away_from_kinks():
    p = gadc.gadc_process(OMEGA5)
    t = np.linspace(0.05, 4, 300)
    assert np.max(np.abs(rhp_g_trace(p, t) - gadc.oracle_g(OMEGA5, t))) < 1e-3


def test_unital_variant():
    p = gadc.gadc_process(OMEGA5, fixed_p=0.5)
    assert np.allclose(p.transfers(np.linspace(0, 5, 7))[:, 1:, 0], 0.0)
