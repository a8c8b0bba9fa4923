import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from nonunital import channels as ch
from nonunital import distances as dist
from nonunital.errors import NotAStateError
from nonunital.operator_basis import build_basis
from nonunital.states import bloch_from_density, density_matrices, random_pure_state, random_state

seeds = st.integers(0, 2 ** 32 - 1)


def _sqrtm_fidelity(r1, r2):
    s = scipy.linalg.sqrtm(r1)
    return float(np.trace(scipy.linalg.sqrtm(s @ r2 @ s)).real)


@pytest.mark.parametrize("d", [2, 3])
def test_fidelity_against_scipy_sqrtm(d, rng):
    for _ in range(50):
        r1, r2 = random_state(d, rng), random_state(d, rng)
        assert abs(dist.fidelity(r1, r2) - _sqrtm_fidelity(r1, r2)) < 1e-10


def test_fidelity_with_pure_state(rng):
    for _ in range(50):
        rho = random_state(2, rng)
        psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        psi /= np.linalg.norm(psi)
        exact = math.sqrt((psi.conj() @ rho @ psi).real)
        # a stored rank-one matrix carries ~1e-16 eigenvalue noise, whose root is ~1e-8
        assert abs(dist.fidelity(rho, np.outer(psi, psi.conj())) - exact) < 1e-7


def test_bures_matches_fidelity_form(rng):
    for _ in range(50):
        r1, r2 = random_state(2, rng), random_state(2, rng)
        f = dist.fidelity(r1, r2)
        assert abs(dist.bures_distance(r1, r2) - math.sqrt(2 * (1 - f))) < 1e-8
        assert abs(dist.one_minus_fidelity(r1, r2) - (1 - f)) < 1e-12


def test_bures_resolves_nearby_states():
    # 1 - F ~ 1e-14 here; the naive sqrt(2(1 - F)) loses most digits
    r1 = np.diag([0.7, 0.3]).astype(complex)
    r2 = np.diag([0.7 + 1e-7, 0.3 - 1e-7]).astype(complex)
    exact = math.sqrt((math.sqrt(0.7 + 1e-7) - math.sqrt(0.7)) ** 2
                      + (math.sqrt(0.3 - 1e-7) - math.sqrt(0.3)) ** 2)
    assert abs(dist.bures_distance(r1, r2) - exact) < 1e-15


def test_bounds_and_identities(rng):
    r1, r2 = random_state(3, rng), random_state(3, rng)
    assert dist.trace_distance(r1, r1) == pytest.approx(0, abs=1e-14)
    assert dist.bures_distance(r1, r1) == pytest.approx(0, abs=1e-7)
    assert dist.fidelity(r1, r1) == pytest.approx(1, abs=1e-12)
    assert 0 <= dist.trace_distance(r1, r2) <= 1
    assert 0 <= dist.bures_distance(r1, r2) <= math.sqrt(2)
    # Fuchs-van de Graaf
    f = dist.fidelity(r1, r2)
    assert 1 - f <= dist.trace_distance(r1, r2) <= math.sqrt(1 - f * f)
    p, q = random_pure_state(2, rng), random_pure_state(2, rng)
    assert dist.trace_distance(p, q) == pytest.approx(math.sqrt(1 - dist.fidelity(p, q) ** 2),
                                                      abs=1e-7)


def test_batched_matches_scalar(rng):
    r1 = np.array([random_state(2, rng) for _ in range(5)])
    r2 = np.array([random_state(2, rng) for _ in range(5)])
    for name, fn in {**dist.DISTANCES, "trace": dist.trace_distance}.items():
        batch = fn(r1, r2)
        assert batch.shape == (5,)
        assert np.allclose(batch, [fn(a, b) for a, b in zip(r1, r2)]), name


def test_hellinger():
    r1 = np.diag([0.9, 0.1]).astype(complex)
    r2 = np.diag([0.4, 0.6]).astype(complex)
    aff = math.sqrt(0.36) + math.sqrt(0.06)
    assert dist.hellinger_distance(r1, r2) == pytest.approx(math.sqrt(2 * (1 - aff)), abs=1e-14)


def test_relative_entropy_values():
    r1 = np.diag([0.9, 0.1]).astype(complex)
    r2 = np.diag([0.4, 0.6]).astype(complex)
    expected = 0.9 * math.log(0.9 / 0.4) + 0.1 * math.log(0.1 / 0.6)
    assert dist.relative_entropy(r1, r2) == pytest.approx(expected, abs=1e-14)
    pure = np.diag([1.0, 0.0]).astype(complex)
    assert dist.relative_entropy(pure, r2) == pytest.approx(-math.log(0.4), abs=1e-14)
    assert dist.relative_entropy(r2, pure) == math.inf
    assert dist.symmetric_relative_entropy(r1, r2) == pytest.approx(
        expected + 0.4 * math.log(0.4 / 0.9) + 0.6 * math.log(0.6 / 0.1), abs=1e-13)


def test_rejects_non_states():
    bad = np.diag([1.5, -0.5]).astype(complex)
    good = np.eye(2, dtype=complex) / 2
    with pytest.raises(NotAStateError):
        dist.fidelity(bad, good)
    with pytest.raises(NotAStateError):
        dist.bures_distance(good, bad)
    with pytest.raises(ValueError):
        dist.get_distance("diamond")
    assert "trace" not in dist.DISTANCES


@pytest.mark.parametrize("d", [2, 3])
@given(seed=seeds)
def test_data_processing_inequality(d, seed):
    rng = np.random.default_rng(seed)
    k = ch.random_kraus(d, 2, rng)
    r1, r2 = random_state(d, rng), random_state(d, rng)
    s1, s2 = k.apply(r1), k.apply(r2)
    assert dist.trace_distance(s1, s2) <= dist.trace_distance(r1, r2) + 1e-10
    assert dist.bures_distance(s1, s2) <= dist.bures_distance(r1, r2) + 1e-10


_QUBIT = build_basis(2)


def _bloch(rho):
    return bloch_from_density(rho, _QUBIT).bloch


@given(seeds, st.floats(-12, 0))
def test_qubit_bloch_bures_matches_matrix_route(seed, log_gap):
    rng = np.random.default_rng(seed)
    r1 = _bloch(random_state(2, rng))
    step = rng.standard_normal(3)
    r2 = r1 + 10.0 ** log_gap * 0.05 * step / np.linalg.norm(step)
    if np.linalg.norm(r2) > 0.7:
        r2 *= 0.7 / np.linalg.norm(r2)
    rho1, rho2 = density_matrices(r1, _QUBIT), density_matrices(r2, _QUBIT)
    matrix = dist.bures_distance_squared(rho1, rho2)
    bloch = dist.qubit_bures_squared(r1, r2)
    assert abs(bloch - matrix) <= 1e-15 + 1e-9 * matrix


def test_qubit_bloch_bures_extremes():
    up = np.array([0.0, 0.0, 1 / math.sqrt(2)])
    assert dist.qubit_bures_squared(up, -up) == pytest.approx(2.0, abs=1e-15)
    assert dist.qubit_bures_squared(up, up) == 0.0
    assert dist.qubit_bures_squared(np.zeros(3), up) == pytest.approx(2 - math.sqrt(2), abs=1e-15)
    with pytest.raises(NotAStateError):
        dist.qubit_bures_squared(np.zeros(3), 1.01 * up)
