"""BLP non-Markovianity, non-unitality and non-unital non-Markovianity.

Each measure integrates the positive part of a time derivative over the grid
and maximizes over initial states (or trajectory times). Derivatives are
central differences; the positive part is integrated by trapezoid with sign
changes located inside grid cells. The maximizations are heuristic searches
(coarse grid, random candidates, Nelder-Mead refinement), so reported values
are lower bounds on the true maxima.
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from . import distances, linalg
from .channels import _dim_from_size, evolve_bloch, evolved_densities
from .errors import SingularDistanceError
from .operator_basis import build_basis, expand
from .policy import DEFAULT_POLICY
from .processes import QuantumProcess, TimeGrid, transfer_derivatives
from .quadrature import central_derivative, positive_part_integrals, rise_totals
from .report import MeasureReport
from .states import BlochState, pure_bloch, purity, random_pure_state, random_state

# Matrices evaluated per vectorized batch; bounds peak memory of the sweeps.
_BATCH = 400_000

HEURISTIC_CAVEAT = "heuristic maximization: value is a lower bound on the true maximum"


@dataclass(frozen=True)
class OptimizerConfig:
    theta_points: int = 64
    phi_points: int = 128
    random_candidates: int = 100
    max_iter: int = 200
    tol: float = 1e-8
    seed: int = 0
    refine: bool = True

    def rng(self):
        return np.random.default_rng(self.seed)


def _truncation_caveat(grid):
    return f"time integral truncated at t_max={grid.t_max} (n={grid.n} samples)"


def _as_bloch(state, d):
    if isinstance(state, BlochState):
        return state.bloch
    arr = np.asarray(state)
    if arr.shape == (d, d):
        return np.real(expand(arr, build_basis(d))[1:])
    return np.asarray(arr, dtype=float)


def _chunks(total, n_times):
    size = max(1, _BATCH // max(n_times, 1))
    for start in range(0, total, size):
        yield slice(start, min(start + size, total))


def _pair_distances(transfers, b1, b2, dist):
    """Distance traces ``(n_t, K)`` for Bloch-vector pairs ``b1, b2`` of shape ``(K, D-1)``."""
    out = np.empty((transfers.shape[0], b1.shape[0]))
    for sl in _chunks(b1.shape[0], transfers.shape[0]):
        out[:, sl] = dist(evolved_densities(transfers, b1[sl]),
                          evolved_densities(transfers, b2[sl]))
    return out


def _trace_distance_traces(transfers, b1, b2):
    """Trace distances ``(n_t, K)`` of evolved pairs, computed from the Bloch difference.

    The offset ``c`` cancels in ``E_t(rho1) - E_t(rho2)``, leaving ``M_t (r1 - r2)``.
    For qubits ``(1/2) Tr|dr . lambda| = |dr| / sqrt(2)``; otherwise the traceless
    difference operator goes through the eigenvalue kernel.
    """
    d = _dim_from_size(transfers.shape[-1])
    m = transfers[:, 1:, 1:]
    delta = np.asarray(b1, dtype=float) - np.asarray(b2, dtype=float)
    out = np.empty((transfers.shape[0], delta.shape[0]))
    for sl in _chunks(delta.shape[0], transfers.shape[0]):
        moved = m @ delta[sl].T  # (n_t, D-1, k)
        if d == 2:
            out[:, sl] = np.sqrt(np.sum(moved ** 2, axis=1) / 2)
        else:
            ops = build_basis(d).ops[1:]
            x = np.einsum("tkj,kab->tjab", moved, ops)
            out[:, sl] = 0.5 * linalg.trace_norm(x, check=False)
    return out


def _scores(t, traces):
    return positive_part_integrals(t, central_derivative(traces, t))


# -- BLP --------------------------------------------------------------------------

def blp_sigma(process: QuantumProcess, rho1, rho2, grid: TimeGrid):
    """``sigma(t) = d/dt D_tr(E_t(rho1), E_t(rho2))`` sampled on the grid."""
    d = process.dim
    t = grid.points
    b1 = _as_bloch(rho1, d)[None]
    b2 = _as_bloch(rho2, d)[None]
    trace = _pair_distances(process.transfers(t), b1, b2, distances.trace_distance)[:, 0]
    return central_derivative(trace, t)


def _leading_sign(v, tol=1e-12):
    """Sign of the first entry of each row with magnitude above ``tol``."""
    nonzero = np.abs(v) > tol
    idx = np.argmax(nonzero, axis=1)
    return np.sign(v[np.arange(v.shape[0]), idx])


def _pure_vectors(params, d):
    psi = params[:d] + 1j * params[d:2 * d]
    norm = np.linalg.norm(psi)
    if norm == 0:
        psi = np.eye(d)[0].astype(complex)
    else:
        psi = psi / norm
    return psi


def _pure_state_bloch(psi, basis):
    return np.real(expand(np.outer(psi, psi.conj()), basis)[1:])


def blp_measure(process: QuantumProcess, grid: TimeGrid,
                opt: OptimizerConfig = OptimizerConfig()) -> MeasureReport:
    """``max_{rho1, rho2} int_{sigma > 0} sigma dt`` over the grid.

    Qubits: antipodal pure pairs on a ``theta x phi`` grid, Nelder-Mead refinement
    of the best one, plus random mixed pairs. Larger ``d``: random pure pairs with
    refinement, plus random mixed pairs.
    """
    d = process.dim
    basis = build_basis(d)
    t = grid.points
    transfers = process.transfers(t)
    rng = opt.rng()

    def score_pairs(b1, b2):
        return _scores(t, _trace_distance_traces(transfers, b1, b2))

    candidates = []  # (value, description, b1, b2)

    if d == 2:
        theta = np.linspace(0.0, np.pi, opt.theta_points)
        phi = np.linspace(0.0, 2 * np.pi, opt.phi_points, endpoint=False)
        th, ph = np.meshgrid(theta, phi, indexing="ij")
        r = pure_bloch(th.ravel(), ph.ravel())
        # (n, -n) and (-n, n) are the same pair and the poles repeat along phi:
        # score each distinct unordered pair once.
        key = np.round(r * np.where(_leading_sign(r) < 0, -1.0, 1.0)[:, None], 12)
        _, first, inverse = np.unique(key, axis=0, return_index=True, return_inverse=True)
        vals = score_pairs(r[first], -r[first])[inverse.ravel()]
        i = int(np.argmax(vals))
        best_angles = np.array([th.ravel()[i], ph.ravel()[i]])
        candidates.append((float(vals[i]), {"family": "antipodal-pure-grid",
                                            "theta": best_angles[0], "phi": best_angles[1]},
                           r[i], -r[i]))
        if opt.refine:
            def objective(x):
                rr = pure_bloch(x[0], x[1])[None]
                return -float(score_pairs(rr, -rr)[0])

            res = minimize(objective, best_angles, method="Nelder-Mead",
                           options={"maxiter": opt.max_iter, "xatol": opt.tol, "fatol": opt.tol})
            rr = pure_bloch(res.x[0], res.x[1])
            candidates.append((-float(res.fun), {"family": "antipodal-pure-refined",
                                                 "theta": float(res.x[0]),
                                                 "phi": float(res.x[1])}, rr, -rr))
    else:
        starts = [rng.standard_normal(4 * d) for _ in range(opt.random_candidates)]
        psis = [(_pure_vectors(x[:2 * d], d), _pure_vectors(x[2 * d:], d)) for x in starts]
        b1 = np.array([_pure_state_bloch(a, basis) for a, _ in psis])
        b2 = np.array([_pure_state_bloch(b, basis) for _, b in psis])
        vals = score_pairs(b1, b2)
        i = int(np.argmax(vals))
        candidates.append((float(vals[i]), {"family": "random-pure-pair"}, b1[i], b2[i]))
        if opt.refine:
            def objective(x):
                a = _pure_state_bloch(_pure_vectors(x[:2 * d], d), basis)[None]
                b = _pure_state_bloch(_pure_vectors(x[2 * d:], d), basis)[None]
                return -float(score_pairs(a, b)[0])

            res = minimize(objective, starts[i], method="Nelder-Mead",
                           options={"maxiter": opt.max_iter, "xatol": opt.tol, "fatol": opt.tol})
            a = _pure_state_bloch(_pure_vectors(res.x[:2 * d], d), basis)
            b = _pure_state_bloch(_pure_vectors(res.x[2 * d:], d), basis)
            candidates.append((-float(res.fun), {"family": "pure-pair-refined"}, a, b))

    if opt.random_candidates:
        rhos1 = np.array([random_state(d, rng) for _ in range(opt.random_candidates)])
        rhos2 = np.array([random_state(d, rng) for _ in range(opt.random_candidates)])
        b1 = np.real(expand(rhos1, basis)[:, 1:])
        b2 = np.real(expand(rhos2, basis)[:, 1:])
        vals = score_pairs(b1, b2)
        i = int(np.argmax(vals))
        candidates.append((float(vals[i]), {"family": "random-mixed-pair", "index": i},
                           b1[i], b2[i]))

    value, info, b1, b2 = max(candidates, key=lambda c: c[0])
    # final trace through the density-matrix route
    trace = _pair_distances(transfers, b1[None], b2[None], distances.trace_distance)[:, 0]
    sigma = central_derivative(trace, t)
    maximizer = dict(info, rho1_bloch=b1, rho2_bloch=b2)
    caveats = [_truncation_caveat(grid), HEURISTIC_CAVEAT]
    if d > 2:
        caveats.append("d > 2: search covers random pure pairs only")
    return MeasureReport.from_integrand(
        "blp", t, sigma, maximizer=maximizer,
        trace={"t": t, "trace_distance": trace, "sigma": sigma},
        caveats=caveats,
        details={"candidates": {c[1]["family"]: c[0] for c in candidates}},
    )


# -- non-unitality ----------------------------------------------------------------

def _purity_rises(t, transfers, rates, bloch):
    """Total purity rise for each initial Bloch vector (rows of ``bloch``).

    With ``r_t = M_t r + c_t`` the purity is ``1/d + |r_t|^2`` and its rate is
    ``2 r_t . (dM_t r + dc_t)``, so no grid differencing is involved.
    """
    d = _dim_from_size(transfers.shape[-1])
    out = np.empty(bloch.shape[0])
    for sl in _chunks(bloch.shape[0], transfers.shape[0]):
        r = evolve_bloch(transfers, bloch[sl])
        v = evolve_bloch(rates, bloch[sl])
        out[sl] = rise_totals(t, 1.0 / d + np.sum(r * r, axis=-1), 2 * np.sum(r * v, axis=-1))
    return out


def _ball_bloch(x):
    """Qubit Bloch ball parameterized by ``(s, theta, phi)``: radius ``sin^2(s)/sqrt(2)``."""
    return np.sin(x[0]) ** 2 * pure_bloch(x[1], x[2])


def _general_state_bloch(x, d, basis):
    g = (x[:d * d] + 1j * x[d * d:]).reshape(d, d)
    rho = g @ g.conj().T
    tr = np.trace(rho).real
    rho = rho / tr if tr > 0 else np.eye(d) / d
    return np.real(expand(rho, basis)[1:])


def nonunitality_measure(process: QuantumProcess, grid: TimeGrid,
                         opt: OptimizerConfig = OptimizerConfig(),
                         initial_states=None, step=1e-5) -> MeasureReport:
    """``max_{rho0} int_{dP/dt > 0} |dP/dt| dt`` with ``P`` the purity of ``E_t(rho0)``.

    The absolute value is redundant on the integration domain; the integral is
    the total rise of ``P`` over the intervals where it increases. ``dP/dt``
    comes from the chain rule with ``dT/dt`` differenced at ``step``, which is
    far more accurate than differencing ``P`` on the grid when the purity
    oscillates quickly. The maximally mixed state is always a candidate.
    Passing ``initial_states`` evaluates exactly those states and skips the
    search.
    """
    d = process.dim
    basis = build_basis(d)
    t = grid.points
    transfers = process.transfers(t)

    rates = transfer_derivatives(process, t, step)

    def score(bloch):
        return _purity_rises(t, transfers, rates, bloch)

    caveats = [_truncation_caveat(grid)]
    candidates = []  # (value, description, bloch)

    if initial_states is not None:
        blochs = np.array([_as_bloch(s, d) for s in initial_states])
        vals = score(blochs)
        for i, v in enumerate(vals):
            candidates.append((float(v), {"family": "given", "index": i}, blochs[i]))
    else:
        caveats.append(HEURISTIC_CAVEAT)
        rng = opt.rng()
        zero = np.zeros((1, d * d - 1))
        candidates.append((float(score(zero)[0]), {"family": "maximally-mixed"}, zero[0]))
        if d == 2:
            theta = np.linspace(0.0, np.pi, opt.theta_points)
            phi = np.linspace(0.0, 2 * np.pi, opt.phi_points, endpoint=False)
            th, ph = np.meshgrid(theta, phi, indexing="ij")
            r = pure_bloch(th.ravel(), ph.ravel())
            vals = score(r)
            i = int(np.argmax(vals))
            candidates.append((float(vals[i]), {"family": "pure-grid",
                                                "theta": th.ravel()[i], "phi": ph.ravel()[i]},
                               r[i]))
        else:
            rhos = np.array([random_pure_state(d, rng) for _ in range(opt.random_candidates)])
            r = np.real(expand(rhos, basis)[:, 1:])
            vals = score(r)
            i = int(np.argmax(vals))
            candidates.append((float(vals[i]), {"family": "random-pure", "index": i}, r[i]))
        if opt.random_candidates:
            rhos = np.array([random_state(d, rng) for _ in range(opt.random_candidates)])
            r = np.real(expand(rhos, basis)[:, 1:])
            vals = score(r)
            i = int(np.argmax(vals))
            candidates.append((float(vals[i]), {"family": "random-mixed", "index": i}, r[i]))

        if opt.refine:
            start_value, start_info, start = max(candidates, key=lambda c: c[0])
            if d == 2:
                radius = np.linalg.norm(start) * np.sqrt(2)
                n = start / np.linalg.norm(start) if radius > 0 else np.array([0.0, 0.0, 1.0])
                x0 = np.array([np.arcsin(np.sqrt(min(radius, 1.0))),
                               np.arccos(np.clip(n[2], -1, 1)), np.arctan2(n[1], n[0])])
                to_bloch = _ball_bloch
            else:
                rho = np.eye(d) / d + np.einsum("k,kij->ij", start, basis.ops[1:])
                w, v = np.linalg.eigh(rho)
                g = (v * np.sqrt(np.maximum(w, 0))) @ v.conj().T
                x0 = np.concatenate([g.real.ravel(), g.imag.ravel()])
                to_bloch = lambda x: _general_state_bloch(x, d, basis)  # noqa: E731

            res = minimize(lambda x: -float(score(to_bloch(x)[None])[0]), x0,
                           method="Nelder-Mead",
                           options={"maxiter": opt.max_iter, "xatol": opt.tol, "fatol": opt.tol})
            candidates.append((-float(res.fun), {"family": "refined", "from": start_info["family"]},
                               to_bloch(res.x)))

    value, info, bloch = max(candidates, key=lambda c: c[0])
    p_trace = purity(evolved_densities(transfers, bloch), check=False)
    rate = 2 * np.sum(evolve_bloch(transfers, bloch) * evolve_bloch(rates, bloch), axis=-1)
    details = {"candidates": [{"value": v, **desc} for v, desc, _ in candidates],
               "derivative_step": step}
    return MeasureReport.from_rises(
        "nonunitality", t, p_trace, rate, maximizer=dict(info, rho0_bloch=bloch),
        trace={"t": t, "purity": p_trace, "purity_rate": rate},
        caveats=caveats, details=details,
    )


# -- non-unital non-Markovianity ---------------------------------------------------

def trajectory_bloch(process: QuantumProcess, times):
    """Bloch vectors of ``E_tau(1/d)`` for each ``tau`` in ``times``."""
    transfers = process.transfers(times)
    return evolve_bloch(transfers, np.zeros(process.dim ** 2 - 1))


def trajectory_states(process: QuantumProcess, grid: TimeGrid):
    """The orbit of the maximally mixed state, one :class:`BlochState` per grid point."""
    d = process.dim
    blochs = trajectory_bloch(process, grid.points)
    blochs[0] = 0.0  # E_0 is the identity map
    return [BlochState(d, b) for b in blochs]


def _nu_traces(transfers, ref, blochs, dist, t, taus):
    """Distance traces ``D[E_t(rho_0), E_t(rho_tau)]``, shape ``(n_t, n_tau)``.

    ``dist`` is a distance name; qubit Bures-type distances are evaluated
    directly on Bloch vectors.
    """
    fast = distances.QUBIT_BLOCH_DISTANCES.get(dist) if transfers.shape[-1] == 4 else None
    out = np.empty((transfers.shape[0], blochs.shape[0]))
    if fast is not None:
        r_ref = evolve_bloch(transfers, ref)
        for sl in _chunks(blochs.shape[0], transfers.shape[0]):
            out[:, sl] = fast(r_ref[:, None], evolve_bloch(transfers, blochs[sl]))
    else:
        metric = distances.get_distance(dist)
        rho_ref = evolved_densities(transfers, ref)
        for sl in _chunks(blochs.shape[0], transfers.shape[0]):
            out[:, sl] = metric(rho_ref[:, None], evolved_densities(transfers, blochs[sl]))
    bad = ~np.isfinite(out)
    if np.any(bad):
        i, j = np.argwhere(bad)[0]
        raise SingularDistanceError(
            f"distance is infinite at t={t[i]}, tau={taus[j]}", t=float(t[i]), tau=float(taus[j]))
    return out


def nonunital_nm_measure(process: QuantumProcess, grid: TimeGrid, distance="bures",
                         refine=True, tau_stride=1) -> MeasureReport:
    """``max_tau int_{sigma_nu > 0} sigma_nu dt`` over trajectory states ``E_tau(1/d)``.

    ``sigma_nu(t) = d/dt D[E_t(rho_0), E_t(rho_tau)]`` with ``rho_0 = 1/d``.
    ``tau`` runs over the grid (every ``tau_stride``-th point) and the best
    grid value is refined by a bounded scalar search between its neighbours.
    ``distance="trace"`` is a verification mode: it is blind to the
    non-unital part and gives zero whenever the trace distance is monotone.
    """
    distances.get_distance(distance)  # reject unknown names early
    dist = distance
    d = process.dim
    t = grid.points
    transfers = process.transfers(t)
    zero = np.zeros(d * d - 1)
    taus = t[::tau_stride]
    blochs = trajectory_bloch(process, taus)
    blochs[0] = zero

    scores = _scores(t, _nu_traces(transfers, zero, blochs, dist, t, taus))
    i = int(np.argmax(scores))
    best_tau, best_value = float(taus[i]), float(scores[i])
    grid_tau, grid_value = best_tau, best_value

    def tau_score(tau):
        b = trajectory_bloch(process, [tau])
        return float(_scores(t, _nu_traces(transfers, zero, b, dist, t, [tau]))[0])

    if refine and best_value > 0:
        lo = float(taus[max(i - 1, 0)])
        hi = float(taus[min(i + 1, len(taus) - 1)])
        if hi > lo:
            res = minimize_scalar(lambda x: -tau_score(x), bounds=(lo, hi), method="bounded",
                                  options={"xatol": 1e-6 * max(grid.h, 1e-12)})
            if -res.fun > best_value:
                best_tau, best_value = float(res.x), float(-res.fun)

    b = trajectory_bloch(process, [best_tau]) if best_tau > 0 else zero[None]
    trace = _nu_traces(transfers, zero, b, dist, t, [best_tau])[:, 0]
    sigma = central_derivative(trace, t)
    return MeasureReport.from_integrand(
        "nonunital-nm", t, sigma,
        maximizer={"tau": best_tau, "grid_tau": grid_tau, "grid_value": grid_value},
        trace={"t": t, "distance": trace, "sigma_nu": sigma, "tau_grid": taus,
               "tau_scores": scores},
        caveats=[_truncation_caveat(grid),
                 f"trajectory time tau restricted to [0, {grid.t_max}]",
                 "maximum over tau from a grid search with local refinement"],
        details={"distance": distance, "tau_stride": tau_stride},
    )
