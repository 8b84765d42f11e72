"""Time propagation of the master equation and steady-state solving."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import DegeneracyError, IntegrationAccuracyError
from .liouvillian import (
    LindbladModel,
    apply_liouvillian,
    check_density_matrix,
    superoperator,
    unvec,
    vec,
)
from .spectral import DressedPair

__all__ = [
    "Trajectory",
    "SteadyState",
    "propagate",
    "steady_state",
    "decompose",
    "evolve_vectorized",
]

POSITIVITY_TOL = 1e-7       # propagated states; violations flag integrator trouble
UNIQUENESS_RTOL = 1e-8      # second singular value relative to the largest


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution rho(t); states[k] corresponds to times[k]."""

    times: np.ndarray
    states: np.ndarray  # (T, dim, dim)


@dataclass(frozen=True)
class SteadyState:
    rho: np.ndarray
    residual: float            # Frobenius norm of L[rho]
    uniqueness_margin: float   # second-smallest singular value of the superoperator


def evolve_vectorized(superop: np.ndarray, v0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Exact exponential stepping of dv/dt = superop @ v along a time grid.

    Propagators expm(superop * dt) are cached per distinct step, so a uniform
    grid costs a single matrix exponential (scaling-and-squaring via scipy).
    Returns an array of shape (len(times), len(v0)).
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a nonempty 1-d grid")
    if np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing")
    out = np.empty((times.size, v0.size), dtype=complex)
    v = np.asarray(v0, dtype=complex)
    prev_t = 0.0
    cached_dt = None
    cached_prop = None
    for k, t in enumerate(times):
        dt = t - prev_t
        if dt > 0.0:
            if cached_dt is None or not np.isclose(dt, cached_dt, rtol=1e-12, atol=0.0):
                cached_prop = expm(superop * dt)
                cached_dt = dt
            v = cached_prop @ v
        out[k] = v
        prev_t = t
    return out


def propagate(model: LindbladModel, rho0: np.ndarray, times: np.ndarray) -> Trajectory:
    """Integrate the master equation from rho0 over the given grid.

    The grid must start at 0. Every output state is re-validated; a
    positivity violation beyond 1e-7 raises IntegrationAccuracyError.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0.0:
        raise ValueError("time grid must start at 0")
    check_density_matrix(rho0)
    rho0 = np.asarray(rho0, dtype=complex)
    d = model.dim
    sup = superoperator(model)
    if times.size == 1:
        states = rho0[None, :, :].copy()
    else:
        flat = evolve_vectorized(sup, vec(rho0), times[1:])
        states = np.empty((times.size, d, d), dtype=complex)
        states[0] = rho0
        # column-stacking: unvec is a Fortran-order reshape
        states[1:] = flat.reshape((-1, d, d), order="C").transpose(0, 2, 1)
    _validate_trajectory(states)
    return Trajectory(times=times, states=states)


def _validate_trajectory(states: np.ndarray) -> None:
    herm = np.max(np.abs(states - states.conj().transpose(0, 2, 1)))
    traces = np.einsum("tii->t", states)
    trace_err = float(np.max(np.abs(traces - 1.0)))
    if herm > 1e-9 or trace_err > 1e-9:
        raise IntegrationAccuracyError(
            f"propagated states violate Hermiticity ({herm:.3e}) or "
            f"unit trace ({trace_err:.3e})"
        )
    evals = np.linalg.eigvalsh(0.5 * (states + states.conj().transpose(0, 2, 1)))
    emin = float(evals.min())
    if emin < -POSITIVITY_TOL:
        raise IntegrationAccuracyError(
            f"propagated state has negative eigenvalue {emin:.3e}"
        )


def steady_state(model: LindbladModel) -> SteadyState:
    """Null-space steady state of the vectorized Liouvillian.

    The smallest right singular vector is Hermitized and trace-normalized.
    A near-degenerate null space (second singular value below 1e-8 of the
    largest) raises DegeneracyError: propagate to convergence instead.
    """
    sup = superoperator(model)
    _, s, vh = np.linalg.svd(sup)
    margin = float(s[-2])
    if margin <= UNIQUENESS_RTOL * float(s[0]):
        raise DegeneracyError(
            f"steady state not unique (second singular value {margin:.3e} vs "
            f"largest {s[0]:.3e}); propagate from a definite initial state instead"
        )
    rho = unvec(vh[-1].conj(), model.dim)
    rho = 0.5 * (rho + rho.conj().T)
    rho = rho / np.trace(rho)
    check_density_matrix(rho)
    residual = float(np.linalg.norm(apply_liouvillian(model, rho)))
    return SteadyState(rho=rho, residual=residual, uniqueness_margin=margin)


def decompose(rho: np.ndarray, dressed: DressedPair):
    """Populations (p_g, p_plus, p_minus, p_e) in the dressed four-level basis.

    Coherences are excluded by construction, so the four populations sum to
    at most 1.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("dressed decomposition requires a two-atom state")
    kets = [
        np.array([1, 0, 0, 0], dtype=complex),
        dressed.full_ket("plus"),
        dressed.full_ket("minus"),
        np.array([0, 0, 0, 1], dtype=complex),
    ]
    return tuple(float(np.real(k.conj() @ rho @ k)) for k in kets)
