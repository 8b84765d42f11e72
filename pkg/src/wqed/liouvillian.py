"""Hamiltonian, dissipator and vectorized Liouvillian for N driven atoms.

Basis conventions, fixed across the package:

* single atom: ``|g> -> 0``, ``|e> -> 1``;
* product states indexed by ``sum_n bit_n * 2**(N-1-n)`` -- atom 1 is the
  most significant bit, so for two atoms ``|gg>=0, |ge>=1, |eg>=2, |ee>=3``;
* vectorization is column-stacking: ``vec(rho) = rho.flatten(order='F')``.

The Hamiltonian is written in the frame rotating at the drive frequency
``omega_field = omega - detuning``; the common reference frequency drops out
and the pump detuning enters the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelConstructionError
from .layout import CouplingSet

__all__ = [
    "DriveSpec",
    "LindbladModel",
    "build_model",
    "apply_liouvillian",
    "superoperator",
    "lowering_operators",
    "ket",
    "bell_state",
    "pure_density",
    "vec",
    "unvec",
    "check_density_matrix",
    "hamiltonian_is_sector_mixing",
]

MAX_SUPEROP_DIM = 64  # 2**6; dense superoperators up to 4096 x 4096

GAMMA_PSD_TOL = 1e-10       # relative to the largest diagonal entry
HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class DriveSpec:
    """Classical pump applied identically to every atom.

    Attributes
    ----------
    rabi : float
        Rabi frequency Omega_0 of the pump (units of gamma0), >= 0. This is
        the full Rabi frequency (the ground-excited population-oscillation
        frequency of a lone resonantly driven atom), so the pump Hamiltonian
        is (Omega_0/2) * sum_n (sp_n + sm_n).
    detuning : float
        Pump detuning Delta_p; the field frequency is omega - Delta_p.
    """

    rabi: float = 0.0
    detuning: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.rabi) and math.isfinite(self.detuning)):
            raise ValueError("drive parameters must be finite")
        if self.rabi < 0:
            raise ValueError("rabi must be >= 0")


@dataclass(frozen=True)
class LindbladModel:
    """Dense master-equation model over the 2**N product basis."""

    hamiltonian: np.ndarray
    gamma: np.ndarray
    lowering_ops: tuple[np.ndarray, ...]
    dim: int

    def __post_init__(self):
        h = np.asarray(self.hamiltonian, dtype=complex)
        g = np.asarray(self.gamma)
        if h.shape != (self.dim, self.dim):
            raise ValueError("hamiltonian has wrong shape")
        herm = np.max(np.abs(h - h.conj().T))
        if herm > HERMITICITY_TOL:
            raise ModelConstructionError(
                f"hamiltonian not Hermitian (residual {herm:.3e})"
            )
        scale = max(float(np.max(np.abs(np.diag(g)))), 1.0)
        evals = np.linalg.eigvalsh(0.5 * (g + g.conj().T))
        if evals[0] < -GAMMA_PSD_TOL * scale:
            raise ModelConstructionError(
                f"decay matrix not positive semidefinite: eigenvalue {evals[0]:.3e}"
            )
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "gamma", np.asarray(g))
        object.__setattr__(self, "lowering_ops", tuple(self.lowering_ops))

    @property
    def n_atoms(self) -> int:
        return len(self.lowering_ops)


def lowering_operators(n_atoms: int) -> tuple[np.ndarray, ...]:
    """Single-atom lowering operators sigma_n^- in the product basis."""
    sm = np.array([[0.0, 1.0], [0.0, 0.0]])  # |g><e|
    eye2 = np.eye(2)
    ops = []
    for n in range(n_atoms):
        op = np.array([[1.0]])
        for m in range(n_atoms):
            op = np.kron(op, sm if m == n else eye2)
        ops.append(op.astype(complex))
    return tuple(ops)


def ket(label: str) -> np.ndarray:
    """Product basis ket from a label such as 'ge' (atom 1 first)."""
    index = 0
    for ch in label:
        if ch not in "ge":
            raise ValueError(f"invalid state label {label!r}")
        index = 2 * index + (1 if ch == "e" else 0)
    v = np.zeros(2 ** len(label), dtype=complex)
    v[index] = 1.0
    return v


def bell_state() -> np.ndarray:
    """The two-atom singlet (|ge> - |eg>)/sqrt(2)."""
    return (ket("ge") - ket("eg")) / np.sqrt(2.0)


def pure_density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization."""
    return np.asarray(rho).flatten(order="F")


def unvec(v: np.ndarray, dim: int) -> np.ndarray:
    return np.asarray(v).reshape((dim, dim), order="F")


def build_model(cs: CouplingSet, drive: DriveSpec = DriveSpec()) -> LindbladModel:
    """Assemble the rotating-frame Hamiltonian and decay matrix.

    H = sum_n (Delta_p + delta_n + eps_n) sp_n sm_n
        + sum_{j != n} Delta_jn sp_j sm_n
        + (Omega_0 / 2) sum_n (sp_n + sm_n)
    """
    n = cs.n_atoms
    dim = 2**n
    ops = lowering_operators(n)
    shifts = drive.detuning + cs.shifted_detunings

    h = np.zeros((dim, dim), dtype=complex)
    for j in range(n):
        sp_j = ops[j].conj().T
        h += shifts[j] * (sp_j @ ops[j])
        h += 0.5 * drive.rabi * (sp_j + ops[j])
        for k in range(n):
            if k != j:
                h += cs.Delta[j, k] * (sp_j @ ops[k])

    return LindbladModel(hamiltonian=h, gamma=cs.Gamma, lowering_ops=ops, dim=dim)


def apply_liouvillian(model: LindbladModel, rho: np.ndarray) -> np.ndarray:
    """Right-hand side d(rho)/dt of the master equation.

    drho/dt = -i[H, rho]
              + sum_jn Gamma_jn (sm_j rho sp_n - (1/2){sp_n sm_j, rho})
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (model.dim, model.dim):
        raise ValueError(
            f"state has shape {rho.shape}, model dimension is {model.dim}"
        )
    h = model.hamiltonian
    out = -1j * (h @ rho - rho @ h)
    anti = np.zeros_like(out)
    for j, sm_j in enumerate(model.lowering_ops):
        for n_, sm_n in enumerate(model.lowering_ops):
            g = model.gamma[j, n_]
            if g == 0.0:
                continue
            out += g * (sm_j @ rho @ sm_n.conj().T)
            anti += g * (sm_n.conj().T @ sm_j)
    out -= 0.5 * (anti @ rho + rho @ anti)
    return out


def superoperator(model: LindbladModel) -> np.ndarray:
    """Dense matrix L acting on vec(rho) (column-stacking convention)."""
    if model.dim > MAX_SUPEROP_DIM:
        raise ValueError(
            f"dense superoperator capped at dimension {MAX_SUPEROP_DIM}, got {model.dim}"
        )
    d = model.dim
    eye = np.eye(d)
    h = model.hamiltonian
    sup = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    anti = np.zeros((d, d), dtype=complex)
    for j, sm_j in enumerate(model.lowering_ops):
        for n_, sm_n in enumerate(model.lowering_ops):
            g = model.gamma[j, n_]
            if g == 0.0:
                continue
            sup += g * np.kron(sm_n.conj(), sm_j)
            anti += g * (sm_n.conj().T @ sm_j)
    sup -= 0.5 * (np.kron(eye, anti) + np.kron(anti.T, eye))
    return sup


def hamiltonian_is_sector_mixing(model: LindbladModel, tol: float = 1e-12) -> bool:
    """Whether H couples different excitation-number sectors (i.e. is driven)."""
    d = model.dim
    n_exc = np.array([bin(i).count("1") for i in range(d)])
    mask = n_exc[:, None] != n_exc[None, :]
    return bool(np.max(np.abs(model.hamiltonian[mask])) > tol)


def check_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-9,
    trace_tol: float = 1e-9,
    eig_tol: float = 1e-9,
) -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace and PSD."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    herm = np.max(np.abs(rho - rho.conj().T))
    if herm > herm_tol:
        raise ValueError(f"not Hermitian (residual {herm:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"trace deviates from 1 by {abs(tr - 1.0):.3e}")
    evals = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if evals[0] < -eig_tol:
        raise ValueError(f"negative eigenvalue {evals[0]:.3e}")
