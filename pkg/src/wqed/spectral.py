"""Dressed single-excitation states, transition rates and effective couplings.

Everything here is for two atoms. The shifted per-atom frequencies are
``w_n = delta_n + eps_n`` (the common reference frequency is dropped), and

    delta_12 = w_1 - w_2,
    Dtilde   = sqrt(4 Delta_12**2 + delta_12**2) >= 0.

Amplitude signs follow the ((w1 - w2 +/- Dtilde)/Delta_12, 2) convention
without re-phasing, so downstream effective-coupling signs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError
from .layout import CouplingSet
from .liouvillian import (
    LindbladModel,
    apply_liouvillian,
    hamiltonian_is_sector_mixing,
)

__all__ = [
    "DressedPair",
    "RateQuartet",
    "dressed_states",
    "transition_rates",
    "extract_rate",
    "drive_couplings",
    "liouvillian_spectrum",
]


@dataclass(frozen=True)
class DressedPair:
    """Single-excitation eigenstates over {|eg>, |ge>} and their energies."""

    psi_plus: np.ndarray
    psi_minus: np.ndarray
    energy_ground: float
    energy_plus: float
    energy_minus: float
    energy_excited: float
    delta_tilde: float

    def full_ket(self, which: str) -> np.ndarray:
        """Embed a dressed amplitude pair into the 4-dim product basis."""
        amp = self.psi_plus if which == "plus" else self.psi_minus
        v = np.zeros(4, dtype=complex)
        v[2] = amp[0]  # |eg>
        v[1] = amp[1]  # |ge>
        return v


@dataclass(frozen=True)
class RateQuartet:
    """Decay rates between |ee>, |psi_+->, and |gg> (units of gamma0)."""

    gamma_e_plus: float
    gamma_e_minus: float
    gamma_plus_g: float
    gamma_minus_g: float
    eta_plus: float
    eta_minus: float
    xi: float
    delta_tilde: float


def _two_atom_parameters(cs: CouplingSet):
    if cs.n_atoms != 2:
        raise ValueError("dressed-state analysis requires exactly two atoms")
    w = cs.shifted_detunings
    d12 = float(w[0] - w[1])
    big_d = float(cs.Delta[0, 1])
    dtilde = float(np.hypot(2.0 * big_d, d12))
    return w, d12, big_d, dtilde


def dressed_states(cs: CouplingSet) -> DressedPair:
    """Diagonalize the single-excitation sector.

    psi_+- = [(w1 - w2 +- Dtilde)/Delta_12 |eg> + 2 |ge>] / N_+-

    For Delta_12 = 0 the pair reduces to the bare states ordered by energy;
    if additionally w1 = w2 the sector is fully degenerate and any basis
    would do, which is reported as an error.
    """
    w, d12, big_d, dtilde = _two_atom_parameters(cs)
    if dtilde == 0.0:
        raise DegeneracyError(
            "single-excitation sector fully degenerate (Delta_12 = 0 and equal "
            "shifted frequencies); dressed states are not unique"
        )
    if big_d == 0.0:
        # bare-state limit, ordered so that psi_+ has the higher energy
        up = np.array([1.0, 0.0], dtype=complex)    # |eg>
        down = np.array([0.0, 1.0], dtype=complex)  # |ge>
        plus, minus = (up, down) if d12 > 0 else (down, up)
    else:
        a_plus = (d12 + dtilde) / big_d
        a_minus = (d12 - dtilde) / big_d
        plus = np.array([a_plus, 2.0], dtype=complex) / np.sqrt(4.0 + a_plus**2)
        minus = np.array([a_minus, 2.0], dtype=complex) / np.sqrt(4.0 + a_minus**2)
    total = float(w[0] + w[1])
    return DressedPair(
        psi_plus=plus,
        psi_minus=minus,
        energy_ground=0.0,
        energy_plus=0.5 * (total + dtilde),
        energy_minus=0.5 * (total - dtilde),
        energy_excited=total,
        delta_tilde=dtilde,
    )


def transition_rates(cs: CouplingSet) -> RateQuartet:
    """Closed-form decay rates of the four-level cascade.

    With eta_+- = w1 - w2 +- Dtilde and xi = 4 Delta_12 Gamma_12:

        Gamma_e+ = (Gamma_2 eta_+ - Gamma_1 eta_- + xi) / (2 Dtilde)
        Gamma_g+ = (Gamma_1 eta_+ - Gamma_2 eta_- + xi) / (2 Dtilde)
        Gamma_e- = (Gamma_1 eta_+ - Gamma_2 eta_- - xi) / (2 Dtilde)
        Gamma_g- = (Gamma_2 eta_+ - Gamma_1 eta_- - xi) / (2 Dtilde)
    """
    _, d12, big_d, dtilde = _two_atom_parameters(cs)
    if dtilde == 0.0:
        raise DegeneracyError(
            "transition rates undefined for a fully degenerate single-excitation sector"
        )
    g1 = float(cs.Gamma[0, 0])
    g2 = float(cs.Gamma[1, 1])
    g12 = float(cs.Gamma[0, 1])
    eta_p = d12 + dtilde
    eta_m = d12 - dtilde
    xi = 4.0 * big_d * g12
    denom = 2.0 * dtilde
    return RateQuartet(
        gamma_e_plus=(g2 * eta_p - g1 * eta_m + xi) / denom,
        gamma_e_minus=(g1 * eta_p - g2 * eta_m - xi) / denom,
        gamma_plus_g=(g1 * eta_p - g2 * eta_m + xi) / denom,
        gamma_minus_g=(g2 * eta_p - g1 * eta_m - xi) / denom,
        eta_plus=eta_p,
        eta_minus=eta_m,
        xi=xi,
        delta_tilde=dtilde,
    )


def extract_rate(
    model: LindbladModel, state_from: np.ndarray, state_to: np.ndarray
) -> float:
    """Transition rate tr(L[|from><from|] |to><to|) from the Liouvillian.

    Valid for decay dynamics only: the model's Hamiltonian must not couple
    different excitation-number sectors (no coherent pump).
    """
    if hamiltonian_is_sector_mixing(model):
        raise ValueError(
            "rate extraction is only valid for decay dynamics; "
            "the model Hamiltonian mixes excitation sectors (driven model)"
        )
    state_from = np.asarray(state_from, dtype=complex)
    state_to = np.asarray(state_to, dtype=complex)
    for name, s in (("from", state_from), ("to", state_to)):
        if s.shape != (model.dim,):
            raise ValueError(f"state '{name}' has wrong dimension")
        norm = np.linalg.norm(s)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state '{name}' is not normalized (norm {norm})")
    drho = apply_liouvillian(model, np.outer(state_from, state_from.conj()))
    return float(np.real(state_to.conj() @ drho @ state_to))


def drive_couplings(delta12: float, Delta12: float, rabi: float):
    """Effective pump couplings (Omega_+, Omega_-) of |gg> -> |psi_+->.

    With R = sqrt(4 Delta12**2 + delta12**2) these are

        Omega_+- = Omega_0 (delta12 + 2 Delta12 +- R)
                   / sqrt(8 Delta12**2 + 2 delta12 (delta12 +- R))

    for Delta12 > 0; the signs follow the dressed-state amplitudes, so the
    computation goes through a_+- = (delta12 +- R)/Delta12 directly (for
    Delta12 < 0 this flips the closed form's overall sign). Where delta12
    and -+R cancel, a_-+ is evaluated as -+4 Delta12 / (|delta12| + R).
    """
    r = float(np.hypot(2.0 * Delta12, delta12))
    if r == 0.0:
        raise DegeneracyError("effective couplings undefined for delta12 = Delta12 = 0")
    if Delta12 == 0.0:
        # bare-state limit: both transitions couple with the bare strength
        return float(rabi), float(rabi)
    if delta12 >= 0:
        a_plus = (delta12 + r) / Delta12
        a_minus = -4.0 * Delta12 / (delta12 + r)
    else:
        a_plus = 4.0 * Delta12 / (r - delta12)
        a_minus = (delta12 - r) / Delta12
    omega_p = rabi * (a_plus + 2.0) / np.sqrt(4.0 + a_plus**2)
    omega_m = rabi * (a_minus + 2.0) / np.sqrt(4.0 + a_minus**2)
    return float(omega_p), float(omega_m)


def liouvillian_spectrum(superop: np.ndarray) -> np.ndarray:
    """Eigenvalues of a Liouvillian matrix, sorted by descending real part."""
    evals = np.linalg.eigvals(np.asarray(superop))
    order = np.lexsort((-evals.imag, -evals.real))
    return evals[order]
