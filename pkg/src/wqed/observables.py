"""Entanglement and photon-statistics observables.

The emitted field in a given direction is represented by per-atom complex
coefficients f_n, so that E = sum_n f_n sigma_n^-. Each coefficient is the
connection-point sum

    f_n = (1/K_n) sum_j sqrt(gamma_j / gmean_n) exp(-+ i theta_j)

(upper sign: left-moving), normalized per atom by the connection count so
the coefficients approach 1 in the zero-spacing limit. Normalized
correlations (g2) are independent of this overall scale; intensity and
Mandel Q inherit it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DarkStateError
from .evolve import evolve_vectorized
from .layout import AtomLayout
from .liouvillian import LindbladModel, lowering_operators, superoperator, vec

__all__ = [
    "FieldAmplitudes",
    "CorrelationCurve",
    "field_amplitudes",
    "field_operator",
    "intensity",
    "g2_zero",
    "g2_tau",
    "mandel_q",
    "concurrence",
    "concurrence_batch",
]

INTENSITY_IMAG_TOL = 1e-12
DARK_INTENSITY_FLOOR = 1e-30


@dataclass(frozen=True)
class FieldAmplitudes:
    """Per-atom coefficients of the travelling field in one direction."""

    coefficients: np.ndarray
    direction: str

    def __post_init__(self):
        if self.direction not in ("left", "right"):
            raise ValueError("direction must be 'left' or 'right'")
        c = np.asarray(self.coefficients, dtype=complex)
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def n_atoms(self) -> int:
        return self.coefficients.shape[0]


def field_amplitudes(layout: AtomLayout, direction: str = "left") -> FieldAmplitudes:
    """Travelling-field coefficients of every atom for one direction."""
    sign = -1.0 if direction == "left" else +1.0
    coeffs = []
    for atom in layout.atoms:
        theta = np.asarray(atom.connection_phases)
        rates = np.asarray(atom.point_rates)
        weights = np.sqrt(rates / rates.mean())
        coeffs.append(np.sum(weights * np.exp(1j * sign * theta)) / atom.n_points)
    return FieldAmplitudes(coefficients=np.array(coeffs), direction=direction)


def field_operator(fields: FieldAmplitudes) -> np.ndarray:
    """Matrix of E = sum_n f_n sigma_n^- in the product basis."""
    ops = lowering_operators(fields.n_atoms)
    out = np.zeros_like(ops[0])
    for f, op in zip(fields.coefficients, ops):
        out = out + f * op
    return out


def intensity(rho: np.ndarray, fields: FieldAmplitudes) -> float:
    """Emitted intensity <E^dag E>; real to 1e-12 and clipped at zero."""
    e_op = field_operator(fields)
    val = complex(np.trace(rho @ e_op.conj().T @ e_op))
    scale = max(float(np.sum(np.abs(fields.coefficients) ** 2)), 1.0)
    if abs(val.imag) > INTENSITY_IMAG_TOL * scale:
        raise ValueError(f"intensity has imaginary part {val.imag:.3e}")
    return max(val.real, 0.0)


def g2_zero(rho_ss: np.ndarray, fields: FieldAmplitudes) -> float:
    """Equal-time second-order correlation <Ed Ed E E> / <Ed E>**2."""
    i_val = intensity(rho_ss, fields)
    scale = max(float(np.sum(np.abs(fields.coefficients) ** 2)), 1.0)
    if i_val <= DARK_INTENSITY_FLOOR * scale:
        raise DarkStateError(
            "state emits no light in this direction; g2 is undefined"
        )
    e_op = field_operator(fields)
    ed = e_op.conj().T
    num = float(np.real(np.trace(rho_ss @ ed @ ed @ e_op @ e_op)))
    return max(num, 0.0) / i_val**2


@dataclass(frozen=True)
class CorrelationCurve:
    taus: np.ndarray
    g2: np.ndarray


def g2_tau(
    model: LindbladModel,
    rho_ss: np.ndarray,
    fields: FieldAmplitudes,
    taus: np.ndarray,
) -> CorrelationCurve:
    """Steady-state g2(tau) via the quantum regression theorem.

    g2(tau) = tr[E^dag E e^{L tau}(E rho_ss E^dag)] / I**2 for tau >= 0.
    """
    taus = np.asarray(taus, dtype=float)
    if taus.size == 0 or taus[0] != 0.0:
        raise ValueError("tau grid must start at 0")
    i_val = intensity(rho_ss, fields)
    scale = max(float(np.sum(np.abs(fields.coefficients) ** 2)), 1.0)
    if i_val <= DARK_INTENSITY_FLOOR * scale:
        raise DarkStateError("dark steady state; g2(tau) is undefined")
    e_op = field_operator(fields)
    ed = e_op.conj().T
    collapsed = e_op @ rho_ss @ ed
    sup = superoperator(model)
    flat = evolve_vectorized(sup, vec(collapsed), taus[1:]) if taus.size > 1 else None
    d = model.dim
    n_op_vec = vec((ed @ e_op).conj().T)  # tr(A rho) = vec(A^dag)^dag vec(rho)
    g2 = np.empty(taus.size)
    g2[0] = float(np.real(np.trace(ed @ e_op @ collapsed)))
    if flat is not None:
        g2[1:] = np.real(flat @ n_op_vec.conj())
    return CorrelationCurve(taus=taus, g2=g2 / i_val**2)


def mandel_q(rho_ss: np.ndarray, fields: FieldAmplitudes) -> float:
    """Flux-form Mandel parameter Q = I (g2(0) - 1)."""
    return intensity(rho_ss, fields) * (g2_zero(rho_ss, fields) - 1.0)


_SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)  # sigma_y x sigma_y (real)


def concurrence(rho: np.ndarray) -> float:
    """Wootters two-qubit concurrence in [0, 1].

    C = max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of
    the eigenvalues of rho (Y x Y) rho* (Y x Y); eigenvalues are clipped at
    zero before the square root.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError("concurrence is defined for a pair of qubits (4 x 4)")
    return float(concurrence_batch(rho[None, :, :])[0])


def concurrence_batch(states: np.ndarray) -> np.ndarray:
    """Concurrence of a stack of two-qubit states, shape (T, 4, 4) -> (T,)."""
    states = np.asarray(states, dtype=complex)
    if states.ndim != 3 or states.shape[1:] != (4, 4):
        raise ValueError("expected a stack of 4 x 4 states")
    tilde = _SPIN_FLIP @ states.conj() @ _SPIN_FLIP
    evals = np.linalg.eigvals(states @ tilde)
    lam = np.sqrt(np.clip(evals.real, 0.0, None))
    lam.sort(axis=1)
    c = lam[:, 3] - lam[:, 2] - lam[:, 1] - lam[:, 0]
    return np.maximum(c, 0.0)
