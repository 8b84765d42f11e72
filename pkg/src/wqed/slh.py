"""SLH input-output algebra for cascaded waveguide networks.

A network component is a triplet G = (S, L, H): a scalar scattering matrix
between ports, one coupling operator per port, and a system Hamiltonian.
Operators are represented concretely on the joint 2**N atomic space; the
scattering entries are plain complex numbers (phases), which is all a
passive waveguide needs.

Composition rules:

    series   G2 <| G1 = (S2 S1, L2 + S2 L1, H1 + H2 + Im(L2^dag S2 L1))
    concat   Ga [+] Gb = (diag(Sa, Sb), (La, Lb), Ha + Hb)

A bidirectional waveguide coupled at M points becomes one right-moving
cascade (leftmost point first) and one left-moving cascade (rightmost point
first) with phase elements in between, concatenated into a two-port network.
Exporting to a Lindblad model expands each collapse channel over the
single-atom lowering operators; global scattering phases drop out there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ExportError
from .layout import AtomLayout
from .liouvillian import DriveSpec, LindbladModel, lowering_operators

__all__ = [
    "SLHTriplet",
    "identity_triplet",
    "phase_element",
    "series_product",
    "concatenate",
    "build_network",
    "to_lindblad",
]

UNITARITY_TOL = 1e-12
EXPORT_SPAN_TOL = 1e-10


@dataclass(frozen=True)
class SLHTriplet:
    scattering: np.ndarray
    couplings: tuple[np.ndarray, ...]
    hamiltonian: np.ndarray

    def __post_init__(self):
        s = np.atleast_2d(np.asarray(self.scattering, dtype=complex))
        h = np.asarray(self.hamiltonian, dtype=complex)
        ls = tuple(np.asarray(op, dtype=complex) for op in self.couplings)
        if s.shape[0] != s.shape[1]:
            raise ValueError("scattering matrix must be square")
        if len(ls) != s.shape[0]:
            raise ValueError("need one coupling operator per port")
        unit = np.max(np.abs(s @ s.conj().T - np.eye(s.shape[0])))
        if unit > UNITARITY_TOL:
            raise ValueError(f"scattering matrix not unitary (residual {unit:.3e})")
        herm = np.max(np.abs(h - h.conj().T))
        if herm > UNITARITY_TOL:
            raise ValueError(f"hamiltonian not Hermitian (residual {herm:.3e})")
        for op in ls:
            if op.shape != h.shape:
                raise ValueError("coupling operators must act on the same space as H")
        object.__setattr__(self, "scattering", s)
        object.__setattr__(self, "couplings", ls)
        object.__setattr__(self, "hamiltonian", h)

    @property
    def n_ports(self) -> int:
        return self.scattering.shape[0]

    @property
    def space_dim(self) -> int:
        return self.hamiltonian.shape[0]


def identity_triplet(dim: int, n_ports: int = 1) -> SLHTriplet:
    """Neutral element: unit scattering, no coupling, no Hamiltonian."""
    zero = np.zeros((dim, dim), dtype=complex)
    return SLHTriplet(
        scattering=np.eye(n_ports, dtype=complex),
        couplings=(zero,) * n_ports,
        hamiltonian=zero,
    )


def phase_element(phi: float, dim: int) -> SLHTriplet:
    """Propagation phase exp(i phi) on a single port."""
    zero = np.zeros((dim, dim), dtype=complex)
    return SLHTriplet(
        scattering=np.array([[np.exp(1j * phi)]]),
        couplings=(zero,),
        hamiltonian=zero,
    )


def _imag_part(op: np.ndarray) -> np.ndarray:
    return (op - op.conj().T) / 2j


def series_product(g2: SLHTriplet, g1: SLHTriplet) -> SLHTriplet:
    """Cascade g2 <| g1: the output of g1 feeds the input of g2."""
    if g2.n_ports != g1.n_ports:
        raise ValueError("series product needs matching port counts")
    if g2.space_dim != g1.space_dim:
        raise ValueError("series product needs a common operator space")
    s = g2.scattering @ g1.scattering
    couplings = tuple(
        g2.couplings[i]
        + sum(g2.scattering[i, j] * g1.couplings[j] for j in range(g1.n_ports))
        for i in range(g2.n_ports)
    )
    cross = sum(
        g2.couplings[i].conj().T @ (g2.scattering[i, j] * g1.couplings[j])
        for i in range(g2.n_ports)
        for j in range(g1.n_ports)
    )
    h = g1.hamiltonian + g2.hamiltonian + _imag_part(cross)
    return SLHTriplet(scattering=s, couplings=couplings, hamiltonian=h)


def concatenate(ga: SLHTriplet, gb: SLHTriplet) -> SLHTriplet:
    """Stack two networks side by side (block-diagonal scattering)."""
    if ga.space_dim != gb.space_dim:
        raise ValueError("concatenation needs a common operator space")
    na, nb = ga.n_ports, gb.n_ports
    s = np.zeros((na + nb, na + nb), dtype=complex)
    s[:na, :na] = ga.scattering
    s[na:, na:] = gb.scattering
    return SLHTriplet(
        scattering=s,
        couplings=ga.couplings + gb.couplings,
        hamiltonian=ga.hamiltonian + gb.hamiltonian,
    )


def build_network(layout: AtomLayout, drive: DriveSpec = DriveSpec()) -> SLHTriplet:
    """Compose the full bidirectional network for an atom layout.

    Connection points are sorted by position. Each atom's rotating-frame
    Hamiltonian (detuning plus drive) is attached exactly once, at the
    atom's first element of the right-moving chain; the left-moving chain
    carries no Hamiltonian.
    """
    n = layout.n_atoms
    dim = 2**n
    ops = lowering_operators(n)

    points = sorted(
        (theta, atom_idx, rate)
        for atom_idx, atom in enumerate(layout.atoms)
        for theta, rate in zip(atom.connection_phases, atom.point_rates)
    )
    if not points:
        raise ValueError("layout has no connection points")

    atom_hams = []
    for idx, atom in enumerate(layout.atoms):
        sp = ops[idx].conj().T
        h_local = (drive.detuning + atom.bare_detuning) * (sp @ ops[idx])
        h_local = h_local + 0.5 * drive.rabi * (sp + ops[idx])
        atom_hams.append(h_local)

    zero = np.zeros((dim, dim), dtype=complex)

    def point_triplet(atom_idx: int, rate: float, with_h: bool) -> SLHTriplet:
        return SLHTriplet(
            scattering=np.eye(1, dtype=complex),
            couplings=(np.sqrt(rate / 2.0) * ops[atom_idx],),
            hamiltonian=atom_hams[atom_idx] if with_h else zero,
        )

    seen: set[int] = set()
    right = None
    prev_theta = None
    for theta, atom_idx, rate in points:
        elem = point_triplet(atom_idx, rate, with_h=atom_idx not in seen)
        seen.add(atom_idx)
        if right is None:
            right = elem
        else:
            right = series_product(phase_element(theta - prev_theta, dim), right)
            right = series_product(elem, right)
        prev_theta = theta

    left = None
    prev_theta = None
    for theta, atom_idx, rate in reversed(points):
        elem = point_triplet(atom_idx, rate, with_h=False)
        if left is None:
            left = elem
        else:
            left = series_product(phase_element(prev_theta - theta, dim), left)
            left = series_product(elem, left)
        prev_theta = theta

    return concatenate(right, left)


def to_lindblad(g: SLHTriplet) -> LindbladModel:
    """Export a composed triplet to the lowering-operator master equation.

    Each collapse operator is expanded as L_c = sum_n c_n sigma_n^-, giving
    the decay matrix Gamma_jn = sum_c c_j conj(c_n) (Hermitian PSD by
    construction). Channels outside the lowering-operator span cannot be
    represented and raise ExportError. Scattering phases do not enter the
    master equation and are discarded.
    """
    dim = g.space_dim
    n = dim.bit_length() - 1
    if 2**n != dim:
        raise ExportError(f"operator space dimension {dim} is not a power of two")
    ops = lowering_operators(n)
    basis = np.stack([op.flatten() for op in ops], axis=1)  # (dim^2, n)

    coeffs = []
    for lc in g.couplings:
        target = lc.flatten()
        c, *_ = np.linalg.lstsq(basis, target, rcond=None)
        resid = np.linalg.norm(basis @ c - target)
        scale = max(np.linalg.norm(target), 1.0)
        if resid > EXPORT_SPAN_TOL * scale:
            raise ExportError(
                "collapse operator is not a combination of single-atom lowering "
                f"operators (residual {resid:.3e})"
            )
        coeffs.append(c)

    gamma = np.zeros((n, n), dtype=complex)
    for c in coeffs:
        gamma += np.outer(c, c.conj())
    gamma = 0.5 * (gamma + gamma.conj().T)

    h = 0.5 * (g.hamiltonian + g.hamiltonian.conj().T)
    return LindbladModel(hamiltonian=h, gamma=gamma, lowering_ops=ops, dim=dim)
