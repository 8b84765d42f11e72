"""Atom-waveguide geometries and the collective coupling coefficients.

Connection points are stored as phase coordinates ``theta = k * x`` (radians),
since every coefficient depends only on phase differences ``k |x - x'|``.
All rates are expressed in units of the single-point decay rate ``gamma0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AtomSpec",
    "AtomLayout",
    "CouplingSet",
    "make_layout",
    "coupling_set",
    "GEOMETRY_KINDS",
]

GEOMETRY_KINDS = ("nested", "braided", "separated", "small")


def _snap_spacing(t: float) -> float:
    """Clear the two lowest mantissa bits of t (a <= 2 ulp change).

    Multiples 2t and 3t are then exact, so the phase differences of the named
    geometries are bitwise identical where they are equal as real numbers
    (e.g. braided/separated atoms get exactly equal Lamb shifts).
    """
    if t == 0.0:
        return 0.0
    m, e = math.frexp(t)
    return math.ldexp(round(m * 2**51) / 2**51, e)


@dataclass(frozen=True)
class AtomSpec:
    """One emitter and its waveguide connection points.

    Parameters
    ----------
    connection_phases : tuple of float
        Phase coordinate k*x of each connection point (radians).
    point_rates : tuple of float
        Decay rate of each connection point (units of gamma0), all > 0.
    bare_detuning : float
        Detuning of the atomic transition from the reference frequency
        (units of gamma0).
    """

    connection_phases: tuple[float, ...]
    point_rates: tuple[float, ...]
    bare_detuning: float = 0.0

    def __post_init__(self):
        phases = tuple(float(p) for p in self.connection_phases)
        rates = tuple(float(r) for r in self.point_rates)
        object.__setattr__(self, "connection_phases", phases)
        object.__setattr__(self, "point_rates", rates)
        object.__setattr__(self, "bare_detuning", float(self.bare_detuning))
        if len(phases) == 0:
            raise ValueError("atom needs at least one connection point")
        if len(phases) != len(rates):
            raise ValueError(
                f"{len(phases)} connection phases but {len(rates)} point rates"
            )
        if not all(math.isfinite(p) for p in phases):
            raise ValueError("connection phases must be finite")
        if not all(math.isfinite(r) and r > 0 for r in rates):
            raise ValueError("point rates must be finite and strictly positive")
        if not math.isfinite(self.bare_detuning):
            raise ValueError("bare detuning must be finite")

    @property
    def n_points(self) -> int:
        return len(self.connection_phases)


@dataclass(frozen=True)
class AtomLayout:
    """An ordered collection of atoms coupled to the same waveguide."""

    atoms: tuple[AtomSpec, ...]
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        if len(self.atoms) == 0:
            raise ValueError("layout needs at least one atom")

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class CouplingSet:
    """Waveguide-mediated coefficients of the master equation.

    Attributes
    ----------
    delta : ndarray, shape (N,)
        Per-atom Lamb shifts (units of gamma0).
    Delta : ndarray, shape (N, N)
        Coherent excitation-exchange matrix; symmetric, zero diagonal.
    Gamma : ndarray, shape (N, N)
        Collective decay matrix; symmetric, positive semidefinite.
    eps : ndarray, shape (N,)
        Bare detunings carried over from the layout.
    """

    delta: np.ndarray
    Delta: np.ndarray
    Gamma: np.ndarray
    eps: np.ndarray

    def __post_init__(self):
        for name in ("delta", "Delta", "Gamma", "eps"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        n = self.delta.shape[0]
        if self.Delta.shape != (n, n) or self.Gamma.shape != (n, n):
            raise ValueError("coefficient matrices must be N x N")
        if self.eps.shape != (n,):
            raise ValueError("eps must have one entry per atom")
        if not np.allclose(self.Delta, self.Delta.T, atol=1e-12, rtol=0):
            raise ValueError("Delta must be symmetric")
        if np.any(np.diag(self.Delta) != 0.0):
            raise ValueError("Delta must have an exactly zero diagonal")
        if not np.allclose(self.Gamma, self.Gamma.T, atol=1e-12, rtol=0):
            raise ValueError("Gamma must be symmetric")

    @property
    def n_atoms(self) -> int:
        return self.delta.shape[0]

    @property
    def shifted_detunings(self) -> np.ndarray:
        """Per-atom transition shifts delta_n + eps_n in the common frame."""
        return self.delta + self.eps


def make_layout(kind: str, spacing: float, gamma0: float = 1.0) -> AtomLayout:
    """Build one of the named two-atom geometries.

    Parameters
    ----------
    kind : {'nested', 'braided', 'separated', 'small'}
        Connection-point topology. With theta the phase spacing between
        neighbouring points: nested puts atom 1 at {0, 3*theta} and atom 2
        at {theta, 2*theta}; braided interleaves ({0, 2*theta} and
        {theta, 3*theta}); separated keeps them disjoint ({0, theta} and
        {2*theta, 3*theta}); small is two point-like emitters a distance
        theta apart.
    spacing : float
        Phase spacing k*dx between neighbouring connection points (radians),
        >= 0.
    gamma0 : float
        Decay rate of every connection point.
    """
    if not math.isfinite(spacing):
        raise ValueError("spacing must be finite")
    if spacing < 0:
        raise ValueError("spacing must be >= 0")
    if not (math.isfinite(gamma0) and gamma0 > 0):
        raise ValueError("gamma0 must be finite and > 0")
    t = _snap_spacing(float(spacing))
    if kind == "nested":
        phases = ((0.0, 3 * t), (t, 2 * t))
    elif kind == "braided":
        phases = ((0.0, 2 * t), (t, 3 * t))
    elif kind == "separated":
        phases = ((0.0, t), (2 * t, 3 * t))
    elif kind == "small":
        phases = ((0.0,), (t,))
    else:
        raise ValueError(f"unknown geometry kind {kind!r}; expected one of {GEOMETRY_KINDS}")
    atoms = tuple(
        AtomSpec(connection_phases=p, point_rates=(gamma0,) * len(p)) for p in phases
    )
    return AtomLayout(atoms=atoms, name=kind)


def coupling_set(layout: AtomLayout) -> CouplingSet:
    """Compute Lamb shifts, exchange and decay matrices by direct summation.

    For atoms j, n with connection phases theta_l, theta_m and point rates
    gamma_l, gamma_m, with phi = |theta_l - theta_m|:

        Gamma_jn = sum_lm sqrt(gamma_l gamma_m) cos(phi)
        Delta_jn = (1/2) sum_lm sqrt(gamma_l gamma_m) sin(phi)   (j != n)
        delta_j  = (1/2) sum_lm sqrt(gamma_l gamma_m) sin(phi)   (within atom j)
    """
    n = layout.n_atoms
    delta = np.zeros(n)
    Delta = np.zeros((n, n))
    Gamma = np.zeros((n, n))
    eps = np.array([a.bare_detuning for a in layout.atoms])

    phases = [np.asarray(a.connection_phases) for a in layout.atoms]
    roots = [np.sqrt(np.asarray(a.point_rates)) for a in layout.atoms]

    for j in range(n):
        for k in range(j, n):
            phi = np.abs(phases[j][:, None] - phases[k][None, :])
            w = roots[j][:, None] * roots[k][None, :]
            cos_sum = float(np.sum(w * np.cos(phi)))
            sin_sum = 0.5 * float(np.sum(w * np.sin(phi)))
            Gamma[j, k] = Gamma[k, j] = cos_sum
            if j == k:
                delta[j] = sin_sum
            else:
                Delta[j, k] = Delta[k, j] = sin_sum

    return CouplingSet(delta=delta, Delta=Delta, Gamma=Gamma, eps=eps)
