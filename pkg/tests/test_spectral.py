import numpy as np
import pytest

from wqed.errors import DegeneracyError
from wqed.layout import AtomLayout, AtomSpec, coupling_set, make_layout
from wqed.liouvillian import DriveSpec, build_model, ket, superoperator
from wqed.spectral import (
    dressed_states,
    drive_couplings,
    extract_rate,
    liouvillian_spectrum,
    transition_rates,
)

ROOT2 = np.sqrt(2.0)


def test_dressed_states_small_atoms_symmetric_pair():
    cs = coupling_set(make_layout("small", 0.6))
    dp = dressed_states(cs)
    assert np.allclose(dp.psi_plus, [1 / ROOT2, 1 / ROOT2], atol=1e-12)
    assert np.allclose(dp.psi_minus, [-1 / ROOT2, 1 / ROOT2], atol=1e-12)
    # psi_minus is the singlet (|ge> - |eg>)/sqrt(2) up to the fixed sign
    assert abs(dp.energy_plus - dp.energy_minus - dp.delta_tilde) < 1e-12


def test_dressed_states_nested_half_pi():
    cs = coupling_set(make_layout("nested", np.pi / 2))
    dp = dressed_states(cs)
    assert abs(dp.delta_tilde - 2 * ROOT2) < 1e-12
    a_plus = -2 + 2 * ROOT2
    a_minus = -2 - 2 * ROOT2
    expect_p = np.array([a_plus, 2.0]) / np.sqrt(4 + a_plus**2)
    expect_m = np.array([a_minus, 2.0]) / np.sqrt(4 + a_minus**2)
    assert np.allclose(dp.psi_plus, expect_p, atol=1e-12)
    assert np.allclose(dp.psi_minus, expect_m, atol=1e-12)


def test_dressed_states_orthonormal_and_diagonalizing():
    # cross-check against numpy's eigendecomposition of the 2x2 block
    for theta in np.linspace(0.08, 3.0, 41):
        cs = coupling_set(make_layout("nested", theta))
        dp = dressed_states(cs)
        for psi in (dp.psi_plus, dp.psi_minus):
            assert abs(np.linalg.norm(psi) - 1.0) < 1e-12
        assert abs(np.vdot(dp.psi_plus, dp.psi_minus)) < 1e-12
        w = cs.shifted_detunings
        block = np.array([[w[0], cs.Delta[0, 1]], [cs.Delta[0, 1], w[1]]])
        for energy, psi in (
            (dp.energy_plus, dp.psi_plus),
            (dp.energy_minus, dp.psi_minus),
        ):
            assert np.max(np.abs(block @ psi - energy * psi)) < 1e-11
        off = np.vdot(dp.psi_plus, block @ dp.psi_minus)
        assert abs(off) < 1e-12


def test_dressed_states_small_spacing_gap():
    theta = 1e-3
    dp = dressed_states(coupling_set(make_layout("nested", theta)))
    assert abs(dp.delta_tilde / theta - 2 * np.sqrt(10)) < 2e-3


def test_dressed_states_exchange_free_limit():
    # Delta_12 = 0 with distinct shifts: bare states ordered by energy
    atoms = (
        AtomSpec(connection_phases=(0.0,), point_rates=(1.0,), bare_detuning=0.5),
        AtomSpec(connection_phases=(0.0,), point_rates=(1.0,), bare_detuning=-0.5),
    )
    cs = coupling_set(AtomLayout(atoms=atoms))
    cs = cs.__class__(delta=cs.delta, Delta=np.zeros((2, 2)), Gamma=cs.Gamma, eps=cs.eps)
    dp = dressed_states(cs)
    assert np.allclose(dp.psi_plus, [1.0, 0.0])
    assert np.allclose(dp.psi_minus, [0.0, 1.0])


def test_dressed_states_degenerate_error():
    with pytest.raises(DegeneracyError):
        dressed_states(coupling_set(make_layout("small", 0.0)))


def test_transition_rates_nested_half_pi():
    rq = transition_rates(coupling_set(make_layout("nested", np.pi / 2)))
    assert abs(rq.gamma_e_plus - (2 - ROOT2)) < 1e-12
    assert abs(rq.gamma_plus_g - (2 - ROOT2)) < 1e-12
    assert abs(rq.gamma_e_minus - (2 + ROOT2)) < 1e-12
    assert abs(rq.gamma_minus_g - (2 + ROOT2)) < 1e-12


def test_transition_rates_nested_small_spacing():
    rq = transition_rates(coupling_set(make_layout("nested", 0.01 * np.pi)))
    assert abs(rq.gamma_minus_g - 0.2056) < 5e-4


def test_transition_rates_sum_rules_and_positivity():
    for kind in ("nested", "braided", "separated", "small"):
        for theta in np.linspace(0.03, 3.1, 60):
            cs = coupling_set(make_layout(kind, theta))
            rq = transition_rates(cs)
            total = cs.Gamma[0, 0] + cs.Gamma[1, 1]
            assert abs(rq.gamma_e_plus + rq.gamma_e_minus - total) < 1e-10
            assert abs(rq.gamma_plus_g + rq.gamma_minus_g - total) < 1e-10
            for rate in (rq.gamma_e_plus, rq.gamma_e_minus, rq.gamma_plus_g, rq.gamma_minus_g):
                assert rate >= -1e-10
            # cross-channel identity from the closed forms
            assert abs((rq.gamma_e_plus - rq.gamma_minus_g) - rq.xi / rq.delta_tilde) < 1e-10
            assert abs((rq.gamma_plus_g - rq.gamma_e_minus) - rq.xi / rq.delta_tilde) < 1e-10


def test_transition_rates_small_atom_branch_symmetry():
    for theta in np.linspace(0.05, 3.1, 40):
        cs = coupling_set(make_layout("small", theta))
        rq = transition_rates(cs)
        g = cs.Gamma[0, 0]
        g12 = cs.Gamma[0, 1]
        sign = np.sign(cs.Delta[0, 1])
        assert abs(rq.gamma_e_plus - rq.gamma_plus_g) < 1e-12
        assert abs(rq.gamma_e_minus - rq.gamma_minus_g) < 1e-12
        assert abs(rq.gamma_e_plus - (g + g12 * sign)) < 1e-10
        assert abs(rq.gamma_e_minus - (g - g12 * sign)) < 1e-10


def test_extract_rate_trivial_channels():
    cs = coupling_set(make_layout("nested", 0.7))
    model = build_model(cs, DriveSpec())
    assert abs(extract_rate(model, ket("gg"), ket("gg"))) < 1e-14
    assert abs(extract_rate(model, ket("ee"), ket("gg"))) < 1e-14


def test_extract_rate_nested_half_pi_value():
    cs = coupling_set(make_layout("nested", np.pi / 2))
    model = build_model(cs, DriveSpec())
    psi_m = dressed_states(cs).full_ket("minus")
    assert abs(extract_rate(model, psi_m, ket("gg")) - (2 + ROOT2)) < 1e-10


def test_extract_rate_agrees_with_closed_forms():
    rng = np.random.default_rng(42)
    for theta in rng.uniform(0.01, np.pi - 0.01, size=100):
        cs = coupling_set(make_layout("nested", theta))
        model = build_model(cs, DriveSpec())
        rq = transition_rates(cs)
        dp = dressed_states(cs)
        plus, minus = dp.full_ket("plus"), dp.full_ket("minus")
        assert abs(extract_rate(model, ket("ee"), plus) - rq.gamma_e_plus) < 1e-10
        assert abs(extract_rate(model, ket("ee"), minus) - rq.gamma_e_minus) < 1e-10
        assert abs(extract_rate(model, plus, ket("gg")) - rq.gamma_plus_g) < 1e-10
        assert abs(extract_rate(model, minus, ket("gg")) - rq.gamma_minus_g) < 1e-10


def test_extract_rate_refuses_driven_model():
    cs = coupling_set(make_layout("nested", 0.5))
    model = build_model(cs, DriveSpec(rabi=1.0))
    with pytest.raises(ValueError, match="driven"):
        extract_rate(model, ket("ee"), ket("gg"))


def test_extract_rate_requires_normalized_states():
    cs = coupling_set(make_layout("nested", 0.5))
    model = build_model(cs, DriveSpec())
    with pytest.raises(ValueError, match="normalized"):
        extract_rate(model, 2.0 * ket("ee"), ket("gg"))


def test_drive_couplings_symmetric_case():
    omega_p, omega_m = drive_couplings(0.0, 0.7, rabi=1.3)
    assert omega_m == 0.0
    assert abs(omega_p - ROOT2 * 1.3) < 1e-12


def test_drive_couplings_nested_half_pi():
    omega_p, omega_m = drive_couplings(-2.0, 1.0, rabi=1.0)
    assert abs(omega_p - 1.3065629648763766) < 1e-12
    assert abs(omega_m - (-0.5411961001461969)) < 1e-12


def test_drive_couplings_match_overlap_oracle():
    # Omega_+- = Omega_0 <psi_+-| (|eg> + |ge>) for every geometry
    for kind in ("nested", "braided", "separated", "small"):
        for theta in np.linspace(0.07, 3.0, 25):
            cs = coupling_set(make_layout(kind, theta))
            d12 = cs.delta[0] - cs.delta[1]
            dp = dressed_states(cs)
            omega_p, omega_m = drive_couplings(d12, cs.Delta[0, 1], rabi=1.0)
            v = np.array([1.0, 1.0])
            assert abs(omega_p - np.real(dp.psi_plus.conj() @ v)) < 1e-10
            assert abs(omega_m - np.real(dp.psi_minus.conj() @ v)) < 1e-10


def test_drive_couplings_completeness():
    rng = np.random.default_rng(9)
    for _ in range(200):
        d12 = rng.normal() * 3
        big = rng.normal() * 3
        if big == 0 and d12 == 0:
            continue
        omega_p, omega_m = drive_couplings(d12, big, rabi=1.0)
        assert abs(omega_p**2 + omega_m**2 - 2.0) < 1e-10


def test_drive_couplings_large_shift_limit():
    omega_p, omega_m = drive_couplings(1e8, 1.0, rabi=1.0)
    assert abs(abs(omega_p) - 1.0) < 1e-6
    assert abs(abs(omega_m) - 1.0) < 1e-6


def test_drive_couplings_degenerate_error():
    with pytest.raises(DegeneracyError):
        drive_couplings(0.0, 0.0, rabi=1.0)


def test_liouvillian_spectrum_single_atom():
    atom = AtomSpec(connection_phases=(0.0,), point_rates=(1.0,))
    cs = coupling_set(AtomLayout(atoms=(atom,)))
    sup = superoperator(build_model(cs, DriveSpec()))
    evals = liouvillian_spectrum(sup)
    assert np.allclose(sorted(evals.real), [-1.0, -0.5, -0.5, 0.0], atol=1e-12)
    assert np.max(np.abs(evals.imag)) < 1e-12


def test_liouvillian_spectrum_subradiant_gap():
    cs = coupling_set(make_layout("nested", 0.01 * np.pi))
    evals = liouvillian_spectrum(superoperator(build_model(cs, DriveSpec())))
    nonzero = evals.real[np.abs(evals.real) > 1e-12]
    slowest = -np.max(nonzero)
    assert slowest < 0.01  # deep subradiant mode
    assert 1.0 / slowest > 100.0


def test_liouvillian_spectrum_dicke_dark_state():
    cs = coupling_set(make_layout("small", 0.0))
    evals = liouvillian_spectrum(superoperator(build_model(cs, DriveSpec())))
    assert np.sum(np.abs(evals) < 1e-12) >= 2  # ground state plus dark singlet
