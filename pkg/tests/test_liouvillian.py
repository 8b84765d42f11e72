import numpy as np
import pytest

from wqed.errors import ModelConstructionError
from wqed.layout import AtomLayout, AtomSpec, CouplingSet, coupling_set, make_layout
from wqed.liouvillian import (
    DriveSpec,
    LindbladModel,
    apply_liouvillian,
    bell_state,
    build_model,
    check_density_matrix,
    hamiltonian_is_sector_mixing,
    ket,
    lowering_operators,
    pure_density,
    superoperator,
    unvec,
    vec,
)
from wqed.spectral import dressed_states, transition_rates


def rand_density(rng, dim=4):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def single_atom_coupling(gamma0=1.0):
    atom = AtomSpec(connection_phases=(0.0,), point_rates=(gamma0,))
    return coupling_set(AtomLayout(atoms=(atom,), name="one"))


def test_basis_ordering():
    assert np.argmax(np.abs(ket("gg"))) == 0
    assert np.argmax(np.abs(ket("ge"))) == 1
    assert np.argmax(np.abs(ket("eg"))) == 2
    assert np.argmax(np.abs(ket("ee"))) == 3
    sm = lowering_operators(2)
    # sigma_1^- maps |eg> -> |gg>, annihilates |ge>
    assert np.allclose(sm[0] @ ket("eg"), ket("gg"))
    assert np.allclose(sm[0] @ ket("ge"), 0.0)
    assert np.allclose(sm[1] @ ket("ge"), ket("gg"))
    assert np.allclose(sm[1] @ ket("ee"), ket("eg"))


def test_build_model_nested_half_pi_structure():
    cs = coupling_set(make_layout("nested", np.pi / 2))
    model = build_model(cs, DriveSpec())
    h = model.hamiltonian
    # diagonal from delta = (-1, +1): |ge> carries delta_2, |eg> carries delta_1
    assert np.allclose(np.diag(h), [0.0, 1.0, -1.0, 0.0], atol=1e-12)
    assert abs(h[1, 2] - 1.0) < 1e-12  # Delta_12 between |ge> and |eg>
    assert abs(h[2, 1] - 1.0) < 1e-12
    assert abs(h[0, 3]) == 0.0


def test_build_model_single_atom():
    cs = single_atom_coupling()
    model = build_model(cs, DriveSpec(rabi=0.0, detuning=0.7))
    assert np.allclose(model.hamiltonian, np.diag([0.0, 0.7]), atol=1e-15)
    assert np.allclose(model.gamma, [[1.0]])


def test_build_model_dicke_limit():
    cs = coupling_set(make_layout("small", 0.0))
    model = build_model(cs, DriveSpec(rabi=0.9))
    assert np.allclose(model.gamma, np.ones((2, 2)))
    assert hamiltonian_is_sector_mixing(model)


def test_build_model_drive_convention():
    # rabi is the full Rabi frequency: H_ext = (rabi/2)(sp + sm) per atom
    cs = single_atom_coupling()
    model = build_model(cs, DriveSpec(rabi=1.2))
    assert abs(model.hamiltonian[0, 1] - 0.6) < 1e-15


def test_build_model_rejects_non_psd_gamma():
    bad = CouplingSet(
        delta=np.zeros(2),
        Delta=np.zeros((2, 2)),
        Gamma=np.array([[1.0, 2.0], [2.0, 1.0]]),  # eigenvalue -1
        eps=np.zeros(2),
    )
    with pytest.raises(ModelConstructionError, match="eigenvalue"):
        build_model(bad, DriveSpec())


def test_apply_liouvillian_trace_free_and_hermitian():
    rng = np.random.default_rng(7)
    cs = coupling_set(make_layout("nested", 0.4))
    model = build_model(cs, DriveSpec(rabi=1.1, detuning=-0.2))
    for _ in range(20):
        rho = rand_density(rng)
        drho = apply_liouvillian(model, rho)
        assert abs(np.trace(drho)) < 1e-12
        assert np.max(np.abs(drho - drho.conj().T)) < 1e-12


def test_apply_liouvillian_single_atom_decay():
    model = build_model(single_atom_coupling(), DriveSpec())
    rho = np.diag([0.0, 1.0]).astype(complex)
    drho = apply_liouvillian(model, rho)
    assert abs(drho[1, 1] + 1.0) < 1e-12
    assert abs(drho[0, 0] - 1.0) < 1e-12


def test_apply_liouvillian_ground_gain_matches_rate_formula():
    # the ground-state gain from |psi_-><psi_-| equals the closed-form rate
    cs = coupling_set(make_layout("nested", 0.01 * np.pi))
    model = build_model(cs, DriveSpec())
    psi = dressed_states(cs).full_ket("minus")
    drho = apply_liouvillian(model, pure_density(psi))
    gain = np.real(drho[0, 0])
    assert abs(gain - transition_rates(cs).gamma_minus_g) < 1e-10


def test_apply_liouvillian_dimension_mismatch():
    model = build_model(coupling_set(make_layout("nested", 0.3)), DriveSpec())
    with pytest.raises(ValueError):
        apply_liouvillian(model, np.eye(2))


def test_superoperator_consistent_with_direct_action():
    rng = np.random.default_rng(11)
    cs = coupling_set(make_layout("braided", 0.9))
    model = build_model(cs, DriveSpec(rabi=0.8, detuning=0.1))
    sup = superoperator(model)
    for _ in range(100):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = a + a.conj().T
        direct = apply_liouvillian(model, rho)
        via_sup = unvec(sup @ vec(rho), 4)
        assert np.max(np.abs(direct - via_sup)) < 1e-12


def test_superoperator_single_atom_entries():
    model = build_model(single_atom_coupling(), DriveSpec())
    sup = superoperator(model)
    v = sup @ vec(np.diag([0.0, 1.0]).astype(complex))
    drho = unvec(v, 2)
    assert abs(drho[1, 1] + 1.0) < 1e-14


def test_superoperator_closed_system_spectrum():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = a + a.conj().T
    model = LindbladModel(
        hamiltonian=h, gamma=np.zeros((2, 2)), lowering_ops=lowering_operators(2), dim=4
    )
    evals = np.linalg.eigvals(superoperator(model))
    assert np.max(np.abs(evals.real)) < 1e-10


def test_superoperator_dimension_cap():
    n = 7
    model = LindbladModel(
        hamiltonian=np.zeros((2**n, 2**n)),
        gamma=np.zeros((n, n)),
        lowering_ops=lowering_operators(n),
        dim=2**n,
    )
    with pytest.raises(ValueError, match="capped"):
        superoperator(model)


def test_liouvillian_spectrum_properties():
    rng = np.random.default_rng(5)
    for theta in rng.uniform(0.05, 3.0, size=8):
        model = build_model(coupling_set(make_layout("nested", theta)), DriveSpec(rabi=0.7))
        evals = np.linalg.eigvals(superoperator(model))
        assert np.max(evals.real) < 1e-10
        assert np.min(np.abs(evals)) < 1e-10  # a stationary mode exists


def test_ground_state_stationary_without_drive():
    for theta in (0.2, 1.0, 2.5):
        model = build_model(coupling_set(make_layout("separated", theta)), DriveSpec())
        sup = superoperator(model)
        v = vec(pure_density(ket("gg")))
        assert np.max(np.abs(sup @ v)) < 1e-12


def test_check_density_matrix():
    check_density_matrix(pure_density(bell_state()))
    with pytest.raises(ValueError, match="trace"):
        check_density_matrix(2.0 * pure_density(ket("gg")))
    with pytest.raises(ValueError, match="Hermitian"):
        rho = pure_density(ket("gg")).astype(complex)
        rho[0, 1] = 0.5
        check_density_matrix(rho)
    with pytest.raises(ValueError, match="eigenvalue"):
        rho = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
        check_density_matrix(rho)


def test_drive_spec_validation():
    with pytest.raises(ValueError):
        DriveSpec(rabi=-1.0)
    with pytest.raises(ValueError):
        DriveSpec(rabi=np.nan)
