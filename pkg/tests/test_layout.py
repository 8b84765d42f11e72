import numpy as np
import pytest

from wqed.layout import AtomLayout, AtomSpec, coupling_set, make_layout


def test_make_layout_patterns():
    t = 0.37
    lay = make_layout("nested", t)
    assert np.allclose(lay.atoms[0].connection_phases, (0.0, 3 * t), atol=1e-12)
    assert np.allclose(lay.atoms[1].connection_phases, (t, 2 * t), atol=1e-12)

    lay = make_layout("braided", np.pi / 2)
    assert np.allclose(lay.atoms[0].connection_phases, (0.0, np.pi), atol=1e-12)
    assert np.allclose(lay.atoms[1].connection_phases, (np.pi / 2, 1.5 * np.pi), atol=1e-12)

    lay = make_layout("separated", t)
    assert np.allclose(lay.atoms[0].connection_phases, (0.0, t), atol=1e-12)
    assert np.allclose(lay.atoms[1].connection_phases, (2 * t, 3 * t), atol=1e-12)

    lay = make_layout("small", 0.0)
    assert lay.atoms[0].connection_phases == (0.0,)
    assert lay.atoms[1].connection_phases == (0.0,)

    lay = make_layout("nested", t, gamma0=2.5)
    assert lay.atoms[0].point_rates == (2.5, 2.5)


def test_make_layout_rejects_bad_input():
    with pytest.raises(ValueError):
        make_layout("ring", 0.1)
    with pytest.raises(ValueError):
        make_layout("nested", -0.1)
    with pytest.raises(ValueError):
        make_layout("nested", np.inf)
    with pytest.raises(ValueError):
        make_layout("nested", 0.1, gamma0=0.0)


def test_atom_spec_validation():
    with pytest.raises(ValueError):
        AtomSpec(connection_phases=(), point_rates=())
    with pytest.raises(ValueError):
        AtomSpec(connection_phases=(0.0, 1.0), point_rates=(1.0,))
    with pytest.raises(ValueError):
        AtomSpec(connection_phases=(0.0,), point_rates=(-1.0,))
    with pytest.raises(ValueError):
        AtomLayout(atoms=())


def test_coupling_nested_half_pi():
    cs = coupling_set(make_layout("nested", np.pi / 2))
    assert np.allclose(cs.delta, [-1.0, 1.0], atol=1e-12)
    assert abs(cs.Delta[0, 1] - 1.0) < 1e-12
    assert np.allclose(cs.Gamma, [[2.0, -2.0], [-2.0, 2.0]], atol=1e-12)


@pytest.mark.parametrize("theta", np.linspace(0.05, 3.1, 23))
def test_coupling_nested_closed_forms(theta):
    # independent trig closed forms for the nested pattern with unit rates
    cs = coupling_set(make_layout("nested", theta))
    assert abs(cs.Gamma[0, 0] - 2 * (1 + np.cos(3 * theta))) < 1e-12
    assert abs(cs.Gamma[1, 1] - 2 * (1 + np.cos(theta))) < 1e-12
    assert abs(cs.Gamma[0, 1] - 2 * (np.cos(theta) + np.cos(2 * theta))) < 1e-12
    assert abs(cs.Delta[0, 1] - (np.sin(theta) + np.sin(2 * theta))) < 1e-12
    assert abs(cs.delta[0] - np.sin(3 * theta)) < 1e-12
    assert abs(cs.delta[1] - np.sin(theta)) < 1e-12


def test_coupling_small_atoms():
    theta = 0.8
    cs = coupling_set(make_layout("small", theta))
    assert abs(cs.Gamma[0, 0] - 1.0) < 1e-15
    assert abs(cs.Gamma[1, 1] - 1.0) < 1e-15
    assert abs(cs.Gamma[0, 1] - np.cos(theta)) < 1e-15
    assert abs(cs.Delta[0, 1] - 0.5 * np.sin(theta)) < 1e-15
    assert np.all(cs.delta == 0.0)


def test_coupling_nested_pi_fully_dark():
    cs = coupling_set(make_layout("nested", np.pi))
    assert np.max(np.abs(cs.Gamma)) < 1e-12
    assert np.max(np.abs(cs.Delta)) < 1e-12
    assert np.max(np.abs(cs.delta)) < 1e-12


def test_coupling_zero_spacing_dicke():
    for kind, pair_count in (("nested", 4), ("braided", 4), ("small", 1)):
        cs = coupling_set(make_layout(kind, 0.0))
        assert np.allclose(cs.Gamma, pair_count, atol=1e-15)
        assert np.max(np.abs(cs.Delta)) == 0.0
        assert np.max(np.abs(cs.delta)) == 0.0


def test_gamma_positive_semidefinite_on_grid():
    for kind in ("nested", "braided", "separated", "small"):
        for theta in np.linspace(0.0, 2 * np.pi, 250):
            g = coupling_set(make_layout(kind, theta)).Gamma
            scale = max(np.max(np.diag(g)), 1.0)
            assert np.linalg.eigvalsh(g)[0] >= -1e-10 * scale


def test_nested_gamma_rank_deficient():
    # equal point rates give both atoms the same collective phase, so the
    # decay matrix is an outer product with zero determinant
    for theta in np.linspace(0.0, np.pi, 1000):
        g = coupling_set(make_layout("nested", theta)).Gamma
        assert abs(np.linalg.det(g)) < 1e-12


def test_nested_small_spacing_asymptotics():
    theta = 1e-3
    cs = coupling_set(make_layout("nested", theta))
    d12 = cs.delta[0] - cs.delta[1]
    big = cs.Delta[0, 1]
    assert abs(d12 / (2 * theta) - 1) < 1e-3
    assert abs(big / (3 * theta) - 1) < 1e-3
    dtilde = np.hypot(2 * big, d12)
    assert abs(dtilde / (2 * np.sqrt(10) * theta) - 1) < 1e-3


def test_braided_separated_equal_lamb_shifts():
    for kind in ("braided", "separated"):
        for theta in np.linspace(1e-4, 3.14, 211):
            cs = coupling_set(make_layout(kind, theta))
            assert cs.delta[0] == cs.delta[1]


def test_coefficients_periodic_in_spacing():
    for kind in ("nested", "small"):
        for theta in (0.3, 1.1, 2.7):
            a = coupling_set(make_layout(kind, theta))
            b = coupling_set(make_layout(kind, theta + 2 * np.pi))
            assert np.allclose(a.Gamma, b.Gamma, atol=1e-9)
            assert np.allclose(a.Delta, b.Delta, atol=1e-9)
            assert np.allclose(a.delta, b.delta, atol=1e-9)


def test_custom_layout_point_rates():
    # asymmetric rates enter through sqrt(gamma_l gamma_m)
    atom1 = AtomSpec(connection_phases=(0.0, 1.0), point_rates=(1.0, 4.0))
    atom2 = AtomSpec(connection_phases=(0.5,), point_rates=(9.0,))
    cs = coupling_set(AtomLayout(atoms=(atom1, atom2)))
    g11 = 1.0 + 4.0 + 2 * 2.0 * np.cos(1.0)
    g12 = 3.0 * np.cos(0.5) + 6.0 * np.cos(0.5)
    assert abs(cs.Gamma[0, 0] - g11) < 1e-12
    assert abs(cs.Gamma[0, 1] - g12) < 1e-12
    assert abs(cs.delta[0] - 2.0 * np.sin(1.0)) < 1e-12
    assert abs(cs.Delta[0, 1] - 0.5 * (3.0 + 6.0) * np.sin(0.5)) < 1e-12
