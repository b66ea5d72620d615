import numpy as np
import pytest
from numpy.testing import assert_allclose

from jcmsim.dephasing import apply_atom_rotation, rotation_angle
from jcmsim.states import StateVector, basis_state

K = 5
DIM = 2 * (K + 1)


def random_unit_state(rng):
    amp = rng.normal(size=DIM) + 1j * rng.normal(size=DIM)
    return StateVector(amp / np.linalg.norm(amp), K)


def rotation_matrix(theta):
    """Dense matrix of the rotation, columns = images of basis vectors."""
    cols = []
    for i in range(DIM):
        amp = np.zeros(DIM, dtype=complex)
        amp[i] = 1.0
        cols.append(apply_atom_rotation(StateVector(amp, K), theta).amplitudes)
    return np.array(cols).T


def test_zero_angle_is_identity():
    rng = np.random.default_rng(1)
    s = random_unit_state(rng)
    assert np.abs(apply_atom_rotation(s, 0.0).amplitudes - s.amplitudes).max() == 0.0


def test_quarter_turn_sends_g_to_minus_e():
    for k in range(K + 1):
        out = apply_atom_rotation(basis_state("g", k, K), np.pi / 2)
        assert abs(out.e[k] - (-1.0)) < 1e-15
        assert abs(out.g[k]) < 1e-15


def test_matrix_element_sign_pattern():
    # diagonal cos; <e,k|U'|g,l> = -sin * delta_kl; <g,k|U'|e,l> = +sin * delta_kl
    theta = 0.37
    mat = rotation_matrix(theta)
    c, s = np.cos(theta), np.sin(theta)
    expected = np.zeros((DIM, DIM))
    for k in range(K + 1):
        g, e = k, K + 1 + k
        expected[g, g] = c
        expected[e, e] = c
        expected[e, g] = -s
        expected[g, e] = s
    assert_allclose(mat, expected, atol=1e-15)


def test_exact_unitarity():
    rng = np.random.default_rng(2)
    for theta in rng.uniform(-10, 10, size=30):
        s = random_unit_state(rng)
        assert abs(apply_atom_rotation(s, theta).norm_sq() - 1.0) < 1e-15


def test_composition_adds_angles():
    rng = np.random.default_rng(3)
    s = random_unit_state(rng)
    a = apply_atom_rotation(apply_atom_rotation(s, 0.3), 1.1)
    b = apply_atom_rotation(s, 1.4)
    assert np.abs(a.amplitudes - b.amplitudes).max() < 1e-12


def test_full_turn_is_identity():
    rng = np.random.default_rng(4)
    s = random_unit_state(rng)
    out = apply_atom_rotation(s, 2 * np.pi)
    assert np.abs(out.amplitudes - s.amplitudes).max() < 1e-12


def test_photon_marginal_untouched():
    rng = np.random.default_rng(5)
    for _ in range(10):
        s = random_unit_state(rng)
        theta = rng.uniform(-np.pi, np.pi)
        out = apply_atom_rotation(s, theta)
        before = np.abs(s.g) ** 2 + np.abs(s.e) ** 2
        after = np.abs(out.g) ** 2 + np.abs(out.e) ** 2
        assert np.abs(before - after).max() < 1e-12


def test_rotation_angle_convention():
    assert rotation_angle(2.0, 3.0) == 3.0
    assert rotation_angle(1e-9, 100.0) == pytest.approx(5e-8)
