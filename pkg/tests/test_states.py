import json
import math

import numpy as np
import pytest

from bellalg.algebra import lam
from bellalg.states import (
    MixedState,
    PureState,
    StateError,
    abmax_state,
    expectation,
    maxent_state,
    phi_state,
    printed_w_vector,
    random_pure,
    state_from_json,
    w_table_discrepancies,
    w_vector,
)

from conftest import S2, basis, vec


def w_expected(nonzero):
    w = np.zeros(15)
    for j, v in nonzero.items():
        w[j - 1] = v
    return w


def test_expectation_basics():
    psi = random_pure(3)
    assert abs(expectation(psi, np.eye(4)) - 1) < 1e-12
    assert expectation(basis(1), lam(3)) == 1
    mixed = MixedState(np.eye(4) / 4)
    assert abs(expectation(mixed, np.eye(4)) - 1) < 1e-15
    for j in range(1, 16):
        assert expectation(mixed, lam(j)) == 0


def test_expectation_linear_and_conjugate_symmetric(rng):
    psi = random_pure(rng)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    b = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert abs(expectation(psi, a + 3j * b) - expectation(psi, a) - 3j * expectation(psi, b)) < 1e-12
    assert abs(expectation(psi, a.conj().T) - np.conj(expectation(psi, a))) < 1e-12


def test_expectation_hermitian_is_real(random_states):
    h = lam(2) + 0.3 * lam(8) - lam(14)
    for psi in random_states[:100]:
        assert abs(expectation(psi, h).imag) <= 1e-12


def test_w_vector_examples():
    np.testing.assert_allclose(w_vector(basis(1)), w_expected({3: 1, 6: 1, 15: 1}), atol=1e-15)
    np.testing.assert_allclose(w_vector(vec(S2, S2, 0, 0)), w_expected({1: 1, 6: 1, 13: 1}), atol=1e-15)
    np.testing.assert_allclose(w_vector(phi_state(1.0)), w_expected({7: 1, 11: 1, 15: -1}), atol=1e-15)


def test_w_vector_matches_matrix_expectation(random_states):
    for psi in random_states:
        direct = np.array([expectation(psi, lam(j)).real for j in range(1, 16)])
        np.testing.assert_allclose(w_vector(psi), direct, rtol=0, atol=1e-12)
        assert np.all(np.abs(w_vector(psi)) <= 1 + 1e-12)


def test_printed_w_table_sign_discrepancies(random_states):
    # the verbatim published table is off by a sign in exactly these entries
    assert w_table_discrepancies(random_states[:50]) == {5, 8, 10, 12, 14}
    psi = random_states[0]
    flip = np.ones(15)
    flip[[4, 7, 9, 11, 13]] = -1
    np.testing.assert_allclose(printed_w_vector(psi) * flip, w_vector(psi), atol=1e-12)


def test_global_phase_invariance(random_states):
    psi = random_states[1]
    rotated = PureState(psi.amplitudes * np.exp(0.77j))
    np.testing.assert_allclose(w_vector(rotated), w_vector(psi), atol=1e-14)


def test_phi_state():
    np.testing.assert_allclose(phi_state(0).z, [0, 0, 1, 0], atol=0)
    np.testing.assert_allclose(phi_state(1).z, [0, S2, S2, 0], atol=1e-15)
    np.testing.assert_allclose(phi_state(0.6).z, [0, math.sqrt(0.1), math.sqrt(0.9), 0], atol=1e-15)
    with pytest.raises(ValueError):
        phi_state(1.2)
    with pytest.raises(ValueError):
        phi_state(-0.1)


def test_maxent_state():
    np.testing.assert_allclose(maxent_state(1, 0, 0).z, [S2, 0, 0, -S2], atol=1e-15)
    np.testing.assert_allclose(maxent_state(S2, 0, math.pi / 2).z,
                               np.array([1, 1, 1j, -1j]) / 2, atol=1e-15)
    f, t = 0.4, 2.2
    np.testing.assert_allclose(maxent_state(0, f, t).z,
                               [0, S2 * np.exp(1j * f), S2 * np.exp(1j * t), 0], atol=1e-15)
    with pytest.raises(ValueError):
        maxent_state(0.5, 7.0, 0)


def test_abmax_state(rng):
    np.testing.assert_allclose(abmax_state(1, math.pi / 2, 0).z, [0, 0, 1, 0], atol=1e-15)
    np.testing.assert_allclose(abmax_state(0, 0.3, 0).z, [0, 0, 0, 1j], atol=1e-15)
    for _ in range(100):
        r, f, t = rng.uniform([0, 0, 0], [1, math.pi / 2, 2 * math.pi])
        assert abs(np.linalg.norm(abmax_state(r, f, t).z) - 1) <= 1e-12
    with pytest.raises(ValueError):
        abmax_state(0.5, 2.0, 0)


def test_random_pure():
    a, b = random_pure(11), random_pure(11)
    np.testing.assert_array_equal(a.z, b.z)
    assert abs(np.linalg.norm(a.z) - 1) < 1e-12
    rng = np.random.default_rng(5)
    mean = np.mean([abs(random_pure(rng).z[0]) ** 2 for _ in range(10_000)])
    assert abs(mean - 0.25) <= 0.02


def test_pure_state_invariants():
    with pytest.raises(StateError, match="normalization"):
        PureState([1, 1, 0, 0])
    with pytest.raises(StateError):
        PureState([1, 0, 0])


def test_mixed_state_invariants():
    with pytest.raises(StateError, match="trace"):
        MixedState(np.eye(4))
    with pytest.raises(StateError, match="hermitian"):
        MixedState(np.diag([1, 0, 0, 0]) + 0.1j * np.eye(4, k=1))
    with pytest.raises(StateError, match="positive"):
        MixedState(np.diag([1.5, -0.5, 0, 0]))


def test_json_roundtrip():
    psi = random_pure(4)
    back = state_from_json(json.loads(json.dumps(psi.to_json())))
    np.testing.assert_array_equal(back.z, psi.z)
    rho = MixedState(np.diag([0.5, 0.25, 0.25, 0]))
    back = state_from_json(rho.to_json())
    np.testing.assert_array_equal(back.rho, rho.rho)


@pytest.mark.parametrize("obj, msg", [
    ({"re": [1, 0, 0]}, "'re'"),
    ({"re": [1, 0, 0, 0]}, "'im'"),
    ({"re": [1, 0, 0, "x"], "im": [0, 0, 0, 0]}, "not numeric"),
    ({"re": [1, 1, 0, 0], "im": [0, 0, 0, 0]}, "normalization"),
    ({"rho_re": np.eye(4).tolist(), "rho_im": np.zeros((4, 4)).tolist()}, "trace"),
])
def test_json_rejects(obj, msg):
    with pytest.raises(StateError, match=msg):
        state_from_json(obj)
