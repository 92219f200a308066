import math

import numpy as np
import pytest

from bellalg.bellpair import canonical_pair, paper_pair_ab, paper_pair_prime, transported_pair
from bellalg.correlation import (
    _jacobi_eigvals,
    brute_force_correlation,
    concurrence,
    concurrence_closed_form,
    correlation_at,
    correlation_matrix,
    kora_formula,
    printed_prime_agreement,
    spectral_norm,
    symmetric_eigvals3,
    top_singular_pair,
    total_correlation,
)
from bellalg.oracles import power_iteration_norm
from bellalg.states import MixedState, PureState, maxent_state, phi_state, random_pure
from bellalg.transport import apply_unitary, random_unitary

from conftest import S2, basis, vec


@pytest.mark.parametrize("c", [0.0, 0.3, 0.6, 1.0])
def test_phi_state_canonical_q(c):
    # omega(A3 B3) = -1 and omega(A3) = -omega(B3) = d, so q33 = -1 + d^2 = -c^2
    np.testing.assert_allclose(correlation_matrix(phi_state(c), canonical_pair()),
                               np.diag([c, c, -c * c]), atol=1e-12)
    assert abs(total_correlation(phi_state(c), canonical_pair()) - c) <= 1e-12


def test_paper_ab_basis_correlations():
    pair = paper_pair_ab()
    np.testing.assert_allclose(correlation_matrix(basis(4), pair), -np.eye(3), atol=1e-12)
    np.testing.assert_allclose(correlation_matrix(basis(3), pair), np.diag([1, 1, -1]), atol=1e-12)
    np.testing.assert_allclose(correlation_matrix(basis(1), pair), 0, atol=1e-12)
    assert abs(total_correlation(basis(3), pair) - 1) < 1e-12


def test_mixed_state_correlation_matrix():
    rho = MixedState(np.eye(4) / 4)
    np.testing.assert_allclose(correlation_matrix(rho, canonical_pair()), 0, atol=1e-15)
    bell = phi_state(1.0).density_matrix()
    mixed = MixedState(0.5 * bell + 0.5 * np.eye(4) / 4)
    np.testing.assert_allclose(correlation_matrix(mixed, canonical_pair()),
                               0.5 * correlation_matrix(phi_state(1.0), canonical_pair()), atol=1e-15)
    with pytest.raises(TypeError):
        total_correlation(mixed, canonical_pair())


def test_spectral_norm_examples():
    assert spectral_norm(np.zeros((3, 3))) == 0
    for c in (0.0, 0.25, 1.0):
        assert abs(spectral_norm(np.diag([c, c, -c])) - c) <= 1e-12 * max(c, 1)


def test_spectral_norm_vs_power_iteration(rng):
    for _ in range(200):
        q = rng.uniform(-1, 1, (3, 3))
        assert abs(spectral_norm(q) - power_iteration_norm(q)) <= 1e-9


@pytest.mark.parametrize("q", [
    np.diag([1.0, 1.0, 0.5]),
    np.diag([1.0, 0.5, 0.5]),
    np.diag([0.3, -0.3, 0.3]),
    np.diag([1.0, 1.0 - 1e-9, 0.2]),
    np.array([[1, 1e-8, 0], [0, 1, 0], [0, 0, 0.1]]),
    np.ones((3, 3)),
    np.diag([1e-200, 0, 0]),
    np.diag([1e200, 1, 0]),
])
def test_spectral_norm_degenerate(q):
    ref = np.linalg.svd(q, compute_uv=False)[0]
    assert abs(spectral_norm(q) - ref) <= 1e-12 * ref


def test_spectral_norm_relative_accuracy(rng):
    for _ in range(500):
        q = rng.standard_normal((3, 3)) * 10 ** rng.uniform(-6, 3)
        ref = np.linalg.svd(q, compute_uv=False)[0]
        assert abs(spectral_norm(q) - ref) <= 1e-12 * ref


def test_symmetric_eigvals_paths(rng):
    for _ in range(100):
        a = rng.standard_normal((3, 3))
        m = a + a.T
        ref = np.linalg.eigvalsh(m)
        np.testing.assert_allclose(symmetric_eigvals3(m), ref, atol=1e-12 * np.abs(ref).max())
        np.testing.assert_allclose(_jacobi_eigvals(m), ref, atol=1e-12 * np.abs(ref).max())


def test_spectral_norm_rejects():
    with pytest.raises(ValueError):
        spectral_norm(np.full((3, 3), np.nan))
    with pytest.raises(ValueError):
        spectral_norm(np.eye(2))


def test_kora_examples():
    pair = paper_pair_prime()
    a, f, t = 0.5, 0.0, 0.0
    expected = math.sqrt(0.25 * 0.75 * 2)
    assert abs(kora_formula(a, f, t) - expected) < 1e-15
    assert abs(total_correlation(maxent_state(a, f, t), pair) - expected) <= 1e-9
    assert abs(total_correlation(maxent_state(S2, 0, math.pi / 2), pair) - 1) <= 1e-9


def test_printed_prime_entries():
    grid = [(a, f, t) for a in np.linspace(0, 1, 6)
            for f in np.linspace(0, 2 * np.pi, 6) for t in np.linspace(0, 2 * np.pi, 6)]
    res = printed_prime_agreement(grid)
    expected = np.ones((3, 3), dtype=bool)
    expected[1, 1] = expected[2, 0] = False
    np.testing.assert_array_equal(res["agrees"], expected)


def test_concurrence(random_states):
    assert abs(concurrence(phi_state(0.42)) - 0.42) < 1e-12
    assert concurrence(basis(1)) < 1e-15
    assert abs(concurrence(vec(S2, 0, 0, -S2)) - 1) < 1e-12
    for psi in random_states:
        assert abs(concurrence(psi) - concurrence_closed_form(psi)) <= 1e-10


def test_total_correlation_range(random_states):
    pairs = [canonical_pair(), paper_pair_ab(), paper_pair_prime()]
    for psi in random_states[:300]:
        for p in pairs:
            q = correlation_matrix(psi, p)
            assert np.all(np.abs(q) <= 1 + 1e-10)
            assert 0 <= spectral_norm(q) <= 1 + 1e-10


def test_phase_invariance(random_states):
    psi = random_states[3]
    phased = PureState(psi.z * np.exp(-2.1j))
    for p in (paper_pair_ab(), paper_pair_prime()):
        np.testing.assert_allclose(correlation_matrix(phased, p), correlation_matrix(psi, p), atol=1e-14)


def test_attainment(random_states):
    pair = paper_pair_prime()
    for psi in random_states[:100]:
        q = correlation_matrix(psi, pair)
        a, b = top_singular_pair(q)
        norm = spectral_norm(q)
        assert abs(abs(a @ q @ b) - norm) <= 1e-12
        assert abs(correlation_at(psi, pair, a, b)[0] - norm) <= 1e-12


def test_brute_force():
    assert brute_force_correlation(basis(1), canonical_pair(), 10_000, seed=0) <= 1e-15
    v = brute_force_correlation(phi_state(0.7), canonical_pair(), 100_000, seed=1)
    assert 0.7 - 0.05 <= v <= 0.7 + 1e-10
    a = brute_force_correlation(random_pure(2), paper_pair_ab(), 1000, seed=3)
    b = brute_force_correlation(random_pure(2), paper_pair_ab(), 1000, seed=3)
    assert a == b
    with pytest.raises(ValueError):
        brute_force_correlation(basis(1), canonical_pair(), 0)


def test_brute_force_never_exceeds_norm(rng):
    for _ in range(20):
        psi = random_pure(rng)
        pair = transported_pair(random_unitary(rng), canonical_pair())
        vals = correlation_at(psi, pair, rng.standard_normal((500, 3)) / 1, rng.standard_normal((500, 3)))
        # unnormalized vectors scale bilinearly; normalize before comparing
        assert brute_force_correlation(psi, pair, 2000, rng) <= total_correlation(psi, pair) + 1e-10
        assert vals.shape == (500,)


def test_transport_invariance(rng):
    canon = canonical_pair()
    for _ in range(200):
        psi = random_pure(rng)
        u = random_unitary(rng)
        lhs = total_correlation(apply_unitary(u, psi), canon)
        rhs = total_correlation(psi, transported_pair(u.conj().T, canon))
        assert abs(lhs - rhs) <= 1e-10
