import math

import numpy as np
import pytest

from mincnot.circuit_ir import CNOT1, CZ, SWAP, ry_matrix
from mincnot.core_linalg import I4, haar_random_unitary
from mincnot.ep import (
    T13,
    case1_ep,
    case1_unitary,
    ep_canonical,
    ep_exact,
    ep_monte_carlo,
    linear_entropy,
    swap_lower_bound_witness,
)
from mincnot.errors import NotNormalized
from mincnot.kak import n_matrix


def test_t13_is_an_involutive_permutation():
    assert np.array_equal(T13 @ T13, np.eye(16))
    assert np.array_equal(T13.sum(axis=0), np.ones(16))
    # |0,0,1,0> <-> |1,0,0,0>
    assert T13[8, 2] == 1


def test_linear_entropy_examples(random_su2):
    assert linear_entropy([1, 0, 0, 0]) == pytest.approx(0, abs=1e-15)
    assert linear_entropy(np.array([1, 0, 0, 1]) / math.sqrt(2)) == pytest.approx(0.5)
    for _ in range(10):
        psi = np.kron(random_su2()[:, 0], random_su2()[:, 0])
        assert abs(linear_entropy(psi)) < 1e-12


def test_linear_entropy_rejects_bad_states():
    with pytest.raises(NotNormalized):
        linear_entropy([1, 1, 0, 0])
    with pytest.raises(ValueError):
        linear_entropy([1, 0])


def test_ep_named_gates():
    assert ep_exact(CNOT1) == pytest.approx(2 / 9, abs=1e-12)
    assert ep_exact(CZ) == pytest.approx(2 / 9, abs=1e-12)
    assert ep_exact(SWAP) == pytest.approx(0, abs=1e-12)
    assert ep_exact(I4) == pytest.approx(0, abs=1e-12)


def test_ep_of_products_vanishes(random_su2):
    for _ in range(20):
        assert abs(ep_exact(np.kron(random_su2(), random_su2()))) < 1e-10


def test_ep_is_local_invariant(random_su2):
    u = haar_random_unitary(4)
    moved = np.kron(random_su2(), random_su2()) @ u @ np.kron(random_su2(), random_su2())
    assert ep_exact(moved) == pytest.approx(ep_exact(u), abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_ep_of_inverse(seed):
    u = haar_random_unitary(seed)
    assert ep_exact(u.conj().T) == pytest.approx(ep_exact(u), abs=1e-10)


def test_ep_canonical_matches_exact(rng):
    assert ep_canonical(math.pi / 4, 0, 0) == pytest.approx(2 / 9)
    assert ep_canonical(math.pi / 4, math.pi / 4, math.pi / 4) == pytest.approx(0)
    for _ in range(20):
        params = rng.uniform(-1, 1, 3)
        assert ep_exact(n_matrix(*params)) == pytest.approx(ep_canonical(*params), abs=1e-10)


def test_case1_closed_form(rng):
    assert case1_ep(0, 0) == pytest.approx(0, abs=1e-15)
    assert case1_ep(math.pi, math.pi) == pytest.approx(0, abs=1e-15)
    for _ in range(100):
        a, b = rng.uniform(0, 2 * math.pi, 2)
        assert case1_ep(a, b) == pytest.approx(ep_exact(case1_unitary(a, b)), abs=1e-10)
        assert case1_ep(a, b) == pytest.approx(ep_canonical(a / 2, b / 2, 0), abs=1e-12)


def test_case1_unitary_definition():
    expected = CZ @ np.kron(ry_matrix(0.3), ry_matrix(1.1)) @ CZ
    assert np.allclose(case1_unitary(0.3, 1.1), expected)


def test_monte_carlo_named_gates():
    mean, err = ep_monte_carlo(SWAP, 100_000, seed=1)
    assert abs(mean) <= 3 * err + 1e-12
    mean, err = ep_monte_carlo(CNOT1, 100_000, seed=2)
    assert abs(mean - 2 / 9) <= 4 * err


@pytest.mark.parametrize("seed", range(10))
def test_monte_carlo_matches_exact(seed):
    u = haar_random_unitary(100 + seed)
    mean, err = ep_monte_carlo(u, 100_000, seed=seed)
    assert abs(mean - ep_exact(u)) <= 3 * err


def test_monte_carlo_is_deterministic_and_worker_independent():
    u = haar_random_unitary(9)
    serial = ep_monte_carlo(u, 20_000, seed=5)
    assert ep_monte_carlo(u, 20_000, seed=5) == serial
    assert ep_monte_carlo(u, 20_000, seed=5, workers=3) == serial
    assert ep_monte_carlo(u, 20_000, seed=6) != serial


def test_monte_carlo_needs_samples():
    with pytest.raises(ValueError):
        ep_monte_carlo(CNOT1, 10)


def test_swap_lower_bound_witness():
    report = swap_lower_bound_witness()
    assert report.passed
    assert set(report.roots) == {(0.0, 0.0), (0.0, math.pi), (math.pi, 0.0), (math.pi, math.pi)}
    assert report.zeros_only_at_corners
    assert len(report.candidates) == 4
    for candidate in report.candidates:
        assert candidate.is_product
        assert candidate.form_distance < 1e-10
        assert candidate.distance_to_swap > 0.5
        assert abs(candidate.ep) < 1e-12
    assert report.case2_gap == pytest.approx(2 / 9, abs=1e-12)


def test_ep_range_on_random_unitaries():
    for seed in range(500):
        value = ep_exact(haar_random_unitary(seed))
        assert -1e-12 <= value <= 2 / 9 + 1e-12


def test_ep_one_sided_local_invariance(random_su2):
    for seed in range(10):
        u = haar_random_unitary(200 + seed)
        local = np.kron(random_su2(), random_su2())
        assert ep_exact(local @ u) == pytest.approx(ep_exact(u), abs=1e-12)
        assert ep_exact(u @ local) == pytest.approx(ep_exact(u), abs=1e-12)


def _random_state(rng):
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    return psi / np.linalg.norm(psi)


def test_linear_entropy_local_invariance(rng, random_su2):
    for _ in range(50):
        psi = _random_state(rng)
        moved = np.kron(random_su2(), random_su2()) @ psi
        assert linear_entropy(moved) == pytest.approx(linear_entropy(psi), abs=1e-12)


def test_linear_entropy_same_for_either_qubit(rng):
    for _ in range(50):
        psi = _random_state(rng)
        m = psi.reshape(2, 2)
        rho_b = m.T @ m.conj()
        assert 1 - np.trace(rho_b @ rho_b).real == pytest.approx(linear_entropy(psi), abs=1e-12)
