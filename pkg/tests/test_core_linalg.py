import math

import numpy as np
import pytest

from mincnot.circuit_ir import CNOT1, PHASE_S
from mincnot.core_linalg import (
    I2,
    I4,
    PAULI_Z,
    diag_symmetric_unitary,
    dist_up_to_phase,
    haar_random_unitary,
    is_unitary,
    kron,
    random_o4_negdet,
    random_so4,
    require_unitary,
    wrap_angle,
)
from mincnot.errors import NotSymmetric, NotUnitary
from mincnot.magic import MAGIC


def test_kron_examples():
    assert np.array_equal(kron(I2, I2), I4)
    assert np.allclose(kron(PAULI_Z, PAULI_Z), np.diag([1, -1, -1, 1]))
    assert np.allclose(kron(PHASE_S, PHASE_S), np.diag([1, 1j, 1j, -1]))


def test_kron_rejects_wrong_shape():
    with pytest.raises(ValueError):
        kron(I4, I2)


def test_is_unitary():
    assert is_unitary(MAGIC, 1e-12)
    assert is_unitary(CNOT1)
    assert not is_unitary(np.zeros((4, 4)))
    assert not is_unitary(np.ones((4, 3)))


def test_require_unitary_raises():
    with pytest.raises(NotUnitary):
        require_unitary(2 * I4, 4)
    with pytest.raises(ValueError):
        require_unitary(np.full((4, 4), np.nan), 4)


def test_dist_up_to_phase():
    u = haar_random_unitary(7)
    assert dist_up_to_phase(u, u) < 1e-14
    assert dist_up_to_phase(u, np.exp(1j * math.pi / 4) * u) < 1e-14
    assert dist_up_to_phase(I4, kron(PAULI_Z, I2)) > 1.0


def test_dist_up_to_phase_matches_phase_grid():
    u, v = haar_random_unitary(1), haar_random_unitary(2)
    grid = min(np.linalg.norm(u - np.exp(1j * phi) * v) for phi in np.linspace(0, 2 * math.pi, 20001))
    assert dist_up_to_phase(u, v) <= grid + 1e-12
    assert grid - dist_up_to_phase(u, v) < 1e-3


@pytest.mark.parametrize("x, expected", [
    (0.0, 0.0),
    (math.pi, math.pi),
    (-math.pi, math.pi),
    (3 * math.pi / 2, -math.pi / 2),
    (-5 * math.pi / 2, -math.pi / 2),
])
def test_wrap_angle(x, expected):
    assert wrap_angle(x) == pytest.approx(expected, abs=1e-15)


def test_diag_identity():
    result = diag_symmetric_unitary(I4)
    assert np.allclose(result.ortho, I4)
    assert np.allclose(result.phases, 0)


def test_diag_diagonal_input():
    w = np.diag([1j, 1j, -1j, -1j])
    result = diag_symmetric_unitary(w)
    assert np.allclose(np.abs(result.ortho), I4)
    assert np.allclose(result.phases, [math.pi / 4, math.pi / 4, -math.pi / 4, -math.pi / 4])


@pytest.mark.parametrize("seed", range(10))
def test_diag_round_trip(seed):
    rng = np.random.default_rng(seed)
    o0 = random_so4(seed).real
    w = o0 @ np.diag(np.exp(2j * rng.uniform(-math.pi, math.pi, 4))) @ o0.T
    result = diag_symmetric_unitary(w)
    assert np.max(np.abs(result.reconstruct() - w)) < 1e-9
    assert np.allclose(result.ortho @ result.ortho.T, I4)
    assert np.linalg.det(result.ortho) == pytest.approx(1.0)


def test_diag_degenerate_spectrum():
    # Repeated eigenvalues are fine as long as the basis diagonalizes w.
    o0 = random_so4(3).real
    w = o0 @ np.diag([1j, 1j, 1j, -1]) @ o0.T
    result = diag_symmetric_unitary(w)
    assert np.max(np.abs(result.reconstruct() - w)) < 1e-9


def test_diag_rejects_non_symmetric():
    with pytest.raises(NotSymmetric):
        diag_symmetric_unitary(haar_random_unitary(0))


def test_haar_random_unitary():
    u = haar_random_unitary(5)
    assert is_unitary(u)
    assert np.array_equal(u, haar_random_unitary(5))
    assert dist_up_to_phase(haar_random_unitary(1), haar_random_unitary(2)) > 0.1


@pytest.mark.parametrize("seed", range(5))
def test_random_orthogonal_samplers(seed):
    q = random_so4(seed)
    assert np.max(np.abs(q.imag)) == 0
    assert is_unitary(q)
    assert np.linalg.det(q.real) == pytest.approx(1.0)
    assert np.array_equal(q, random_so4(seed))

    n = random_o4_negdet(seed)
    assert is_unitary(n)
    assert np.linalg.det(n.real) == pytest.approx(-1.0)


def test_kron_is_multiplicative():
    for seed in range(20):
        a, b, c, d = (haar_random_unitary(4 * seed + k, dim=2) for k in range(4))
        assert np.max(np.abs(kron(a, b) @ kron(c, d) - kron(a @ c, b @ d))) < 1e-12


def test_haar_unitary_has_unit_determinant_modulus():
    for seed in range(100):
        assert abs(abs(np.linalg.det(haar_random_unitary(seed))) - 1) < 1e-10


def test_diag_round_trip_many():
    rng = np.random.default_rng(7)
    for seed in range(1000):
        o0 = random_so4(seed).real
        w = o0 @ np.diag(np.exp(2j * rng.uniform(-math.pi, math.pi, 4))) @ o0.T
        result = diag_symmetric_unitary(w)
        assert np.max(np.abs(result.reconstruct() - w)) < 1e-9
