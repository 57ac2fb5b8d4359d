"""Magic basis: SO(4) <-> SU(2) x SU(2), tensor factorization, and direct
two-CNOT synthesis of real orthogonal gates."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .circuit_ir import CNOT1, PHASE_SDG, Circuit, Gate, circuit_residual
from .config import ORTHOGONAL_TOL, PRODUCT_TOL, UNITARY_TOL
from .core_linalg import PAULI_Z, ComplexMat, as_matrix, is_unitary
from .errors import (
    NotAProduct,
    NotNegOrthogonal,
    NotSpecialOrthogonal,
    NotUnitary,
    SynthesisError,
    VerificationFailure,
)

logger = logging.getLogger(__name__)

MAGIC = np.array([[1, 1j, 0, 0],
                  [0, 0, 1j, 1],
                  [0, 0, 1j, -1],
                  [1, -1j, 0, 0]], dtype=complex) / math.sqrt(2)
MAGIC_DAGGER = MAGIC.conj().T

# S on both qubits, H on qubit 1, then CNOT2 multiplies out to MAGIC exactly.
MAGIC_CIRCUIT = Circuit((Gate.s(0), Gate.s(1), Gate.h(1), Gate.cnot2()))

# MAGIC up to a phase and a trailing Z on qubit 1, in Ry/Rz form.
_INTO_MAGIC = (
    Gate.rz(0, -math.pi / 2),
    Gate.rz(1, -math.pi / 2),
    Gate.ry(1, math.pi / 2),
    Gate.cnot2(),
)
# CNOT2 followed by SWAP, fused.
_INTO_MAGIC_SWAPPED = (
    Gate.rz(0, -math.pi / 2),
    Gate.rz(1, -math.pi / 2),
    Gate.ry(1, math.pi / 2),
    Gate.cnot1(),
    Gate.cnot2(),
)
_OUT_OF_MAGIC = (
    Gate.cnot2(),
    Gate.ry(1, -math.pi / 2),
    Gate.rz(0, math.pi / 2),
    Gate.rz(1, math.pi / 2),
)


@dataclass(frozen=True)
class MagicConstants:
    m: ComplexMat
    m_dagger: ComplexMat


MAGIC_CONSTANTS = MagicConstants(m=MAGIC, m_dagger=MAGIC_DAGGER)


@dataclass(frozen=True)
class TensorFactors:
    """exp(i*phase) * kron(a, b)."""

    a: ComplexMat
    b: ComplexMat
    phase: float

    def matrix(self) -> ComplexMat:
        return np.exp(1j * self.phase) * np.kron(self.a, self.b)


def to_magic(u) -> ComplexMat:
    return MAGIC_CONSTANTS.m @ as_matrix(u, 4) @ MAGIC_CONSTANTS.m_dagger


def from_magic(u) -> ComplexMat:
    return MAGIC_CONSTANTS.m_dagger @ as_matrix(u, 4) @ MAGIC_CONSTANTS.m


def factor_tensor_2x2(u, tol: float = PRODUCT_TOL) -> TensorFactors:
    """Split u = exp(i*phase) * kron(a, b) with det(a) = det(b) = 1.

    The block of largest norm in the 2x2 grid of 2x2 blocks is a scaled copy
    of b; a follows from the inner products of every block with b.
    """
    u = as_matrix(u, 4)
    if not is_unitary(u, max(tol, UNITARY_TOL)):
        raise NotUnitary("tensor factorization needs a unitary input")

    blocks = u.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3)
    norms = np.linalg.norm(blocks, axis=(2, 3))
    i, j = np.unravel_index(np.argmax(norms), norms.shape)

    # A true product has |det| >= 1/2 on its largest block.
    det_b = np.linalg.det(blocks[i, j])
    if abs(det_b) < 1e-3:
        raise NotAProduct(float(norms[i, j]), tol)
    b = blocks[i, j] / np.sqrt(det_b)

    a = np.einsum("ijkl,kl->ij", blocks, b.conj()) / 2
    det_a = np.linalg.det(a)
    if abs(det_a) < 1e-3:
        raise NotAProduct(float(abs(det_a)), tol)
    a = a / np.sqrt(det_a)

    k = np.kron(a, b)
    phase = float(np.angle(np.trace(k.conj().T @ u)))
    residual = float(np.max(np.abs(u - np.exp(1j * phase) * k)))
    if residual > tol:
        raise NotAProduct(residual, tol)
    return TensorFactors(a=a, b=b, phase=phase)


def _require_real_orthogonal(u, det: int, error: type[SynthesisError]) -> np.ndarray:
    u = as_matrix(u, 4)
    if np.max(np.abs(u.imag)) > ORTHOGONAL_TOL:
        raise error("matrix is not real")
    real = u.real
    if not is_unitary(real, ORTHOGONAL_TOL):
        raise error("matrix is not orthogonal")
    if abs(np.linalg.det(real) - det) > ORTHOGONAL_TOL:
        raise error(f"determinant is not {det:+d}")
    return real


def is_special_orthogonal(u) -> bool:
    try:
        _require_real_orthogonal(u, +1, NotSpecialOrthogonal)
    except (NotSpecialOrthogonal, ValueError):
        return False
    return True


def is_neg_orthogonal(u) -> bool:
    try:
        _require_real_orthogonal(u, -1, NotNegOrthogonal)
    except (NotNegOrthogonal, ValueError):
        return False
    return True


def _assemble(prefix, a, b, suffix, phase: float) -> Circuit:
    from .kak import zyz_gates

    gates_a, phase_a = zyz_gates(a, 0)
    gates_b, phase_b = zyz_gates(b, 1)
    return Circuit((*prefix, *gates_a, *gates_b, *suffix), phase + phase_a + phase_b)


def _verified(u, circuit: Circuit) -> Circuit:
    residual = circuit_residual(u, circuit)
    if residual > ORTHOGONAL_TOL:
        raise VerificationFailure(residual, ORTHOGONAL_TOL, "orthogonal synthesis")
    return circuit


def synth_so4(u) -> Circuit:
    """Two-CNOT circuit for a real special orthogonal 4x4 matrix.

    u = M^dagger (a x b) M, and the magic gate costs one CNOT on each side.
    """
    real = _require_real_orthogonal(u, +1, NotSpecialOrthogonal)
    factors = factor_tensor_2x2(to_magic(real))
    # The Z left over from the Hadamard on qubit 1 conjugates b.
    b = PAULI_Z @ factors.b @ PAULI_Z
    circuit = _assemble(_INTO_MAGIC, factors.a, b, _OUT_OF_MAGIC, factors.phase)
    return _verified(real, circuit)


def synth_o4_negdet(u, expand_swap: bool = True) -> Circuit:
    """Circuit for a real orthogonal 4x4 matrix with determinant -1.

    u.CNOT1 is special orthogonal and M.CNOT1.M^dagger = (S^dagger x S^dagger).SWAP.(1 x Z),
    so in the magic basis u = (A x B).SWAP.(1 x Z). With expand_swap the SWAP
    is fused into the neighbouring CNOT2, otherwise it is emitted as is.
    """
    real = _require_real_orthogonal(u, -1, NotNegOrthogonal)
    factors = factor_tensor_2x2(to_magic(real @ CNOT1))
    a = factors.a @ PHASE_SDG
    b = PAULI_Z @ factors.b @ PHASE_SDG
    prefix = _INTO_MAGIC_SWAPPED if expand_swap else (*_INTO_MAGIC, Gate.swap())
    circuit = _assemble(prefix, a, b, _OUT_OF_MAGIC, factors.phase)
    logger.debug("det -1 synthesis, expand_swap=%s", expand_swap)
    return _verified(real, circuit)
