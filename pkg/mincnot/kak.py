"""Canonical (KAK) decomposition of two-qubit unitaries.

Every U in U(4) factors as

    U = exp(i*phase) (a1 x a2) N(alpha, beta, gamma) (a3 x a4),
    N(alpha, beta, gamma) = exp(i(alpha XX + beta YY + gamma ZZ)),

and N is diagonal in the magic basis. The interaction vector is normalized
to pi/4 >= alpha >= beta >= |gamma|, with gamma >= 0 when alpha = pi/4.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .circuit_ir import Gate
from .config import (
    DEFAULT_SEED,
    MAX_KAK_SEEDS,
    PHASE_SUM_TOL,
    PRODUCT_TOL,
    RECONSTRUCTION_TOL,
)
from .core_linalg import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ComplexMat,
    diag_symmetric_unitary,
    require_unitary,
    wrap_angle,
)
from .errors import ConvergenceFailure, InconsistentPhases, NotAProduct
from .magic import MAGIC, MAGIC_DAGGER, factor_tensor_2x2, from_magic, to_magic

logger = logging.getLogger(__name__)

# Entries with smaller magnitude are treated as zero when picking ZYZ branches.
_ZYZ_DEGENERATE = 1e-12
_WEYL_EDGE_TOL = 1e-9


# ----------------- One-qubit ZYZ -----------------
@dataclass(frozen=True)
class ZyzAngles:
    """a = exp(i*phase) Rz(alpha) Ry(theta) Rz(beta)."""

    phase: float
    alpha: float
    theta: float
    beta: float


def _wrap_with_parity(angle: float) -> tuple[float, float]:
    # Rz(t + 2 pi k) = (-1)^k Rz(t): returns the wrapped angle and the phase to add.
    wrapped = wrap_angle(angle)
    turns = round((angle - wrapped) / (2 * math.pi))
    return wrapped, math.pi * turns


def zyz_decompose(a) -> ZyzAngles:
    a = require_unitary(a, 2)
    phase = float(np.angle(np.linalg.det(a))) / 2
    v = a * np.exp(-1j * phase)

    cos_half, sin_half = abs(v[0, 0]), abs(v[0, 1])
    theta = 2 * math.atan2(sin_half, cos_half)
    if sin_half < _ZYZ_DEGENERATE:
        alpha, beta = 2 * float(np.angle(v[0, 0])), 0.0
    elif cos_half < _ZYZ_DEGENERATE:
        alpha, beta = 2 * float(np.angle(v[0, 1])), 0.0
    else:
        alpha = float(np.angle(v[0, 0]) + np.angle(v[0, 1]))
        beta = float(np.angle(v[0, 0]) - np.angle(v[0, 1]))

    alpha, extra_alpha = _wrap_with_parity(alpha)
    beta, extra_beta = _wrap_with_parity(beta)
    return ZyzAngles(
        phase=wrap_angle(phase + extra_alpha + extra_beta),
        alpha=alpha,
        theta=theta,
        beta=beta,
    )


def zyz_gates(a, qubit: int) -> tuple[tuple[Gate, ...], float]:
    """Time-ordered Rz, Ry, Rz gates for ``a`` on ``qubit`` plus the phase they leave out."""
    angles = zyz_decompose(a)
    gates = (
        Gate.rz(qubit, angles.beta),
        Gate.ry(qubit, angles.theta),
        Gate.rz(qubit, angles.alpha),
    )
    return gates, angles.phase


# ----------------- Interaction core -----------------
@dataclass(frozen=True)
class DPhases:
    theta: tuple[float, float, float, float]


def phases_from_params(alpha: float, beta: float, gamma: float) -> DPhases:
    return DPhases(theta=(
        alpha - beta + gamma,
        -alpha + beta + gamma,
        alpha + beta - gamma,
        -alpha - beta - gamma,
    ))


def params_from_phases(p: DPhases) -> tuple[float, float, float]:
    t1, t2, t3, t4 = p.theta
    if abs(wrap_angle(t1 + t2 + t3 + t4)) > PHASE_SUM_TOL:
        raise InconsistentPhases(f"phases sum to {t1 + t2 + t3 + t4!r}, expected 0 mod 2pi")
    return (t1 + t3) / 2, (t2 + t3) / 2, (t1 + t2) / 2


def n_matrix(alpha: float, beta: float, gamma: float) -> ComplexMat:
    theta = np.array(phases_from_params(alpha, beta, gamma).theta)
    return MAGIC @ np.diag(np.exp(1j * theta)) @ MAGIC_DAGGER


# ----------------- Canonical decomposition -----------------
@dataclass(frozen=True)
class CanonicalDecomposition:
    a1: ComplexMat
    a2: ComplexMat
    a3: ComplexMat
    a4: ComplexMat
    alpha: float
    beta: float
    gamma: float
    phase: float

    @property
    def interaction(self) -> tuple[float, float, float]:
        return self.alpha, self.beta, self.gamma

    def unitary(self) -> ComplexMat:
        core = n_matrix(self.alpha, self.beta, self.gamma)
        return np.exp(1j * self.phase) * np.kron(self.a1, self.a2) @ core @ np.kron(self.a3, self.a4)


def _extract(v: ComplexMat, ortho: np.ndarray, phases: np.ndarray,
             phase: float) -> CanonicalDecomposition | None:
    theta = phases.copy()
    total = float(theta.sum())
    turns = round(total / math.pi)
    if abs(total - math.pi * turns) > 1e-6:
        logger.debug("eigenphases do not sum to a multiple of pi: %r", total)
        return None
    while turns > 0:
        theta[np.argmax(theta)] -= math.pi
        turns -= 1
    while turns < 0:
        theta[np.argmin(theta)] += math.pi
        turns += 1
    theta[3] = -(theta[0] + theta[1] + theta[2])

    # v = q1 . diag(exp(i theta)) . q2 with q2 = ortho^T and q1 real orthogonal.
    q1 = v @ ortho @ np.diag(np.exp(-1j * theta))
    if np.max(np.abs(q1.imag)) > 1e-8:
        logger.debug("left orthogonal factor is not real (%.2e)", np.max(np.abs(q1.imag)))
        return None
    try:
        left = factor_tensor_2x2(to_magic(q1.real))
        right = factor_tensor_2x2(to_magic(ortho.T))
    except NotAProduct as e:
        logger.debug("orthogonal factor did not split: %s", e)
        return None

    alpha, beta, gamma = params_from_phases(DPhases(theta=tuple(float(t) for t in theta)))
    return CanonicalDecomposition(
        a1=left.a, a2=left.b, a3=right.a, a4=right.b,
        alpha=alpha, beta=beta, gamma=gamma,
        phase=wrap_angle(phase + left.phase + right.phase),
    )


# Special-unitary flips of the X, Y and Z axes.
_FLIPPERS = (1j * PAULI_X, 1j * PAULI_Y, 1j * PAULI_Z)
# _SWAPPERS[k] exchanges the two axes other than k.
_SWAPPERS = (
    np.array([[1, -1j], [1j, -1]]) * 1j * math.sqrt(0.5),
    np.array([[1, 1], [1, -1]]) * 1j * math.sqrt(0.5),
    np.array([[0, 1 - 1j], [1 + 1j, 0]]) * 1j * math.sqrt(0.5),
)


class _WeylFrame:
    """Running state u = phase . (left0 x left1) . N(v) . (right0 x right1)."""

    def __init__(self, u: ComplexMat, dec: CanonicalDecomposition):
        self.u = u
        self.phase = complex(np.exp(1j * dec.phase))
        self.left = [dec.a1, dec.a2]
        self.right = [dec.a3, dec.a4]
        self.v = [dec.alpha, dec.beta, dec.gamma]

    def _check(self, move: str):
        rebuilt = self.phase * np.kron(*self.left) @ n_matrix(*self.v) @ np.kron(*self.right)
        residual = float(np.max(np.abs(self.u - rebuilt)))
        if residual > PRODUCT_TOL:
            raise ConvergenceFailure(f"Weyl move {move} broke reconstruction ({residual:.2e})")

    # exp(i pi/2 kk) = i kk, absorbed by flipping axis k on both qubits.
    def shift(self, k: int, step: int):
        self.v[k] += step * math.pi / 2
        self.phase *= 1j ** step
        flip = np.linalg.matrix_power(_FLIPPERS[k], step % 4)
        self.right = [flip @ r for r in self.right]
        self._check(f"shift({k}, {step})")

    # Conjugating one qubit by the third axis negates the other two.
    def negate(self, k1: int, k2: int):
        self.v[k1] *= -1
        self.v[k2] *= -1
        self.phase *= -1
        s = _FLIPPERS[3 - k1 - k2]
        self.left[1] = self.left[1] @ s
        self.right[1] = s @ self.right[1]
        self._check(f"negate({k1}, {k2})")

    def swap(self, k1: int, k2: int):
        self.v[k1], self.v[k2] = self.v[k2], self.v[k1]
        s = _SWAPPERS[3 - k1 - k2]
        self.left = [m @ s for m in self.left]
        self.right = [s @ m for m in self.right]
        self._check(f"swap({k1}, {k2})")

    def canonical_shift(self, k: int):
        while self.v[k] <= -math.pi / 4:
            self.shift(k, +1)
        while self.v[k] > math.pi / 4:
            self.shift(k, -1)

    def sort(self):
        if abs(self.v[0]) < abs(self.v[1]):
            self.swap(0, 1)
        if abs(self.v[1]) < abs(self.v[2]):
            self.swap(1, 2)
        if abs(self.v[0]) < abs(self.v[1]):
            self.swap(0, 1)

    def normalize(self) -> CanonicalDecomposition:
        self._check("extraction")
        for k in range(3):
            self.canonical_shift(k)
        self.sort()
        if self.v[0] < 0:
            self.negate(0, 2)
        if self.v[1] < 0:
            self.negate(1, 2)
        self.canonical_shift(2)
        if self.v[0] > math.pi / 4 - _WEYL_EDGE_TOL and self.v[2] < 0:
            self.shift(0, -1)
            self.negate(0, 2)
        return CanonicalDecomposition(
            a1=self.left[0], a2=self.left[1], a3=self.right[0], a4=self.right[1],
            alpha=float(self.v[0]), beta=float(self.v[1]), gamma=float(self.v[2]),
            phase=wrap_angle(float(np.angle(self.phase))),
        )


def kak_decompose(u, seed: int = DEFAULT_SEED) -> CanonicalDecomposition:
    u = require_unitary(u, 4)
    # Principal fourth root of det, so that det(un) = 1.
    phase = float(np.angle(np.linalg.det(u))) / 4
    un = u * np.exp(-1j * phase)
    v = from_magic(un)
    w = v.T @ v
    w = (w + w.T) / 2

    for attempt in range(MAX_KAK_SEEDS):
        try:
            eig = diag_symmetric_unitary(w, RECONSTRUCTION_TOL, seed=seed + attempt)
        except ConvergenceFailure as e:
            logger.debug("diagonalization failed for seed %d: %s", seed + attempt, e)
            continue
        dec = _extract(v, eig.ortho, eig.phases, phase)
        if dec is not None:
            break
        logger.debug("extraction rejected for seed %d, retrying", seed + attempt)
    else:
        raise ConvergenceFailure(f"canonical decomposition failed after {MAX_KAK_SEEDS} seeds")

    return _WeylFrame(u, dec).normalize()


# ----------------- Local invariants -----------------
def local_invariant_spectrum(u) -> np.ndarray:
    """Eigenvalues of V^T V for V = M^dagger (det-normalized u) M, sorted by argument."""
    u = require_unitary(u, 4)
    un = u * np.exp(-0.25j * np.angle(np.linalg.det(u)))
    v = from_magic(un)
    eigenvalues = np.linalg.eigvals(v.T @ v)
    return eigenvalues[np.argsort(np.angle(eigenvalues), kind="stable")]


def makhlin_invariants(u) -> tuple[complex, float]:
    u = require_unitary(u, 4)
    um = from_magic(u)
    det_um = np.linalg.det(um)
    m = um.T @ um
    tr2 = np.trace(m) ** 2
    g1 = tr2 / (16 * det_um)
    g2 = (tr2 - np.trace(m @ m)) / (4 * det_um)
    return complex(g1), float(g2.real)


def invariants_from_params(alpha: float, beta: float, gamma: float) -> tuple[complex, float]:
    """Local invariants of N(alpha, beta, gamma) in closed form."""
    c = np.array([alpha, beta, gamma])
    cos2 = np.prod(np.cos(2 * c) ** 2)
    sin2 = np.prod(np.sin(2 * c) ** 2)
    g1 = complex(cos2 - sin2, np.prod(np.sin(4 * c)) / 4)
    g2 = float(4 * cos2 - 4 * sin2 - np.prod(np.cos(4 * c)))
    return g1, g2

