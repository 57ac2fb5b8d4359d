"""Fixed-size complex linear algebra for one- and two-qubit operators.

Matrices are plain numpy arrays. Two-qubit operators use the basis
|00>, |01>, |10>, |11> with the first (top) qubit most significant, so
``kron(a, b)`` puts ``a`` on qubit 0 and ``b`` on qubit 1.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import qr

from .config import MAX_DIAG_REDRAWS, RECONSTRUCTION_TOL, UNITARY_TOL
from .errors import ConvergenceFailure, NotSymmetric, NotUnitary

logger = logging.getLogger(__name__)

ComplexMat = NDArray[np.complex128]

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(m, dim: int) -> ComplexMat:
    """Coerce ``m`` to a finite complex ``dim`` x ``dim`` array or raise ValueError."""
    arr = np.asarray(m, dtype=complex)
    if arr.shape != (dim, dim):
        raise ValueError(f"expected a {dim}x{dim} matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


@dataclass(frozen=True)
class SymEigResult:
    """w = ortho @ diag(exp(2i*phases)) @ ortho.T with ortho in SO(4)."""

    ortho: NDArray[np.float64]
    phases: NDArray[np.float64]

    def reconstruct(self) -> ComplexMat:
        return self.ortho @ np.diag(np.exp(2j * self.phases)) @ self.ortho.T


def kron(a, b) -> ComplexMat:
    return np.kron(as_matrix(a, 2), as_matrix(b, 2))


def is_unitary(m, tol: float = UNITARY_TOL) -> bool:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        return False
    deviation = arr.conj().T @ arr - np.eye(arr.shape[0])
    return bool(np.max(np.abs(deviation)) <= tol)


def require_unitary(m, dim: int, tol: float = UNITARY_TOL) -> ComplexMat:
    arr = as_matrix(m, dim)
    if not is_unitary(arr, tol):
        raise NotUnitary(f"{dim}x{dim} matrix is not unitary within {tol:.1e}")
    return arr


def dist_up_to_phase(u, v) -> float:
    """min over phi of ||u - exp(i*phi) v||_F.

    The minimizer aligns v with the phase of tr(u^dagger v); the norm is taken
    of the explicit difference so that near-equal inputs give near-zero output.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    overlap = np.trace(u.conj().T @ v)
    align = np.conj(overlap) / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(u - align * v))


def wrap_angle(x: float) -> float:
    """Map an angle to (-pi, pi]; values already in range are returned untouched."""
    if -np.pi < x <= np.pi:
        return float(x)
    r = float(np.remainder(x, 2 * np.pi))
    return r - 2 * np.pi if r > np.pi else r


def _order_columns(ortho: np.ndarray) -> np.ndarray:
    # Stable reorder by the row of each column's dominant entry: keeps
    # permutation-like eigenbases in natural order.
    dominant = np.argmax(np.abs(ortho), axis=0)
    return np.argsort(dominant, kind="stable")


def diag_symmetric_unitary(w, tol: float = RECONSTRUCTION_TOL, seed: int = 0) -> SymEigResult:
    """Diagonalize a symmetric unitary with a real orthogonal eigenbasis.

    Re(w) and Im(w) are commuting real symmetric matrices, so a generic real
    combination of them shares their eigenvectors. When the combination has an
    accidental degeneracy the eigenbasis fails to diagonalize ``w`` and a new
    coefficient is drawn.
    """
    w = as_matrix(w, 4)
    if not is_unitary(w, tol):
        raise NotUnitary("symmetric diagonalization needs a unitary input")
    if np.max(np.abs(w - w.T)) > tol:
        raise NotSymmetric("matrix is not symmetric within tolerance")

    rng = np.random.default_rng(seed)
    for attempt in range(MAX_DIAG_REDRAWS):
        t = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
        combo = w.real + t * w.imag
        _, ortho = np.linalg.eigh((combo + combo.T) / 2)
        ortho = ortho[:, _order_columns(ortho)]
        rotated = ortho.T @ w @ ortho
        off_diagonal = np.max(np.abs(rotated - np.diag(np.diag(rotated))))
        if off_diagonal <= tol:
            break
        logger.debug("eigenvalue collision at t=%.6f (attempt %d), redrawing", t, attempt)
    else:
        raise ConvergenceFailure(f"no separating combination after {MAX_DIAG_REDRAWS} draws")

    if np.linalg.det(ortho) < 0:
        ortho[:, 0] *= -1
    phases = np.angle(np.diag(rotated)) / 2
    return SymEigResult(ortho=ortho, phases=phases)


def haar_random_unitary(seed: int, dim: int = 4) -> ComplexMat:
    """Haar-distributed unitary: QR of a Ginibre matrix with R's diagonal phases removed."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_so4(seed: int) -> ComplexMat:
    rng = np.random.default_rng(seed)
    q, r = qr(rng.standard_normal((4, 4)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] *= -1
    return q.astype(complex)


def random_o4_negdet(seed: int) -> ComplexMat:
    """Real orthogonal 4x4 with determinant -1."""
    q = random_so4(seed)
    q[:, 0] *= -1
    return q
