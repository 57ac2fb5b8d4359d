"""Entangling power: exact formula, Monte Carlo estimate, and the SWAP lower-bound witness.

EP(U) is the mean linear entropy 1 - tr(rho^2) that U produces from Haar
random product states. For two qubits it has the closed form

    EP(U) = 5/9 - (<U x U, T (U x U) T> + <W x W, T (W x W) T>) / 36,   W = SWAP U,

with T exchanging the first qubits of the two copies and <A, B> = tr(A^dagger B).
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .circuit_ir import CNOT1, CZ, SWAP, ry_matrix
from .config import DEFAULT_SEED, MC_CHUNK_SIZE, MC_MIN_SAMPLES
from .core_linalg import I4, PAULI_X, PAULI_Z, ComplexMat, dist_up_to_phase, require_unitary
from .errors import NotAProduct, NotNormalized, VerificationFailure
from .magic import factor_tensor_2x2

logger = logging.getLogger(__name__)

_NORM_TOL = 1e-12
_IMAG_TOL = 1e-10


def _transposition_13() -> np.ndarray:
    # |a,b,c,d> -> |c,b,a,d>
    t = np.zeros((16, 16))
    for a, b, c, d in itertools.product((0, 1), repeat=4):
        t[8 * c + 4 * b + 2 * a + d, 8 * a + 4 * b + 2 * c + d] = 1
    return t


T13 = _transposition_13()


def linear_entropy(psi) -> float:
    """1 - tr(rho^2) of the first qubit's reduced state."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (4,):
        raise ValueError(f"expected a 4-component state, got shape {psi.shape}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > _NORM_TOL:
        raise NotNormalized(f"state has norm {norm!r}")
    m = psi.reshape(2, 2)
    rho = m @ m.conj().T
    return float(1 - np.trace(rho @ rho).real)


def _zanardi_term(v: ComplexMat) -> complex:
    vv = np.kron(v, v)
    return np.trace(vv.conj().T @ T13 @ vv @ T13)


def ep_exact(u) -> float:
    u = require_unitary(u, 4)
    value = 5 / 9 - (_zanardi_term(u) + _zanardi_term(SWAP @ u)) / 36
    if abs(value.imag) > _IMAG_TOL:
        raise VerificationFailure(abs(value.imag), _IMAG_TOL, "entangling power (imaginary part)")
    return float(value.real)


def ep_canonical(alpha: float, beta: float, gamma: float) -> float:
    """EP of N(alpha, beta, gamma), which equals EP of anything locally equivalent to it."""
    c = [math.cos(4 * x) for x in (alpha, beta, gamma)]
    return (3 - c[0] * c[1] - c[1] * c[2] - c[2] * c[0]) / 18


def case1_ep(a: float, b: float) -> float:
    """EP of CZ (Ry(a) x Ry(b)) CZ."""
    ca, cb = math.cos(2 * a), math.cos(2 * b)
    return (3 - ca - cb - ca * cb) / 18


def case1_unitary(a: float, b: float) -> ComplexMat:
    return CZ @ np.kron(ry_matrix(a), ry_matrix(b)) @ CZ


# ----------------- Monte Carlo -----------------
def _random_qubits(rng: np.random.Generator, n: int) -> np.ndarray:
    z = rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _chunk_entropies(u: ComplexMat, n: int, seed_seq: np.random.SeedSequence) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    product = np.einsum("ni,nj->nij", _random_qubits(rng, n), _random_qubits(rng, n)).reshape(n, 4)
    m = (product @ u.T).reshape(n, 2, 2)
    rho = np.einsum("nij,nkj->nik", m, m.conj())
    return 1 - np.sum(np.abs(rho) ** 2, axis=(1, 2))


def ep_monte_carlo(u, samples: int, seed: int = DEFAULT_SEED, workers: int = 1) -> tuple[float, float]:
    """Mean linear entropy over Haar product inputs and its standard error.

    Samples are drawn in fixed-size chunks, each with its own spawned seed,
    so the result does not depend on ``workers``.
    """
    if samples < MC_MIN_SAMPLES:
        raise ValueError(f"need at least {MC_MIN_SAMPLES} samples, got {samples}")
    u = require_unitary(u, 4)
    full, rest = divmod(samples, MC_CHUNK_SIZE)
    sizes = [MC_CHUNK_SIZE] * full + ([rest] if rest else [])
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _chunk_entropies(u, *job), zip(sizes, seeds)))
    else:
        parts = [_chunk_entropies(u, n, s) for n, s in zip(sizes, seeds)]

    entropies = np.concatenate(parts)
    mean = float(entropies.mean())
    std_error = float(entropies.std(ddof=1) / math.sqrt(samples))
    logger.debug("Monte Carlo EP over %d samples in %d chunks: %.6f +- %.2e",
                 samples, len(sizes), mean, std_error)
    return mean, std_error


# ----------------- SWAP lower bound -----------------
# The four zero-EP middle gates, as listed for a, b in {0, pi}.
_CASE1_FORMS = {
    (0.0, 0.0): I4,
    (0.0, math.pi): np.kron(PAULI_Z, ry_matrix(math.pi)),
    (math.pi, 0.0): np.kron(ry_matrix(math.pi), PAULI_Z),
    (math.pi, math.pi): -np.kron(PAULI_X, PAULI_X),
}


@dataclass(frozen=True)
class CaseOneCandidate:
    a: float
    b: float
    ep: float
    form_distance: float
    is_product: bool
    distance_to_swap: float

    @property
    def passed(self) -> bool:
        return self.form_distance < 1e-10 and self.is_product and self.distance_to_swap > 0.5


@dataclass(frozen=True)
class WitnessReport:
    roots: tuple[tuple[float, float], ...]
    zeros_only_at_corners: bool
    candidates: tuple[CaseOneCandidate, ...]
    ep_cnot: float
    ep_swap: float

    @property
    def case2_gap(self) -> float:
        return abs(self.ep_cnot - self.ep_swap)

    @property
    def passed(self) -> bool:
        return (
            len(self.roots) == 4
            and self.zeros_only_at_corners
            and all(c.passed for c in self.candidates)
            and self.case2_gap > 1e-3
        )


def _zeros_only_at_corners(points: int = 61) -> bool:
    grid = np.linspace(0, math.pi, points)
    corners = {(0, 0), (0, points - 1), (points - 1, 0), (points - 1, points - 1)}
    zeros = {
        (i, j)
        for i, a in enumerate(grid)
        for j, b in enumerate(grid)
        if abs(case1_ep(a, b)) < 1e-12
    }
    return zeros == corners


def swap_lower_bound_witness() -> WitnessReport:
    """Recheck the two cases of the argument that SWAP needs three CNOTs.

    With two CNOTs, SWAP would be locally CZ (Ry(a) x Ry(b)) CZ (case 1) or
    locally a CNOT (case 2). EP(SWAP) = 0 forces case 1 onto a, b in {0, pi},
    where the middle gate is a tensor product and so cannot be SWAP. Case 2 is
    excluded by EP(CNOT) != EP(SWAP).
    """
    roots = tuple(
        (a, b)
        for a, b in itertools.product((0.0, math.pi), repeat=2)
        if abs(case1_ep(a, b)) < 1e-12
    )
    candidates = []
    for a, b in roots:
        u = case1_unitary(a, b)
        try:
            factor_tensor_2x2(u)
            is_product = True
        except NotAProduct:
            is_product = False
        candidates.append(CaseOneCandidate(
            a=a,
            b=b,
            ep=ep_exact(u),
            form_distance=dist_up_to_phase(u, _CASE1_FORMS[(a, b)]),
            is_product=is_product,
            distance_to_swap=dist_up_to_phase(u, SWAP),
        ))
    report = WitnessReport(
        roots=roots,
        zeros_only_at_corners=_zeros_only_at_corners(),
        candidates=tuple(candidates),
        ep_cnot=ep_exact(CNOT1),
        ep_swap=ep_exact(SWAP),
    )
    logger.debug("SWAP witness: %s", "pass" if report.passed else "fail")
    return report
