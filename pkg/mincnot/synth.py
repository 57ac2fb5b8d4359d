"""Minimal-CNOT synthesis of two-qubit unitaries into CNOT, Ry and Rz gates.

The number of CNOTs is read off the canonical interaction vector:

    (0, 0, 0)     -> 0    local product
    (pi/4, 0, 0)  -> 1    CNOT class
    gamma = 0     -> 2
    otherwise     -> 3
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from .circuit_ir import (
    CNOT1,
    Circuit,
    Gate,
    GateCounts,
    circuit_residual,
    circuit_to_unitary,
    count_gates,
    ry_matrix,
    rz_matrix,
    simplify,
)
from .config import CLASS_TOL, DEFAULT_SEED, VERIFY_TOL
from .core_linalg import I4, dist_up_to_phase, require_unitary, wrap_angle
from .errors import NotLocallyEquivalent, VerificationFailure
from .kak import CanonicalDecomposition, kak_decompose, zyz_gates
from .magic import TensorFactors, is_neg_orthogonal, is_special_orthogonal, synth_o4_negdet, synth_so4

logger = logging.getLogger(__name__)


class SynthesisPath(str, Enum):
    PRODUCT = "product"
    ONE_CNOT = "one_cnot"
    TWO_CNOT = "two_cnot"
    SO4 = "so4"
    O4_NEG = "o4_neg"
    GENERIC = "generic"


@dataclass(frozen=True)
class SynthesisReport:
    circuit: Circuit
    counts: GateCounts
    residual: float
    cnot_class: int
    path: SynthesisPath


# ----------------- Templates -----------------
def synth_n(alpha: float, beta: float, gamma: float) -> Circuit:
    """Three-CNOT circuit equal to N(alpha, beta, gamma), global phase included."""
    return Circuit(
        (
            Gate.rz(1, math.pi / 2),
            Gate.cnot2(),
            Gate.rz(0, 2 * gamma - math.pi / 2),
            Gate.ry(1, math.pi / 2 - 2 * alpha),
            Gate.cnot1(),
            Gate.ry(1, 2 * beta - math.pi / 2),
            Gate.cnot2(),
            Gate.rz(0, -math.pi / 2),
        ),
        math.pi / 4,
    )


def two_cnot_core(alpha: float, beta: float) -> Circuit:
    """CNOT1 (Ry(2 alpha) x Rz(2 beta)) CNOT1 = exp(i(alpha YX + beta ZZ)), locally N(alpha, beta, 0)."""
    return Circuit((Gate.cnot1(), Gate.ry(0, 2 * alpha), Gate.rz(1, 2 * beta), Gate.cnot1()))


# ----------------- Classification -----------------
def _class_of(dec: CanonicalDecomposition) -> int:
    alpha, beta, gamma = dec.interaction
    if max(abs(alpha), abs(beta), abs(gamma)) <= CLASS_TOL:
        return 0
    if abs(alpha - math.pi / 4) <= CLASS_TOL and max(abs(beta), abs(gamma)) <= CLASS_TOL:
        return 1
    if abs(gamma) <= CLASS_TOL:
        return 2
    return 3


def cnot_class(u, seed: int = DEFAULT_SEED) -> int:
    return _class_of(kak_decompose(u, seed))


def fit_local_gates(u, core, seed: int = DEFAULT_SEED) -> tuple[TensorFactors, TensorFactors]:
    """Locals with u = left.matrix() @ core @ right.matrix(); the phase is carried by ``left``."""
    u = require_unitary(u, 4)
    core = require_unitary(core, 4)
    du = kak_decompose(u, seed)
    dc = kak_decompose(core, seed)
    gap = max(abs(x - y) for x, y in zip(du.interaction, dc.interaction))
    if gap > CLASS_TOL:
        raise NotLocallyEquivalent(
            f"interaction {du.interaction} differs from core {dc.interaction} by {gap:.2e}"
        )

    left = TensorFactors(du.a1 @ dc.a1.conj().T, du.a2 @ dc.a2.conj().T, wrap_angle(du.phase - dc.phase))
    right = TensorFactors(dc.a3.conj().T @ du.a3, dc.a4.conj().T @ du.a4, 0.0)
    residual = float(np.max(np.abs(u - left.matrix() @ core @ right.matrix())))
    if residual > VERIFY_TOL:
        raise NotLocallyEquivalent(f"local frames do not reproduce the input ({residual:.2e})")
    return left, right


# ----------------- Paths -----------------
def _product_circuit(dec: CanonicalDecomposition) -> Circuit:
    # N is the identity here, so the two layers of locals collapse.
    gates_a, phase_a = zyz_gates(dec.a1 @ dec.a3, 0)
    gates_b, phase_b = zyz_gates(dec.a2 @ dec.a4, 1)
    return Circuit((*gates_a, *gates_b), dec.phase + phase_a + phase_b)


def _fitted_circuit(u, core: Circuit, seed: int) -> Circuit:
    left, right = fit_local_gates(u, circuit_to_unitary(core), seed)
    gates_r0, phase_r0 = zyz_gates(right.a, 0)
    gates_r1, phase_r1 = zyz_gates(right.b, 1)
    gates_l0, phase_l0 = zyz_gates(left.a, 0)
    gates_l1, phase_l1 = zyz_gates(left.b, 1)
    return Circuit(
        (*gates_r0, *gates_r1, *core.gates, *gates_l0, *gates_l1),
        left.phase + right.phase + core.global_phase + phase_r0 + phase_r1 + phase_l0 + phase_l1,
    )


def _generic_circuit(dec: CanonicalDecomposition) -> Circuit:
    core = synth_n(*dec.interaction)
    # The template opens with Rz(pi/2) on q1 and closes with Rz(-pi/2) on q0;
    # both fold into the neighbouring locals.
    inner = core.gates[1:-1]
    a4 = rz_matrix(math.pi / 2) @ dec.a4
    a1 = dec.a1 @ rz_matrix(-math.pi / 2)
    gates_3, phase_3 = zyz_gates(dec.a3, 0)
    gates_4, phase_4 = zyz_gates(a4, 1)
    gates_1, phase_1 = zyz_gates(a1, 0)
    gates_2, phase_2 = zyz_gates(dec.a2, 1)
    return Circuit(
        (*gates_3, *gates_4, *inner, *gates_1, *gates_2),
        dec.phase + core.global_phase + phase_1 + phase_2 + phase_3 + phase_4,
    )


def synth_u4(
    u,
    expand_swap: bool = True,
    simplify_output: bool | None = None,
    seed: int = DEFAULT_SEED,
) -> SynthesisReport:
    u = require_unitary(u, 4)
    dec = kak_decompose(u, seed)
    cls = _class_of(dec)

    if cls == 0:
        path, circuit = SynthesisPath.PRODUCT, _product_circuit(dec)
    elif cls == 1:
        path, circuit = SynthesisPath.ONE_CNOT, _fitted_circuit(u, Circuit((Gate.cnot1(),)), seed)
    elif is_special_orthogonal(u):
        path, circuit = SynthesisPath.SO4, synth_so4(u)
    elif cls == 2:
        path, circuit = SynthesisPath.TWO_CNOT, _fitted_circuit(u, two_cnot_core(dec.alpha, dec.beta), seed)
    elif is_neg_orthogonal(u):
        path, circuit = SynthesisPath.O4_NEG, synth_o4_negdet(u, expand_swap)
    else:
        path, circuit = SynthesisPath.GENERIC, _generic_circuit(dec)
    logger.debug("class %d -> path %s, interaction %s", cls, path.value, dec.interaction)

    if simplify_output is None:
        simplify_output = cls <= 2
    if simplify_output:
        circuit = simplify(circuit, fuse_swap=expand_swap)

    residual = circuit_residual(u, circuit)
    if residual > VERIFY_TOL:
        raise VerificationFailure(residual, VERIFY_TOL, f"{path.value} synthesis")
    return SynthesisReport(
        circuit=circuit,
        counts=count_gates(circuit, expand_swap=False),
        residual=residual,
        cnot_class=cls,
        path=path,
    )


# ----------------- Brute-force oracle -----------------
def _zyz_matrix(alpha: float, theta: float, beta: float) -> np.ndarray:
    return rz_matrix(alpha) @ ry_matrix(theta) @ rz_matrix(beta)


def template_unitary(params: np.ndarray, cnots: int) -> np.ndarray:
    """Local layer, then (CNOT1, local layer) repeated ``cnots`` times; six angles per layer."""
    u = I4
    for layer in range(cnots + 1):
        p = params[6 * layer:6 * layer + 6]
        u = np.kron(_zyz_matrix(*p[:3]), _zyz_matrix(*p[3:])) @ u
        if layer < cnots:
            u = CNOT1 @ u
    return u


def template_fit_residual(u, cnots: int, restarts: int = 20, seed: int = DEFAULT_SEED,
                          maxiter: int = 300) -> float:
    """Best phase-invariant residual found when fitting the ``cnots``-CNOT template to u."""
    u = require_unitary(u, 4)
    rng = np.random.default_rng(seed)

    def objective(x: np.ndarray) -> float:
        return dist_up_to_phase(u, template_unitary(x, cnots)) ** 2

    best = math.inf
    for _ in range(restarts):
        x0 = rng.uniform(-math.pi, math.pi, size=6 * (cnots + 1))
        result = minimize(objective, x0, method="BFGS", options={"maxiter": maxiter})
        best = min(best, math.sqrt(max(float(result.fun), 0.0)))
        if best < 1e-6:
            break
    logger.debug("template fit with %d CNOTs: best residual %.3e", cnots, best)
    return best
