"""Gate-level IR for two-qubit circuits: simulation, counting, rewriting, text I/O.

Gates are listed in time order (index 0 is applied first). Rotations follow
Ry(t) = [[cos t/2, sin t/2], [-sin t/2, cos t/2]] and
Rz(t) = diag(exp(it/2), exp(-it/2)).
"""

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .config import MAX_SIMPLIFY_PASSES, ZERO_ANGLE_TOL
from .core_linalg import (
    I2,
    I4,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    ComplexMat,
    dist_up_to_phase,
    kron,
    wrap_angle,
)
from .errors import ParseError

logger = logging.getLogger(__name__)


# ----------------- Gate matrices -----------------
def ry_matrix(theta: float) -> ComplexMat:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, s], [-s, c]], dtype=complex)


def rz_matrix(theta: float) -> ComplexMat:
    return np.diag([np.exp(0.5j * theta), np.exp(-0.5j * theta)])


HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PHASE_S = np.diag([1, 1j])
PHASE_SDG = np.diag([1, -1j])

CNOT1 = np.array([[1, 0, 0, 0],
                  [0, 1, 0, 0],
                  [0, 0, 0, 1],
                  [0, 0, 1, 0]], dtype=complex)
CNOT2 = np.array([[1, 0, 0, 0],
                  [0, 0, 0, 1],
                  [0, 0, 1, 0],
                  [0, 1, 0, 0]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0],
                 [0, 0, 1, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1]], dtype=complex)
CZ = np.diag([1, 1, 1, -1]).astype(complex)


# ----------------- IR -----------------
class GateKind(str, Enum):
    RY = "ry"
    RZ = "rz"
    H = "h"
    S = "s"
    SDG = "sdg"
    X = "x"
    Y = "y"
    Z = "z"
    CNOT1 = "cnot1"
    CNOT2 = "cnot2"
    CZ = "cz"
    SWAP = "swap"


ROTATION_KINDS = frozenset({GateKind.RY, GateKind.RZ})
TWO_QUBIT_KINDS = frozenset({GateKind.CNOT1, GateKind.CNOT2, GateKind.CZ, GateKind.SWAP})

_FIXED_ONE_QUBIT = {
    GateKind.H: HADAMARD,
    GateKind.S: PHASE_S,
    GateKind.SDG: PHASE_SDG,
    GateKind.X: PAULI_X,
    GateKind.Y: PAULI_Y,
    GateKind.Z: PAULI_Z,
}
_TWO_QUBIT = {
    GateKind.CNOT1: CNOT1,
    GateKind.CNOT2: CNOT2,
    GateKind.CZ: CZ,
    GateKind.SWAP: SWAP,
}


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubit: int | None = None
    angle: float | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in TWO_QUBIT_KINDS:
            if self.qubit is not None or self.angle is not None:
                raise ValueError(f"{kind.value} takes no qubit or angle")
            return
        if self.qubit not in (0, 1):
            raise ValueError(f"qubit must be 0 or 1, got {self.qubit!r}")
        if kind in ROTATION_KINDS:
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{kind.value} needs a finite angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{kind.value} takes no angle")

    @classmethod
    def ry(cls, qubit: int, theta: float) -> "Gate":
        return cls(GateKind.RY, qubit, theta)

    @classmethod
    def rz(cls, qubit: int, theta: float) -> "Gate":
        return cls(GateKind.RZ, qubit, theta)

    @classmethod
    def h(cls, qubit: int) -> "Gate":
        return cls(GateKind.H, qubit)

    @classmethod
    def s(cls, qubit: int) -> "Gate":
        return cls(GateKind.S, qubit)

    @classmethod
    def sdg(cls, qubit: int) -> "Gate":
        return cls(GateKind.SDG, qubit)

    @classmethod
    def x(cls, qubit: int) -> "Gate":
        return cls(GateKind.X, qubit)

    @classmethod
    def y(cls, qubit: int) -> "Gate":
        return cls(GateKind.Y, qubit)

    @classmethod
    def z(cls, qubit: int) -> "Gate":
        return cls(GateKind.Z, qubit)

    @classmethod
    def cnot1(cls) -> "Gate":
        return cls(GateKind.CNOT1)

    @classmethod
    def cnot2(cls) -> "Gate":
        return cls(GateKind.CNOT2)

    @classmethod
    def cz(cls) -> "Gate":
        return cls(GateKind.CZ)

    @classmethod
    def swap(cls) -> "Gate":
        return cls(GateKind.SWAP)

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    @property
    def is_rotation(self) -> bool:
        return self.kind in ROTATION_KINDS

    def touches(self, qubit: int) -> bool:
        return self.is_two_qubit or self.qubit == qubit


@dataclass(frozen=True)
class Circuit:
    gates: tuple[Gate, ...] = ()
    global_phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        if not math.isfinite(self.global_phase):
            raise ValueError("global phase must be finite")
        object.__setattr__(self, "global_phase", wrap_angle(float(self.global_phase)))

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class GateCounts:
    cnot: int = 0
    one_qubit: int = 0
    swap: int = 0

    @property
    def total(self) -> int:
        return self.cnot + self.one_qubit + self.swap


# ----------------- Simulation -----------------
def one_qubit_matrix(g: Gate) -> ComplexMat:
    if g.kind is GateKind.RY:
        return ry_matrix(g.angle)
    if g.kind is GateKind.RZ:
        return rz_matrix(g.angle)
    return _FIXED_ONE_QUBIT[g.kind]


def gate_matrix(g: Gate) -> ComplexMat:
    if g.is_two_qubit:
        return _TWO_QUBIT[g.kind].copy()
    m = one_qubit_matrix(g)
    return kron(m, I2) if g.qubit == 0 else kron(I2, m)


def circuit_to_unitary(c: Circuit) -> ComplexMat:
    u = I4.copy()
    for g in c.gates:
        u = gate_matrix(g) @ u
    return np.exp(1j * c.global_phase) * u


def circuit_residual(target, c: Circuit) -> float:
    """Phase-invariant distance between a target unitary and the simulated circuit."""
    return dist_up_to_phase(target, circuit_to_unitary(c))


def count_gates(c: Circuit, expand_swap: bool = False) -> GateCounts:
    cnot = one_qubit = swap = 0
    for g in c.gates:
        if g.kind is GateKind.SWAP:
            if expand_swap:
                cnot += 3
            else:
                swap += 1
        elif g.is_two_qubit:
            cnot += 1
        else:
            one_qubit += 1
    return GateCounts(cnot=cnot, one_qubit=one_qubit, swap=swap)


# ----------------- Rewriting -----------------
# Two-qubit gates an Rz on the given qubit commutes with.
_RZ_COMMUTES_WITH = {
    0: frozenset({GateKind.CZ, GateKind.CNOT1}),
    1: frozenset({GateKind.CZ, GateKind.CNOT2}),
}

# SWAP fused with an adjacent CNOT, in time order: (first, second) -> replacement.
_SWAP_FUSIONS = {
    (GateKind.CNOT2, GateKind.SWAP): (GateKind.CNOT1, GateKind.CNOT2),
    (GateKind.SWAP, GateKind.CNOT2): (GateKind.CNOT2, GateKind.CNOT1),
    (GateKind.CNOT1, GateKind.SWAP): (GateKind.CNOT2, GateKind.CNOT1),
    (GateKind.SWAP, GateKind.CNOT1): (GateKind.CNOT1, GateKind.CNOT2),
}

# CNOTa . Rz(target of a) . CNOTa == CNOTb . Rz(target of b) . CNOTb
_ZZ_EXCHANGE = {
    GateKind.CNOT1: (1, GateKind.CNOT2, 0),
    GateKind.CNOT2: (0, GateKind.CNOT1, 1),
}


def _commutes_past(g: Gate, other: Gate) -> bool:
    if g.kind is GateKind.RZ:
        if not other.is_two_qubit:
            return other.qubit != g.qubit or other.kind in (GateKind.RZ, GateKind.Z, GateKind.S, GateKind.SDG)
        return other.kind in _RZ_COMMUTES_WITH[g.qubit]
    if not g.is_two_qubit:
        return not other.touches(g.qubit)
    if g.kind is GateKind.CZ:
        return other.kind is GateKind.RZ
    if g.kind is GateKind.CNOT1:
        return other.kind is GateKind.RZ and other.qubit == 0
    if g.kind is GateKind.CNOT2:
        return other.kind is GateKind.RZ and other.qubit == 1
    return False


def _find_partner(gates: list[Gate], i: int) -> int | None:
    """First later gate that g could meet once every commuting gate in between is skipped."""
    g = gates[i]
    for j in range(i + 1, len(gates)):
        other = gates[j]
        if other.kind is g.kind and other.qubit == g.qubit:
            return j
        if not _commutes_past(g, other):
            return None
    return None


def _try_drop_rotation(gates: list[Gate], i: int) -> float | None:
    g = gates[i]
    if not g.is_rotation:
        return None
    turns = round(g.angle / (2 * math.pi))
    if abs(g.angle - 2 * math.pi * turns) >= ZERO_ANGLE_TOL:
        return None
    del gates[i]
    # R(2 pi k) = (-1)^k I
    return math.pi * turns


def _try_partner(gates: list[Gate], i: int) -> bool:
    g = gates[i]
    if g.kind not in ROTATION_KINDS and g.kind not in TWO_QUBIT_KINDS:
        return False
    j = _find_partner(gates, i)
    if j is None:
        return False
    if g.is_rotation:
        gates[i] = Gate(g.kind, g.qubit, g.angle + gates[j].angle)
        del gates[j]
    else:
        del gates[j]
        del gates[i]
    return True


def _try_zz_exchange(gates: list[Gate], i: int) -> bool:
    if i + 2 >= len(gates) or gates[i].kind not in _ZZ_EXCHANGE:
        return False
    outer = gates[i].kind
    target, other, other_target = _ZZ_EXCHANGE[outer]
    mid = gates[i + 1]
    if not (mid.kind is GateKind.RZ and mid.qubit == target and gates[i + 2].kind is outer):
        return False
    moved = Gate.rz(other_target, mid.angle)
    if i + 3 < len(gates) and gates[i + 3].kind is other:
        gates[i:i + 4] = [Gate(other), moved]
        return True
    if i >= 1 and gates[i - 1].kind is other:
        gates[i - 1:i + 3] = [moved, Gate(other)]
        return True
    return False


def _try_swap_fusion(gates: list[Gate], i: int) -> bool:
    if i + 1 >= len(gates):
        return False
    fused = _SWAP_FUSIONS.get((gates[i].kind, gates[i + 1].kind))
    if fused is None:
        return False
    gates[i:i + 2] = [Gate(fused[0]), Gate(fused[1])]
    return True


def _rewrite_pass(gates: list[Gate], phase: float, fuse_swap: bool) -> tuple[bool, float]:
    changed = False
    i = 0
    while i < len(gates):
        dropped = _try_drop_rotation(gates, i)
        if dropped is not None:
            phase += dropped
        elif not (_try_partner(gates, i) or _try_zz_exchange(gates, i)
                    or (fuse_swap and _try_swap_fusion(gates, i))):
            i += 1
            continue
        changed = True
        i = max(i - 1, 0)
    return changed, phase


def simplify(c: Circuit, fuse_swap: bool = True) -> Circuit:
    """Greedy peephole rewriting to a fixed point.

    Rules: drop rotations that are multiples of 2*pi, merge same-axis rotations
    on a wire, cancel self-inverse two-qubit pairs, commute Rz through CZ and
    through CNOT controls, trade CNOT1.Rz(q1).CNOT1 for CNOT2.Rz(q0).CNOT2 next
    to a CNOT2 (and the mirror), fuse SWAP with an adjacent CNOT. With
    ``fuse_swap=False`` SWAP gates are left in place.
    """
    gates = list(c.gates)
    phase = c.global_phase
    for n_pass in range(1, MAX_SIMPLIFY_PASSES + 1):
        changed, phase = _rewrite_pass(gates, phase, fuse_swap)
        if not changed:
            break
    logger.debug("simplify: %d -> %d gates in %d passes", len(c.gates), len(gates), n_pass)
    return Circuit(tuple(gates), phase)


# ----------------- Text format -----------------
_QUBIT_TOKEN = re.compile(r"^q([01])$")
_NO_ARG = {"h": GateKind.H, "s": GateKind.S, "sdg": GateKind.SDG,
           "x": GateKind.X, "y": GateKind.Y, "z": GateKind.Z}
_ROTATION_WORDS = {"ry": GateKind.RY, "rz": GateKind.RZ}
_TEXT = {
    GateKind.CNOT1: "cx q0 q1",
    GateKind.CNOT2: "cx q1 q0",
    GateKind.CZ: "cz q0 q1",
    GateKind.SWAP: "swap q0 q1",
}


def format_float(x: float) -> str:
    """17 significant digits; zero prints as ``0``."""
    x = float(x)
    return "0" if x == 0 else format(x, ".17g")


def canonicalize_angles(c: Circuit) -> Circuit:
    """Rotation angles wrapped into (-pi, pi]; R(t + 2 pi k) = (-1)^k R(t) goes to the phase."""
    gates = []
    phase = c.global_phase
    for g in c.gates:
        if g.is_rotation:
            wrapped = wrap_angle(g.angle)
            turns = round((g.angle - wrapped) / (2 * math.pi))
            phase += math.pi * (turns % 2)
            g = Gate(g.kind, g.qubit, wrapped)
        gates.append(g)
    return Circuit(tuple(gates), phase)


def emit_circuit_text(c: Circuit) -> str:
    c = canonicalize_angles(c)
    lines = [f"phase {format_float(c.global_phase)}"]
    for g in c.gates:
        if g.is_two_qubit:
            lines.append(_TEXT[g.kind])
        elif g.is_rotation:
            lines.append(f"{g.kind.value} q{g.qubit} {format_float(g.angle)}")
        else:
            lines.append(f"{g.kind.value} q{g.qubit}")
    return "\n".join(lines) + "\n"


def _parse_qubit(token: str, lineno: int) -> int:
    match = _QUBIT_TOKEN.match(token)
    if not match:
        raise ParseError(lineno, f"invalid qubit token {token!r}")
    return int(match.group(1))


def _parse_float(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"invalid number {token!r}") from None
    if not math.isfinite(value):
        raise ParseError(lineno, f"non-finite number {token!r}")
    return value


def _expect_arity(tokens: list[str], n: int, lineno: int):
    if len(tokens) != n:
        raise ParseError(lineno, f"{tokens[0]!r} expects {n - 1} argument(s), got {len(tokens) - 1}")


def parse_circuit_text(text: str) -> Circuit:
    gates: list[Gate] = []
    phase: float | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        word = tokens[0]
        if word == "phase":
            _expect_arity(tokens, 2, lineno)
            if phase is not None:
                raise ParseError(lineno, "phase given more than once")
            phase = _parse_float(tokens[1], lineno)
        elif word in _ROTATION_WORDS:
            _expect_arity(tokens, 3, lineno)
            gates.append(Gate(_ROTATION_WORDS[word], _parse_qubit(tokens[1], lineno),
                              _parse_float(tokens[2], lineno)))
        elif word in _NO_ARG:
            _expect_arity(tokens, 2, lineno)
            gates.append(Gate(_NO_ARG[word], _parse_qubit(tokens[1], lineno)))
        elif word in ("cx", "cz", "swap"):
            _expect_arity(tokens, 3, lineno)
            first, second = (_parse_qubit(t, lineno) for t in tokens[1:])
            if first == second:
                raise ParseError(lineno, f"{word} needs two distinct qubits")
            if word == "cx":
                gates.append(Gate.cnot1() if first == 0 else Gate.cnot2())
            else:
                gates.append(Gate(GateKind(word)))
        else:
            raise ParseError(lineno, f"unknown directive {word!r}")
    return Circuit(tuple(gates), phase if phase is not None else 0.0)
