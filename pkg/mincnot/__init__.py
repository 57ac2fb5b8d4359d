"""Minimal-CNOT synthesis of two-qubit gates."""

from .circuit_ir import Circuit, Gate, GateCounts, GateKind, emit_circuit_text, parse_circuit_text, simplify
from .errors import SynthesisError
from .ep import ep_exact, ep_monte_carlo, swap_lower_bound_witness
from .kak import CanonicalDecomposition, kak_decompose, makhlin_invariants
from .synth import SynthesisReport, cnot_class, synth_u4

__version__ = "0.1.0"
