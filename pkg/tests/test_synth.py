import math

import numpy as np
import pytest

from mincnot.circuit_ir import CNOT1, CZ, SWAP, GateKind, circuit_to_unitary, count_gates
from mincnot.core_linalg import I4, dist_up_to_phase, haar_random_unitary, random_o4_negdet, random_so4
from mincnot.errors import NotLocallyEquivalent, NotUnitary
from mincnot.kak import kak_decompose, n_matrix
from mincnot.synth import (
    SynthesisPath,
    cnot_class,
    fit_local_gates,
    synth_n,
    synth_u4,
    template_fit_residual,
    template_unitary,
    two_cnot_core,
)

QUARTER = math.pi / 4


# ----------------- templates -----------------
def test_synth_n_shape():
    c = synth_n(0.3, 0.2, 0.1)
    counts = count_gates(c)
    assert counts.cnot == 3
    assert counts.one_qubit == 5
    assert c.global_phase == pytest.approx(math.pi / 4)


def test_synth_n_zero_is_identity():
    assert dist_up_to_phase(circuit_to_unitary(synth_n(0, 0, 0)), I4) < 1e-10


def test_synth_n_matches_core_exactly(rng):
    for _ in range(100):
        params = rng.uniform(-math.pi, math.pi, 3)
        assert np.max(np.abs(circuit_to_unitary(synth_n(*params)) - n_matrix(*params))) < 1e-9


def test_synth_n_cnot_point():
    dec = kak_decompose(circuit_to_unitary(synth_n(QUARTER, 0, 0)))
    assert dec.interaction == pytest.approx((QUARTER, 0, 0), abs=1e-9)


def test_two_cnot_core_interaction():
    dec = kak_decompose(circuit_to_unitary(two_cnot_core(0.3, 0.1)))
    assert dec.interaction == pytest.approx((0.3, 0.1, 0), abs=1e-9)


# ----------------- classification -----------------
def test_cnot_class_named(random_su2):
    assert cnot_class(np.kron(random_su2(), random_su2())) == 0
    assert cnot_class(CNOT1) == 1
    assert cnot_class(CZ) == 1
    assert cnot_class(SWAP) == 3
    assert cnot_class(haar_random_unitary(0)) == 3


@pytest.mark.parametrize("seed", range(10))
def test_cnot_class_of_so4(seed):
    assert cnot_class(random_so4(seed)) <= 2


def test_cnot_class_of_dressed_cnot(random_su2):
    u = np.kron(random_su2(), random_su2()) @ CNOT1 @ np.kron(random_su2(), random_su2())
    assert cnot_class(u) == 1


def test_cnot_class_of_inverse(random_su2):
    dressed = np.kron(random_su2(), random_su2()) @ CNOT1 @ np.kron(random_su2(), random_su2())
    for u in (haar_random_unitary(5), random_so4(5), dressed, SWAP):
        assert cnot_class(u.conj().T) == cnot_class(u)


# ----------------- local fitting -----------------
def test_fit_local_gates_on_core():
    left, right = fit_local_gates(CNOT1, CNOT1)
    assert np.max(np.abs(left.matrix() @ CNOT1 @ right.matrix() - CNOT1)) < 1e-8


def test_fit_local_gates_recovers_frames(random_su2):
    for _ in range(10):
        u = np.kron(random_su2(), random_su2()) @ CNOT1 @ np.kron(random_su2(), random_su2())
        left, right = fit_local_gates(u, CNOT1)
        assert np.max(np.abs(left.matrix() @ CNOT1 @ right.matrix() - u)) < 1e-8


def test_fit_local_gates_rejects_other_class():
    with pytest.raises(NotLocallyEquivalent):
        fit_local_gates(SWAP, CNOT1)


# ----------------- synth_u4 -----------------
@pytest.mark.parametrize("seed", range(100))
def test_synth_u4_haar(seed):
    u = haar_random_unitary(seed)
    report = synth_u4(u)
    assert report.cnot_class == 3
    assert report.path is SynthesisPath.GENERIC
    assert report.counts.cnot == 3
    assert report.counts.one_qubit <= 15
    assert report.residual < 1e-8
    assert dist_up_to_phase(circuit_to_unitary(report.circuit), u) < 1e-8


def test_synth_u4_generic_uses_only_cnot_and_rotations():
    report = synth_u4(haar_random_unitary(3))
    kinds = {g.kind for g in report.circuit.gates}
    assert kinds <= {GateKind.RY, GateKind.RZ, GateKind.CNOT1, GateKind.CNOT2}


def test_synth_u4_identity():
    report = synth_u4(I4)
    assert report.path is SynthesisPath.PRODUCT
    assert report.circuit.gates == ()
    assert report.residual < 1e-12


def test_synth_u4_product(random_su2):
    u = np.exp(0.4j) * np.kron(random_su2(), random_su2())
    report = synth_u4(u)
    assert report.cnot_class == 0
    assert report.counts.cnot == 0
    assert report.counts.one_qubit <= 6
    assert report.residual < 1e-8


@pytest.mark.parametrize("u", [CNOT1, CZ])
def test_synth_u4_one_cnot(u):
    report = synth_u4(u)
    assert report.path is SynthesisPath.ONE_CNOT
    assert report.counts.cnot == 1
    assert report.counts.one_qubit <= 12
    assert report.residual < 1e-8


@pytest.mark.parametrize("seed", range(20))
def test_synth_u4_so4(seed):
    report = synth_u4(random_so4(seed))
    assert report.path is SynthesisPath.SO4
    assert report.counts.cnot == 2
    assert report.counts.one_qubit <= 12
    assert report.residual < 1e-8


@pytest.mark.parametrize("seed", range(20))
def test_synth_u4_negdet(seed):
    report = synth_u4(random_o4_negdet(seed))
    assert report.path is SynthesisPath.O4_NEG
    assert report.counts.cnot == 3
    assert report.counts.swap == 0
    assert report.counts.one_qubit <= 12
    assert report.residual < 1e-8


def test_synth_u4_swap():
    expanded = synth_u4(SWAP)
    assert expanded.cnot_class == 3
    assert expanded.counts.cnot == 3
    kept = synth_u4(SWAP, expand_swap=False)
    assert kept.counts.swap == 1
    assert kept.counts.cnot == 2
    assert kept.residual < 1e-8


def test_synth_u4_keeps_swap_through_simplify():
    kept = synth_u4(SWAP, expand_swap=False, simplify_output=True)
    assert kept.counts.swap == 1
    assert kept.counts.cnot <= 2
    assert dist_up_to_phase(circuit_to_unitary(kept.circuit), SWAP) < 1e-8


def test_synth_u4_two_cnot_path(random_su2):
    u = np.kron(random_su2(), random_su2()) @ n_matrix(0.5, 0.2, 0) @ np.kron(random_su2(), random_su2())
    report = synth_u4(u)
    assert report.cnot_class == 2
    assert report.path is SynthesisPath.TWO_CNOT
    assert report.counts.cnot == 2
    assert report.counts.one_qubit <= 14
    assert report.residual < 1e-8


def test_synth_u4_without_simplify_keeps_template():
    report = synth_u4(CNOT1, simplify_output=False)
    assert report.counts.cnot == 1
    assert report.counts.one_qubit == 12


def test_synth_u4_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        synth_u4(np.ones((4, 4)))


# ----------------- brute-force oracle -----------------
def test_template_unitary_zero_angles():
    assert np.allclose(template_unitary(np.zeros(12), 1), CNOT1)
    assert np.allclose(template_unitary(np.zeros(6), 0), I4)


def test_swap_is_out_of_reach_of_two_cnots():
    assert template_fit_residual(SWAP, 2, restarts=5, seed=0) >= 0.05


def test_dressed_cnot_needs_exactly_one_cnot(random_su2):
    u = np.kron(random_su2(), random_su2()) @ CNOT1 @ np.kron(random_su2(), random_su2())
    assert template_fit_residual(u, 0, restarts=5, seed=0) >= 0.05
    assert template_fit_residual(u, 1, restarts=10, seed=0, maxiter=1000) < 1e-3


def test_dressed_two_parameter_core_needs_two_cnots(random_su2):
    u = np.kron(random_su2(), random_su2()) @ n_matrix(0.5, 0.2, 0) @ np.kron(random_su2(), random_su2())
    assert template_fit_residual(u, 1, restarts=5, seed=0) >= 0.05
    assert template_fit_residual(u, 2, restarts=10, seed=0, maxiter=1000) < 1e-3


def test_generic_gate_is_out_of_reach_of_two_cnots(random_su2):
    u = np.kron(random_su2(), random_su2()) @ n_matrix(0.7, 0.5, 0.35) @ np.kron(random_su2(), random_su2())
    assert template_fit_residual(u, 2, restarts=5, seed=0) >= 0.05
