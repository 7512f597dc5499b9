"""Gate set for shutter-logic circuits.

Four gates suffice: the optical Hadamard, classically controlled X and Z on a
photon, and the shutter-interaction gate Sh (a CNOT whose control is the
shutter). The transfer cell (Hadamard then Sh) maps photon amplitudes onto
the shutter's |+>/|-> basis and is the building block of the memory.

All gates are generated from explicit 2x2 / 4x4 matrices so a single,
uniformly testable code path applies them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .statevector import (
    SQRT1_2,
    Branch,
    ClassicalRegister,
    LayoutError,
    PureState,
    apply_unitary,
    measure_subsystem,
)

HADAMARD = np.array([[SQRT1_2, SQRT1_2], [SQRT1_2, -SQRT1_2]], dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# |0>_S fixes the photon, |1>_S swaps its port: CNOT with the shutter control.
SHUTTER_INTERACTION = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ],
    dtype=complex,
)


def _require_kind(state: PureState, label: str, kind: str) -> None:
    sub = state.layout.subsystem(label)
    if sub.kind != kind:
        raise LayoutError(f"{label!r} has kind {sub.kind!r}, expected {kind!r}")


def hadamard(state: PureState, photon: str) -> PureState:
    """H on a qubit subsystem: |0> -> |+>, |1> -> |->; its own inverse."""
    if state.layout.subsystem(photon).dimension != 2:
        raise LayoutError(f"hadamard target {photon!r} is not 2-dimensional")
    return apply_unitary(state, HADAMARD, [photon])


def cx_classical(state: PureState, photon: str, b: int) -> PureState:
    """Pauli-X on the photon when the classical control bit b is 1."""
    if b not in (0, 1):
        raise ValueError(f"control bit must be 0 or 1, got {b!r}")
    if b == 0:
        return state
    return apply_unitary(state, PAULI_X, [photon])


def cz_classical(state: PureState, photon: str, b: int) -> PureState:
    """Sign flip on the photon's |1> component when the control bit b is 1."""
    if b not in (0, 1):
        raise ValueError(f"control bit must be 0 or 1, got {b!r}")
    if b == 0:
        return state
    return apply_unitary(state, PAULI_Z, [photon])


def shutter_interaction(state: PureState, shutter: str, photon: str) -> PureState:
    """Joint shutter-photon evolution: the photon's port swaps iff the slit is open."""
    _require_kind(state, shutter, "shutter")
    _require_kind(state, photon, "dualrail-photon")
    return apply_unitary(state, SHUTTER_INTERACTION, [shutter, photon])


def transfer_cell(state: PureState, shutter: str, photon: str) -> PureState:
    """Hadamard on the photon followed by the shutter interaction.

    Keeps the shutter's |+>/|-> state when the photon is |0>_L and swaps
    |+> <-> |-> when it is |1>_L.
    """
    return shutter_interaction(hadamard(state, photon), shutter, photon)


@dataclass(frozen=True)
class GateOp:
    """One circuit element, resolvable against a state and classical register.

    kind "H" and "Sh" act unconditionally; "cX"/"cZ" read ``control_bit`` from
    the register at execution time; "measure" records ``result_bit``.
    """

    kind: Literal["H", "cX", "cZ", "Sh", "measure"]
    targets: tuple[str, ...]
    control_bit: str | None = None
    basis: str | None = None
    result_bit: str | None = None


def apply_gate_op(
    state: PureState, register: ClassicalRegister, op: GateOp
) -> list[Branch]:
    """Execute one GateOp; unitary gates yield a single probability-1 branch."""
    if op.kind == "H":
        return [Branch(1.0, hadamard(state, op.targets[0]), register)]
    if op.kind == "cX":
        b = register.get(op.control_bit)
        return [Branch(1.0, cx_classical(state, op.targets[0], b), register)]
    if op.kind == "cZ":
        b = register.get(op.control_bit)
        return [Branch(1.0, cz_classical(state, op.targets[0], b), register)]
    if op.kind == "Sh":
        shutter, photon = op.targets
        return [Branch(1.0, shutter_interaction(state, shutter, photon), register)]
    if op.kind == "measure":
        return measure_subsystem(
            state, op.targets[0], op.basis, op.result_bit, register
        )
    raise ValueError(f"unknown gate kind {op.kind!r}")
