"""Memory-based shutter CNOT with full branch enumeration and trace checkpoints.

The circuit writes both qubits into shutters, inserts one extra shutter
interaction between the control photon and the *target* shutter, measures
everything, reads the shutters back onto fresh photons, and finishes with the
correction chain cX(b) on qubit 1, cX(d) on qubit 2, cZ(a) on qubit 1,
cZ(c) on qubit 2, and the extra cZ(c) on qubit 1 that repairs the sign the
intermediate interaction left behind. Every one of the 16 (a, c, b, d)
branches realizes the ideal CNOT on the photonic pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .statevector import (
    Branch,
    PreconditionError,
    PureState,
    Subsystem,
    append_subsystem,
    measure_subsystem,
)
from .memory import PLUS, _photon_labels, _require_subsystem_state
from .shutterlogic import cx_classical, cz_classical, hadamard, shutter_interaction, transfer_cell

CNOT_MATRIX = np.array(
    [
        [1, 0, 0, 0],
        [0, 1, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
    ],
    dtype=complex,
)

Stage = Literal["post-write", "post-interaction", "post-measure"]
BranchKey = tuple[int, int, int, int]  # (a, c, b, d)


@dataclass(frozen=True)
class CnotTrace:
    """All 16 classical branches of one shutter-CNOT run, plus checkpoints."""

    branches: tuple[Branch, ...]
    post_write: PureState | None = None
    post_interaction: PureState | None = None
    post_measure: dict[tuple[int, int], PureState] = field(default_factory=dict)

    def by_key(self, key: BranchKey) -> Branch:
        a, c, b, d = key
        for branch in self.branches:
            bits = branch.record
            if (bits.get("a"), bits.get("c"), bits.get("b"), bits.get("d")) == (a, c, b, d):
                return branch
        raise KeyError(f"no branch with (a, c, b, d) = {key}")


def shutter_cnot(
    state: PureState,
    shutters: tuple[str, str],
    photons: tuple[str, str] | None = None,
    *,
    keep_checkpoints: bool = True,
    apply_control_sign_fix: bool = True,
) -> CnotTrace:
    """Run the memory-based CNOT on a two-photon state with |+>_S shutters.

    ``shutters`` is (control_shutter, target_shutter); ``photons`` defaults to
    the two dual-rail subsystems in layout order, (control, target). Fresh
    read-out photons are created internally and reuse the input labels, so
    each branch's final state is a two-photon state over the same labels.
    ``apply_control_sign_fix=False`` omits the last cZ(c)-on-qubit-1
    correction (regression hook: exactly the c=1 branches then break).
    """
    control_shutter, target_shutter = shutters
    if photons is None:
        found = _photon_labels(state.layout)
        if len(found) != 2:
            raise PreconditionError(
                f"expected exactly 2 dual-rail photons in the layout, found {found}"
            )
        photons = (found[0], found[1])
    control_photon, target_photon = photons
    _require_subsystem_state(state, control_shutter, PLUS, "|+>_S")
    _require_subsystem_state(state, target_shutter, PLUS, "|+>_S")

    # Write stage: both transfer cells, photons not yet measured.
    psi = transfer_cell(state, control_shutter, control_photon)
    psi = transfer_cell(psi, target_shutter, target_photon)
    post_write = psi if keep_checkpoints else None

    # The coupling that makes this a CNOT rather than two parallel memories.
    psi = shutter_interaction(psi, target_shutter, control_photon)
    post_interaction = psi if keep_checkpoints else None

    post_measure: dict[tuple[int, int], PureState] = {}
    branches: list[Branch] = []
    for br_a in measure_subsystem(psi, control_photon, "computational", "a", discard=True):
        for br_c in measure_subsystem(
            br_a.state, target_photon, "computational", "c", br_a.record, discard=True
        ):
            record_ac = br_c.record
            if keep_checkpoints:
                post_measure[(record_ac.get("a"), record_ac.get("c"))] = br_c.state
            p_ac = br_a.probability * br_c.probability

            # Read-out stage on fresh photons carrying the original labels.
            out = append_subsystem(br_c.state, Subsystem(control_photon, "dualrail-photon"), 0)
            out = append_subsystem(out, Subsystem(target_photon, "dualrail-photon"), 0)
            out = shutter_interaction(out, control_shutter, control_photon)
            out = shutter_interaction(out, target_shutter, target_photon)
            out = hadamard(out, control_photon)
            out = hadamard(out, target_photon)

            for br_b in measure_subsystem(
                out, control_shutter, "plusminus", "b", record_ac, discard=True
            ):
                for br_d in measure_subsystem(
                    br_b.state, target_shutter, "plusminus", "d", br_b.record, discard=True
                ):
                    record = br_d.record
                    final = cx_classical(br_d.state, control_photon, record.get("b"))
                    final = cx_classical(final, target_photon, record.get("d"))
                    final = cz_classical(final, control_photon, record.get("a"))
                    final = cz_classical(final, target_photon, record.get("c"))
                    if apply_control_sign_fix:
                        final = cz_classical(final, control_photon, record.get("c"))
                    probability = p_ac * br_b.probability * br_d.probability
                    branches.append(Branch(probability, final, record))

    return CnotTrace(
        branches=tuple(branches),
        post_write=post_write,
        post_interaction=post_interaction,
        post_measure=post_measure,
    )


def checkpoint_states(
    trace: CnotTrace, stage: Stage, branch: tuple[int, int] | None = None
) -> PureState:
    """Recorded joint state at a named stage.

    "post-write" and "post-interaction" are pre-measurement (single state);
    "post-measure" requires the (a, c) branch key.
    """
    if stage == "post-write":
        state = trace.post_write
    elif stage == "post-interaction":
        state = trace.post_interaction
    elif stage == "post-measure":
        if branch is None:
            raise ValueError("post-measure checkpoint needs the (a, c) branch key")
        if branch not in trace.post_measure:
            raise ValueError(f"no post-measure checkpoint for branch {branch}")
        return trace.post_measure[branch]
    else:
        raise ValueError(f"unknown checkpoint stage {stage!r}")
    if state is None:
        raise ValueError("trace was produced with keep_checkpoints=False")
    return state
