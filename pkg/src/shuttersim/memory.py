"""Shutter quantum memory: write, read, full cycle, and multi-qubit storage.

Writing runs the transfer cell and then measures the photon, leaving the
qubit in the shutter as alpha|+> + (-1)^a beta|-> for measured bit a; the
measured photon is removed from the layout (the flying qubit is destroyed).
Reading transfers the shutter state onto a fresh photon and undoes the sign
bookkeeping with classically controlled corrections (cX with b, then cZ
with a), recovering the original optical qubit in every branch.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .statevector import (
    ATOL_LOGICAL,
    SQRT1_2,
    Branch,
    ClassicalRegister,
    EMPTY_REGISTER,
    PreconditionError,
    PureState,
    Subsystem,
    SystemLayout,
    append_subsystem,
    from_amplitudes,
    measure_subsystem,
    subsystem_fidelity,
    tensor,
)
from .shutterlogic import cx_classical, cz_classical, hadamard, shutter_interaction, transfer_cell

PLUS = np.array([SQRT1_2, SQRT1_2], dtype=complex)
ZERO = np.array([1.0, 0.0], dtype=complex)


def _require_subsystem_state(state: PureState, label: str, vector: np.ndarray, what: str) -> None:
    if subsystem_fidelity(state, label, vector) < 1.0 - ATOL_LOGICAL:
        raise PreconditionError(f"{label!r} must be prepared in {what} and unentangled")


def write_qubit(
    state: PureState,
    shutter: str,
    photon: str,
    bit_name: str,
    register: ClassicalRegister = EMPTY_REGISTER,
) -> list[Branch]:
    """Store the photon's qubit in a shutter prepared in |+>_S.

    Returns the two equally likely measurement branches; branch a stores
    alpha|+>_S + (-1)^a beta|->_S and no longer contains the photon.
    """
    _require_subsystem_state(state, shutter, PLUS, "|+>_S")
    after_cell = transfer_cell(state, shutter, photon)
    return measure_subsystem(
        after_cell, photon, "computational", bit_name, register, discard=True
    )


def read_qubit(
    state: PureState,
    register: ClassicalRegister,
    shutter: str,
    bit_a: str,
    fresh_photon: str,
    bit_b: str,
) -> list[Branch]:
    """Recover the stored qubit onto a fresh photon prepared in |0>_L.

    Runs the shutter interaction, a Hadamard on the photon, a |+>/|-> shutter
    measurement into bit b, then the cX(b) and cZ(a) corrections. The shutter
    is consumed (removed from the layout).
    """
    register.get(bit_a)  # fail fast if the write bit is missing
    _require_subsystem_state(state, fresh_photon, ZERO, "|0>_L")
    psi = shutter_interaction(state, shutter, fresh_photon)
    psi = hadamard(psi, fresh_photon)
    branches = []
    for branch in measure_subsystem(psi, shutter, "plusminus", bit_b, register, discard=True):
        corrected = cx_classical(branch.state, fresh_photon, branch.record.get(bit_b))
        corrected = cz_classical(corrected, fresh_photon, branch.record.get(bit_a))
        branches.append(Branch(branch.probability, corrected, branch.record))
    return branches


def memory_cycle(
    qubit: tuple[complex, complex],
    *,
    photon: str = "q",
    shutter: str = "s",
    bit_a: str = "a",
    bit_b: str = "b",
) -> list[Branch]:
    """Write then read one qubit; all four (a, b) branches, each probability 1/4.

    Every branch's final photon state equals the input alpha|0> + beta|1>.
    """
    alpha, beta = complex(qubit[0]), complex(qubit[1])
    if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > ATOL_LOGICAL:
        raise PreconditionError("input qubit amplitudes must be normalized")

    photon_state = from_amplitudes(
        SystemLayout.of((photon, "dualrail-photon")), [alpha, beta]
    )
    shutter_state = from_amplitudes(SystemLayout.of((shutter, "shutter")), PLUS)
    joint = tensor(photon_state, shutter_state)

    out: list[Branch] = []
    for written in write_qubit(joint, shutter, photon, bit_a):
        reloaded = append_subsystem(written.state, Subsystem(photon, "dualrail-photon"), 0)
        for read in read_qubit(reloaded, written.record, shutter, bit_a, photon, bit_b):
            out.append(
                Branch(written.probability * read.probability, read.state, read.record)
            )
    return out


def store_register(
    state: PureState,
    shutters: Sequence[str],
    *,
    bit_prefix: str = "a",
    register: ClassicalRegister = EMPTY_REGISTER,
) -> list[Branch]:
    """Write each photonic qubit of the state into its shutter, in layout order.

    The i-th photon (1-based) is stored in shutters[i-1] under bit name
    ``f"{bit_prefix}{i}"``. Returns the 2^n classical branches.
    """
    photons = _photon_labels(state.layout)
    if len(photons) != len(shutters):
        raise PreconditionError(
            f"state holds {len(photons)} photons but {len(shutters)} shutters were given"
        )
    branches = [Branch(1.0, state, register)]
    for i, (photon, shutter) in enumerate(zip(photons, shutters), start=1):
        nxt: list[Branch] = []
        for b in branches:
            for w in write_qubit(b.state, shutter, photon, f"{bit_prefix}{i}", b.record):
                nxt.append(Branch(b.probability * w.probability, w.state, w.record))
        branches = nxt
    return branches


def read_register(
    state: PureState,
    register: ClassicalRegister,
    shutters: Sequence[str],
    photons: Sequence[str],
    *,
    bit_prefix: str = "a",
    read_bit_prefix: str = "b",
) -> list[Branch]:
    """Read every stored qubit back onto fresh photons with the given labels.

    Inverse of :func:`store_register` for matching prefixes; the i-th shutter
    is read using correction bit ``f"{bit_prefix}{i}"`` into a fresh photon
    ``photons[i-1]``, recording bit ``f"{read_bit_prefix}{i}"``.
    """
    if len(photons) != len(shutters):
        raise PreconditionError("need one fresh photon label per shutter")
    branches = [Branch(1.0, state, register)]
    for i, (shutter, photon) in enumerate(zip(shutters, photons), start=1):
        nxt: list[Branch] = []
        for b in branches:
            reloaded = append_subsystem(b.state, Subsystem(photon, "dualrail-photon"), 0)
            for r in read_qubit(
                reloaded, b.record, shutter, f"{bit_prefix}{i}", photon, f"{read_bit_prefix}{i}"
            ):
                nxt.append(Branch(b.probability * r.probability, r.state, r.record))
        branches = nxt
    return branches


def _photon_labels(layout: SystemLayout) -> list[str]:
    return [s.label for s in layout.subsystems if s.kind == "dualrail-photon"]
