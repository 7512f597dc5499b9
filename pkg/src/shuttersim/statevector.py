"""Exact complex state-vector engine over labelled multi-subsystem layouts.

States are immutable; every operation returns a new value. Subsystem 0 is the
most significant digit of the mixed-radix basis index (leftmost ket factor),
so for a [shutter, photon] layout the amplitude vector reads |00>, |01>,
|10>, |11> top to bottom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

ATOL_LOGICAL = 1e-10   # logical assertions (normalization, probabilities)
ATOL_NORM_DRIFT = 1e-12  # single-operation norm drift
PROB_FLOOR = 1e-14     # branches below this probability are dropped

SQRT1_2 = 1.0 / math.sqrt(2.0)

KIND_DIMENSIONS = {
    "shutter": 2,
    "dualrail-photon": 2,
    "ifm-photon": 4,
    "bomb": 2,
}

BasisName = Literal["computational", "plusminus"]

# Measurement basis vectors as columns, outcome 0 first.
_BASIS_VECTORS = {
    "computational": np.eye(2, dtype=complex),
    "plusminus": np.array([[SQRT1_2, SQRT1_2], [SQRT1_2, -SQRT1_2]], dtype=complex),
}


class ShutterSimError(Exception):
    """Base class for all errors raised by this package."""


class LayoutError(ShutterSimError):
    """Unknown label, duplicate label, wrong kind, or mismatched layouts."""


class BasisIndexError(ShutterSimError):
    """Basis index out of range for a subsystem."""


class UnitarityError(ShutterSimError):
    """Matrix fails the unitarity tolerance."""


class MeasurementError(ShutterSimError):
    """Unsupported measurement (non-qubit target or subnormalized state)."""


class RegisterError(ShutterSimError):
    """Classical bit read before it was written, or bit value out of range."""


class PreconditionError(ShutterSimError):
    """An operation's documented precondition does not hold."""


@dataclass(frozen=True)
class Subsystem:
    label: str
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KIND_DIMENSIONS:
            raise LayoutError(f"unknown subsystem kind {self.kind!r}")

    @property
    def dimension(self) -> int:
        return KIND_DIMENSIONS[self.kind]


@dataclass(frozen=True)
class SystemLayout:
    """Ordered list of subsystems defining basis-index semantics."""

    subsystems: tuple[Subsystem, ...]

    def __post_init__(self) -> None:
        labels = [s.label for s in self.subsystems]
        if len(set(labels)) != len(labels):
            raise LayoutError(f"duplicate labels in layout: {labels}")

    @staticmethod
    def of(*specs: tuple[str, str]) -> "SystemLayout":
        """Build a layout from (label, kind) pairs."""
        return SystemLayout(tuple(Subsystem(label, kind) for label, kind in specs))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.dimension for s in self.subsystems)

    @property
    def dimension(self) -> int:
        return math.prod(self.dims)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.subsystems)

    def position(self, label: str) -> int:
        for i, s in enumerate(self.subsystems):
            if s.label == label:
                return i
        raise LayoutError(f"no subsystem labelled {label!r} in layout {self.labels}")

    def subsystem(self, label: str) -> Subsystem:
        return self.subsystems[self.position(label)]

    def without(self, label: str) -> "SystemLayout":
        pos = self.position(label)
        return SystemLayout(self.subsystems[:pos] + self.subsystems[pos + 1:])

    def appended(self, sub: Subsystem) -> "SystemLayout":
        return SystemLayout(self.subsystems + (sub,))


@dataclass(frozen=True)
class ClassicalRegister:
    """Named classical bits; reading an unset bit is an error, never a default."""

    bits: tuple[tuple[str, int], ...] = ()

    def get(self, name: str) -> int:
        for key, value in self.bits:
            if key == name:
                return value
        raise RegisterError(f"classical bit {name!r} read before being set")

    def has(self, name: str) -> bool:
        return any(key == name for key, _ in self.bits)

    def with_bit(self, name: str, value: int) -> "ClassicalRegister":
        if value not in (0, 1):
            raise RegisterError(f"bit {name!r} must be 0 or 1, got {value!r}")
        if self.has(name):
            raise RegisterError(f"classical bit {name!r} is already set")
        return ClassicalRegister(self.bits + ((name, value),))

    def as_dict(self) -> dict[str, int]:
        return dict(self.bits)


EMPTY_REGISTER = ClassicalRegister()


@dataclass(frozen=True, eq=False)
class PureState:
    """Complex amplitude vector over a layout's mixed-radix basis."""

    layout: SystemLayout
    amps: np.ndarray
    norm_tag: Literal["normalized", "subnormalized"] = "normalized"

    def __post_init__(self) -> None:
        amps = np.array(self.amps, dtype=complex)
        if amps.shape != (self.layout.dimension,):
            raise LayoutError(
                f"amplitude vector of shape {amps.shape} does not match "
                f"layout dimension {self.layout.dimension}"
            )
        if not np.all(np.isfinite(amps.real)) or not np.all(np.isfinite(amps.imag)):
            raise ValueError("amplitudes must be finite (no NaN/Inf)")
        norm_sq = float(np.vdot(amps, amps).real)
        if self.norm_tag == "normalized":
            if abs(norm_sq - 1.0) > ATOL_LOGICAL:
                raise ValueError(f"state not normalized: <psi|psi> = {norm_sq!r}")
        else:
            if not 0.0 < norm_sq <= 1.0 + ATOL_LOGICAL:
                raise ValueError(f"subnormalized state needs 0 < <psi|psi> <= 1, got {norm_sq!r}")
        amps.flags.writeable = False
        object.__setattr__(self, "amps", amps)

    @property
    def weight(self) -> float:
        """<psi|psi>; 1 for normalized states by construction."""
        return float(np.vdot(self.amps, self.amps).real)

    def tensor_view(self) -> np.ndarray:
        return self.amps.reshape(self.layout.dims)


@dataclass(frozen=True)
class Branch:
    """One measurement outcome: probability, renormalized state, bit record."""

    probability: float
    state: PureState
    record: ClassicalRegister = field(default=EMPTY_REGISTER)


def make_basis_state(layout: SystemLayout, indices: Sequence[int]) -> PureState:
    """Normalized state with amplitude 1 on the addressed basis vector."""
    dims = layout.dims
    if len(indices) != len(dims):
        raise BasisIndexError(
            f"expected {len(dims)} indices for layout {layout.labels}, got {len(indices)}"
        )
    flat = 0
    for sub, dim, index in zip(layout.subsystems, dims, indices):
        if not 0 <= index < dim:
            raise BasisIndexError(
                f"basis index {index} out of range for {sub.label!r} (dimension {dim})"
            )
        flat = flat * dim + index
    amps = np.zeros(layout.dimension, dtype=complex)
    amps[flat] = 1.0
    return PureState(layout, amps)


def from_amplitudes(layout: SystemLayout, amps: Sequence[complex]) -> PureState:
    return PureState(layout, np.asarray(amps, dtype=complex))


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor composition; b's subsystems follow a's in the joint layout."""
    if a.norm_tag != "normalized" or b.norm_tag != "normalized":
        raise PreconditionError("tensor composition requires normalized factors")
    layout = SystemLayout(a.layout.subsystems + b.layout.subsystems)
    return PureState(layout, np.kron(a.amps, b.amps))


def append_subsystem(state: PureState, sub: Subsystem, index: int = 0) -> PureState:
    """Adjoin a fresh subsystem prepared in a basis state."""
    fresh = make_basis_state(SystemLayout((sub,)), [index])
    return tensor(state, fresh)


def permuted(state: PureState, order: Sequence[str]) -> PureState:
    """Reorder subsystems to the given label order (same amplitudes, new indexing)."""
    if sorted(order) != sorted(state.layout.labels):
        raise LayoutError(f"permutation {order!r} does not cover layout {state.layout.labels}")
    positions = [state.layout.position(label) for label in order]
    new_layout = SystemLayout(tuple(state.layout.subsystems[p] for p in positions))
    amps = np.transpose(state.tensor_view(), positions).reshape(-1)
    return PureState(new_layout, amps, state.norm_tag)


def check_unitary(matrix: np.ndarray, dim: int) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (dim, dim):
        raise UnitarityError(f"expected a {dim}x{dim} matrix, got shape {matrix.shape}")
    defect = np.max(np.abs(matrix.conj().T @ matrix - np.eye(dim)))
    if defect > ATOL_LOGICAL:
        raise UnitarityError(f"matrix is not unitary: max |U^dag U - I| = {defect:g}")
    return matrix


def apply_unitary(state: PureState, matrix: np.ndarray, targets: Sequence[str]) -> PureState:
    """Apply a unitary on the target subsystems, identity elsewhere."""
    layout = state.layout
    positions = [layout.position(t) for t in targets]
    if len(set(positions)) != len(positions):
        raise LayoutError(f"repeated target labels: {targets!r}")
    dims = layout.dims
    tdim = math.prod(dims[p] for p in positions)
    matrix = check_unitary(matrix, tdim)

    front = list(range(len(positions)))
    psi = np.moveaxis(state.tensor_view(), positions, front)
    moved_shape = psi.shape
    psi = matrix @ psi.reshape(tdim, -1)
    psi = np.moveaxis(psi.reshape(moved_shape), front, positions)
    return PureState(layout, psi.reshape(-1), state.norm_tag)


def measure_subsystem(
    state: PureState,
    target: str,
    basis: BasisName = "computational",
    bit_name: str | None = None,
    register: ClassicalRegister = EMPTY_REGISTER,
    *,
    discard: bool = False,
) -> list[Branch]:
    """Projective measurement of a qubit subsystem with full branch enumeration.

    One Branch per nonzero-probability outcome, each renormalized. The record
    gains one named bit: 0 for the first basis vector (|+> in the plusminus
    basis), 1 for the second. With ``discard=True`` the measured subsystem is
    removed from the layout (the flying qubit is destroyed).
    """
    if basis not in _BASIS_VECTORS:
        raise MeasurementError(f"unknown measurement basis {basis!r}")
    if state.norm_tag != "normalized":
        raise MeasurementError("measurement requires a normalized state")
    pos = state.layout.position(target)
    if state.layout.dims[pos] != 2:
        raise MeasurementError(
            f"cannot measure {target!r}: dimension {state.layout.dims[pos]} != 2"
        )
    name = bit_name if bit_name is not None else target

    psi = np.moveaxis(state.tensor_view(), pos, 0)
    vectors = _BASIS_VECTORS[basis]
    branches: list[Branch] = []
    for outcome in (0, 1):
        v = vectors[:, outcome]
        rest = np.tensordot(v.conj(), psi, axes=([0], [0]))
        probability = float(np.vdot(rest, rest).real)
        if probability < PROB_FLOOR:
            continue
        rest = rest / math.sqrt(probability)
        if discard:
            post = PureState(state.layout.without(target), rest.reshape(-1))
        else:
            full = np.moveaxis(np.multiply.outer(v, rest), 0, pos)
            post = PureState(state.layout, full.reshape(-1))
        branches.append(Branch(probability, post, register.with_bit(name, outcome)))

    total = sum(b.probability for b in branches)
    if abs(total - 1.0) > ATOL_LOGICAL:
        raise MeasurementError(f"branch probabilities sum to {total!r}, expected 1")
    return branches


def fidelity(a: PureState, b: PureState) -> float:
    """|<a|b>|^2; invariant under global phase on either argument."""
    if a.layout != b.layout:
        raise LayoutError(
            f"fidelity needs identical layouts, got {a.layout.labels} vs {b.layout.labels}"
        )
    if a.norm_tag != "normalized" or b.norm_tag != "normalized":
        raise PreconditionError("fidelity requires normalized states")
    return float(abs(np.vdot(a.amps, b.amps)) ** 2)


def reduced_density(state: PureState, label: str) -> np.ndarray:
    """Reduced density matrix of one subsystem (used for precondition checks)."""
    pos = state.layout.position(label)
    d = state.layout.dims[pos]
    psi = np.moveaxis(state.tensor_view(), pos, 0).reshape(d, -1)
    return psi @ psi.conj().T


def subsystem_fidelity(state: PureState, label: str, vector: np.ndarray) -> float:
    """<v|rho|v> for one subsystem; 1 iff the subsystem factors out in state |v>."""
    rho = reduced_density(state, label)
    v = np.asarray(vector, dtype=complex)
    return float((v.conj() @ rho @ v).real)
