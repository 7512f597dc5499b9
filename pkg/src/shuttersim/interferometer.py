"""Interaction-free quantum-shutter model: single and nested interferometers.

A photon cycles through a polarization rotator; a bomb (the absorber) may sit
in the vertical arm. Absorption is a terminal branch whose probability is
logged per cycle; the surviving component continues coherently. Two nested
interferometers joined by a polarizing beamsplitter realize the shutter: with
the bomb absent the photon keeps its port, with the bomb present (and an odd
cycle count) the ports swap, reproducing the shutter-interaction truth table
in the large-N limit with theta = pi/(N+1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .statevector import (
    ATOL_LOGICAL,
    PreconditionError,
    PureState,
    SystemLayout,
)

# Hilbert-space conventions for joint runs.
IFM_BASIS = ("H1", "V1", "H2", "V2")
_SINGLE_LAYOUT = SystemLayout.of(("photon", "dualrail-photon"), ("bomb", "bomb"))
_NESTED_LAYOUT = SystemLayout.of(("photon", "ifm-photon"), ("bomb", "bomb"))
_BOMB_ONLY_LAYOUT = SystemLayout.of(("bomb", "bomb"))


@dataclass(frozen=True)
class InterferometerConfig:
    """Physical-shutter parameters: rotator angle, cycle count, bomb amplitudes."""

    theta: float
    cycles: int
    bomb_amp_absent: complex = 1.0
    bomb_amp_present: complex = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")
        if self.cycles < 1:
            raise ValueError("cycle count must be a positive integer")
        weight = abs(self.bomb_amp_absent) ** 2 + abs(self.bomb_amp_present) ** 2
        if abs(weight - 1.0) > ATOL_LOGICAL:
            raise ValueError(f"bomb amplitudes must be normalized, |.|^2 sums to {weight!r}")


@dataclass(frozen=True)
class RunOutcome:
    """Surviving branches, total absorption probability, per-cycle absorption log."""

    survived: tuple[tuple[float, PureState], ...]
    exploded: float
    cycle_log: tuple[float, ...]

    @property
    def survival_probability(self) -> float:
        return sum(p for p, _ in self.survived)


class ShutterErrors(NamedTuple):
    leakage_prob: float
    explosion_prob_present: float


def rotator_matrix(theta: float) -> np.ndarray:
    """Polarization rotator: H -> cos(theta) H + sin(theta) V."""
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def nested_rotator_matrix(theta: float) -> np.ndarray:
    """Per-arm evolution of the nested scheme: -theta rotator plus pi shift folded in."""
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]])


def single_ifm_run(theta: float, cycles: int, bomb_present: bool) -> RunOutcome:
    """Cycle-by-cycle single-interferometer interrogation.

    With the bomb present, each cycle absorbs the vertical component
    (probability sin^2 theta of what remains), so survival after N cycles is
    cos^2N theta with the photon left in |H>. Without the bomb the photon
    evolves coherently to cos(N theta)|H> + sin(N theta)|V>.
    """
    if cycles < 1:
        raise ValueError("cycle count must be a positive integer")
    rot = rotator_matrix(theta).astype(complex)
    # Joint amplitudes indexed [photon(H,V), bomb(absent,present)].
    psi = np.zeros((2, 2), dtype=complex)
    psi[0, 1 if bomb_present else 0] = 1.0

    cycle_log: list[float] = []
    for _ in range(cycles):
        psi = np.tensordot(rot, psi, axes=([1], [0]))
        absorbed = float(abs(psi[1, 1]) ** 2)
        psi[1, 1] = 0.0
        cycle_log.append(absorbed)

    return _collect_outcome(psi, _SINGLE_LAYOUT, cycle_log)


def nested_cycle_operator(theta: float) -> np.ndarray:
    """One full cycle of the nested shutter: per-arm rotations then the PBS swap.

    Eigenvalues are -e^{i theta}, -e^{-i theta}, 1 and -1.
    """
    arm = nested_rotator_matrix(theta)
    u1 = np.zeros((4, 4))
    u1[:2, :2] = arm
    u1[2:, 2:] = arm
    pbs = np.eye(4)[[2, 1, 0, 3]]  # exchanges H1 and H2, keeps V1 and V2
    return pbs @ u1


def closed_form_power(theta: float, cycles: int) -> np.ndarray:
    """N-th power of the nested cycle operator via its spectral form (odd N only)."""
    _require_odd(cycles)
    a = (cycles + 1) / 2 * theta
    b = (cycles - 1) / 2 * theta
    sa, ca, sb, cb = math.sin(a), math.cos(a), math.sin(b), math.cos(b)
    return np.array(
        [
            [sa * sb, -ca * sb, ca * cb, sa * cb],
            [sa * cb, -ca * cb, -ca * sb, -sa * sb],
            [ca * cb, sa * cb, sa * sb, -ca * sb],
            [-ca * sb, -sa * sb, sa * cb, -ca * cb],
        ]
    )


def limit_operator() -> np.ndarray:
    """N -> infinity form of the cycle power at theta = pi/(N+1)."""
    return np.array(
        [
            [1, 0, 0, 0],
            [0, 0, 0, -1],
            [0, 0, 1, 0],
            [0, -1, 0, 0],
        ],
        dtype=float,
    )


def nested_shutter_run(
    config: InterferometerConfig, photon_in: str | Sequence[complex]
) -> RunOutcome:
    """Joint photon-bomb evolution of the nested shutter, cycle by cycle.

    ``photon_in`` is "H1", "H2", or amplitudes over (H1, H2); an initial
    vertical component is rejected. The bomb-absent component evolves under
    the cycle operator; the bomb-present component is rotated, loses its
    vertical part to absorption (logged per cycle), and swaps ports at the
    PBS. Survivors are returned renormalized with their total probability.
    """
    _require_odd(config.cycles, allow_even_hint=True)
    return _nested_run(config, photon_in)


def nested_shutter_run_any_n(
    config: InterferometerConfig, photon_in: str | Sequence[complex]
) -> RunOutcome:
    """Numeric nested evolution without the odd-N restriction.

    Carries none of the closed-form or shutter-correspondence guarantees;
    even cycle counts leave the bomb-present ports unswapped.
    """
    return _nested_run(config, photon_in)


def _nested_run(config: InterferometerConfig, photon_in) -> RunOutcome:
    photon = _parse_photon_input(photon_in)
    bomb = np.array([config.bomb_amp_absent, config.bomb_amp_present], dtype=complex)
    # Joint amplitudes indexed [photon(H1,V1,H2,V2), bomb(absent,present)].
    psi = np.multiply.outer(photon, bomb)

    arm = nested_rotator_matrix(config.theta).astype(complex)
    u1 = np.zeros((4, 4), dtype=complex)
    u1[:2, :2] = arm
    u1[2:, 2:] = arm
    pbs_order = [2, 1, 0, 3]

    cycle_log: list[float] = []
    for _ in range(config.cycles):
        psi = u1 @ psi
        absorbed = float(abs(psi[1, 1]) ** 2 + abs(psi[3, 1]) ** 2)
        psi[1, 1] = 0.0
        psi[3, 1] = 0.0
        psi = psi[pbs_order, :]
        cycle_log.append(absorbed)

    return _collect_outcome(psi, _NESTED_LAYOUT, cycle_log)


def shutter_error_model(cycles: int) -> ShutterErrors:
    """Residual error rates at the paper's operating point theta = pi/(N+1).

    Leakage is the bomb-absent probability of exiting vertically polarized;
    explosion is the bomb-present absorption probability. Both fall to zero
    along odd N -> infinity.
    """
    _require_odd(cycles)
    theta = math.pi / (cycles + 1)
    leakage = math.cos((cycles - 1) / 2 * theta) ** 2
    explosion = 1.0 - math.cos(theta) ** (2 * cycles)
    return ShutterErrors(leakage, explosion)


def cnot_efficiency(per_gate: float, n_interactions: int) -> float:
    """Success probability of a CNOT built from n shutter-interaction gates."""
    if not 0.0 < per_gate <= 1.0:
        raise ValueError(f"per-gate efficiency must be in (0, 1], got {per_gate!r}")
    if n_interactions < 0:
        raise ValueError("interaction count must be non-negative")
    return per_gate ** n_interactions


class SweepRow(NamedTuple):
    cycles: int
    theta: float
    leakage_prob: float
    explosion_prob: float
    survival_prob: float


def error_sweep(cycle_counts: Sequence[int]) -> list[SweepRow]:
    """Error-model table over cycle counts (odd N), for CSV export."""
    rows = []
    for n in cycle_counts:
        leakage, explosion = shutter_error_model(n)
        rows.append(SweepRow(n, math.pi / (n + 1), leakage, explosion, 1.0 - explosion))
    return rows


def _collect_outcome(
    psi: np.ndarray, layout: SystemLayout, cycle_log: list[float]
) -> RunOutcome:
    exploded = float(sum(cycle_log))
    survival = float(np.vdot(psi, psi).real)
    survived: tuple[tuple[float, PureState], ...] = ()
    if survival >= 1e-14:
        state = PureState(layout, (psi / math.sqrt(survival)).reshape(-1))
        survived = ((survival, state),)
    if abs(exploded + survival - 1.0) > ATOL_LOGICAL:
        raise AssertionError(
            f"probability not conserved: exploded {exploded} + survived {survival} != 1"
        )
    return RunOutcome(survived=survived, exploded=exploded, cycle_log=tuple(cycle_log))


def bomb_projected_state() -> PureState:
    """Post-explosion remnant: the absorber revealed in its present state."""
    return PureState(_BOMB_ONLY_LAYOUT, np.array([0.0, 1.0], dtype=complex))


def _parse_photon_input(photon_in) -> np.ndarray:
    if isinstance(photon_in, str):
        if photon_in not in ("H1", "H2"):
            raise PreconditionError(f"photon input must be H1, H2 or amplitudes, got {photon_in!r}")
        vec = np.zeros(4, dtype=complex)
        vec[0 if photon_in == "H1" else 2] = 1.0
        return vec
    amps = np.asarray(photon_in, dtype=complex)
    if amps.shape == (2,):
        vec = np.zeros(4, dtype=complex)
        vec[0], vec[2] = amps
    elif amps.shape == (4,):
        if abs(amps[1]) > 0 or abs(amps[3]) > 0:
            raise PreconditionError("photon input must have no vertical component")
        vec = amps
    else:
        raise PreconditionError(f"photon input needs 2 or 4 amplitudes, got shape {amps.shape}")
    norm = float(np.vdot(vec, vec).real)
    if abs(norm - 1.0) > ATOL_LOGICAL:
        raise PreconditionError("photon input amplitudes must be normalized")
    return vec


def _require_odd(cycles: int, *, allow_even_hint: bool = False) -> None:
    if cycles < 1:
        raise ValueError("cycle count must be a positive integer")
    if cycles % 2 == 0:
        hint = "; use nested_shutter_run_any_n for a numeric even-N run" if allow_even_hint else ""
        raise ValueError(f"only odd cycle counts are supported, got {cycles}{hint}")
