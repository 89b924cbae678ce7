"""The standard two-bit teleportation protocol, step by step.

The sender holds particle 1 in an unknown state a|0> + b|1> and particle 2 of
a shared EPR singlet; the receiver holds particle 3. A Bell measurement on
particles 1 and 2 leaves particle 3 in one of four conditional states, and the
two classical bits select the unitary that restores the original state up to
global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .linalg import tensor_product
from .qcore import (
    GATES,
    Gate,
    Ket,
    apply_gate,
    bell_basis,
    bell_state_vectors,
    born_measure,
    fidelity,
    seeded_stream,
    to_density,
)

__all__ = [
    "BellOutcome",
    "OUTCOME_ORDER",
    "CORRECTIONS",
    "TeleportRecord",
    "singlet",
    "prepare_joint",
    "alice_measure",
    "correction_for",
    "run_ideal",
    "enumerate_branches",
]


class BellOutcome(Enum):
    """Result of the sender's Bell measurement; the enum value is the 2-bit
    classical message (phase bit, parity bit)."""

    PHI_PLUS = (0, 0)
    PHI_MINUS = (1, 0)
    PSI_PLUS = (0, 1)
    PSI_MINUS = (1, 1)

    @property
    def bits(self) -> tuple[int, int]:
        return self.value


# Same order as qcore.bell_basis().
OUTCOME_ORDER = (
    BellOutcome.PHI_PLUS,
    BellOutcome.PHI_MINUS,
    BellOutcome.PSI_PLUS,
    BellOutcome.PSI_MINUS,
)

# Outcome -> correction gate, frozen. Each gate is the unique member of
# {I, X, Z, ZX} that maps the corresponding conditional state back to the
# input up to global phase; a regression test re-derives the table by
# exhaustive search.
CORRECTIONS = {
    BellOutcome.PSI_MINUS: "I",
    BellOutcome.PSI_PLUS: "Z",
    BellOutcome.PHI_MINUS: "X",
    BellOutcome.PHI_PLUS: "ZX",
}

_PROJECTORS = bell_basis()
_BELL_VECTORS = bell_state_vectors()

_SINGLET_AMPLITUDES = np.array([0, 1, -1, 0]) * np.sqrt(0.5)
_SINGLET_AMPLITUDES.flags.writeable = False


@dataclass(frozen=True, eq=False)
class TeleportRecord:
    """One protocol branch: what the receiver saw and how well the delivered
    state matches the input."""

    input_state: Ket
    outcome: BellOutcome
    conditional_state: Ket
    corrected_state: Ket
    fidelity: float
    probability: float


def singlet() -> Ket:
    """The shared EPR pair (|01> - |10>)/sqrt(2) on particles 2 and 3."""
    return Ket(_SINGLET_AMPLITUDES, ("2", "3"))


def prepare_joint(psi: Ket) -> Ket:
    """Three-particle state |psi>_1 (x) singlet_23."""
    if psi.dim != 2:
        raise ValueError(f"input must be a single-qubit ket, got dimension {psi.dim}")
    joint = tensor_product(psi.amplitudes, _SINGLET_AMPLITUDES)
    return Ket(joint, (psi.labels[0], "2", "3"))


def _receiver_amplitudes(joint_amplitudes: np.ndarray, outcome_index: int) -> np.ndarray:
    # Partial inner product <bell_i|_12 acting on the 3-particle state; the
    # result keeps the sign convention of the conditional states.
    v = _BELL_VECTORS[outcome_index].conj() @ joint_amplitudes.reshape(4, 2)
    return v / math.sqrt(np.vdot(v, v).real)


def alice_measure(joint: Ket, rng: np.random.Generator) -> tuple[BellOutcome, Ket]:
    """Bell measurement on particles 1 and 2; returns the sampled outcome and
    the conditional state of particle 3 (signs included)."""
    index, post, _ = born_measure(joint, _PROJECTORS, (0, 1), rng)
    bob = Ket(_receiver_amplitudes(post.amplitudes, index), (joint.labels[2],))
    return OUTCOME_ORDER[index], bob


def correction_for(outcome: BellOutcome) -> Gate:
    """The unitary the receiver applies for a given classical message."""
    return GATES[CORRECTIONS[outcome]]


def run_ideal(psi: Ket, seed: int) -> TeleportRecord:
    """One full protocol run with a perfect correction step."""
    rng = seeded_stream(seed)
    joint = prepare_joint(psi)
    index, post, prob = born_measure(joint, _PROJECTORS, (0, 1), rng)
    outcome = OUTCOME_ORDER[index]
    conditional = Ket(_receiver_amplitudes(post.amplitudes, index), (joint.labels[2],))
    corrected = apply_gate(conditional, correction_for(outcome), 0)
    fid = fidelity(psi, to_density(corrected))
    return TeleportRecord(psi, outcome, conditional, corrected, fid, prob)


def enumerate_branches(psi: Ket) -> list[TeleportRecord]:
    """All four measurement branches, deterministically, in bell-basis order."""
    joint = prepare_joint(psi)
    reshaped = joint.amplitudes.reshape(4, 2)
    records = []
    for index, outcome in enumerate(OUTCOME_ORDER):
        v = _BELL_VECTORS[index].conj() @ reshaped
        prob = float(np.vdot(v, v).real)
        conditional = Ket(v / np.sqrt(prob), (joint.labels[2],))
        corrected = apply_gate(conditional, correction_for(outcome), 0)
        fid = fidelity(psi, to_density(corrected))
        records.append(TeleportRecord(psi, outcome, conditional, corrected, fid, prob))
    return records
