"""Bob's recovery: exhaustive Pauli-pair reversal, averaged fidelity, entanglement.

The numerical search is authoritative. The closed-form expressions below
are literal transcriptions kept as comparison columns; they are reported,
never clamped or patched.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .channels import KrausChannel, apply, pauli_pair_unitary
from .qmath import DensityMatrix, PureState
from .states import (
    BELL_LABELS, ResourceSpec, conjugate, fidelity_pure, input_pure_state, input_state,
    negativity, validate_spectrum, werner_q,
)
from .teleport import Outcome, simulate_double

TIE_TOL = 1e-12


class PauliPair(NamedTuple):
    first: int
    second: int

    @property
    def unitary(self) -> np.ndarray:
        return pauli_pair_unitary(self.first, self.second)


PAULI_PAIRS = tuple(PauliPair(a, b) for a, b in itertools.product(BELL_LABELS, repeat=2))


def _as_pure(state: PureState | DensityMatrix) -> PureState:
    if isinstance(state, PureState):
        return state
    if abs(state.purity() - 1) > 1e-9:
        raise ValueError("reversal reference must be a pure state")
    evals, evecs = np.linalg.eigh(state.matrix)
    return PureState.from_unnormalized(evecs[:, -1], state.dims)


def best_pauli_pair(psi: PureState, rho: DensityMatrix) -> tuple[PauliPair, float]:
    """Pauli pair maximizing ``<psi|B rho B^dag|psi>``; ties go to the lowest pair."""
    if rho.dims != (2, 2):
        raise ValueError(f"Pauli-pair reversal acts on two qubits, got dims {rho.dims}")
    best, best_f = None, -np.inf
    for pair in PAULI_PAIRS:
        u = pair.unitary
        f = fidelity_pure(psi, u @ rho.matrix @ u.conj().T)
        if f > best_f + TIE_TOL:
            best, best_f = pair, f
    return best, best_f


def optimal_reversal(channel: KrausChannel,
                     reference: PureState | DensityMatrix) -> tuple[PauliPair, float]:
    psi = _as_pure(reference)
    if channel.dim != psi.dim:
        raise ValueError(f"channel dimension {channel.dim} vs state dimension {psi.dim}")
    out, _ = apply(channel, psi.projector())
    return best_pauli_pair(psi, out)


class OutcomeFidelity(NamedTuple):
    pair: PauliPair
    fidelity: float
    probability: float


@dataclasses.dataclass(frozen=True)
class FidelityReport:
    per_outcome: dict[Outcome, OutcomeFidelity]
    averaged_fmax: float
    closed_form_fmax: float
    closed_form: str
    discrepancy: float


def _closed_form(spec: ResourceSpec, theta: float) -> tuple[str, float]:
    if spec.kind == "correlated":
        return "correlated", fmax_correlated_closed(spec.q, theta)
    if spec.phi is not None:
        return "werner", fmax_werner_closed(spec.phi, theta)
    return "uncorrelated-six-branch", fmax_uncorrelated_closed(spec.q, theta)


def averaged_fmax(spec: ResourceSpec, theta: float) -> FidelityReport:
    """Probability-weighted best fidelity over all 16 outcomes of the two-pair scheme."""
    psi = input_pure_state(theta)
    per_outcome = {}
    for rec in simulate_double(psi.projector(), spec):
        pair, f = optimal_reversal(rec.extracted_channel, psi)
        per_outcome[rec.outcome] = OutcomeFidelity(pair, f, rec.probability)
    avg = float(sum(o.probability * o.fidelity for o in per_outcome.values()))
    name, closed = _closed_form(spec, theta)
    return FidelityReport(per_outcome, avg, closed, name, abs(avg - closed))


def fmax_uncorrelated_branches(q: Sequence[float], theta: float) -> tuple[float, ...]:
    q1, q2, q3, q4 = validate_spectrum(q)
    s = np.sin(2 * theta) ** 2
    return (
        (q1 + q2) ** 2 + (q1 ** 2 - 2 * q3 * q4 + q2 ** 2) * s,
        (q1 + q2) ** 2 + (q3 ** 2 - 2 * q1 * q2 + q4 ** 2) * s,
        (q3 + q4) ** 2 + (q3 ** 2 - 2 * q1 * q2 + q4 ** 2) * s,
        (q3 + q4) ** 2 + (q1 ** 2 - 2 * q3 * q4 + q2 ** 2) * s,
        (q1 + q2) * (q3 + q4) + (q1 - q2) * (q3 - q4) * s,
        (q1 + q2) * (q3 + q4) - (q1 - q2) * (q3 - q4) * s,
    )


# the branch that reduces to the Werner-family expression
WERNER_BRANCH = 3


def fmax_uncorrelated_closed(q: Sequence[float], theta: float) -> float:
    """Literal six-branch maximum; may exceed 1 (reported, not clamped)."""
    return float(max(fmax_uncorrelated_branches(q, theta)))


def fmax_werner_closed(phi: float, theta: float) -> float:
    werner_q(phi)
    s = np.sin(2 * theta) ** 2
    return float(((2 + phi) ** 2 - (1 - phi) * (1 + 2 * phi) * s) / 9)


def fmax_correlated_closed(q: Sequence[float], theta: float) -> float:
    q1, q2, q3, q4 = validate_spectrum(q)
    s = np.sin(2 * theta) ** 2
    return float(max((q1 + q2) + (q3 + q4) * s, (q3 + q4) + (q1 + q2) * s))


Reading = Literal["inside", "outside"]


def negativity_werner_closed(phi: float, theta: float, reading: Reading = "inside") -> float:
    """Teleported-state negativity for the Werner family, in either bracket grouping.

    ``inside``:  max(0, [(1+2phi)^2 sin2theta - 2(2-phi-phi^2)] / 9)
    ``outside``: max(0, (1+2phi)^2 sin2theta / 9 - 2(2-phi-phi^2))
    """
    werner_q(phi)
    lead = (1 + 2 * phi) ** 2 * np.sin(2 * theta)
    tail = 2 * (2 - phi - phi ** 2)
    if reading == "inside":
        return float(max(0.0, (lead - tail) / 9))
    if reading == "outside":
        return float(max(0.0, lead / 9 - tail))
    raise ValueError(f"unknown reading {reading!r}")


# settled by brute-force negativity of the reversed outputs
WERNER_NEGATIVITY_READING: Reading = "inside"


@dataclasses.dataclass(frozen=True)
class EntanglementReport:
    per_outcome: dict[Outcome, float]
    average: float
    input_negativity: float


def teleported_entanglement(spec: ResourceSpec, theta: float) -> EntanglementReport:
    """Negativity of each optimally reversed teleported state."""
    psi = input_pure_state(theta)
    per_outcome, avg = {}, 0.0
    for rec in simulate_double(psi.projector(), spec):
        pair, _ = best_pauli_pair(psi, rec.conditional_state)
        e = negativity(conjugate(rec.conditional_state, pair.unitary))
        per_outcome[rec.outcome] = e
        avg += rec.probability * e
    return EntanglementReport(per_outcome, float(avg), negativity(input_state(theta)))
