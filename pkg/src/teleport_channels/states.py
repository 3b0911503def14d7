"""Bell states, the teleportation input/resource states, negativity and fidelity.

Labels 1..4 are shared by three families and always line up::

    1 <-> |Phi+>  <-> I
    2 <-> |Phi->  <-> sigma_z
    3 <-> |Psi+>  <-> sigma_x
    4 <-> |Psi->  <-> sigma_y
"""

from __future__ import annotations

import dataclasses
from typing import Literal, Sequence

import numpy as np

from .qmath import (
    PAULI_I, PAULI_X, PAULI_Y, PAULI_Z,
    DensityMatrix, PureState, dagger, hermitian_eigenvalues, kron, partial_transpose,
)

BELL_LABELS = (1, 2, 3, 4)
BELL_NAMES = {1: "Phi+", 2: "Phi-", 3: "Psi+", 4: "Psi-"}
PAULI_NAMES = {1: "I", 2: "Z", 3: "X", 4: "Y"}

PAULIS = {1: PAULI_I, 2: PAULI_Z, 3: PAULI_X, 4: PAULI_Y}

_S = 1 / np.sqrt(2)
_BELL_AMPLITUDES = {
    1: np.array([_S, 0, 0, _S], dtype=complex),
    2: np.array([_S, 0, 0, -_S], dtype=complex),
    3: np.array([0, _S, _S, 0], dtype=complex),
    4: np.array([0, _S, -_S, 0], dtype=complex),
}

NEGATIVITY_CUTOFF = 1e-12

Kind = Literal["uncorrelated", "correlated"]


def check_bell_index(index: int) -> int:
    if index not in BELL_LABELS:
        raise ValueError(f"Bell index must be one of 1..4, got {index!r}")
    return int(index)


def bell_state(index: int) -> PureState:
    return PureState(_BELL_AMPLITUDES[check_bell_index(index)], (2, 2))


def pauli(index: int) -> np.ndarray:
    return PAULIS[check_bell_index(index)]


def werner_q(phi: float) -> tuple[float, float, float, float]:
    if not 0 <= phi <= 1:
        raise ValueError(f"Werner parameter must lie in [0, 1], got {phi!r}")
    low = (1 - phi) / 6
    return (low, low, low, (1 + phi) / 2)


def validate_spectrum(q: Sequence[float], tol: float = 1e-12) -> tuple[float, float, float, float]:
    q = tuple(float(x) for x in q)
    if len(q) != 4:
        raise ValueError(f"noise spectrum needs four weights, got {len(q)}")
    if any(not np.isfinite(x) for x in q):
        raise ValueError(f"noise spectrum must be finite, got {q}")
    if any(x < -tol or x > 1 + tol for x in q):
        raise ValueError(f"noise weights must lie in [0, 1], got {q}")
    if abs(sum(q) - 1) > tol:
        raise ValueError(f"noise weights must sum to 1, got sum {sum(q)!r}")
    return tuple(min(max(x, 0.0), 1.0) for x in q)


@dataclasses.dataclass(frozen=True)
class ResourceSpec:
    """Shared entanglement between sender and receiver.

    ``uncorrelated`` is two independent Bell-diagonal pairs with the same
    spectrum ``q``; ``correlated`` is the pure superposition
    ``sum_k sqrt(q_k) |B_k>_34 |B_k>_56``. ``phi`` is kept when the spectrum
    came from the Werner family so reports can pick the matching closed form.
    """

    kind: Kind
    q: tuple[float, float, float, float]
    phi: float | None = None

    def __post_init__(self):
        if self.kind not in ("uncorrelated", "correlated"):
            raise ValueError(f"unknown resource kind {self.kind!r}")
        object.__setattr__(self, "q", validate_spectrum(self.q))
        if self.phi is not None:
            expected = werner_q(self.phi)
            if max(abs(a - b) for a, b in zip(expected, self.q)) > 1e-12:
                raise ValueError("q does not match the given Werner parameter")

    @classmethod
    def werner(cls, phi: float, kind: Kind = "uncorrelated") -> "ResourceSpec":
        return cls(kind, werner_q(phi), phi=float(phi))


def input_pure_state(theta: float) -> PureState:
    return PureState(np.array([np.cos(theta), 0, 0, np.sin(theta)], dtype=complex), (2, 2))


def input_state(theta: float) -> DensityMatrix:
    """Projector onto ``cos(theta)|00> + sin(theta)|11>``."""
    return input_pure_state(theta).projector()


def bell_diagonal(q: Sequence[float]) -> np.ndarray:
    q = validate_spectrum(q)
    return sum(qk * np.outer(_BELL_AMPLITUDES[k], _BELL_AMPLITUDES[k].conj())
               for k, qk in zip(BELL_LABELS, q))


def correlated_resource_vector(q: Sequence[float]) -> np.ndarray:
    q = validate_spectrum(q)
    return sum(np.sqrt(qk) * kron(_BELL_AMPLITUDES[k], _BELL_AMPLITUDES[k])
               for k, qk in zip(BELL_LABELS, q))


def resource_state(spec: ResourceSpec) -> DensityMatrix:
    """16x16 state on systems (3, 4, 5, 6), in that order."""
    if spec.kind == "uncorrelated":
        pair = bell_diagonal(spec.q)
        return DensityMatrix(kron(pair, pair), (2, 2, 2, 2))
    v = correlated_resource_vector(spec.q)
    return DensityMatrix(np.outer(v, v.conj()), (2, 2, 2, 2))


def negativity(rho: DensityMatrix, subsystem: int = 0) -> float:
    """``max(0, -2 * sum of negative eigenvalues of the partial transpose)``."""
    evals = hermitian_eigenvalues(partial_transpose(rho, subsystem))
    neg = evals[evals < -NEGATIVITY_CUTOFF]
    return max(0.0, float(-2 * neg.sum()))


def fidelity_pure(psi: PureState, rho: DensityMatrix | np.ndarray) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    if m.shape != (psi.dim, psi.dim):
        raise ValueError(f"state of dimension {psi.dim} vs operator of shape {m.shape}")
    return float(np.vdot(psi.amplitudes, m @ psi.amplitudes).real)


def conjugate(rho: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    return DensityMatrix(unitary @ rho.matrix @ dagger(unitary), rho.dims, tol=rho.tol)
