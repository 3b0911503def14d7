"""Brute-force simulation of single-pair and two-pair teleportation.

Systems are numbered 1..6 in the physics, 0..5 as tensor positions. The
two-pair scheme holds the unknown input on (1, 2) and the resource on
(3, 4, 5, 6); Alice measures (1, 3) and (2, 5) in the Bell basis and Bob keeps
(4, 6). The joint state is evolved on the full 64-dimensional space and the
outcome-conditioned Kraus operators are read off from the same operators,
so the two routes can be checked against each other.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Literal, Sequence

import numpy as np

from .channels import COMPLETENESS_TOL, KrausChannel, _klein_product, completeness_defect
from .qmath import (
    BlochCoefficients, DensityMatrix, Tolerances, dagger, kron, kron_all, partial_trace_matrix,
)
from .states import (
    BELL_LABELS, ResourceSpec, bell_state, check_bell_index, correlated_resource_vector,
    resource_state,
)

Outcome = tuple[int, int]
Decomposition = Literal["spectral", "bell-terms"]

OUTCOMES: tuple[Outcome, ...] = tuple(itertools.product(BELL_LABELS, repeat=2))

# reorders (1,2,3,4,5,6) -> (1,3,2,5,4,6): measured pairs first, Bob's qubits last
MEASUREMENT_ORDER = (0, 2, 1, 4, 3, 5)

# outputs are renormalized by weight; looser than construction-time checks
_STATE_TOL = Tolerances(hermitian=1e-9, trace=1e-9, psd=1e-9)


def permutation_unitary(perm: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Unitary that moves tensor factor ``perm[j]`` into position ``j``.

    ``U |x_0 x_1 ...> = |x_perm[0] x_perm[1] ...>``. A transposition such as
    ``(2, 1, 0)`` swaps the outer factors and leaves the middle one alone.
    """
    perm = [int(p) for p in perm]
    dims = [int(d) for d in dims]
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} subsystems")
    total = int(np.prod(dims))
    new_dims = [dims[p] for p in perm]
    u = np.zeros((total, total), dtype=complex)
    for col, digits in enumerate(itertools.product(*[range(d) for d in dims])):
        row = np.ravel_multi_index([digits[p] for p in perm], new_dims)
        u[row, col] = 1
    return u


def bell_projectors() -> dict[int, np.ndarray]:
    out = {}
    for k in BELL_LABELS:
        v = bell_state(k).amplitudes
        out[k] = np.outer(v, v.conj())
    return out


@dataclasses.dataclass(frozen=True, eq=False)
class OutcomeRecord:
    outcome: Outcome | int
    probability: float
    conditional_state: DensityMatrix
    extracted_channel: KrausChannel


def _classify(ops: Sequence[np.ndarray]) -> KrausChannel:
    probe = KrausChannel(tuple(ops), "conditional_unnormalized")
    if completeness_defect(probe) < COMPLETENESS_TOL:
        return KrausChannel(probe.operators, "trace_preserving")
    return probe


def _spectral_components(chi: np.ndarray, cutoff: float = 1e-14) -> list[tuple[float, np.ndarray]]:
    evals, evecs = np.linalg.eigh((chi + dagger(chi)) / 2)
    return [(float(w), evecs[:, j]) for j, w in enumerate(evals) if w > cutoff]


# --- single pair -----------------------------------------------------------

def extract_kraus_single(chi: DensityMatrix, outcome: int) -> KrausChannel:
    """Channel from input qubit 1 to target qubit 3 for Bell outcome ``outcome``.

    Operators are ``2 sqrt(q_k) <P_l|_12 (Pi_i x I) (|.>_1 x |s_k>_23)`` over the
    eigen-decomposition ``chi = sum_k q_k |s_k><s_k|`` and the Bell basis
    ``P_l``; the factor 2 makes the application weight ``4 p_i``.
    """
    i = check_bell_index(outcome)
    proj = bell_projectors()
    ops = []
    for w, s in _spectral_components(chi.matrix):
        embed = kron(np.eye(2), s.reshape(-1, 1))  # 8x2, input slot on system 1
        for l in BELL_LABELS:
            bra = kron(dagger(bell_state(l).amplitudes.reshape(-1, 1)), np.eye(2))
            a = 2 * np.sqrt(w) * bra @ kron(proj[i], np.eye(2)) @ embed
            if np.max(np.abs(a)) > 1e-15:
                ops.append(a)
    return _classify(ops)


def simulate_single(rho_in: DensityMatrix, chi: DensityMatrix) -> list[OutcomeRecord]:
    """Teleport one qubit (system 1) through ``chi`` on systems (2, 3)."""
    if rho_in.dims != (2,) or chi.dims != (2, 2):
        raise ValueError(f"need a qubit input and a two-qubit resource, got {rho_in.dims}, {chi.dims}")
    joint = kron(rho_in.matrix, chi.matrix)
    records = []
    for i, p_op in bell_projectors().items():
        m = kron(p_op, np.eye(2))
        out = partial_trace_matrix(m @ joint @ dagger(m), [2, 2, 2], [2])
        p = float(np.trace(out).real)
        state = DensityMatrix(_hermitize(out / p), (2,), tol=_STATE_TOL)
        records.append(OutcomeRecord(i, p, state, extract_kraus_single(chi, i)))
    return records


# --- two pairs -------------------------------------------------------------

def resource_components(spec: ResourceSpec,
                        decomposition: Decomposition = "spectral") -> list[tuple[float, np.ndarray]]:
    """Weighted vectors on (3,4,5,6) whose projectors sum to the resource.

    ``spectral`` is the true eigen-decomposition. ``bell-terms`` splits the
    correlated resource into its superposition terms ``|B_k>|B_k>`` with weights
    ``q_k`` as if they were eigenvectors; it coincides with ``spectral`` for the
    uncorrelated resource and is kept to evaluate that per-term prescription.
    """
    if decomposition not in ("spectral", "bell-terms"):
        raise ValueError(f"unknown decomposition {decomposition!r}")
    bell = {k: bell_state(k).amplitudes for k in BELL_LABELS}
    if spec.kind == "uncorrelated":
        return [(qk * qkp, kron(bell[k], bell[kp]))
                for (k, qk), (kp, qkp) in itertools.product(zip(BELL_LABELS, spec.q), repeat=2)
                if qk * qkp > 0]
    if decomposition == "spectral":
        return [(1.0, correlated_resource_vector(spec.q))]
    return [(qk, kron(bell[k], bell[k])) for k, qk in zip(BELL_LABELS, spec.q) if qk > 0]


def _measurement_operator(outcome: Outcome) -> np.ndarray:
    proj = bell_projectors()
    i, ip = outcome
    return kron_all(proj[i], proj[ip], np.eye(4))


def _check_outcome(outcome: Sequence[int]) -> Outcome:
    i, ip = outcome
    return check_bell_index(i), check_bell_index(ip)


def extract_kraus(spec: ResourceSpec, outcome: Sequence[int],
                  decomposition: Decomposition = "spectral") -> KrausChannel:
    """Induced channel from the input pair (1,2) to Bob's pair (4,6).

    Operators are ``4 sqrt(w) <P_l|_13 <P_l'|_25 (Pi_i x Pi_i' x I_46) U (|.>_12 |s>_3456)``
    with ``U`` the reordering to (1,3,2,5,4,6) and ``P`` the Bell basis. The factor
    4 = 1/sqrt(1/16) makes the application weight ``16 p_ii'``, so the
    uncorrelated channels come out trace preserving.
    """
    outcome = _check_outcome(outcome)
    u = permutation_unitary(MEASUREMENT_ORDER, [2] * 6)
    m = _measurement_operator(outcome)
    bell = {k: bell_state(k).amplitudes for k in BELL_LABELS}
    bras = {(l, lp): kron_all(bell[l].conj()[None, :], bell[lp].conj()[None, :], np.eye(4)) @ m
            for l, lp in itertools.product(BELL_LABELS, repeat=2)}
    ops = []
    for w, s in resource_components(spec, decomposition):
        embed = u @ kron(np.eye(4), s.reshape(-1, 1))  # 64x4, input slot on (1,2)
        for bra in bras.values():
            a = 4 * np.sqrt(w) * bra @ embed
            if np.max(np.abs(a)) > 1e-15:
                ops.append(a)
    return _classify(ops)


def simulate_double(rho_in: DensityMatrix, spec: ResourceSpec,
                    decomposition: Decomposition = "spectral") -> list[OutcomeRecord]:
    """All 16 outcomes of the two-pair scheme, computed on the 64-dim joint state."""
    if rho_in.dims != (2, 2):
        raise ValueError(f"input must be a two-qubit state, got dims {rho_in.dims}")
    chi = resource_state(spec)
    u = permutation_unitary(MEASUREMENT_ORDER, [2] * 6)
    joint = u @ kron(rho_in.matrix, chi.matrix) @ dagger(u)
    records = []
    for outcome in OUTCOMES:
        m = _measurement_operator(outcome)
        out = sum(  # single Kraus operator per outcome: projective measurement
            partial_trace_matrix(mj @ joint @ dagger(mj), [2] * 6, [4, 5]) for mj in (m,))
        p = float(np.trace(out).real)
        state = DensityMatrix(_hermitize(out / p), (2, 2), tol=_STATE_TOL)
        records.append(OutcomeRecord(outcome, p, state, extract_kraus(spec, outcome, decomposition)))
    return records


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + dagger(m)) / 2


# sign pattern of (c11, c22, c33) terms, keyed by the Pauli label of sigma_i sigma_i'
_PI_SIGNS = {1: (1, -1, 1), 2: (-1, 1, 1), 3: (1, 1, -1), 4: (-1, -1, -1)}
_FAMILY = {1: "pi11", 2: "pi12", 3: "pi13", 4: "pi14"}


def outcome_family(outcome: Sequence[int]) -> int:
    """1 for i == i'; 2 for {(1,2),(2,1),(3,4),(4,3)}; 3 for {(1,3),...}; 4 for {(1,4),...}."""
    i, ip = _check_outcome(outcome)
    return _klein_product(i, ip)


def pi_factor(q: Sequence[float], family: int, c: BlochCoefficients) -> float:
    r = np.sqrt(np.asarray(q, dtype=float))
    x = 2 * (r[0] * r[2] + r[1] * r[3])
    y = 2 * (r[0] * r[3] + r[1] * r[2])
    z = 2 * (r[0] * r[1] + r[2] * r[3])
    cm = c.c_matrix
    s1, s2, s3 = _PI_SIGNS[family]
    return float(1 + s1 * x * cm[0, 0] + s2 * y * cm[1, 1] + s3 * z * cm[2, 2])


def probability_closed_form(spec: ResourceSpec, outcome: Sequence[int],
                            c: BlochCoefficients) -> float:
    """Closed-form outcome probability; constant 1/16 for the uncorrelated resource."""
    outcome = _check_outcome(outcome)
    if spec.kind == "uncorrelated":
        return 1 / 16
    return pi_factor(spec.q, outcome_family(outcome), c) / 16


def family_name(outcome: Sequence[int]) -> str:
    return _FAMILY[outcome_family(outcome)]
