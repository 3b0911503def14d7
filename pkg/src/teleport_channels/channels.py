"""Kraus channels, their Choi fingerprints, and the closed-form Pauli channels.

Two channels are the same map iff their Choi matrices agree, so every
comparison in this package goes through :func:`choi_distance` rather than
operator-by-operator checks (Kraus sets are only unique up to remixing).
"""

from __future__ import annotations

import dataclasses
from itertools import product
from typing import Literal, Sequence

import numpy as np

from .qmath import DensityMatrix, Tolerances, TOL, dagger, kron
from .states import BELL_LABELS, PAULI_X, PAULI_Z, check_bell_index, pauli, validate_spectrum

Completeness = Literal["trace_preserving", "trace_decreasing", "conditional_unnormalized"]
_ORDER = {"trace_preserving": 0, "trace_decreasing": 1, "conditional_unnormalized": 2}

ZERO_WEIGHT = 1e-14
COMPLETENESS_TOL = 1e-10
CHOI_TOL = 1e-10


@dataclasses.dataclass(frozen=True, eq=False)
class KrausChannel:
    operators: tuple[np.ndarray, ...]
    completeness: Completeness = "trace_preserving"

    def __post_init__(self):
        ops = tuple(np.array(a, dtype=complex) for a in self.operators)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for a in ops:
            if a.shape != (dim, dim):
                raise ValueError(f"Kraus operators must all be {dim}x{dim}, got {a.shape}")
            if not np.all(np.isfinite(a)):
                raise ValueError("Kraus operators must be finite")
            a.setflags(write=False)
        if self.completeness not in _ORDER:
            raise ValueError(f"unknown completeness class {self.completeness!r}")
        object.__setattr__(self, "operators", ops)
        if self.completeness == "trace_preserving":
            defect = completeness_defect(self)
            if defect > COMPLETENESS_TOL:
                raise ValueError(f"operators are not trace preserving (defect {defect:.3g})")
        elif self.completeness == "trace_decreasing":
            gap = np.linalg.eigvalsh(np.eye(dim) - _gram(ops))[0]
            if gap < -COMPLETENESS_TOL:
                raise ValueError(f"sum A^dag A exceeds the identity by {-gap:.3g}")

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self):
        return len(self.operators)

    def __repr__(self):
        return f"KrausChannel(dim={self.dim}, n_ops={len(self)}, {self.completeness})"


def _gram(ops: Sequence[np.ndarray]) -> np.ndarray:
    return sum(dagger(a) @ a for a in ops)


def completeness_defect(channel: KrausChannel) -> float:
    """Max-abs entry of ``sum A^dag A - I``."""
    g = _gram(channel.operators)
    return float(np.max(np.abs(g - np.eye(g.shape[0]))))


def apply_operators(channel: KrausChannel, m: np.ndarray) -> np.ndarray:
    return sum(a @ m @ dagger(a) for a in channel.operators)


def apply(channel: KrausChannel, rho: DensityMatrix,
          tol: Tolerances = TOL) -> tuple[DensityMatrix, float]:
    """Apply and renormalize; returns the output state and ``tr(sum A rho A^dag)``."""
    if rho.dim != channel.dim:
        raise ValueError(f"channel acts on dimension {channel.dim}, state has {rho.dim}")
    out = apply_operators(channel, rho.matrix)
    weight = float(np.trace(out).real)
    if weight < ZERO_WEIGHT:
        raise ValueError(f"outcome has vanishing weight {weight:.3g}")
    out = out / weight
    return DensityMatrix((out + dagger(out)) / 2, rho.dims, tol=tol), weight


def choi(channel: KrausChannel) -> np.ndarray:
    """``sum_A (A x I)|Omega><Omega|(A x I)^dag`` with ``|Omega> = sum_i |ii>``."""
    vecs = np.array([a.reshape(-1) for a in channel.operators])
    return vecs.T @ vecs.conj()


def choi_distance(a: KrausChannel, b: KrausChannel, normalize: bool = False) -> float:
    """Max-abs Choi difference; ``normalize`` rescales both to unit trace first."""
    if a.dim != b.dim:
        raise ValueError(f"channels act on dimensions {a.dim} and {b.dim}")
    ca, cb = choi(a), choi(b)
    if normalize:
        ca = ca / np.trace(ca).real
        cb = cb / np.trace(cb).real
    return float(np.max(np.abs(ca - cb)))


def channels_equal(a: KrausChannel, b: KrausChannel, tol: float = CHOI_TOL,
                   normalize: bool = False) -> bool:
    return choi_distance(a, b, normalize=normalize) < tol


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim),))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    return KrausChannel((u,))


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """``outer o inner``: operators ``B_n A_m`` over all pairs."""
    if outer.dim != inner.dim:
        raise ValueError(f"cannot compose dimensions {outer.dim} and {inner.dim}")
    weakest = max(outer.completeness, inner.completeness, key=_ORDER.__getitem__)
    return KrausChannel(tuple(b @ a for b in outer.operators for a in inner.operators), weakest)


def _klein_product(k: int, i: int) -> int:
    """Label of the Pauli proportional to ``sigma_k sigma_i``."""
    if k == i:
        return 1
    if k == 1 or i == 1:
        return k if i == 1 else i
    return ({2, 3, 4} - {k, i}).pop()


def _check_outcome(outcome: Sequence[int]) -> tuple[int, int]:
    i, ip = outcome
    return check_bell_index(i), check_bell_index(ip)


def generalized_depolarizing(q: Sequence[float]) -> KrausChannel:
    """Single-qubit ``rho -> sum_k q_k sigma_k rho sigma_k``."""
    q = validate_spectrum(q)
    return KrausChannel(tuple(np.sqrt(qk) * pauli(k) for k, qk in zip(BELL_LABELS, q)))


def single_outcome_channel(q: Sequence[float], outcome: int) -> KrausChannel:
    """Closed-form single-qubit teleportation channel for Bell outcome ``outcome``."""
    q = validate_spectrum(q)
    i = check_bell_index(outcome)
    return KrausChannel(tuple(np.sqrt(qk) * pauli(_klein_product(k, i))
                              for k, qk in zip(BELL_LABELS, q)))


def uncorrelated_channel(q: Sequence[float], outcome: Sequence[int] = (1, 1)) -> KrausChannel:
    """Two independent generalized depolarizing channels, 16 Pauli-pair operators.

    For outcome (i, i') the pair (k, k') carries weight ``sqrt(q_k q_k')`` on
    ``sigma_{k.i} x sigma_{k'.i'}``, where ``k.i`` labels the Pauli
    proportional to ``sigma_k sigma_i``. Outcome (1, 1) is the unpermuted set.
    """
    q = validate_spectrum(q)
    i, ip = _check_outcome(outcome)
    ops = []
    for (k, qk), (kp, qkp) in product(zip(BELL_LABELS, q), repeat=2):
        ops.append(np.sqrt(qk * qkp) * kron(pauli(_klein_product(k, i)),
                                            pauli(_klein_product(kp, ip))))
    return KrausChannel(tuple(ops))


def correlated_channel(q: Sequence[float], outcome: Sequence[int] = (1, 1)) -> KrausChannel:
    """Correlated generalized depolarizing channel: four operators ``sqrt(q_k) s x s``.

    Both qubits receive the same Pauli noise (permuted by the outcome labels),
    mixed incoherently. This is the per-term operator set; the map a pure
    correlated resource actually induces is :func:`correlated_channel_coherent`.
    """
    q = validate_spectrum(q)
    i, ip = _check_outcome(outcome)
    return KrausChannel(tuple(np.sqrt(qk) * kron(pauli(_klein_product(k, i)),
                                                  pauli(_klein_product(k, ip)))
                              for k, qk in zip(BELL_LABELS, q)))


# |B_k> = (I x tau_k)|Phi+>, with real tau_k
_TAU = {1: np.eye(2, dtype=complex), 2: PAULI_Z, 3: PAULI_X, 4: PAULI_X @ PAULI_Z}


def correlated_channel_coherent(q: Sequence[float],
                                outcome: Sequence[int] = (1, 1)) -> KrausChannel:
    """Single unnormalized operator ``sum_k sqrt(q_k) tau_k tau_i x tau_k tau_i'``.

    Projecting systems (1,3) on ``|B_i>`` maps ``|B_k>_34`` to ``tau_k tau_i / 2``
    on system 4; the factor 1/2 per pair is absorbed so that the application
    weight equals ``16 p_ii'``.
    """
    q = validate_spectrum(q)
    i, ip = _check_outcome(outcome)
    op = sum(np.sqrt(qk) * kron(_TAU[k] @ _TAU[i], _TAU[k] @ _TAU[ip])
             for k, qk in zip(BELL_LABELS, q))
    return KrausChannel((op,), "conditional_unnormalized")


def pauli_pair_unitary(first: int, second: int) -> np.ndarray:
    return kron(pauli(first), pauli(second))
