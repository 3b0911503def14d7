"""Dense complex linear algebra on small multi-qubit spaces.

Subsystems are addressed by 0-based position, leftmost factor first, so a
basis ket ``|x0 x1 ... >`` has ``x0`` as its most significant digit.
Matrices are plain ``numpy.ndarray`` objects; the state containers below
hold read-only copies.
"""

from __future__ import annotations

import dataclasses
from functools import reduce
from typing import Iterable, Sequence

import numpy as np


@dataclasses.dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    norm: float = 1e-12
    hermitian_input: float = 1e-8
    imag_discard: float = 1e-10


TOL = Tolerances()

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# sigma^1, sigma^2, sigma^3 of the Bloch expansion
BLOCH_PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b))) if a.size else 0.0


def allclose(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    return max_abs_diff(a, b) < tol


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(m)).T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the earlier (more significant) factor."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(*factors: np.ndarray) -> np.ndarray:
    if not factors:
        raise ValueError("kron_all needs at least one factor")
    return reduce(kron, factors)


@dataclasses.dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
        if amps.size != int(np.prod(dims)):
            raise ValueError(f"{amps.size} amplitudes do not match dims {dims}")
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1) > TOL.norm:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm2!r})")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_unnormalized(cls, amplitudes, dims: Sequence[int]) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("zero vector cannot be normalized")
        return cls(amps / norm, tuple(dims))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.dims)

    def __repr__(self):
        return f"PureState(dims={self.dims}, amplitudes={np.round(self.amplitudes, 6)})"


@dataclasses.dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A normalized, Hermitian, positive semidefinite operator.

    Construction validates the three invariants against ``tol``; pass a looser
    record when wrapping numerically noisy intermediates.
    """

    matrix: np.ndarray
    dims: tuple[int, ...]
    tol: Tolerances = TOL

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        if any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
        total = int(np.prod(dims))
        if m.shape != (total, total):
            raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
        herm = max_abs_diff(m, dagger(m))
        if herm > self.tol.hermitian:
            raise ValueError(f"matrix is not Hermitian (defect {herm:.3g})")
        tr = np.trace(m)
        if abs(tr - 1) > self.tol.trace:
            raise ValueError(f"trace is {tr!r}, expected 1")
        lo = np.linalg.eigvalsh((m + dagger(m)) / 2)[0]
        if lo < -self.tol.psd:
            raise ValueError(f"matrix has negative eigenvalue {lo:.3g}")
        object.__setattr__(self, "matrix", _frozen(m))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_subsystems(self) -> int:
        return len(self.dims)

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)

    def __repr__(self):
        return f"DensityMatrix(dims={self.dims})"


@dataclasses.dataclass(frozen=True)
class BlochCoefficients:
    """Pauli-expansion coefficients of a two-qubit state.

    ``rho = (I + a.sigma x I + I x b.sigma + sum_rs c_rs sigma_r x sigma_s) / 4``
    """

    a: tuple[float, float, float]
    b: tuple[float, float, float]
    c: tuple[tuple[float, float, float], ...]

    @property
    def c_matrix(self) -> np.ndarray:
        return np.array(self.c, dtype=float)

    def to_matrix(self) -> np.ndarray:
        m = np.eye(4, dtype=complex)
        for r, s_r in enumerate(BLOCH_PAULIS):
            m = m + self.a[r] * kron(s_r, PAULI_I) + self.b[r] * kron(PAULI_I, s_r)
            for s, s_s in enumerate(BLOCH_PAULIS):
                m = m + self.c[r][s] * kron(s_r, s_s)
        return m / 4


def _check_subsystem(dims: Sequence[int], index: int) -> None:
    if not isinstance(index, (int, np.integer)) or not 0 <= index < len(dims):
        raise ValueError(f"subsystem index {index!r} out of range for dims {tuple(dims)}")


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the ``keep`` subsystems, in their original order."""
    dims = list(rho.dims)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    for k in keep:
        _check_subsystem(dims, k)
    return DensityMatrix(partial_trace_matrix(rho.matrix, dims, keep),
                         [dims[k] for k in keep], tol=rho.tol)


def partial_trace_matrix(m: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of an arbitrary square operator (no state validation)."""
    n = len(dims)
    keep = sorted(keep)
    traced = [k for k in range(n) if k not in keep]
    t = np.asarray(m).reshape(list(dims) * 2)
    # bring kept row axes, traced row axes, kept col axes, traced col axes
    t = t.transpose(keep + traced + [k + n for k in keep] + [k + n for k in traced])
    dk = int(np.prod([dims[k] for k in keep]))
    dt = int(np.prod([dims[k] for k in traced])) if traced else 1
    return np.einsum("aibi->ab", t.reshape(dk, dt, dk, dt))


def partial_transpose(rho: DensityMatrix | np.ndarray, subsystem: int,
                      dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose the ``subsystem`` tensor factor only; result need not be PSD."""
    if isinstance(rho, DensityMatrix):
        m, dims = rho.matrix, rho.dims
    else:
        m = np.asarray(rho)
        if dims is None:
            raise ValueError("dims are required for a raw matrix")
    dims = list(dims)
    _check_subsystem(dims, subsystem)
    n = len(dims)
    axes = list(range(2 * n))
    axes[subsystem], axes[subsystem + n] = axes[subsystem + n], axes[subsystem]
    d = int(np.prod(dims))
    return np.asarray(m).reshape(dims * 2).transpose(axes).reshape(d, d)


def hermitian_eigenvalues(m: np.ndarray, tol: Tolerances = TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, ascending, with multiplicity."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    defect = max_abs_diff(m, dagger(m))
    if defect > tol.hermitian_input:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3g})")
    return np.linalg.eigvalsh((m + dagger(m)) / 2)


def bloch_coefficients(rho: DensityMatrix) -> BlochCoefficients:
    if tuple(rho.dims) != (2, 2):
        raise ValueError(f"Bloch coefficients need a two-qubit state, got dims {rho.dims}")
    m = rho.matrix

    def expect(op):
        val = np.trace(m @ op)
        if abs(val.imag) > rho.tol.imag_discard:
            raise ValueError(f"non-real Pauli expectation {val!r}")
        return float(val.real)

    a = tuple(expect(kron(s, PAULI_I)) for s in BLOCH_PAULIS)
    b = tuple(expect(kron(PAULI_I, s)) for s in BLOCH_PAULIS)
    c = tuple(tuple(expect(kron(sr, ss)) for ss in BLOCH_PAULIS) for sr in BLOCH_PAULIS)
    return BlochCoefficients(a, b, c)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density_matrix(dims: Sequence[int], rng: np.random.Generator,
                          rank: int | None = None) -> DensityMatrix:
    d = int(np.prod(dims))
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    m = g @ dagger(g)
    m = (m + dagger(m)) / 2
    return DensityMatrix(m / np.trace(m).real, tuple(dims))


def random_pure_state(dims: Sequence[int], rng: np.random.Generator) -> PureState:
    d = int(np.prod(dims))
    return PureState.from_unnormalized(rng.standard_normal(d) + 1j * rng.standard_normal(d), dims)
