"""Dense complex linear algebra substrate.

States, operators, tensor products, Hermitian eigendecomposition, Haar-random
sampling and ensemble density matrices. Everything is dense and immutable:
values wrap read-only numpy arrays, operations are pure functions. Matrix
sizes are capped at MAX_DENSE_DIM because the constructions built on top only
need a handful of subsystems.
"""

from __future__ import annotations

from functools import reduce
from typing import Sequence, Union

import numpy as np

from .errors import DimensionCapError, NumericalCheckError
from .sampling import RandomStream

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-8

# Guard for d**n style constructions: a dense square matrix of this side
# is ~1.6 GB of complex entries, which is as far as desk-scale exactness goes.
MAX_DENSE_DIM = 10_000


def ensure_within_cap(dim: int) -> None:
    if dim > MAX_DENSE_DIM:
        raise DimensionCapError(
            f"dense dimension {dim} exceeds the cap of {MAX_DENSE_DIM}"
        )


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class PureState:
    """Unit vector of complex amplitudes over a finite-dimensional space."""

    __slots__ = ("amplitudes",)

    def __init__(self, amplitudes):
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.size == 0:
            raise ValueError("a state needs at least one amplitude")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"amplitudes must have unit norm, got {norm!r}")
        self.amplitudes = _frozen(amps)

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        """Build a state from an unnormalized amplitude vector."""
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "Operator":
        return Operator(np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "PureState") -> complex:
        if self.dim != other.dim:
            raise ValueError("states live on different spaces")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"PureState(dim={self.dim})"


class Operator:
    """Dense complex square matrix acting on a finite-dimensional space."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        mat = np.array(entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator entries must be square, got shape {mat.shape}")
        self.entries = _frozen(mat)

    @classmethod
    def identity(cls, dim: int) -> "Operator":
        return cls(np.eye(dim, dtype=complex))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return bool(np.abs(self.entries - self.entries.conj().T).max() <= tol)

    def require_hermitian(self, tol: float = HERMITIAN_TOL) -> None:
        dev = np.abs(self.entries - self.entries.conj().T).max()
        if dev > tol:
            raise ValueError(f"operator is not Hermitian (deviation {dev:.3e})")

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def __add__(self, other: "Operator") -> "Operator":
        return Operator(self.entries + other.entries)

    def __sub__(self, other: "Operator") -> "Operator":
        return Operator(self.entries - other.entries)

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(self.entries @ other.entries)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.entries * scalar)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim})"


class WeightedEnsemble:
    """Probability-weighted collection of pure states on a shared space."""

    __slots__ = ("members",)

    def __init__(self, members: Sequence[tuple]):
        members = [(float(p), state) for p, state in members]
        if not members:
            raise ValueError("ensemble needs at least one member")
        total = sum(p for p, _ in members)
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        if any(p < 0.0 for p, _ in members):
            raise ValueError("probabilities must be nonnegative")
        dims = {state.dim for _, state in members}
        if len(dims) != 1:
            raise ValueError(f"ensemble members live on different spaces: dims {sorted(dims)}")
        self.members = tuple(members)

    @property
    def dim(self) -> int:
        return self.members[0][1].dim


def tensor_product(states: Sequence[PureState]) -> PureState:
    """Kronecker product of the given states, leftmost factor varying slowest.

    Left-fold evaluation makes flattened and left-nested products agree
    exactly, amplitude by amplitude.
    """
    if not states:
        raise ValueError("tensor product of an empty list is undefined")
    return PureState(reduce(np.kron, (s.amplitudes for s in states)))


def haar_random_state(dim: int, stream: RandomStream) -> PureState:
    """Draw a Haar (unitarily invariant) random pure state.

    Each amplitude is an independent standard complex Gaussian; normalizing
    the vector yields the unique rotation-invariant distribution on the unit
    sphere. The result is a deterministic function of ``stream``.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    gen = stream.generator()
    return _haar_state(gen, dim)


def _haar_state(gen: np.random.Generator, dim: int) -> PureState:
    vec = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    while np.linalg.norm(vec) < 1e-12:  # measure-zero safeguard
        vec = gen.normal(size=dim) + 1j * gen.normal(size=dim)
    return PureState.normalized(vec)


def density_of(ensemble: WeightedEnsemble) -> Operator:
    """Density matrix sum_i p_i |psi_i><psi_i| of a weighted ensemble."""
    rho = np.zeros((ensemble.dim, ensemble.dim), dtype=complex)
    for p, state in ensemble.members:
        rho += p * np.outer(state.amplitudes, state.amplitudes.conj())
    return Operator(rho)


def hermitian_eig(op: Operator):
    """Eigendecomposition of a Hermitian operator.

    Returns (eigenvalues, eigenvectors) with real eigenvalues sorted in
    descending order and orthonormal eigenvectors as the matching columns.
    """
    op.require_hermitian()
    vals, vecs = np.linalg.eigh(op.entries)
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def expectation(op: Operator, state: Union[PureState, Operator]) -> float:
    """<psi|op|psi> for a pure state, Tr(rho op) for a density matrix.

    The imaginary residue must stay below IMAG_RESIDUE_TOL; it is then
    discarded and the real part returned.
    """
    op.require_hermitian()
    if isinstance(state, PureState):
        if state.dim != op.dim:
            raise ValueError(f"dimension mismatch: operator {op.dim}, state {state.dim}")
        value = complex(np.vdot(state.amplitudes, op.entries @ state.amplitudes))
    elif isinstance(state, Operator):
        if state.dim != op.dim:
            raise ValueError(f"dimension mismatch: operator {op.dim}, density {state.dim}")
        value = complex(np.trace(op.entries @ state.entries))
    else:
        raise TypeError(f"expected PureState or Operator, got {type(state).__name__}")
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise NumericalCheckError(f"expectation has imaginary residue {value.imag:.3e}")
    return float(value.real)
