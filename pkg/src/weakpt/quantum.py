"""Finite-dimensional Hilbert-space primitives.

States and observables are small dense numpy arrays wrapped in frozen
dataclasses.  Time evolution uses the eigendecomposition of the Hermitian
generator, which is exact (to rounding) and unitary by construction for the
dimensions targeted here (dim <= 16).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import DEFAULT


class DimensionError(ValueError):
    pass


class HermiticityError(ValueError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalised pure state.  Use :func:`ket` to build one from raw amplitudes."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 2:
            raise DimensionError(f"state dimension must be >= 2, got {amps.size}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > DEFAULT.construction:
            raise ValueError(f"state is not normalised: |psi| = {norm!r}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        return f"StateVector({np.array2string(self.amplitudes, precision=6)})"


def ket(*amplitudes) -> StateVector:
    """Normalised state from amplitudes, e.g. ``ket(1, 1j)`` or ``ket([1, 0, 0])``."""
    if len(amplitudes) == 1:
        amplitudes = amplitudes[0]
    amps = np.array(amplitudes, dtype=complex).reshape(-1)
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ValueError("cannot normalise the zero vector")
    return StateVector(amps / norm)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix.  Hamiltonians carry energy units."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"observable must be square, got shape {m.shape}")
        if m.shape[0] < 2:
            raise DimensionError("observable dimension must be >= 2")
        dev = hermitian_deviation(m)
        if dev > DEFAULT.construction * max(1.0, np.abs(m).max()):
            raise HermiticityError(f"matrix is not Hermitian: max |M - M^dagger| = {dev:.3e}")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigh(self) -> tuple[np.ndarray, np.ndarray]:
        w, v = np.linalg.eigh(self.matrix)
        return _frozen(w), _frozen(v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.matrix, dtype=dtype)

    def __add__(self, other: Observable) -> Observable:
        return Observable(self.matrix + other.matrix)

    def __sub__(self, other: Observable) -> Observable:
        return Observable(self.matrix - other.matrix)

    def __mul__(self, scale: float) -> Observable:
        return Observable(self.matrix * float(scale))

    __rmul__ = __mul__


def hermitian_deviation(m: np.ndarray) -> float:
    m = np.asarray(m)
    return float(np.abs(m - m.conj().T).max())


def inner(bra: StateVector, ket: StateVector) -> complex:
    """<bra|ket>, conjugating the bra."""
    if bra.dim != ket.dim:
        raise DimensionError(f"dimension mismatch: {bra.dim} vs {ket.dim}")
    return complex(np.vdot(bra.amplitudes, ket.amplitudes))


def sandwich(bra: StateVector, op: np.ndarray, ket: StateVector) -> complex:
    """<bra|op|ket> for an arbitrary (not necessarily Hermitian) matrix."""
    op = np.asarray(op)
    if op.shape != (bra.dim, ket.dim):
        raise DimensionError(f"operator shape {op.shape} incompatible with states")
    return complex(np.vdot(bra.amplitudes, op @ ket.amplitudes))


def expectation(state: StateVector, obs: Observable) -> float:
    value = sandwich(state, obs.matrix, state)
    scale = max(1.0, float(np.abs(obs.matrix).max()))
    if abs(value.imag) > DEFAULT.construction * scale:
        raise ValueError(f"expectation has imaginary residue {value.imag:.3e}")
    return value.real


def evolve(state: StateVector, H: Observable, dt: float, hbar: float = 1.0) -> StateVector:
    """Apply exp(-i H dt / hbar).  Negative ``dt`` evolves backwards."""
    if hbar <= 0:
        raise ValueError("hbar must be positive")
    if H.dim != state.dim:
        raise DimensionError(f"dimension mismatch: H is {H.dim}, state is {state.dim}")
    if dt == 0:
        return state
    w, v = H.eigh
    phases = np.exp(-1j * w * (dt / hbar))
    return StateVector(v @ (phases * (v.conj().T @ state.amplitudes)))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    return a @ b - b @ a


# Pauli matrices, handy for scenarios and tests.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
