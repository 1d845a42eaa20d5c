"""Two-level calculus in Pauli coordinates.

Operators are written ``A = a0 s0 + a1 s1 + a2 s2 + a3 s3`` and density
matrices ``rho = y0 s0 + y1 s1 + y2 s2 + y3 s3`` with ``y_j = Tr(s_j rho) / 2``,
so ``y0 = 1/2``.  Pure states sit on the sphere ``y1^2 + y2^2 + y3^2 = 1/4``
and mixed states fill the ball of the same radius (``rho`` has eigenvalues
``1/2 +/- |y_vec|``).

Pauli basis: ``s1 = [[0, 1], [1, 0]]``, ``s2 = [[0, -i], [i, 0]]``,
``s3 = diag(1, -1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatchError, InvalidStateError
from .hilbert import OperatorLike, as_operator, as_state, projector

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
SIGMA.setflags(write=False)

PURE_TOL = 1e-10
BALL_TOL = 1e-12
TRACE_TOL = 1e-12

#: factors making the contracted coordinate tensors equal e_{AoB} and e_[A,B]
BLOCH_TENSOR_NORMALIZATION = {"G_rho": 0.25, "Lambda_rho": -0.5}


@dataclass(frozen=True)
class PauliCoefficients:
    a0: float
    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        for name in ("a0", "a1", "a2", "a3"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} is not finite")
            object.__setattr__(self, name, v)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3])

    def as_array(self) -> np.ndarray:
        return np.array([self.a0, self.a1, self.a2, self.a3])

    def to_matrix(self) -> np.ndarray:
        return np.tensordot(self.as_array(), SIGMA, axes=1)

    @classmethod
    def from_matrix(cls, A: OperatorLike) -> "PauliCoefficients":
        m = as_operator(A).matrix
        if m.shape != (2, 2):
            raise DimensionMismatchError("Pauli decomposition needs a 2x2 operator")
        return cls(*(0.5 * np.trace(s @ m).real for s in SIGMA))


@dataclass(frozen=True)
class BlochState:
    y0: float
    y1: float
    y2: float
    y3: float

    def __post_init__(self):
        for name in ("y0", "y1", "y2", "y3"):
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"{name} is not finite")
            object.__setattr__(self, name, v)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.y1, self.y2, self.y3])

    def as_array(self) -> np.ndarray:
        return np.array([self.y0, self.y1, self.y2, self.y3])

    def radius2(self) -> float:
        return self.y1**2 + self.y2**2 + self.y3**2

    def is_pure(self, tol: float = PURE_TOL) -> bool:
        return abs(self.radius2() - 0.25) <= tol

    def to_density(self) -> np.ndarray:
        return np.tensordot(self.as_array(), SIGMA, axes=1)


class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix (immutable)."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix, *, trace_tol: float = 1e-12, psd_tol: float = 1e-10):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"density matrix must be square, got shape {m.shape}")
        scale = max(np.max(np.abs(m)), 1.0)
        if np.max(np.abs(m - m.conj().T)) > 1e-12 * scale:
            raise InvalidStateError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        if abs(np.trace(m).real - 1.0) > trace_tol:
            raise InvalidStateError(f"trace {np.trace(m).real!r} differs from 1")
        if np.linalg.eigvalsh(m)[0] < -psd_tol:
            raise InvalidStateError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        self._matrix = m

    @classmethod
    def from_state(cls, psi) -> "DensityMatrix":
        return cls(projector(psi))

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def purity_defect(self) -> float:
        """``max |rho^2 - rho|``; zero for rank-one projectors."""
        m = self._matrix
        return float(np.max(np.abs(m @ m - m)))

    def is_pure(self, tol: float = PURE_TOL) -> bool:
        return self.purity_defect() <= tol

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._matrix, dtype=dtype)


def density_to_bloch(rho) -> BlochState:
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (2, 2):
        raise DimensionMismatchError("Bloch coordinates need a 2x2 density matrix")
    if abs(np.trace(m).real - 1.0) > TRACE_TOL:
        raise InvalidStateError("density matrix must have unit trace")
    # y0 = Tr(rho)/2 is 1/2 by the trace check; pin it so the ball test is exact
    return BlochState(0.5, *(0.5 * np.trace(s @ m).real for s in SIGMA[1:]))


def state_to_bloch(psi) -> BlochState:
    """Bloch coordinates of the ray of ``psi`` (constant along the Hopf fibres)."""
    psi = as_state(psi)
    if psi.size != 2:
        raise DimensionMismatchError("Bloch coordinates need a two-level state")
    return density_to_bloch(projector(psi))


def bloch_to_density(y: BlochState) -> np.ndarray:
    return y.to_density()


def bloch_to_state(y: BlochState) -> np.ndarray:
    """Unit representative of the ray of a pure Bloch point."""
    if not y.is_pure():
        raise InvalidStateError("only pure Bloch points correspond to rays")
    w, v = np.linalg.eigh(y.to_density())
    return v[:, -1]


def _coeffs(a) -> PauliCoefficients:
    return a if isinstance(a, PauliCoefficients) else PauliCoefficients(*a)


def _point(y) -> BlochState:
    return y if isinstance(y, BlochState) else BlochState(*y)


def pauli_expectation(a, y) -> float:
    """``e_A = a0 + 2 (a1 y1 + a2 y2 + a3 y3)``."""
    a, y = _coeffs(a), _point(y)
    return a.a0 + 2.0 * (a.a1 * y.y1 + a.a2 * y.y2 + a.a3 * y.y3)


def commutator_function(a, b, y) -> float:
    """``e_[A,B]`` in Bloch coordinates; equals ``-4 (a_vec x b_vec) . y_vec``."""
    a, b, y = _coeffs(a), _coeffs(b), _point(y)
    return (
        4 * (a.a3 * b.a2 - a.a2 * b.a3) * y.y1
        + 4 * (a.a1 * b.a3 - a.a3 * b.a1) * y.y2
        + 4 * (a.a2 * b.a1 - a.a1 * b.a2) * y.y3
    )


def anticommutator_function(a, b, y) -> float:
    """``e_{AB+BA}`` in Bloch coordinates."""
    a, b, y = _coeffs(a), _coeffs(b), _point(y)
    return (
        4 * (a.a0 * b.a0 + a.a1 * b.a1 + a.a2 * b.a2 + a.a3 * b.a3) * y.y0
        + 4 * (a.a1 * b.a0 + a.a0 * b.a1) * y.y1
        + 4 * (a.a2 * b.a0 + a.a0 * b.a2) * y.y2
        + 4 * (a.a3 * b.a0 + a.a0 * b.a3) * y.y3
    )


BlochTensorKind = Literal["G_rho", "Lambda_rho"]

_LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _LEVI_CIVITA[_i, _j, _k] = 1.0
    _LEVI_CIVITA[_i, _k, _j] = -1.0


def bloch_tensor_matrix(kind: BlochTensorKind, y) -> np.ndarray:
    """4x4 components (index 0..3 over ``y0..y3``) of ``G(rho)`` or ``Lambda(rho)``.

    ``G = 4 (y0 sum_j d_j (x) d_j + sum_{j>0} y_j (d_j (x) d_0 + d_0 (x) d_j))`` and
    ``Lambda = sum eps^{jkl} y_j d_k ^ d_l`` with ``d_k ^ d_l = d_k (x) d_l - d_l (x) d_k``.
    """
    y = _point(y)
    t = np.zeros((4, 4))
    if kind == "G_rho":
        t += 4 * y.y0 * np.eye(4)
        t[0, 1:] += 4 * y.vector
        t[1:, 0] += 4 * y.vector
        return t
    if kind == "Lambda_rho":
        half = np.einsum("jkl,j->kl", _LEVI_CIVITA, y.vector)
        t[1:, 1:] = half - half.T
        return t
    raise ValueError(f"unknown Bloch tensor {kind!r}")


def expectation_differential(a) -> np.ndarray:
    """Coordinate differential of ``e_A = 2 (a0 y0 + a1 y1 + a2 y2 + a3 y3)``.

    ``y0`` is treated as a free coordinate here; ``y0 = 1/2`` is imposed only
    after contraction.
    """
    return 2.0 * _coeffs(a).as_array()


def bloch_tensor_eval(kind: BlochTensorKind, a, b, y) -> float:
    """Normalized contraction ``T(de_A, de_B)`` of a coordinate tensor.

    ``G_rho`` gives :func:`anticommutator_function`, ``Lambda_rho`` gives
    :func:`commutator_function`.
    """
    t = bloch_tensor_matrix(kind, y)
    return BLOCH_TENSOR_NORMALIZATION[kind] * float(expectation_differential(a) @ t @ expectation_differential(b))


def mixed_state_contains(y) -> bool:
    """True iff ``y0 = 1/2`` and ``|y_vec|^2 <= 1/4`` (positivity of rho)."""
    y = _point(y)
    return y.y0 == 0.5 and y.radius2() <= 0.25 + BALL_TOL
