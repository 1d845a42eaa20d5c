"""Realification of a finite-dimensional Hilbert space.

A state ``psi`` in C^n is identified with the point ``(q, p)`` of R^2n,
``psi_k = q_k + i p_k``.  Vectors, covectors and contravariant tensors are all
written in the split layout ``(q_1..q_n, p_1..p_n)``; interleaved layouts are
never used.

The Hermitian product is conjugate-linear in its first slot and splits as
``<psi1, psi2> = g(X1, X2) + i omega(X1, X2)``.  The complex structure ``J``
is oriented so that ``g(X, Y) = omega(JX, Y)`` and ``Gamma = J(Delta)``, which
makes ``J`` the realification of multiplication by ``-i``:
``J(q, p) = (p, -q)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from .errors import DegenerateStateError, DimensionMismatchError, NonHermitianError

#: relative max-norm deviation from Hermiticity tolerated without a flag
HERMITIAN_TOL = 1e-12
#: relative deviation beyond which an operator is rejected instead of symmetrized
HERMITIAN_REJECT_TOL = 1e-4


def as_state(psi) -> np.ndarray:
    """Validate ``psi`` as a nonzero complex vector and return a copy."""
    arr = np.array(psi, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionMismatchError(f"state must be a non-empty 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state has non-finite amplitudes")
    if not np.any(arr):
        raise DegenerateStateError("the zero vector does not represent a ray")
    return arr


def normalize(psi) -> np.ndarray:
    psi = as_state(psi)
    return psi / np.linalg.norm(psi)


class HermitianOperator:
    """Immutable Hermitian matrix.

    Inputs whose relative max-norm deviation ``|M - M^dagger|_max / |M|_max``
    exceeds :data:`HERMITIAN_TOL` are replaced by ``(M + M^dagger) / 2`` and
    flagged through :attr:`symmetrized`.  Deviations above ``reject_tol``
    raise :class:`NonHermitianError`.
    """

    __slots__ = ("_matrix", "deviation", "symmetrized")

    def __init__(self, matrix, *, reject_tol: float = HERMITIAN_REJECT_TOL):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise DimensionMismatchError(f"operator must be a non-empty square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator has non-finite entries")
        scale = np.max(np.abs(m))
        dev = np.max(np.abs(m - m.conj().T)) / scale if scale > 0 else 0.0
        if dev > reject_tol:
            raise NonHermitianError(f"relative deviation from Hermiticity {dev:.3g} exceeds {reject_tol:g}")
        symmetrized = dev > HERMITIAN_TOL
        # always symmetrize: it also zeroes the rounding residue below tolerance
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        self._matrix = m
        self.deviation = float(dev)
        self.symmetrized = bool(symmetrized)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._matrix, dtype=dtype)

    def __repr__(self):
        return f"HermitianOperator(dim={self.dim}, symmetrized={self.symmetrized})"


OperatorLike = Union[HermitianOperator, np.ndarray, list]


def as_operator(A: OperatorLike) -> HermitianOperator:
    return A if isinstance(A, HermitianOperator) else HermitianOperator(A)


def check_dims(*dims: int) -> int:
    if len(set(dims)) != 1:
        raise DimensionMismatchError(f"dimension mismatch: {dims}")
    return dims[0]


@dataclass(frozen=True)
class RealifiedState:
    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=float)
        p = np.array(self.p, dtype=float)
        if q.shape != p.shape or q.ndim != 1:
            raise DimensionMismatchError("q and p must be 1-D vectors of equal length")
        q.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.q.size

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.q, self.p])

    @classmethod
    def from_vector(cls, x) -> "RealifiedState":
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size % 2:
            raise DimensionMismatchError("split-layout vector must have even length")
        n = x.size // 2
        return cls(x[:n], x[n:])


@dataclass(frozen=True)
class Covector:
    """One-form ``sum_k dq[k] dq^k + dp[k] dp_k``."""

    dq: np.ndarray
    dp: np.ndarray

    def __post_init__(self):
        dq = np.array(self.dq, dtype=float)
        dp = np.array(self.dp, dtype=float)
        if dq.shape != dp.shape or dq.ndim != 1:
            raise DimensionMismatchError("dq and dp must be 1-D vectors of equal length")
        if not (np.all(np.isfinite(dq)) and np.all(np.isfinite(dp))):
            raise ValueError("covector has non-finite components")
        dq.setflags(write=False)
        dp.setflags(write=False)
        object.__setattr__(self, "dq", dq)
        object.__setattr__(self, "dp", dp)

    @property
    def n(self) -> int:
        return self.dq.size

    @property
    def vector(self) -> np.ndarray:
        return np.concatenate([self.dq, self.dp])

    @classmethod
    def from_vector(cls, x) -> "Covector":
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.size % 2:
            raise DimensionMismatchError("split-layout covector must have even length")
        n = x.size // 2
        return cls(x[:n], x[n:])

    def __add__(self, other: "Covector") -> "Covector":
        return Covector.from_vector(self.vector + other.vector)

    def __rmul__(self, c: float) -> "Covector":
        return Covector.from_vector(c * self.vector)


def realify(psi) -> RealifiedState:
    psi = as_state(psi)
    return RealifiedState(psi.real, psi.imag)


def complexify(x: RealifiedState) -> np.ndarray:
    return np.asarray(x.q) + 1j * np.asarray(x.p)


def hermitian_product(psi1, psi2) -> complex:
    """``<psi1|psi2>``; real part is ``g``, imaginary part is ``omega``."""
    a = np.asarray(psi1, dtype=complex)
    b = np.asarray(psi2, dtype=complex)
    check_dims(a.size, b.size)
    return complex(np.vdot(a, b))


def metric(x: RealifiedState, y: RealifiedState) -> float:
    """Covariant metric ``g = dq (x) dq + dp (x) dp``."""
    check_dims(x.n, y.n)
    return float(x.q @ y.q + x.p @ y.p)


def symplectic_form(x: RealifiedState, y: RealifiedState) -> float:
    """Covariant symplectic form ``omega = dq ^ dp``."""
    check_dims(x.n, y.n)
    return float(x.q @ y.p - x.p @ y.q)


def apply_complex_structure(x):
    """``J(q, p) = (p, -q)``; accepts a RealifiedState, Covector or split 2n-vector."""
    if isinstance(x, RealifiedState):
        return RealifiedState(x.p, -x.q)
    if isinstance(x, Covector):
        return Covector(x.dp, -x.dq)
    v = np.asarray(x, dtype=float)
    n = v.size // 2
    return np.concatenate([v[n:], -v[:n]])


def complex_structure_matrix(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def euler_fields(x: RealifiedState) -> tuple[np.ndarray, np.ndarray]:
    """Dilation field ``Delta`` and phase field ``Gamma = J(Delta)`` at ``x``.

    Components are in the ``(d/dq, d/dp)`` layout, so ``Delta = (q, p)`` and
    ``Gamma = (p, -q)``.
    """
    delta = x.vector
    if not np.any(delta):
        raise DegenerateStateError("Euler fields are undefined at the origin")
    return delta, apply_complex_structure(delta)


def dilation_flow(x: RealifiedState, s: float) -> RealifiedState:
    """Time-``s`` flow of ``Delta``: scaling by ``e^s``."""
    return RealifiedState.from_vector(np.exp(s) * x.vector)


def phase_flow(x: RealifiedState, t: float) -> RealifiedState:
    """Time-``t`` flow of ``Gamma``: ``psi -> e^{-it} psi``."""
    return realify(np.exp(-1j * t) * complexify(x))


TensorKind = Literal["G", "Omega"]


def contravariant_matrix(kind: TensorKind, n: int) -> np.ndarray:
    """Component matrix of ``G`` or ``Omega`` in the split basis."""
    if kind == "G":
        return np.eye(2 * n)
    if kind == "Omega":
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return np.block([[zero, eye], [-eye, zero]])
    raise ValueError(f"unknown tensor kind {kind!r}")


def contravariant_eval(kind: TensorKind, alpha: Covector, beta: Covector) -> float:
    check_dims(alpha.n, beta.n)
    if kind == "G":
        return float(alpha.dq @ beta.dq + alpha.dp @ beta.dp)
    if kind == "Omega":
        return float(alpha.dq @ beta.dp - alpha.dp @ beta.dq)
    raise ValueError(f"unknown tensor kind {kind!r}")


def projector(psi) -> np.ndarray:
    """Rank-one projector ``|psi><psi| / <psi|psi>``."""
    psi = as_state(psi)
    return np.outer(psi, psi.conj()) / np.vdot(psi, psi).real
