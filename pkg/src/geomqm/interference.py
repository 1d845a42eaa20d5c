"""Superposition of rays through a fiducial projector, and the induced linear
structure on the sphere of qubit states.

For unit representatives ``psi_i`` of ``rho_i`` and ``psi0`` of ``P0``,
``rho1 P0 rho2 = c |psi1><psi2|`` with ``c = <psi1|psi0><psi0|psi2>`` and
``Tr(rho1 P0 rho2 P0) = |c|^2``.  The superposition

    rho = p1 rho1 + p2 rho2 + sqrt(p1 p2) (rho1 P0 rho2 + h.c.) / |c|

equals ``chi chi^dagger`` with ``chi = sqrt(p1) psi1 + sqrt(p2) (conj(c)/|c|) psi2``,
so it is rank one; dividing by its trace makes it a pure state also when
``rho1`` and ``rho2`` are not orthogonal.

Sphere points are unit vectors ``s = 2 y_vec`` (Bloch vector rescaled).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import BlochState, DensityMatrix, density_to_bloch, state_to_bloch
from .errors import DimensionMismatchError, FocalPointError, InvalidStateError, NumericalConsistencyError
from .hilbert import as_state, check_dims, projector

PURE_TOL = 1e-10
OVERLAP_TOL = 1e-12
SPHERE_TOL = 1e-12
#: log_map refuses points this close (chordal) to the antipode of the base
ANTIPODE_TOL = 1e-12


def _pure_matrix(rho, what: str = "state") -> np.ndarray:
    m = rho.matrix if isinstance(rho, DensityMatrix) else DensityMatrix(rho).matrix
    if np.max(np.abs(m @ m - m)) > PURE_TOL:
        raise InvalidStateError(f"{what} is not a rank-one projector")
    return m


def _leading_vector(m: np.ndarray) -> np.ndarray:
    """Unit vector spanning a rank-one projector; its largest component is real positive."""
    j = int(np.argmax(np.real(np.diag(m))))
    v = m[:, j] / np.sqrt(m[j, j].real)
    return v / np.linalg.norm(v)


class FiducialProjector:
    """Rank-one projector ``P0 = |psi0><psi0| / <psi0|psi0>``.

    Built from a vector (kept as ``vector``) or from a projector matrix (the
    vector is then read off a column of the matrix).
    """

    __slots__ = ("matrix", "vector")

    def __init__(self, matrix):
        m = _pure_matrix(matrix, "fiducial projector")
        m.setflags(write=False)
        v = _leading_vector(m)
        v.setflags(write=False)
        self.matrix = m
        self.vector = v

    @classmethod
    def from_vector(cls, psi0) -> "FiducialProjector":
        psi0 = as_state(psi0)
        self = cls(projector(psi0))
        v = psi0 / np.linalg.norm(psi0)
        v.setflags(write=False)
        self.vector = v
        return self

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def pancharatnam_overlap(rho1, rho2, P0: FiducialProjector) -> float:
    """``Tr(rho1 P0 rho2 P0)``, real and nonnegative for rank-one inputs."""
    r1, r2 = _pure_matrix(rho1), _pure_matrix(rho2)
    check_dims(r1.shape[0], r2.shape[0], P0.dim)
    val = np.trace(r1 @ P0.matrix @ r2 @ P0.matrix)
    if abs(val.imag) > 1e-12 or val.real < -1e-12:
        raise NumericalConsistencyError(f"Pancharatnam overlap {val!r} is not a nonnegative real")
    return max(val.real, 0.0)


def superpose(rho1, rho2, P0: FiducialProjector, p1: float) -> DensityMatrix:
    if not 0.0 <= p1 <= 1.0:
        raise ValueError("p1 must lie in [0, 1]")
    r1, r2 = _pure_matrix(rho1, "rho1"), _pure_matrix(rho2, "rho2")
    check_dims(r1.shape[0], r2.shape[0], P0.dim)
    if p1 == 1.0:
        return DensityMatrix(r1)
    if p1 == 0.0:
        return DensityMatrix(r2)
    p2 = 1.0 - p1
    overlap = pancharatnam_overlap(r1, r2, P0)
    if overlap <= OVERLAP_TOL:
        raise FocalPointError("a state is orthogonal to the fiducial projector")
    cross = r1 @ P0.matrix @ r2
    rho = p1 * r1 + p2 * r2 + np.sqrt(p1 * p2) / np.sqrt(overlap) * (cross + cross.conj().T)
    # trace is 1 for orthogonal inputs; otherwise this is the scalar normalizer
    tr = np.trace(rho).real
    if tr <= OVERLAP_TOL:
        raise FocalPointError("the superposed branches cancel")
    return DensityMatrix(rho / tr)


def lift(rho, P0: FiducialProjector) -> np.ndarray:
    """``rho |psi0> / sqrt(<psi0|psi0>)`` with ``psi0`` the fiducial vector."""
    r = _pure_matrix(rho)
    check_dims(r.shape[0], P0.dim)
    v = r @ P0.vector / np.linalg.norm(P0.vector)
    if np.linalg.norm(v) <= np.sqrt(OVERLAP_TOL):
        raise FocalPointError("state is orthogonal to the fiducial vector")
    return v


def transition_probability(rho1, rho2, P0: FiducialProjector) -> float:
    """``|<psi1|psi2>|^2`` between the normalized lifts of ``rho1`` and ``rho2``."""
    v1, v2 = lift(rho1, P0), lift(rho2, P0)
    v1 = v1 / np.linalg.norm(v1)
    v2 = v2 / np.linalg.norm(v2)
    return float(abs(np.vdot(v1, v2)) ** 2)


# ---------------------------------------------------------------- sphere


@dataclass(frozen=True)
class TangentVector:
    base: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        b = sphere_point(self.base)
        c = np.array(self.components, dtype=float)
        if c.shape != (3,):
            raise DimensionMismatchError("tangent components must be a 3-vector")
        if abs(c @ b) > SPHERE_TOL * max(1.0, np.linalg.norm(c)):
            raise ValueError("tangent vector is not orthogonal to its base point")
        b.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "components", c)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def __add__(self, other: "TangentVector") -> "TangentVector":
        _same_base(self, other)
        return TangentVector(self.base, self.components + other.components)


def sphere_point(s) -> np.ndarray:
    s = np.array(s, dtype=float)
    if s.shape != (3,):
        raise DimensionMismatchError("sphere points are 3-vectors")
    if abs(np.linalg.norm(s) - 1.0) > SPHERE_TOL:
        raise ValueError("sphere point must have unit norm")
    return s


def _same_base(v1: TangentVector, v2: TangentVector):
    if np.max(np.abs(v1.base - v2.base)) > SPHERE_TOL:
        raise ValueError("tangent vectors are based at different points")


def state_to_sphere(psi) -> np.ndarray:
    y = state_to_bloch(psi).vector
    return y / np.linalg.norm(y)


def density_to_sphere(rho) -> np.ndarray:
    y = density_to_bloch(_pure_matrix(rho)).vector
    return y / np.linalg.norm(y)


def sphere_to_density(s) -> np.ndarray:
    s = sphere_point(s)
    return BlochState(0.5, *(0.5 * s)).to_density()


def exp_map(s0, v: TangentVector) -> np.ndarray:
    """Time-one geodesic flow ``cos|v| s0 + sin|v| v/|v|``."""
    s0 = sphere_point(s0)
    if np.max(np.abs(v.base - s0)) > SPHERE_TOL:
        raise ValueError("tangent vector is not based at s0")
    t = v.norm
    if t == 0.0:
        return s0.copy()
    out = np.cos(t) * s0 + np.sin(t) * (v.components / t)
    return out / np.linalg.norm(out)


def log_map(s0, s) -> TangentVector:
    """Inverse of :func:`exp_map` on the sphere minus the antipode of ``s0``."""
    s0, s = sphere_point(s0), sphere_point(s)
    if np.linalg.norm(s + s0) <= ANTIPODE_TOL:
        raise FocalPointError("the antipode of the base point has no logarithm")
    w = s - (s0 @ s) * s0
    sin_t = np.linalg.norm(w)
    if sin_t == 0.0:
        return TangentVector(s0, np.zeros(3))
    theta = np.arctan2(sin_t, s0 @ s)
    comp = theta * w / sin_t
    comp -= (comp @ s0) * s0
    return TangentVector(s0, comp)


def star_compose(s0, s1, s2) -> np.ndarray:
    """``exp_s0(log_s0 s1 + log_s0 s2)``."""
    return exp_map(s0, log_map(s0, s1) + log_map(s0, s2))


def induced_inner_product(s0, v1: TangentVector, v2: TangentVector) -> complex:
    """``G_P(v1, v2) + i Omega_P(v1, v2)`` on ``T_s0 S^2``.

    ``G_P`` is the round metric and ``Omega_P(v1, v2) = s0 . (v1 x v2)``, i.e.
    ``Omega_P(v1, v2) = G_P(J v1, v2)`` with ``J = s0 x``; swapping the
    arguments conjugates the result.
    """
    s0 = sphere_point(s0)
    _same_base(v1, v2)
    if np.max(np.abs(v1.base - s0)) > SPHERE_TOL:
        raise ValueError("tangent vectors are not based at s0")
    g = float(v1.components @ v2.components)
    w = float(s0 @ np.cross(v1.components, v2.components))
    return complex(g, w)


def chordal_distance(s1, s2) -> float:
    return float(np.linalg.norm(np.asarray(s1) - np.asarray(s2)))


def linearity_defect(s0, s0_alt, s1, s2) -> float:
    """How far the chart change between the linear structures at ``s0`` and
    ``s0_alt`` is from affine, probed on ``s1``, ``s2``.

    Returns the chordal distance between ``s1 * s2`` composed at ``s0`` and the
    same sum transported through the ``s0_alt`` chart as an affine map,
    ``exp_alt(log_alt s1 + log_alt s2 - log_alt s0)``.
    """
    direct = star_compose(s0, s1, s2)
    l1, l2, l0 = log_map(s0_alt, s1), log_map(s0_alt, s2), log_map(s0_alt, s0)
    via_alt = exp_map(s0_alt, TangentVector(l0.base, l1.components + l2.components - l0.components))
    return chordal_distance(direct, via_alt)
