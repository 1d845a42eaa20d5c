"""Schrodinger evolution and its expectation-value shadow (hbar = 1).

States evolve as ``psi(t) = exp(-iHt) psi0``, computed from the
eigendecomposition of ``H``.  Expectation values then obey
``d/dt e_A = e_[H,A]`` with ``[H, A] = i(HA - AH)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bloch import BlochState, PauliCoefficients, mixed_state_contains
from .errors import InvalidStateError
from .expectation import expectation, poisson_bracket
from .hilbert import OperatorLike, as_operator, as_state, check_dims


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    values: np.ndarray  # shape (len(times), len(observables))
    states: Optional[np.ndarray] = None

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or (t.size > 1 and np.any(np.diff(t) <= 0)):
            raise ValueError("times must be a strictly increasing 1-D sequence")
        if len(self.values) != t.size:
            raise ValueError("one record per time is required")


def _propagator_parts(H):
    m = as_operator(H).matrix
    w, v = np.linalg.eigh(m)
    return w, v


def evolve_state(H: OperatorLike, psi0, t: float) -> np.ndarray:
    psi0 = as_state(psi0)
    check_dims(as_operator(H).dim, psi0.size)
    if t == 0:
        return psi0
    w, v = _propagator_parts(H)
    return v @ (np.exp(-1j * w * t) * (v.conj().T @ psi0))


def evolve_states(H: OperatorLike, psi0, times) -> np.ndarray:
    """``psi(t_k)`` for every ``t_k``, sharing one eigendecomposition."""
    psi0 = as_state(psi0)
    check_dims(as_operator(H).dim, psi0.size)
    w, v = _propagator_parts(H)
    c = v.conj().T @ psi0
    times = np.asarray(times, dtype=float)
    out = (v @ (np.exp(-1j * np.outer(w, times)) * c[:, None])).T
    out[times == 0] = psi0
    return out


def cayley_step(H: OperatorLike, psi, dt: float) -> np.ndarray:
    """Norm-preserving midpoint step ``(1 + iH dt/2)^-1 (1 - iH dt/2) psi``."""
    m = as_operator(H).matrix
    psi = as_state(psi)
    eye = np.eye(m.shape[0])
    return np.linalg.solve(eye + 0.5j * dt * m, (eye - 0.5j * dt * m) @ psi)


def expectation_trajectory(
    H: OperatorLike,
    observables: Sequence[OperatorLike],
    psi0,
    times,
    keep_states: bool = False,
) -> Trajectory:
    H = as_operator(H)
    obs = [as_operator(A) for A in observables]
    psi0 = as_state(psi0)
    check_dims(H.dim, psi0.size, *(A.dim for A in obs))
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or (times.size > 1 and np.any(np.diff(times) <= 0)):
        raise ValueError("times must be a strictly increasing 1-D sequence")
    states = evolve_states(H, psi0, times)
    values = np.array([[expectation(A, s) for A in obs] for s in states]).reshape(times.size, len(obs))
    return Trajectory(times, values, states if keep_states else None)


def ehrenfest_residual(H: OperatorLike, A: OperatorLike, psi, dt: float, method: str = "exact") -> float:
    """``|central difference of e_A(psi(t)) at t=0 - e_[H,A](psi)|``.

    ``method="cayley"`` propagates with :func:`cayley_step` instead of the
    exact exponential; both leave a residual of order ``dt**2``.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    psi = as_state(psi)
    if method == "exact":
        fwd, bwd = evolve_state(H, psi, dt), evolve_state(H, psi, -dt)
    elif method == "cayley":
        fwd, bwd = cayley_step(H, psi, dt), cayley_step(H, psi, -dt)
    else:
        raise ValueError(f"unknown propagation method {method!r}")
    slope = (expectation(A, fwd) - expectation(A, bwd)) / (2 * dt)
    return abs(slope - poisson_bracket(H, A, psi))


def bloch_evolve(h, y0, t: float):
    """Rotate the Bloch vector about ``h_vec`` at angular rate ``2|h_vec|``.

    Solves ``dy/dt = 2 h_vec x y`` for ``H = h0 s0 + h_vec.s``; ``y0`` stays
    fixed at 1/2.
    """
    if not isinstance(h, PauliCoefficients):
        h = PauliCoefficients(*h)
    if not isinstance(y0, BlochState):
        y0 = BlochState(*y0)
    if not mixed_state_contains(y0):
        raise InvalidStateError("initial Bloch point lies outside the state ball")
    hv = h.vector
    r = np.linalg.norm(hv)
    y = y0.vector
    if r == 0.0:
        return y0
    k = hv / r
    theta = 2 * r * t
    c, s = np.cos(theta), np.sin(theta)
    y_t = y * c + np.cross(k, y) * s + k * (k @ y) * (1 - c)
    return BlochState(y0.y0, *y_t)
