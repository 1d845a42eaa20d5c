"""Spectra as critical points of expectation-value functions.

``A v = a v`` holds exactly when ``de_A`` vanishes at ``v``, and then
``e_A(v) = a``.  :func:`find_critical_points` locates those points by
projected-gradient ascent/descent of ``e_A`` on the unit sphere, with Armijo
backtracking and retraction ``normalize(x + s g)``.

Plain ascent or descent only settles on the extremal critical points (all
other eigenvectors are saddles of ``e_A``), so each restart is a deflated
sweep: after a critical point is found, the search continues on the unit
sphere of its orthogonal complement, where the next critical point is again
extremal.  Restarts are independent and seeded from spawned Philox streams.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .expectation import differential
from .hilbert import OperatorLike, as_operator, as_state
from .kernels import get_backend

STATUS_NAMES = {0: "converged", 1: "max_iters", 2: "stalled", 3: "empty_start", 4: "residual"}


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 20
    step: float = 0.5
    tol: float = 1e-9
    max_iters: int = 20000
    seed: int = 0
    value_merge: Optional[float] = None  # defaults to 10 * tol
    overlap: float = 0.99
    backend: Optional[str] = None

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.step > 0:
            raise ValueError("step must be > 0")
        if not 0 < self.overlap <= 1:
            raise ValueError("overlap threshold must lie in (0, 1]")

    @property
    def merge_tol(self) -> float:
        return 10 * self.tol if self.value_merge is None else self.value_merge


@dataclass(frozen=True)
class CriticalPoint:
    state: np.ndarray
    value: float
    residual: float
    multiplicity_hint: int = 1


@dataclass(frozen=True)
class SearchFailure:
    restart: int
    index: int
    status: str
    iterations: int


class CriticalPoints(list):
    """List of :class:`CriticalPoint` with per-restart diagnostics attached."""

    def __init__(self, points=(), failures=(), iterations=0):
        super().__init__(points)
        self.failures: list[SearchFailure] = list(failures)
        self.iterations = int(iterations)

    @property
    def values(self) -> np.ndarray:
        return np.array([p.value for p in self])


def canonical_phase(psi: np.ndarray) -> np.ndarray:
    """Representative of the ray of ``psi`` whose largest component is real positive."""
    k = int(np.argmax(np.abs(psi) > np.abs(psi).max() * (1 - 1e-9)))
    out = psi * (np.conj(psi[k]) / abs(psi[k]))
    out[k] = abs(psi[k])
    return out


def _restart_streams(seed: int, restarts: int):
    children = np.random.SeedSequence(seed).spawn(restarts)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _random_starts(seed: int, restarts: int, n: int) -> np.ndarray:
    starts = np.empty((restarts, n, n), dtype=complex)
    for r, rng in enumerate(_restart_streams(seed, restarts)):
        z = rng.standard_normal((n, n, 2))
        starts[r] = z[..., 0] + 1j * z[..., 1]
    return starts


def _sort_key(p: CriticalPoint):
    s = p.state
    return (p.value, *np.column_stack([s.real, s.imag]).ravel())


def find_critical_points(A: OperatorLike, cfg: SearchConfig = SearchConfig()) -> CriticalPoints:
    op = as_operator(A)
    m = op.matrix
    n = op.dim
    scale = float(np.linalg.norm(m))
    if scale == 0.0:
        scale = 1.0
    # deflation leaks at most a factor sqrt(2) of residual per found state
    inner_tol = cfg.tol / scale / 2 ** (n / 2)
    starts = _random_starts(cfg.seed, cfg.restarts, n)
    signs = np.where(np.arange(cfg.restarts) % 2 == 0, 1, -1)
    states, iters, status = get_backend(cfg.backend).sweeps(
        m / scale, starts, signs, cfg.step, inner_tol, cfg.max_iters
    )

    # e_A and |de_A| for every returned state at once (same formulas as
    # expectation() and differential(), vectorized over restarts)
    a_x = states @ m.T
    norm2 = np.einsum("rki,rki->rk", states.conj(), states).real
    norm2[norm2 == 0] = 1.0
    values = np.einsum("rki,rki->rk", states.conj(), a_x).real / norm2
    grads = 2.0 * (a_x - values[..., None] * states) / norm2[..., None]
    residuals = np.linalg.norm(grads, axis=-1)

    reps: list[dict] = []
    failures = []
    for r in range(cfg.restarts):
        for k in range(n):
            st = int(status[r, k])
            if st == 0 and residuals[r, k] > cfg.tol:
                st = 4
            if st != 0:
                failures.append(SearchFailure(r, k, STATUS_NAMES[st], int(iters[r, k])))
                continue
            _merge(reps, states[r, k], float(values[r, k]), float(residuals[r, k]), cfg)

    points = [
        CriticalPoint(canonical_phase(d["state"]), d["value"], d["residual"], d["count"]) for d in reps
    ]
    for p in points:
        p.state.setflags(write=False)
    points.sort(key=_sort_key)
    return CriticalPoints(points, failures, iters.sum())


def _merge(reps: list, psi: np.ndarray, value: float, residual: float, cfg: SearchConfig):
    """Merge ``psi`` into an existing representative or add a new one.

    Candidates share a value within ``cfg.merge_tol``; ``psi`` merges when its
    projection onto the span of those representatives exceeds ``cfg.overlap``,
    so a degenerate eigenspace collects at most as many representatives as
    its dimension.
    """
    close = [d for d in reps if abs(d["value"] - value) <= cfg.merge_tol]
    if close:
        overlaps = [abs(np.vdot(d["state"], psi)) for d in close]
        best = close[int(np.argmax(overlaps))]
        if max(overlaps) > cfg.overlap:
            in_span = True
        elif len(close) == 1:
            in_span = False
        else:
            q, _ = np.linalg.qr(np.column_stack([d["state"] for d in close]))
            in_span = np.linalg.norm(q.conj().T @ psi) > cfg.overlap
        if in_span:
            best["count"] += 1
            if residual < best["residual"]:
                best.update(state=psi, value=value, residual=residual)
            return
    reps.append({"state": psi.copy(), "value": value, "residual": residual, "count": 1})


def critical_values(points, tol: float = 1e-8) -> np.ndarray:
    """Distinct critical values, clustering values closer than ``tol``."""
    vals = np.sort([p.value for p in points])
    out: list[list[float]] = []
    for v in vals:
        if out and v - out[-1][-1] <= tol:
            out[-1].append(v)
        else:
            out.append([v])
    return np.array([np.mean(c) for c in out])


def is_critical(A: OperatorLike, psi, tol: float) -> bool:
    """True iff ``|de_A|`` at the unit representative of ``psi`` is at most ``tol``."""
    psi = as_state(psi)
    psi = psi / np.linalg.norm(psi)
    return bool(np.linalg.norm(differential(A, psi).vector) <= tol)


class QubitSpectrum(NamedTuple):
    upper: float
    lower: float
    critical_points: Optional[tuple[np.ndarray, np.ndarray]]
    degenerate: bool


def qubit_spectrum_closed_form(a) -> QubitSpectrum:
    """Eigenvalues ``a0 +/- |a_vec|`` of ``a0 s0 + a.s`` and the Bloch critical points.

    The critical points of ``e_A = a0 + 2 a.y`` on the sphere ``|y| = 1/2``
    solve ``a = lambda y``, giving ``y* = +/- a / (2|a|)``.  A vanishing vector
    part makes every point critical and ``critical_points`` is ``None``.
    """
    a0, a1, a2, a3 = (float(v) for v in (a.a0, a.a1, a.a2, a.a3)) if hasattr(a, "a0") else map(float, a)
    vec = np.array([a1, a2, a3])
    r = math.sqrt(a1 * a1 + a2 * a2 + a3 * a3)
    if r == 0.0:
        return QubitSpectrum(a0, a0, None, True)
    y = vec / (2 * r)
    return QubitSpectrum(a0 + r, a0 - r, (y, -y), False)
