"""Pure-Python projected-gradient kernels (fallback for ``_kernels.pyx``).

Both backends implement the same iteration and must agree to rounding.

For a unit vector ``x`` orthogonal to the rows of ``basis`` the search
direction is the projected residual ``g = P(Ax - e x)``, with ``e = <x|Ax>``.
``g`` is orthogonal to ``x``, so the value at the trial point
``normalize(x + s g)`` has the closed form

    e(s) - e = s |g|^2 (2 + s (rho_g - e)) / (1 + s^2 |g|^2),   rho_g = <g|Ag>/|g|^2

which the Armijo test uses instead of subtracting two rounded values.

Status codes: 0 converged, 1 iteration budget exhausted, 2 line search
stalled, 3 start vector has no component in the search subspace.
"""
import numpy as np

ARMIJO_C = 1e-4
BACKTRACK = 0.5
MIN_STEP = 1e-30

CONVERGED, MAX_ITERS, STALLED, EMPTY_START = 0, 1, 2, 3


def _project_out(v, basis, nb):
    for j in range(nb):
        b = basis[j]
        v = v - b * np.vdot(b, v)
    return v


def optimize(A, x0, basis, nb, sign, step, tol, max_iters):
    """Ascend (``sign=+1``) or descend (``sign=-1``) ``<x|Ax>`` on the unit sphere
    of the orthogonal complement of ``basis[:nb]``.

    Returns ``(x, iterations, status)``; convergence means ``2|g| <= tol``.
    """
    x = _project_out(np.array(x0, dtype=complex), basis, nb)
    nrm = np.linalg.norm(x)
    if nrm <= 1e-8 * max(np.linalg.norm(x0), 1e-300):
        return np.zeros_like(x), 0, EMPTY_START
    x = x / nrm
    y = A @ x
    e = np.vdot(x, y).real
    t = step
    for it in range(max_iters):
        g = _project_out(y - e * x, basis, nb)
        gn2 = np.vdot(g, g).real
        if 2.0 * np.sqrt(gn2) <= tol:
            return x, it, CONVERGED
        rho = np.vdot(g, A @ g).real / gn2
        while t >= MIN_STEP:
            s = sign * t
            gain = (2.0 + s * (rho - e)) / (1.0 + s * s * gn2)
            if gain >= 2.0 * ARMIJO_C:
                break
            t *= BACKTRACK
        else:
            return x, it, STALLED
        xn = _project_out(x + (sign * t) * g, basis, nb)
        x = xn / np.linalg.norm(xn)
        y = A @ x
        e = np.vdot(x, y).real
        t *= 2.0
    g = _project_out(y - e * x, basis, nb)
    if 2.0 * np.linalg.norm(g) <= tol:
        return x, max_iters, CONVERGED
    return x, max_iters, MAX_ITERS


def sweeps(A, starts, signs, step, tol, max_iters):
    """Deflated sweeps: restart ``r`` optimizes ``starts[r, k]`` in the complement
    of the ``k`` states it has already found, for ``k = 0..n-1``."""
    A = np.ascontiguousarray(A, dtype=complex)
    starts = np.ascontiguousarray(starts, dtype=complex)
    R, n, _ = starts.shape
    states = np.zeros((R, n, n), dtype=complex)
    iters = np.zeros((R, n), dtype=np.int64)
    status = np.zeros((R, n), dtype=np.int64)
    for r in range(R):
        for k in range(n):
            x, it, st = optimize(A, starts[r, k], states[r], k, int(signs[r]), step, tol, max_iters)
            states[r, k] = x
            iters[r, k] = it
            status[r, k] = st
    return states, iters, status
