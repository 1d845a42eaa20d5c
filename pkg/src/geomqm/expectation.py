"""Expectation-value functions and the brackets they carry.

Observables are represented by ``e_A(psi) = <psi|A psi> / <psi|psi>``, a
function on the realified space that is constant along rays.  Two routes
compute the same brackets:

* operator algebra: ``e_[A,B]`` with ``[A, B] = i(AB - BA)`` and the symmetrized
  covariance ``e_{(AB+BA)/2} - e_A e_B``;
* tensor contraction: the conformally rescaled tensors ``G_P`` and ``Omega_P``
  (built from ``G``, ``Omega``, ``Delta`` and ``Gamma``) applied to the
  differentials ``de_A``, ``de_B``.

On differentials of expectation functions the raw contractions equal
``4 cov(A, B)`` and ``-2 e_[A,B]``; :data:`PROJECTED_NORMALIZATION` removes
those constants so both routes return the same numbers.
"""
from __future__ import annotations

from typing import Literal

import numpy as np

from .hilbert import (
    Covector,
    OperatorLike,
    as_operator,
    as_state,
    check_dims,
    contravariant_eval,
    contravariant_matrix,
    euler_fields,
    realify,
)
from .errors import NumericalConsistencyError

#: tolerance on the imaginary residue of <psi|A psi>, relative to |A| |psi|^2
IMAG_TOL = 1e-12

ProjectedKind = Literal["G_P", "Omega_P"]

#: global factors mapping raw projected contractions onto cov and e_[A,B]
PROJECTED_NORMALIZATION = {"G_P": 0.25, "Omega_P": -0.5}


class ExpectationFunction:
    """The function ``psi -> e_A(psi)`` for a fixed observable."""

    def __init__(self, A: OperatorLike):
        self.operator = as_operator(A)

    def __call__(self, psi) -> float:
        return expectation(self.operator, psi)

    def differential(self, psi) -> Covector:
        return differential(self.operator, psi)


def _pair(A, psi):
    A = as_operator(A)
    psi = as_state(psi)
    check_dims(A.dim, psi.size)
    return A.matrix, psi


def expectation(A: OperatorLike, psi) -> float:
    m, psi = _pair(A, psi)
    norm2 = np.vdot(psi, psi).real
    val = np.vdot(psi, m @ psi) / norm2
    scale = max(np.max(np.abs(m)), 1.0) * psi.size
    if abs(val.imag) > IMAG_TOL * scale:
        raise NumericalConsistencyError(f"<psi|A psi> has imaginary part {val.imag:.3g}")
    return float(val.real)


def commutator(A: OperatorLike, B: OperatorLike) -> np.ndarray:
    """``[A, B] = i(AB - BA)``, Hermitian when A and B are."""
    a = as_operator(A).matrix
    b = as_operator(B).matrix
    check_dims(a.shape[0], b.shape[0])
    c = 1j * (a @ b - b @ a)
    # exact symmetrization: for commuting inputs c is pure rounding noise
    return 0.5 * (c + c.conj().T)


def jordan_product(A: OperatorLike, B: OperatorLike) -> np.ndarray:
    """``A o B = AB + BA``."""
    a = as_operator(A).matrix
    b = as_operator(B).matrix
    check_dims(a.shape[0], b.shape[0])
    c = a @ b + b @ a
    return 0.5 * (c + c.conj().T)


def differential(A: OperatorLike, psi) -> Covector:
    """``de_A`` at ``psi`` as a covector on the realified space.

    Closed form ``2 (A psi - e_A psi) / <psi|psi>`` with real parts on the
    ``dq`` slots and imaginary parts on the ``dp`` slots.
    """
    m, psi = _pair(A, psi)
    norm2 = np.vdot(psi, psi).real
    a_psi = m @ psi
    e = np.vdot(psi, a_psi).real / norm2
    grad = 2.0 * (a_psi - e * psi) / norm2
    return Covector(grad.real, grad.imag)


def poisson_bracket(A: OperatorLike, B: OperatorLike, psi) -> float:
    """``{e_A, e_B}(psi) = e_[A,B](psi)`` through operator algebra."""
    m, psi = _pair(A, psi)
    check_dims(as_operator(B).dim, psi.size)
    return expectation(commutator(A, B), psi)


def covariance(A: OperatorLike, B: OperatorLike, psi) -> float:
    """``e_{(AB+BA)/2} - e_A e_B``; equals the variance when ``A = B``."""
    _, psi = _pair(A, psi)
    check_dims(as_operator(B).dim, psi.size)
    return 0.5 * expectation(jordan_product(A, B), psi) - expectation(A, psi) * expectation(B, psi)


def variance(A: OperatorLike, psi) -> float:
    return covariance(A, A, psi)


def projected_tensor_matrix(kind: ProjectedKind, psi) -> np.ndarray:
    """Raw component matrix of ``G_P`` or ``Omega_P`` at ``psi``.

    ``G_P = <psi|psi> G - Gamma (x) Gamma - Delta (x) Delta`` and
    ``Omega_P = <psi|psi> Omega - (Gamma (x) Delta - Delta (x) Gamma)``.
    """
    psi = as_state(psi)
    x = realify(psi)
    delta, gamma = euler_fields(x)
    norm2 = float(delta @ delta)
    if kind == "G_P":
        return norm2 * contravariant_matrix("G", psi.size) - np.outer(gamma, gamma) - np.outer(delta, delta)
    if kind == "Omega_P":
        return norm2 * contravariant_matrix("Omega", psi.size) - (np.outer(gamma, delta) - np.outer(delta, gamma))
    raise ValueError(f"unknown projected tensor {kind!r}")


def projected_contract(kind: ProjectedKind, alpha: Covector, beta: Covector, psi) -> float:
    """Normalized contraction of ``G_P``/``Omega_P`` with two covectors."""
    t = projected_tensor_matrix(kind, psi)
    check_dims(alpha.n, beta.n, t.shape[0] // 2)
    return PROJECTED_NORMALIZATION[kind] * float(alpha.vector @ t @ beta.vector)


def projected_tensor_eval(kind: ProjectedKind, A: OperatorLike, B: OperatorLike, psi) -> float:
    """``G_P(de_A, de_B)`` (= covariance) or ``Omega_P(de_A, de_B)`` (= bracket).

    Evaluated by tensor contraction, independently of :func:`covariance` and
    :func:`poisson_bracket`.
    """
    return projected_contract(kind, differential(A, psi), differential(B, psi), psi)


def unprojected_bracket(A: OperatorLike, B: OperatorLike, psi) -> float:
    """``Omega(de_A, de_B)`` with the flat Poisson tensor; degree -2 in ``psi``."""
    return contravariant_eval("Omega", differential(A, psi), differential(B, psi))
