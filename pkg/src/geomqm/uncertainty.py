"""Robertson and Schrodinger uncertainty relations, stated in variances.

With ``var = e_{A^2} - e_A^2``, ``cov = e_{(AB+BA)/2} - e_A e_B`` and
``c = e_[A,B]``:

    robertson:    varA varB - c^2/4          >= 0
    schrodinger:  varA varB - cov^2 - c^2/4  >= 0

Every quantity can be taken from operator algebra (``path="operator"``) or
from contractions of ``G_P`` and ``Omega_P`` with ``de_A``, ``de_B``
(``path="tensor"``).
"""
from __future__ import annotations

from dataclasses import dataclass

from .expectation import covariance, poisson_bracket, projected_tensor_eval
from .hilbert import OperatorLike, as_operator, as_state, check_dims

SLACK_FLOOR = -1e-10


@dataclass(frozen=True)
class UncertaintyReport:
    varA: float
    varB: float
    cov: float
    commutator_term: float
    robertson_slack: float
    schrodinger_slack: float

    @property
    def robertson_holds(self) -> bool:
        return self.robertson_slack >= SLACK_FLOOR

    @property
    def schrodinger_holds(self) -> bool:
        return self.schrodinger_slack >= SLACK_FLOOR


def uncertainty_report(A: OperatorLike, B: OperatorLike, psi, path: str = "operator") -> UncertaintyReport:
    A, B = as_operator(A), as_operator(B)
    psi = as_state(psi)
    check_dims(A.dim, B.dim, psi.size)
    if path == "operator":
        var_a, var_b = covariance(A, A, psi), covariance(B, B, psi)
        cov = covariance(A, B, psi)
        c = poisson_bracket(A, B, psi)
    elif path == "tensor":
        var_a = projected_tensor_eval("G_P", A, A, psi)
        var_b = projected_tensor_eval("G_P", B, B, psi)
        cov = projected_tensor_eval("G_P", A, B, psi)
        c = projected_tensor_eval("Omega_P", A, B, psi)
    else:
        raise ValueError(f"unknown evaluation path {path!r}")
    robertson = var_a * var_b - 0.25 * c * c
    return UncertaintyReport(var_a, var_b, cov, c, robertson, robertson - cov * cov)


def robertson_check(A: OperatorLike, B: OperatorLike, psi, path: str = "operator") -> UncertaintyReport:
    return uncertainty_report(A, B, psi, path)


def schrodinger_check(A: OperatorLike, B: OperatorLike, psi, path: str = "operator") -> UncertaintyReport:
    return uncertainty_report(A, B, psi, path)


def uncertainty_polynomial(A: OperatorLike, B: OperatorLike, psi, alpha: float) -> float:
    """``<psi|F^dagger F|psi> / <psi|psi>`` for ``F = (A - <A>) + i alpha (B - <B>)``.

    Expanded: ``alpha^2 varB + alpha e_[A,B] + varA``; never negative.
    """
    return (
        alpha * alpha * covariance(B, B, psi)
        + alpha * poisson_bracket(A, B, psi)
        + covariance(A, A, psi)
    )
