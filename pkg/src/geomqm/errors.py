"""Exception hierarchy shared by all modules."""


class GeomQMError(Exception):
    """Base class for every error raised by geomqm."""


class DegenerateStateError(GeomQMError, ValueError):
    """A state vector is zero (it represents no ray)."""


class DimensionMismatchError(GeomQMError, ValueError):
    """Operands live in Hilbert spaces of different dimension."""


class NonHermitianError(GeomQMError, ValueError):
    """An operator is too far from Hermitian to be symmetrized silently."""


class InvalidStateError(GeomQMError, ValueError):
    """A density matrix or Bloch point violates trace, purity or positivity."""


class FocalPointError(GeomQMError, ValueError):
    """The input is orthogonal to the fiducial state (excluded point)."""


class NumericalConsistencyError(GeomQMError, ArithmeticError):
    """An internal identity that must hold up to rounding was violated."""
