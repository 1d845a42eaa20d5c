"""Independent reference computations and random-input generators for the tests.

Nothing here calls into geomqm: every oracle is plain numpy (dense
eigensolver, matrix traces, central finite differences).
"""
import numpy as np

S0 = np.eye(2, dtype=complex)
S1 = np.array([[0, 1], [1, 0]], dtype=complex)
S2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
S3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (S0, S1, S2, S3)


def random_state(rng, n):
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def random_hermitian(rng, n, scale=1.0):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (z + z.conj().T)


def random_lambda(rng):
    """Nonzero complex scalar with modulus spread over several decades."""
    return 10 ** rng.uniform(-3, 3) * np.exp(1j * rng.uniform(0, 2 * np.pi))


def unit_vector3(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def expval(A, psi):
    return (np.vdot(psi, A @ psi) / np.vdot(psi, psi)).real


def eigen_oracle(A):
    return np.linalg.eigvalsh(A)


def distinct(values, tol=1e-8):
    out = []
    for v in np.sort(values):
        if not out or v - out[-1] > tol:
            out.append(v)
    return np.array(out)


def fd_gradient(f, x, h=1e-5):
    """Central differences of a real function of a real vector."""
    g = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        g[k] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def pure_density(psi):
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj()) / np.vdot(psi, psi).real
