import numpy as np
import pytest

from geomqm import kernels
from geomqm.bloch import PauliCoefficients, BlochState, pauli_expectation
from geomqm.errors import NonHermitianError
from geomqm.spectral import (
    CriticalPoints,
    SearchConfig,
    canonical_phase,
    critical_values,
    find_critical_points,
    is_critical,
    qubit_spectrum_closed_form,
)
from oracles import PAULI, S3, distinct, eigen_oracle, expval, random_hermitian, random_lambda, random_state

HAS_CYTHON = "cython" in kernels.BACKENDS


@pytest.fixture
def rng():
    return np.random.default_rng(99)


def test_sigma3_values():
    pts = find_critical_points(S3, SearchConfig(seed=7))
    np.testing.assert_allclose(critical_values(pts), [-1.0, 1.0], atol=1e-12)


def test_identity_single_value_zero_residual():
    pts = find_critical_points(np.eye(3), SearchConfig(restarts=5))
    np.testing.assert_array_equal(critical_values(pts), [1.0])
    assert all(p.residual == 0.0 for p in pts)
    assert not pts.failures


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_4x4_against_eigensolver(rng, seed):
    A = random_hermitian(rng, 4)
    pts = find_critical_points(A, SearchConfig(restarts=80, seed=seed))
    np.testing.assert_allclose(critical_values(pts), eigen_oracle(A), atol=1e-8)


def test_degenerate_spectrum():
    A = np.diag([1.0, 1.0, 2.0, -3.0])
    pts = find_critical_points(A, SearchConfig(restarts=40))
    np.testing.assert_allclose(critical_values(pts), [-3.0, 1.0, 2.0], atol=1e-8)
    # at most one representative per dimension of each eigenspace
    assert sum(abs(p.value - 1.0) < 1e-8 for p in pts) <= 2


def test_point_invariants(rng):
    A = random_hermitian(rng, 5)
    cfg = SearchConfig(restarts=50, tol=1e-9)
    pts = find_critical_points(A, cfg)
    assert isinstance(pts, CriticalPoints)
    values = [p.value for p in pts]
    assert values == sorted(values)
    for p in pts:
        assert abs(np.linalg.norm(p.state) - 1) <= 1e-12
        assert abs(p.value - expval(A, p.state)) <= 1e-12
        assert p.residual <= cfg.tol
        assert np.linalg.norm(A @ p.state - p.value * p.state) <= 10 * cfg.tol
        assert not p.state.flags.writeable


def test_same_seed_same_output(rng):
    A = random_hermitian(rng, 4)
    a = find_critical_points(A, SearchConfig(restarts=12, seed=5))
    b = find_critical_points(A, SearchConfig(restarts=12, seed=5))
    assert len(a) == len(b)
    for p, q in zip(a, b):
        assert p.value == q.value
        np.testing.assert_array_equal(p.state, q.state)


def test_nonconvergence_is_reported_not_raised(rng):
    A = random_hermitian(rng, 6)
    pts = find_critical_points(A, SearchConfig(restarts=4, max_iters=1))
    assert pts.failures
    assert {f.status for f in pts.failures} <= {"max_iters", "residual", "stalled"}


def test_non_hermitian_input_rejected():
    with pytest.raises(NonHermitianError):
        find_critical_points([[0, 1], [0, 0]])


@pytest.mark.parametrize(
    "kwargs", [{"restarts": 0}, {"tol": 0.0}, {"max_iters": 0}, {"step": -1.0}, {"overlap": 1.5}]
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SearchConfig(**kwargs)


def test_canonical_phase_largest_component_real_positive(rng):
    psi = random_state(rng, 4)
    c = canonical_phase(psi)
    k = np.argmax(np.abs(c))
    assert c[k].imag == 0.0 and c[k].real > 0
    assert abs(abs(np.vdot(c, psi)) - np.linalg.norm(psi) ** 2) < 1e-12


@pytest.mark.parametrize("sign", [1, -1])
def test_each_iteration_is_monotone(rng, sign):
    A = random_hermitian(rng, 5)
    A = A / np.linalg.norm(A)
    x0 = random_state(rng, 5)
    basis = np.zeros((5, 5), dtype=complex)
    py = kernels.BACKENDS["python"]
    values = []
    for k in range(1, 40):
        x, _, _ = py.optimize(A, x0, basis, 0, sign, 0.5, 1e-14, k)
        values.append(expval(A, x))
    steps = sign * np.diff(values)
    assert np.all(steps >= -1e-15)


@pytest.mark.skipif(not HAS_CYTHON, reason="compiled extension not built")
def test_backends_agree(rng):
    for n in (2, 3, 6):
        A = random_hermitian(rng, n)
        a = find_critical_points(A, SearchConfig(restarts=4 * n, backend="python"))
        b = find_critical_points(A, SearchConfig(restarts=4 * n, backend="cython"))
        assert len(a) == len(b)
        for p, q in zip(a, b):
            assert abs(p.value - q.value) < 1e-12
            np.testing.assert_allclose(p.state, q.state, atol=1e-10)


def test_unknown_backend():
    with pytest.raises(ValueError):
        find_critical_points(S3, SearchConfig(backend="fortran"))


class TestClosedForm:
    def test_sigma3(self):
        r = qubit_spectrum_closed_form(PauliCoefficients(0, 0, 0, 1))
        assert (r.upper, r.lower) == (1.0, -1.0)
        np.testing.assert_array_equal(r.critical_points[0], [0, 0, 0.5])
        np.testing.assert_array_equal(r.critical_points[1], [0, 0, -0.5])
        assert not r.degenerate

    def test_multiple_of_identity(self):
        r = qubit_spectrum_closed_form((2.5, 0, 0, 0))
        assert (r.upper, r.lower, r.critical_points, r.degenerate) == (2.5, 2.5, None, True)

    def test_matches_dense_eigensolver(self, rng):
        for _ in range(500):
            a = rng.normal(size=4) * 3
            A = sum(c * s for c, s in zip(a, PAULI))
            r = qubit_spectrum_closed_form(a)
            np.testing.assert_allclose([r.lower, r.upper], eigen_oracle(A), atol=1e-12)

    def test_critical_points_extremize_on_sphere(self, rng):
        for _ in range(50):
            a = PauliCoefficients(*rng.normal(size=4))
            r = qubit_spectrum_closed_form(a)
            y_up, y_down = r.critical_points
            assert pauli_expectation(a, BlochState(0.5, *y_up)) == pytest.approx(r.upper, abs=1e-12)
            assert pauli_expectation(a, BlochState(0.5, *y_down)) == pytest.approx(r.lower, abs=1e-12)
            for _ in range(20):
                v = rng.normal(size=3)
                y = BlochState(0.5, *(0.5 * v / np.linalg.norm(v)))
                assert r.lower - 1e-12 <= pauli_expectation(a, y) <= r.upper + 1e-12


class TestIsCritical:
    def test_eigenvectors(self, rng):
        A = random_hermitian(rng, 5)
        _, v = np.linalg.eigh(A)
        assert all(is_critical(A, v[:, k], 1e-8) for k in range(5))

    def test_superposition_of_distinct_eigenvectors(self, rng):
        A = random_hermitian(rng, 5)
        _, v = np.linalg.eigh(A)
        assert not is_critical(A, v[:, 0] + 0.7j * v[:, 3], 1e-8)

    def test_identity_everywhere(self, rng):
        assert is_critical(np.eye(3), random_state(rng, 3), 1e-12)

    def test_scale_invariant(self, rng):
        A = random_hermitian(rng, 3)
        _, v = np.linalg.eigh(A)
        for psi in (v[:, 1], v[:, 0] + v[:, 2]):
            base = is_critical(A, psi, 1e-8)
            for _ in range(20):
                assert is_critical(A, random_lambda(rng) * psi, 1e-8) == base


def test_distinct_helper_consistency(rng):
    A = random_hermitian(rng, 3)
    pts = find_critical_points(A, SearchConfig(restarts=30))
    np.testing.assert_allclose(critical_values(pts), distinct(eigen_oracle(A)), atol=1e-8)
