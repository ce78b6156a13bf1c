import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fidqsl import densmat as dm
from fidqsl.errors import DimensionError, InvalidStateError, NotHermitianError, NotPSDError
from strategies import densities, hermitian_matrices


def test_check_density_accepts_valid():
    rho = np.array([[0.75, 0.1j], [-0.1j, 0.25]])
    out = dm.check_density(rho)
    assert out.dtype == complex


@pytest.mark.parametrize("bad, err", [
    (np.array([[0.5, 0.2], [0.1, 0.5]]), NotHermitianError),
    (np.array([[0.6, 0.0], [0.0, 0.6]]), InvalidStateError),
    (np.array([[1.2, 0.0], [0.0, -0.2]]), NotPSDError),
    (np.ones((2, 3)) / 3, InvalidStateError),
])
def test_check_density_rejects(bad, err):
    with pytest.raises(err):
        dm.check_density(bad)
    assert not dm.is_density(bad)


def test_error_hierarchy():
    assert issubclass(NotHermitianError, InvalidStateError)
    assert issubclass(NotPSDError, InvalidStateError)
    assert issubclass(InvalidStateError, ValueError)


@given(densities())
def test_purity_range(rho):
    d = rho.shape[0]
    p = dm.purity(rho)
    assert 1 / d - 1e-12 <= p <= 1 + 1e-12


@given(densities())
def test_purity_deficit_matches_direct(rho):
    assert dm.purity_deficit(rho) == pytest.approx(1 - dm.purity(rho), abs=1e-13)


def test_purity_deficit_near_pure_keeps_relative_accuracy():
    eps = 1e-9
    rho = np.diag([1 - eps, eps]).astype(complex)
    # exact deficit 2 eps (1 - eps)
    assert dm.purity_deficit(rho) == pytest.approx(2 * eps * (1 - eps), rel=1e-12)


def test_purity_deficit_pure_is_zero():
    psi = dm.random_pure(3, rng=4)
    assert dm.purity_deficit(dm.pure_density(psi)) == 0.0


def test_hs_inner_broadcasts(rng):
    a = dm.random_density(3, rng=rng, size=5)
    b = dm.random_density(3, rng=rng, size=5)
    got = dm.hs_inner(a, b)
    want = [np.trace(x @ y).real for x, y in zip(a, b)]
    assert np.allclose(got, want, atol=1e-14)


def test_tensor_matches_kron(rng):
    a, b = dm.random_density(2, rng=rng), dm.random_density(3, rng=rng)
    assert np.allclose(dm.tensor(a, b), np.kron(a, b))


@given(densities(dims=(2, 3)), densities(dims=(2, 3)))
def test_partial_trace_of_product(a, b):
    ab = dm.tensor(a, b)
    dims = [a.shape[0], b.shape[0]]
    assert np.allclose(dm.partial_trace(ab, dims, 0), a, atol=1e-13)
    assert np.allclose(dm.partial_trace(ab, dims, 1), b, atol=1e-13)
    assert np.allclose(dm.partial_trace(ab, dims, [0, 1]), ab, atol=1e-13)


def test_partial_trace_three_parties(rng):
    a, b, c = (dm.random_density(d, rng=rng) for d in (2, 3, 2))
    abc = dm.tensor(dm.tensor(a, b), c)
    assert np.allclose(dm.partial_trace(abc, [2, 3, 2], [0, 2]), dm.tensor(a, c), atol=1e-13)
    assert np.allclose(dm.partial_trace(abc, [2, 3, 2], 1), b, atol=1e-13)


def test_partial_trace_bad_dims():
    with pytest.raises(DimensionError):
        dm.partial_trace(np.eye(4) / 4, [2, 3], 0)
    with pytest.raises(IndexError):
        dm.partial_trace(np.eye(4) / 4, [2, 2], 2)


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 4, 6, 8]).flatmap(hermitian_matrices))
def test_jacobi_matches_lapack(m):
    w, v = dm.eig_jacobi(m)
    w_ref = np.linalg.eigvalsh(m)
    scale = max(1.0, np.max(np.abs(w_ref)))
    assert np.allclose(w, w_ref, atol=1e-12 * scale)
    assert np.allclose(v @ np.diag(w) @ v.conj().T, m, atol=1e-12 * scale)
    assert np.allclose(v.conj().T @ v, np.eye(len(w)), atol=1e-12)


def test_jacobi_degenerate():
    m = np.diag([1.0, 1.0, 2.0]).astype(complex)
    w, _ = dm.eig_jacobi(m)
    assert np.allclose(w, [1, 1, 2])


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        dm.eig_hermitian(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        dm.eig_hermitian(np.eye(2), method="qr")


@given(densities(), st.sampled_from(["lapack", "jacobi"]))
def test_sqrt_psd_squares_back(rho, method):
    s = dm.sqrt_psd(rho, method=method)
    assert np.allclose(s @ s, rho, atol=1e-12)
    assert np.allclose(s, s.conj().T, atol=1e-13)


def test_sqrt_psd_rejects_negative():
    with pytest.raises(NotPSDError):
        dm.sqrt_psd(np.diag([1.0, -0.1]))
    # within tolerance is clamped
    s = dm.sqrt_psd(np.diag([1.0, -1e-12]))
    assert s[1, 1] == 0


def test_rng_streams_reproducible_and_distinct():
    a = dm.make_rng(7, 0).random(4)
    b = dm.make_rng(7, 0).random(4)
    c = dm.make_rng(7, 1).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_random_density_valid_stack(rng):
    rhos = dm.random_density(4, rank=2, rng=rng, size=50)
    for r in rhos:
        dm.check_density(r)
        assert np.linalg.matrix_rank(r, tol=1e-10) <= 2


@pytest.mark.parametrize("d, k", [(2, 2), (3, 3), (3, 1)])
def test_hs_ensemble_mean_purity(d, k):
    # mean purity of the induced ensemble is (d + k) / (d k + 1)
    rhos = dm.random_density(d, rank=k, rng=2024, size=40000)
    mean = np.mean(dm.purity(rhos))
    assert mean == pytest.approx((d + k) / (d * k + 1), abs=5e-3)


def test_random_unitary_is_unitary(rng):
    u = dm.random_unitary(4, rng=rng, size=10)
    eye = np.broadcast_to(np.eye(4), u.shape)
    assert np.allclose(u @ dm.dagger(u), eye, atol=1e-13)


def test_random_unitary_haar_moment():
    # E |U_00|^2 = 1/d, E |U_00|^4 = 2/(d(d+1))
    u = dm.random_unitary(3, rng=99, size=40000)
    x = np.abs(u[:, 0, 0]) ** 2
    assert np.mean(x) == pytest.approx(1 / 3, abs=5e-3)
    assert np.mean(x ** 2) == pytest.approx(2 / 12, abs=5e-3)


def test_random_density_rank_validation():
    with pytest.raises(ValueError):
        dm.random_density(2, rank=3)
