"""Dense density-matrix algebra for small Hilbert spaces (dim 2-8).

States are plain complex ``numpy`` arrays of shape ``(d, d)``. Most
functions broadcast over leading axes so a stack ``(n, d, d)`` of states can
be processed in one call; the verification harness relies on this.

Random sampling uses a Philox counter-based generator. Seeds are plain
integers, and independent streams are derived from a master seed by
jumping the counter, which makes every run reproducible across platforms.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionError, InvalidStateError, NotHermitianError, NotPSDError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
# (Tr rho)^2 - Tr rho^2 below this is rounding noise of a pure state.
PURE_FLOOR = 1e-14


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape[-1] != b.shape[-1] or a.shape[-2] != b.shape[-2]:
        raise DimensionError(f"dimension mismatch: {a.shape[-2:]} vs {b.shape[-2:]}")


def check_density(m, herm_tol: float = HERMITIAN_TOL, trace_tol: float = TRACE_TOL,
                  psd_tol: float = PSD_TOL) -> np.ndarray:
    """Validate ``m`` as a density matrix and return it as a complex array.

    Raises:
        InvalidStateError: wrong shape, non-unit trace.
        NotHermitianError: ``max |M - M^dagger|`` above ``herm_tol``.
        NotPSDError: smallest eigenvalue below ``-psd_tol``.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InvalidStateError(f"density matrix must be square, got shape {m.shape}")
    herm_err = np.max(np.abs(m - dagger(m)))
    if herm_err > herm_tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {herm_err:.3e})")
    tr = np.trace(m)
    if abs(tr - 1.0) > trace_tol:
        raise InvalidStateError(f"trace is {tr.real:.15g}, expected 1")
    wmin = np.linalg.eigvalsh(0.5 * (m + dagger(m)))[0]
    if wmin < -psd_tol:
        raise NotPSDError(f"smallest eigenvalue {wmin:.3e} is negative")
    return m


def is_density(m, **tols) -> bool:
    try:
        check_density(m, **tols)
    except InvalidStateError:
        return False
    return True


def pure_density(psi) -> np.ndarray:
    """|psi><psi| for a (normalised) state vector, or a stack of them."""
    psi = np.asarray(psi, dtype=complex)
    return psi[..., :, None] * np.conj(psi[..., None, :])


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim


def max_entry_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.max(np.abs(a - b), axis=(-2, -1))


def hs_inner(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hilbert-Schmidt overlap Tr(a b) of Hermitian operands (real part)."""
    _check_pair(a, b)
    # Tr(ab) = sum_ij a_ij b_ji; for Hermitian inputs the result is real.
    return np.einsum("...ij,...ji->...", a, b).real


def purity(a: np.ndarray) -> np.ndarray:
    """Tr(a^2), in [1/d, 1] for a density matrix."""
    return hs_inner(a, a)


def purity_deficit(a: np.ndarray, floor: float = PURE_FLOOR) -> np.ndarray:
    """``1 - Tr(a^2)`` evaluated without cancellation near purity one.

    Uses ``(Tr a)^2 - Tr a^2 = 2 * sum_{i<j} (a_ii a_jj - |a_ij|^2)``, i.e.
    twice the sum of the 2x2 principal minors. For a qubit this is
    ``2 det(a)``, which keeps full relative accuracy as the state approaches
    a pure one. Values at or below ``floor`` are returned as exactly 0.
    """
    a = np.asarray(a)
    iu, ju = np.triu_indices(a.shape[-1], k=1)
    diag = np.einsum("...ii->...i", a).real
    # products taken pairwise: going through (Tr a)^2 - sum a_ii^2 cancels
    minors = diag[..., iu] * diag[..., ju] - np.abs(a[..., iu, ju]) ** 2
    deficit = 2.0 * np.sum(minors, axis=-1)
    deficit = np.where(deficit <= floor, 0.0, deficit)
    return deficit


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, broadcasting over leading stack axes."""
    a = np.asarray(a)
    b = np.asarray(b)
    out = np.einsum("...ij,...kl->...ikjl", a, b)
    da, db = a.shape[-1], b.shape[-1]
    return out.reshape(out.shape[:-4] + (da * db, da * db))


def partial_trace(a: np.ndarray, dims, keep) -> np.ndarray:
    """Reduced state on the subsystems listed in ``keep`` (0-based).

    Args:
        a: operator on the composite space, shape ``(..., D, D)``.
        dims: subsystem dimensions with ``prod(dims) == D``.
        keep: index or sequence of indices of the subsystems to keep, in
            the order of ``dims``.
    """
    dims = [int(d) for d in dims]
    a = np.asarray(a)
    total = int(np.prod(dims))
    if a.shape[-1] != total or a.shape[-2] != total:
        raise DimensionError(f"subsystem dims {dims} do not match operator of size {a.shape[-1]}")
    keep = [keep] if np.isscalar(keep) else list(keep)
    n = len(dims)
    for k in keep:
        if not 0 <= k < n:
            raise IndexError(f"subsystem index {k} out of range for {n} subsystems")
    keep = sorted(set(keep))
    lead = a.shape[:-2]
    t = a.reshape(lead + tuple(dims) + tuple(dims))
    nl = len(lead)
    # einsum labels: row indices 0..n-1, column indices n..2n-1
    row = list(range(n))
    col = [i + n if i in keep else i for i in range(n)]
    out_idx = keep + [k + n for k in keep]
    letters = "abcdefghijklmnopqrstuvwxyz"
    lead_l = "ABCDEFGH"[:nl]
    spec = (lead_l + "".join(letters[i] for i in row + col) + "->"
            + lead_l + "".join(letters[i] for i in out_idx))
    red = np.einsum(spec, t)
    dk = int(np.prod([dims[k] for k in keep]))
    return red.reshape(lead + (dk, dk))


def _check_hermitian(m: np.ndarray, tol: float) -> None:
    err = np.max(np.abs(m - dagger(m))) if m.size else 0.0
    if err > tol:
        raise NotHermitianError(f"matrix is not Hermitian within {tol:g} (deviation {err:.3e})")


def eig_jacobi(m, tol: float = 1e-15, max_sweeps: int = 50):
    """Cyclic Jacobi eigendecomposition of a complex Hermitian matrix.

    Each pivot (p, q) is first phase-rotated so the off-diagonal element is
    real, then annihilated by a real Givens rotation. Sweeps continue until
    the off-diagonal Frobenius norm drops below ``tol`` times the matrix norm.

    Returns:
        (w, v) with ``w`` ascending and ``m = v @ diag(w) @ v^dagger``.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.linalg.norm(a) ** 2 - np.sum(np.abs(np.diag(a)) ** 2), 0.0))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= tol * scale * 1e-3:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                theta = 0.5 * np.arctan2(2.0 * mag, aqq - app)
                c, s = np.cos(theta), np.sin(theta)
                j = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ j
                a[idx, :] = dagger(j) @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ j
    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eig_hermitian(m, method: str = "lapack", herm_tol: float = 1e-10):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    ``method="lapack"`` uses ``numpy.linalg.eigh`` and broadcasts over
    stacks; ``method="jacobi"`` uses :func:`eig_jacobi` on a single matrix.
    """
    m = np.asarray(m, dtype=complex)
    _check_hermitian(m, herm_tol)
    if method == "lapack":
        return np.linalg.eigh(0.5 * (m + dagger(m)))
    if method == "jacobi":
        if m.ndim != 2:
            raise DimensionError("jacobi method takes a single matrix")
        return eig_jacobi(0.5 * (m + dagger(m)))
    raise ValueError(f"unknown eigensolver {method!r}")


def sqrt_psd(m, psd_tol: float = PSD_TOL, method: str = "lapack") -> np.ndarray:
    """Principal square root of a Hermitian PSD matrix (or stack).

    Eigenvalues in ``[-psd_tol, 0)`` are clamped to zero, as are positive
    ones at rounding level; anything below ``-psd_tol`` raises
    :class:`NotPSDError`.
    """
    w, v = eig_hermitian(m, method=method)
    if np.min(w) < -psd_tol:
        raise NotPSDError(f"eigenvalue {np.min(w):.3e} below -{psd_tol:g}")
    # eigenvalues inside the solver's rounding band are zero; their square
    # roots would otherwise inject O(1e-8) spurious components
    noise = 8 * w.shape[-1] * np.finfo(float).eps * np.max(np.abs(w), axis=-1, keepdims=True)
    root = np.sqrt(np.where(w > noise, w, 0.0))
    return (v * root[..., None, :]) @ dagger(v)


# -- random ensembles ---------------------------------------------------------

def make_rng(seed=None, stream: int = 0) -> np.random.Generator:
    """Philox generator for ``seed``; ``stream`` selects a disjoint substream.

    Passing an existing ``Generator`` returns it unchanged.
    """
    if isinstance(seed, np.random.Generator):
        return seed
    bitgen = np.random.Philox(seed)
    if stream:
        bitgen = bitgen.jumped(stream)
    return np.random.Generator(bitgen)


def ginibre(shape, rng) -> np.ndarray:
    """Matrices of independent standard complex Gaussians (E|z|^2 = 1)."""
    rng = make_rng(rng)
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_density(dim: int, rank: int | None = None, rng=None, size=None) -> np.ndarray:
    """Sample ``G G^dagger / Tr(G G^dagger)`` with G a dim x rank Ginibre matrix.

    ``rank=dim`` gives the Hilbert-Schmidt ensemble, ``rank=1`` Haar-random
    pure states. ``size`` (int or tuple) requests a stack of samples.
    """
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    lead = () if size is None else tuple(np.atleast_1d(size))
    g = ginibre(lead + (dim, rank), rng)
    rho = g @ dagger(g)
    tr = np.einsum("...ii->...", rho).real
    rho = rho / tr[..., None, None]
    return 0.5 * (rho + dagger(rho))


def random_pure(dim: int, rng=None, size=None) -> np.ndarray:
    """Haar-random normalised state vectors."""
    lead = () if size is None else tuple(np.atleast_1d(size))
    psi = ginibre(lead + (dim,), rng)
    return psi / np.linalg.norm(psi, axis=-1, keepdims=True)


def random_unitary(dim: int, rng=None, size=None) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix.

    The phases of R's diagonal are absorbed into Q so that the distribution
    is exactly Haar (plain QR output is not).
    """
    lead = () if size is None else tuple(np.atleast_1d(size))
    z = ginibre(lead + (dim, dim), rng)
    q, r = np.linalg.qr(z)
    d = np.einsum("...ii->...i", r)
    ph = d / np.abs(d)
    return q * ph[..., None, :]
