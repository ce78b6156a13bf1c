"""Fidelity measures between density matrices.

Five measures are provided: the Uhlmann-Bures fidelity, three purity-based
alternatives (``f1``, ``f2``, ``f3``), and ``new_f``,

    new_f(rho, sigma) = (1 + sqrt((1-P_rho)/P_rho) * sqrt((1-P_sigma)/P_sigma)) * Tr(rho sigma)

with ``P = Tr(rho^2)``. ``new_f`` is exactly zero for orthogonal states and
reduces to ``<psi|rho|psi>`` when either argument is pure.

All functions broadcast over leading stack axes.
"""
from __future__ import annotations

import enum

import numpy as np

from .densmat import _check_pair, hs_inner, purity, purity_deficit, sqrt_psd


class FidelityKind(str, enum.Enum):
    BURES = "bures"
    F1 = "f1"
    F2 = "f2"
    F3 = "f3"
    NEWF = "newf"

    @classmethod
    def parse(cls, name) -> "FidelityKind":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).lower())
        except ValueError:
            raise ValueError(f"unknown fidelity kind {name!r}; "
                             f"choose from {[k.value for k in cls]}") from None


def _mixedness(rho: np.ndarray) -> np.ndarray:
    """sqrt((1 - P)/P), clamped to the physical range of 1 - P."""
    d = rho.shape[-1]
    deficit = np.clip(purity_deficit(rho), 0.0, 1.0 - 1.0 / d)
    return np.sqrt(deficit / (1.0 - deficit))


def bures(rho, sigma) -> np.ndarray:
    """Uhlmann fidelity ``(Tr sqrt(rho^1/2 sigma rho^1/2))^2``.

    Evaluated as the squared trace norm of ``rho^1/2 sigma^1/2``, which has
    the same value but does not take square roots of the near-zero
    eigenvalues of ``rho^1/2 sigma rho^1/2``.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    _check_pair(rho, sigma)
    prod = sqrt_psd(rho) @ sqrt_psd(sigma)
    nuclear = np.sum(np.linalg.svd(prod, compute_uv=False), axis=-1)
    return nuclear ** 2


def bures_uhlmann_form(rho, sigma) -> np.ndarray:
    """Bures fidelity computed literally through ``rho^1/2 sigma rho^1/2``."""
    rho = np.asarray(rho, dtype=complex)
    _check_pair(rho, np.asarray(sigma))
    r = sqrt_psd(rho)
    inner = r @ sigma @ r
    root = sqrt_psd(0.5 * (inner + np.conj(np.swapaxes(inner, -1, -2))))
    return np.einsum("...ii->...", root).real ** 2


def f1(rho, sigma) -> np.ndarray:
    """Tr(rho sigma) / sqrt(Tr rho^2 Tr sigma^2)."""
    return hs_inner(rho, sigma) / np.sqrt(purity(rho) * purity(sigma))


def f2(rho, sigma) -> np.ndarray:
    """Tr(rho sigma) + sqrt(1 - Tr rho^2) sqrt(1 - Tr sigma^2)."""
    c = hs_inner(rho, sigma)
    return c + np.sqrt(purity_deficit(rho) * purity_deficit(sigma))


def f3(rho, sigma) -> np.ndarray:
    """Affine rescaling of ``f2`` with offset set by the dimension.

    ``f3 = (1 - k)/2 + (1 + k)/2 * f2`` where ``k = 1/(d - 1)``; identical to
    ``f2`` for qubits.
    """
    d = np.shape(rho)[-1]
    if d < 2:
        raise ValueError("f3 needs dimension >= 2")
    k = 1.0 / (d - 1)
    return (1.0 - k) / 2.0 + (1.0 + k) / 2.0 * f2(rho, sigma)


def new_f(rho, sigma) -> np.ndarray:
    """Purity-weighted overlap fidelity; exactly 0 when Tr(rho sigma) == 0."""
    c = hs_inner(rho, sigma)
    bracket = 1.0 + _mixedness(rho) * _mixedness(sigma)
    # multiply the overlap last: a zero overlap must give an exact zero
    return bracket * c


_RULES = {
    FidelityKind.BURES: bures,
    FidelityKind.F1: f1,
    FidelityKind.F2: f2,
    FidelityKind.F3: f3,
    FidelityKind.NEWF: new_f,
}


def evaluate(kind, rho, sigma) -> np.ndarray:
    return _RULES[FidelityKind.parse(kind)](rho, sigma)
