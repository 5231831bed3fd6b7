"""Real symmetric density-matrix utilities: entropy, fidelity, Helstrom tests."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from .exceptions import NumericAnomaly, ParameterError

#: Eigenvalues below -PSD_TOL flag a non-PSD state; those above are clipped to >= 0.
PSD_TOL = 1e-9
#: Relative tie tolerance for the sign of rho0 - rho1 eigenvalues.
TIE_RTOL = 1e-10


def _clip(w):
    if w.size and w[0] < -PSD_TOL:
        raise NumericAnomaly(f"matrix is not PSD: smallest eigenvalue {w[0]:.3e}")
    # rounding noise on a rank-deficient state; square roots would amplify it
    cutoff = w.size * np.finfo(float).eps * max(float(w[-1]), 0.0)
    return np.where(w > cutoff, w, 0.0)


def _psd_eigh(rho):
    w, v = np.linalg.eigh(rho)
    return _clip(w), v


def _psd_eigvalsh(rho):
    return _clip(np.linalg.eigvalsh(rho))


def von_neumann_entropy(rho) -> float:
    """H(rho) = -Tr rho log2 rho."""
    w = _psd_eigvalsh(np.asarray(rho, dtype=float))
    return float(-xlogy(w, w).sum() / np.log(2.0))


def sqrt_fidelity(rho0, rho1) -> float:
    """||sqrt(rho0) sqrt(rho1)||_1 via symmetric eigendecompositions.

    Equals sum_k sqrt(mu_k) with mu_k the eigenvalues of
    sqrt(rho0) rho1 sqrt(rho0).
    """
    rho0 = np.asarray(rho0, dtype=float)
    rho1 = np.asarray(rho1, dtype=float)
    if rho0.shape != rho1.shape:
        raise ParameterError("density matrices must have matching shapes")
    w, v = _psd_eigh(rho0)
    root = (v * np.sqrt(w)) @ v.T
    mu = _psd_eigvalsh(root @ rho1 @ root)
    return float(np.sqrt(mu).sum())


def sqrt_fidelity_factored(a0, a1) -> float:
    """sqrt_fidelity for rho0 = a0 a0^T, rho1 = a1 a1^T given the (tall) factors.

    ||sqrt(rho0) sqrt(rho1)||_1 is the nuclear norm of a0^T a1, so only a
    small Gram-sized problem is solved.  Singular values are taken directly
    rather than as square roots of eigenvalues, which would amplify rounding
    on the rank-deficient blocks.
    """
    cross = np.asarray(a0).T @ np.asarray(a1)
    return float(np.linalg.svd(cross, compute_uv=False).sum())


def fidelity(rho0, rho1) -> float:
    return sqrt_fidelity(rho0, rho1) ** 2


@dataclass(frozen=True, eq=False)
class HelstromProjector:
    """Orthogonal projector stored through an orthonormal basis of its range.

    ``rest`` holds an orthonormal basis of the orthogonal complement so that
    :meth:`complement` is free.
    """

    basis: np.ndarray
    rest: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def matrix(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def apply(self, vec) -> np.ndarray:
        if self.rank * 2 <= self.dim:
            return self.basis @ (self.basis.T @ vec)
        return vec - self.rest @ (self.rest.T @ vec)

    def complement(self) -> "HelstromProjector":
        return HelstromProjector(self.rest, self.basis)

    @classmethod
    def identity(cls, dim: int) -> "HelstromProjector":
        return cls(np.eye(dim), np.zeros((dim, 0)))


def helstrom(rho0, rho1) -> HelstromProjector:
    """Projector {rho0 - rho1 >= 0}: outcome "0" of the minimum-error test.

    Eigenvalues within TIE_RTOL * max|rho0 - rho1| of zero count as
    nonnegative, so an exact tie always decides "0".
    """
    rho0 = np.asarray(rho0, dtype=float)
    rho1 = np.asarray(rho1, dtype=float)
    if rho0.shape != rho1.shape or rho0.ndim != 2 or rho0.shape[0] != rho0.shape[1]:
        raise ParameterError("helstrom needs two square matrices of equal size")
    diff = rho0 - rho1
    diff = 0.5 * (diff + diff.T)
    scale = float(np.abs(diff).max()) if diff.size else 0.0
    try:
        w, v = np.linalg.eigh(diff)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(diff) if diff.size else float("nan")
        raise NumericAnomaly(f"eigensolver failed on rho0 - rho1 (cond={cond:.3e}): {exc}") from exc
    keep = w >= -TIE_RTOL * scale
    return HelstromProjector(v[:, keep], v[:, ~keep])


def helstrom_error(rho0, rho1, prior0: float = 0.5) -> float:
    """Error probability of the Helstrom test, evaluated through its projector."""
    proj = helstrom(rho0, rho1).matrix()
    rho0 = np.asarray(rho0, dtype=float)
    rho1 = np.asarray(rho1, dtype=float)
    return float(prior0 * (np.trace(rho0) - np.sum(proj * rho0)) + (1.0 - prior0) * np.sum(proj * rho1))
