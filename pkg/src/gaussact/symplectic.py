"""Multimode Gaussian states and symplectic evolution.

Conventions used throughout the package:

* quadratures ``x = a + a^dagger`` and ``p = i(a^dagger - a)``, so the vacuum
  covariance matrix is the identity;
* interleaved ordering ``(x1, p1, x2, p2, ...)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-12
PHYSICALITY_TOL = 1e-9

SQUEEZE = "squeeze"
ANTI_SQUEEZE = "anti_squeeze"

_OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def omega(n_modes: int) -> np.ndarray:
    """Symplectic form for ``n_modes`` modes in interleaved ordering."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"invalid number of modes: {n_modes!r}")
    return block_diag(*([_OMEGA_1] * int(n_modes)))


def symplectic_residual(matrix: np.ndarray) -> float:
    """Max-abs entry of ``S Omega S^T - Omega``."""
    matrix = np.asarray(matrix, dtype=float)
    form = omega(matrix.shape[0] // 2)
    return float(np.max(np.abs(matrix @ form @ matrix.T - form)))


@dataclass(frozen=True)
class SymplecticOp:
    """A linear map on the quadratures of ``n_modes`` modes.

    The symplectic check is relative to ``max(1, |S|^2)`` so that strongly
    squeezing maps are not rejected for ordinary rounding.
    """

    n_modes: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        dim = 2 * self.n_modes
        if matrix.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got shape {matrix.shape}")
        scale = max(1.0, float(np.max(np.abs(matrix))) ** 2)
        residual = symplectic_residual(matrix)
        if residual > SYMPLECTIC_TOL * scale:
            raise ValueError(f"matrix is not symplectic (residual {residual:.3e})")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def __matmul__(self, other: "SymplecticOp") -> "SymplecticOp":
        if other.n_modes != self.n_modes:
            raise ValueError("mode count mismatch")
        return SymplecticOp(self.n_modes, self.matrix @ other.matrix)

    @classmethod
    def identity(cls, n_modes: int) -> "SymplecticOp":
        return cls(n_modes, np.eye(2 * n_modes))


@dataclass(frozen=True)
class CovarianceState:
    """First and second moments of an ``n_modes`` Gaussian state."""

    n_modes: int
    mean: np.ndarray = field(repr=False)
    cov: np.ndarray = field(repr=False)

    def __post_init__(self):
        dim = 2 * self.n_modes
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        if mean.shape != (dim,) or cov.shape != (dim, dim):
            raise ValueError(f"moments do not match {self.n_modes} mode(s)")
        asym = float(np.max(np.abs(cov - cov.T)))
        if asym > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(cov)))):
            raise ValueError(f"covariance matrix is not symmetric (asymmetry {asym:.3e})")
        if not is_physical(cov):
            raise ValueError("covariance matrix violates the uncertainty principle")
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


def vacuum(n_modes: int) -> CovarianceState:
    return CovarianceState(n_modes, np.zeros(2 * n_modes), np.eye(2 * n_modes))


def thermal(occupations: Sequence[float]) -> CovarianceState:
    """Product of thermal states with the given mean photon numbers."""
    occupations = np.asarray(occupations, dtype=float)
    if np.any(occupations < 0):
        raise ValueError("thermal occupations must be non-negative")
    diag = np.repeat(2 * occupations + 1, 2)
    return CovarianceState(len(occupations), np.zeros_like(diag), np.diag(diag))


def tms_symplectic(G: float, sign: str = SQUEEZE) -> SymplecticOp:
    """Two-mode squeezer with amplitude gains ``sqrt(G)`` and ``sqrt(G-1)``.

    For ``sign="squeeze"`` the first mode maps as
    ``a -> sqrt(G) a + sqrt(G-1) alpha^dagger``; ``"anti_squeeze"`` flips the
    sign of the cross term and is the inverse at equal gain.
    """
    if not G >= 1:
        raise ValueError(f"gain must be >= 1, got {G!r}")
    if sign == SQUEEZE:
        s = 1.0
    elif sign == ANTI_SQUEEZE:
        s = -1.0
    else:
        raise ValueError(f"unknown squeezer sign {sign!r}")
    c = np.sqrt(G)
    t = s * np.sqrt(G - 1)
    # conjugation of the partner mode flips its p quadrature
    cross = np.diag([t, -t])
    matrix = np.block([[c * np.eye(2), cross], [cross, c * np.eye(2)]])
    return SymplecticOp(2, matrix)


def embed(op: SymplecticOp, modes: Sequence[int], n_modes: int) -> np.ndarray:
    """Full ``2n x 2n`` matrix acting as ``op`` on ``modes`` and trivially elsewhere."""
    modes = _check_modes(modes, n_modes)
    if len(modes) != op.n_modes:
        raise ValueError(f"operation acts on {op.n_modes} mode(s), got {len(modes)} indices")
    idx = _quadrature_indices(modes)
    full = np.eye(2 * n_modes)
    full[np.ix_(idx, idx)] = op.matrix
    return full


def apply(state: CovarianceState, op: SymplecticOp, modes: Sequence[int]) -> CovarianceState:
    full = embed(op, modes, state.n_modes)
    cov = full @ state.cov @ full.T
    return CovarianceState(state.n_modes, full @ state.mean, 0.5 * (cov + cov.T))


def partial_trace(state: CovarianceState, keep: Sequence[int]) -> CovarianceState:
    """Reduced state on the modes in ``keep``, in the order given."""
    keep = _check_modes(keep, state.n_modes)
    if not keep:
        raise ValueError("keep must name at least one mode")
    idx = _quadrature_indices(keep)
    return CovarianceState(len(keep), state.mean[idx], state.cov[np.ix_(idx, idx)])


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of ``cov`` in descending order.

    For positive-definite ``cov`` the antisymmetric matrix
    ``A = cov^(1/2) Omega cov^(1/2)`` has singular values equal to the
    symplectic eigenvalues, each appearing twice; this keeps the computation
    real and symmetric. Indefinite input falls back to the eigenvalues of
    ``Omega cov``.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise ValueError(f"expected an even-dimensional square matrix, got shape {cov.shape}")
    if np.max(np.abs(cov - cov.T)) > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(cov)))):
        raise ValueError("covariance matrix must be symmetric")
    n = cov.shape[0] // 2
    form = omega(n)
    lam, vecs = np.linalg.eigh(cov)
    if lam[0] > 0:
        root = (vecs * np.sqrt(lam)) @ vecs.T
        values = np.linalg.svd(root @ form @ root, compute_uv=False)
    else:
        values = np.sort(np.abs(np.linalg.eigvals(form @ cov)))[::-1]
    return values[::2].copy()


def is_physical(cov: np.ndarray, tol: float = PHYSICALITY_TOL) -> bool:
    """``cov + i Omega >= 0``: positive definite with symplectic spectrum >= 1.

    ``tol`` is scaled by the largest entry of ``cov``; rounding in the
    spectrum of a strongly squeezed state grows with its magnitude.
    """
    cov = np.asarray(cov, dtype=float)
    cov = 0.5 * (cov + cov.T)
    if np.linalg.eigvalsh(cov)[0] <= 0:
        return False
    scale = max(1.0, float(np.max(np.abs(cov))))
    return bool(symplectic_eigenvalues(cov)[-1] >= 1 - tol * scale)


def _check_modes(modes: Sequence[int], n_modes: int) -> list[int]:
    modes = [int(m) for m in modes]
    if len(set(modes)) != len(modes):
        raise ValueError(f"duplicate mode indices in {modes}")
    for m in modes:
        if not 0 <= m < n_modes:
            raise ValueError(f"mode index {m} out of range for {n_modes} mode(s)")
    return modes


def _quadrature_indices(modes: Sequence[int]) -> list[int]:
    return [2 * m + k for m in modes for k in (0, 1)]
