"""Density operators, supports, purity and trace distance."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import matcore as mc
from .errors import DimensionMismatch, InvalidRank, InvalidState, NotNormalized
from .matcore import DEFAULT_TOL, Tolerances
from .rng import Xoshiro256, ginibre


class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix.

    The stored matrix is the Hermitian part of the input (after checking the
    anti-Hermitian part is within ``equal_tol``) and is read-only.  The
    spectral decomposition is computed once, on demand.
    """

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOL):
        m = mc.as_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise InvalidState(f"density operator must be square, got {m.shape}")
        if not mc.is_hermitian(m, tol):
            raise InvalidState("matrix is not Hermitian")
        m = (m + mc.dag(m)) / 2
        tr = np.trace(m).real
        if abs(tr - 1.0) > tol.equal_tol:
            raise InvalidState(f"trace is {tr!r}, expected 1")
        self._matrix = mc.frozen(m)
        self._tol = tol
        if self.eigenvalues[-1] < -tol.eig_zero:
            raise InvalidState(f"negative eigenvalue {self.eigenvalues[-1]:.3g}")

    @classmethod
    def pure(cls, psi, tol: Tolerances = DEFAULT_TOL) -> "DensityOperator":
        """|psi><psi| for a unit vector ``psi``."""
        psi = check_normalized(psi, tol)
        return cls(mc.projector(psi), tol)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @cached_property
    def _eig(self):
        return mc.hermitian_eig(self._matrix, self._tol)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Spectrum in descending order."""
        return self._eig[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eig[1]

    @property
    def rank(self) -> int:
        return int(np.sum(self.eigenvalues > self._tol.eig_zero))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityOperator(dim={self.dim}, rank={self.rank})"


def as_density(x, tol: Tolerances = DEFAULT_TOL) -> DensityOperator:
    if isinstance(x, DensityOperator):
        return x
    arr = np.asarray(x)
    if arr.ndim == 1:
        return DensityOperator.pure(arr, tol)
    return DensityOperator(arr, tol)


def check_normalized(psi, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    psi = mc.as_matrix(psi, ndim=None).ravel()
    if abs(np.linalg.norm(psi) - 1.0) > tol.equal_tol:
        raise NotNormalized(f"|psi| = {np.linalg.norm(psi)!r}")
    return psi


@dataclass(frozen=True)
class Subspace:
    """Subspace of C^ambient_dim given by an orthonormal column basis."""

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex).reshape(self.ambient_dim, -1)
        if b.shape[1] > self.ambient_dim:
            raise InvalidRank("more basis vectors than ambient dimensions")
        if b.shape[1] and not mc.is_isometry(b):
            raise InvalidState("subspace basis is not orthonormal")
        object.__setattr__(self, "basis", mc.frozen(b))

    @classmethod
    def span(cls, vectors, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        """Subspace spanned by arbitrary columns (orthonormalized)."""
        cols = np.asarray(vectors, dtype=complex)
        if cols.ndim == 1:
            cols = cols[:, None]
        return cls(cols.shape[0], mc.orthonormal_columns(cols, tol))

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ mc.dag(self.basis)


def _same_dims(a: DensityOperator, b: DensityOperator):
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims {a.dim} and {b.dim} differ")


def support(rho, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Span of the eigenvectors of ``rho`` with eigenvalue above ``eig_zero``."""
    rho = as_density(rho, tol)
    keep = rho.eigenvalues > tol.eig_zero
    return Subspace(rho.dim, rho.eigenvectors[:, keep])


def in_Q(rho, phi, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether the pure state ``phi`` can appear in an ensemble realizing ``rho``.

    Equivalent to ``phi`` lying in the support of ``rho``; the residual outside
    the support may have norm up to ``sqrt(eig_zero)``.
    """
    rho = as_density(rho, tol)
    phi = check_normalized(phi, tol)
    if phi.shape[0] != rho.dim:
        raise DimensionMismatch(f"vector of length {phi.shape[0]} vs dim {rho.dim}")
    b = support(rho, tol).basis
    resid = phi - b @ (mc.dag(b) @ phi)
    return bool(np.linalg.norm(resid) <= np.sqrt(tol.eig_zero))


def purity(rho) -> float:
    rho = as_density(rho)
    return float(np.sum(rho.eigenvalues**2))


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``."""
    a = as_density(a)
    b = as_density(b)
    _same_dims(a, b)
    w = np.linalg.eigvalsh(a.matrix - b.matrix)
    return float(min(1.0, 0.5 * np.sum(np.abs(w))))


def is_orthogonal(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = as_density(a, tol)
    b = as_density(b, tol)
    _same_dims(a, b)
    return bool(np.trace(a.matrix @ b.matrix).real <= tol.eig_zero)


def random_density(dim: int, rank: int, seed: int) -> DensityOperator:
    """Ginibre-ensemble state ``G G^dagger / tr`` with ``G`` of shape dim x rank.

    ``G`` is drawn from :class:`qpure.rng.Xoshiro256` so the same seed yields the
    same matrix on every platform.
    """
    if not 1 <= rank <= dim:
        raise InvalidRank(f"rank {rank} not in [1, {dim}]")
    g = ginibre(dim, rank, Xoshiro256(seed))
    m = g @ mc.dag(g)
    m = (m + mc.dag(m)) / 2
    return DensityOperator(m / np.trace(m).real)


def pure_vector(rho, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Unit vector of a pure state (its top eigenvector)."""
    if np.ndim(rho) == 1:
        return check_normalized(rho, tol)
    rho = as_density(rho, tol)
    if rho.rank != 1:
        raise InvalidState(f"state has rank {rho.rank}, expected a pure state")
    return rho.eigenvectors[:, 0].copy()
