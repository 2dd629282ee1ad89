"""Jordan (principal) angles between supports and worst-case distinguishability."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore as mc
from .errors import DimensionMismatch, EmptySubspace
from .matcore import DEFAULT_TOL, Tolerances
from .states import Subspace, as_density, support, trace_distance


@dataclass(frozen=True)
class JordanDecomposition:
    """Paired orthonormal bases of two subspaces.

    Column ``k`` of ``basis1`` and ``basis2`` overlap by ``cos(angles[k])``
    (real, non-negative) and are orthogonal to every other column of the
    opposite basis.  ``leftover1`` / ``leftover2`` hold the remaining basis
    vectors of the larger subspace; they are orthogonal to the whole of the
    smaller one.  At most one of them is non-empty.
    """

    basis1: np.ndarray
    basis2: np.ndarray
    angles: np.ndarray
    leftover1: np.ndarray
    leftover2: np.ndarray
    cosines: np.ndarray
    sines: np.ndarray

    @property
    def overlaps(self) -> np.ndarray:
        return mc.dag(self.basis1) @ self.basis2


def jordan(s1: Subspace, s2: Subspace, tol: Tolerances = DEFAULT_TOL) -> JordanDecomposition:
    """Jordan bases and angles (ascending, in radians) between two subspaces.

    Cosines are the singular values of ``B1^dagger B2``.  Small angles are
    recovered from the sines (singular values of the part of the smaller
    subspace orthogonal to the larger one) to avoid the loss of precision of
    ``arccos`` near 1.
    """
    if s1.ambient_dim != s2.ambient_dim:
        raise DimensionMismatch(f"ambient dims {s1.ambient_dim} and {s2.ambient_dim}")
    if s1.rank == 0 or s2.rank == 0:
        raise EmptySubspace("Jordan angles need two non-trivial subspaces")
    b1, b2 = s1.basis, s2.basis
    m = min(s1.rank, s2.rank)
    left, cos, right = mc.svd(mc.dag(b1) @ b2, tol, full=True)
    cos = np.clip(cos[:m], 0.0, 1.0)
    small, big = (b2, b1) if s2.rank <= s1.rank else (b1, b2)
    resid = small - big @ (mc.dag(big) @ small)
    sin = np.sort(np.clip(np.linalg.svd(resid, compute_uv=False), 0.0, 1.0))[:m]
    angles = np.arctan2(sin, cos)
    v1 = b1 @ left
    v2 = b2 @ right
    return JordanDecomposition(
        basis1=v1[:, :m],
        basis2=v2[:, :m],
        angles=angles,
        leftover1=v1[:, m:],
        leftover2=v2[:, m:],
        cosines=cos,
        sines=sin,
    )


def jordan_states(rho1, rho2, tol: Tolerances = DEFAULT_TOL) -> JordanDecomposition:
    """Jordan decomposition between the supports of two states."""
    rho1 = as_density(rho1, tol)
    rho2 = as_density(rho2, tol)
    if rho1.dim != rho2.dim:
        raise DimensionMismatch(f"dims {rho1.dim} and {rho2.dim} differ")
    return jordan(support(rho1, tol), support(rho2, tol), tol)


def supports_overlap(jd: JordanDecomposition, tol: Tolerances = DEFAULT_TOL) -> bool:
    return bool(jd.cosines[0] > 1.0 - tol.eig_zero)


def wcd(rho1, rho2, tol: Tolerances = DEFAULT_TOL) -> float:
    """Worst-case distinguishability: sine of the smallest Jordan angle.

    Zero whenever the supports intersect, i.e. when the largest overlap
    singular value exceeds ``1 - eig_zero``.
    """
    jd = jordan_states(rho1, rho2, tol)
    if supports_overlap(jd, tol):
        return 0.0
    return float(jd.sines[0])


def p_med(rho1, rho2) -> float:
    """Optimal minimum-error success probability for equal priors."""
    return (1.0 + trace_distance(rho1, rho2)) / 2.0


def p_wcd(rho1, rho2, tol: Tolerances = DEFAULT_TOL) -> float:
    """Worst-case success probability over pure members of the two ensembles."""
    return (1.0 + wcd(rho1, rho2, tol)) / 2.0
