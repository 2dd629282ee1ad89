"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Vectors are 1-D
arrays.  Tensor products follow the row-major convention
``(i_A, i_B) -> i_A * d_B + i_B`` (the one ``numpy.kron`` implements).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotSquare, NotUnitary, QpureError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared across the library.

    Attributes:
        eig_zero: eigenvalues / singular values at or below this are zero.
        cptp_tol: allowed deviation of a Kraus completeness sum from identity.
        equal_tol: matrix equality threshold, in the max-entry-modulus norm.
    """

    eig_zero: float = 1e-9
    cptp_tol: float = 1e-8
    equal_tol: float = 1e-9

    def __post_init__(self):
        for name in ("eig_zero", "cptp_tol", "equal_tol"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1e-4:
                raise QpureError(f"{name}={value} outside [0, 1e-4]")


DEFAULT_TOL = Tolerances()


def as_matrix(m, *, ndim: int | None = 2) -> np.ndarray:
    """Convert ``m`` to a complex array, rejecting NaN/Inf entries."""
    arr = np.asarray(m, dtype=complex)
    if ndim is not None and arr.ndim != ndim:
        raise DimensionMismatch(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise QpureError("matrix has non-finite entries")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def dag(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def identity(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex)


def basis_vector(i: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def ket(*amplitudes) -> np.ndarray:
    return np.asarray(amplitudes, dtype=complex)


def projector(v) -> np.ndarray:
    """|v><v| for a (not necessarily normalized) vector."""
    v = np.asarray(v, dtype=complex).ravel()
    return np.outer(v, v.conj())


def max_abs(m) -> float:
    """Max-entry-modulus norm."""
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def approx_equal(a, b, tol: Tolerances = DEFAULT_TOL) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and max_abs(a - b) <= tol.equal_tol


def is_hermitian(m, tol: Tolerances = DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and max_abs(m - dag(m)) <= tol.equal_tol


def is_isometry(v, tol: Tolerances = DEFAULT_TOL) -> bool:
    v = np.asarray(v)
    return max_abs(dag(v) @ v - identity(v.shape[1])) <= tol.equal_tol


def is_unitary(u, tol: Tolerances = DEFAULT_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return is_isometry(u, tol) and max_abs(u @ dag(u) - identity(u.shape[0])) <= tol.equal_tol


def check_unitary(u, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    u = as_matrix(u)
    if not is_unitary(u, tol):
        raise NotUnitary(f"matrix of shape {u.shape} is not unitary")
    return u


def _phase_normalize(cols: np.ndarray) -> np.ndarray:
    """Phases chosen so each column's largest-modulus entry is real and >= 0.

    Returns the per-column phase factors that were applied.
    """
    if cols.shape[0] == 0:
        return np.ones(cols.shape[1], dtype=complex)
    idx = np.argmax(np.abs(cols), axis=0)
    pivots = cols[idx, np.arange(cols.shape[1])]
    mags = np.abs(pivots)
    phases = np.where(mags > 0, np.conj(pivots) / np.where(mags > 0, mags, 1), 1.0)
    cols *= phases
    return phases


def _lex_key(col: np.ndarray) -> tuple:
    parts = np.round(np.column_stack([col.real, col.imag]).ravel(), 10)
    return tuple(-x for x in parts)


def _tie_order(values: np.ndarray, cols: np.ndarray, atol: float) -> np.ndarray:
    """Permutation sorting columns lexicographically inside groups of equal values."""
    order = np.arange(len(values))
    start = 0
    while start < len(values):
        stop = start + 1
        while stop < len(values) and abs(values[stop] - values[stop - 1]) <= atol:
            stop += 1
        if stop - start > 1:
            group = list(range(start, stop))
            group.sort(key=lambda j: _lex_key(cols[:, j]))
            order[start:stop] = group
        start = stop
    return order


def hermitian_eig(m, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix.

    Returns eigenvalues in descending order and a matrix whose columns are the
    matching orthonormal eigenvectors, so that ``m == V @ diag(w) @ V^dagger``.
    Eigenvectors are phase-normalized; within a degenerate group they are
    ordered lexicographically.

    Raises:
        NotSquare: ``m`` is not square.
        NotHermitian: ``m`` deviates from its adjoint by more than ``equal_tol``.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"shape {m.shape}")
    if max_abs(m - dag(m)) > tol.equal_tol:
        raise NotHermitian(f"|m - m^dagger| = {max_abs(m - dag(m)):.3g}")
    w, v = np.linalg.eigh((m + dag(m)) / 2)
    w = w[::-1].copy()
    v = v[:, ::-1].copy()
    _phase_normalize(v)
    # values stay sorted; only vectors inside a tie group are reordered
    order = _tie_order(w, v, tol.equal_tol)
    return w, v[:, order]


def svd(m, tol: Tolerances = DEFAULT_TOL, *, full: bool = False):
    """Singular value decomposition ``m == left @ diag(s) @ right^dagger``.

    Singular values are descending.  The phase of each left singular vector is
    normalized (and the matching right vector rotated with it); ties between
    equal singular values are broken lexicographically on the left vectors.
    With ``full=True`` the unitary factors are square; columns beyond
    ``min(m.shape)`` span the orthocomplements of the ranges.
    """
    m = as_matrix(m)
    left, s, right_h = np.linalg.svd(m, full_matrices=full)
    right = dag(right_h)
    k = len(s)
    phases = _phase_normalize(left[:, :k])
    right[:, :k] *= phases
    if full:
        _phase_normalize(left[:, k:])
        _phase_normalize(right[:, k:])
    order = _tie_order(s, left[:, :k], tol.equal_tol)
    left[:, :k] = left[:, order]
    right[:, :k] = right[:, order]
    return left, s, right


def tensor(*factors) -> np.ndarray:
    """Kronecker product of matrices or vectors, left to right."""
    if not factors:
        raise QpureError("tensor needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def partial_trace(
    m, dims: Sequence[int], keep: Literal["first", "second"] = "first"
) -> np.ndarray:
    """Trace out one factor of a bipartite operator on ``dA * dB``."""
    m = as_matrix(m)
    d_a, d_b = (int(x) for x in dims)
    if m.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatch(f"shape {m.shape} incompatible with dims {(d_a, d_b)}")
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "first":
        return np.einsum("ibjb->ij", t)
    if keep == "second":
        return np.einsum("aiaj->ij", t)
    raise QpureError(f"keep must be 'first' or 'second', not {keep!r}")


def orthonormal_columns(m, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the column span of ``m`` (rank cut at sqrt(eig_zero))."""
    m = as_matrix(m)
    if m.shape[1] == 0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    left, s, _ = svd(m, tol)
    rank = int(np.sum(s > np.sqrt(tol.eig_zero)))
    return left[:, :rank]


def orthocomplement(cols, dim: int, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(cols) in C^dim."""
    cols = np.asarray(cols, dtype=complex).reshape(dim, -1)
    q = orthonormal_columns(cols, tol)
    resid = identity(dim) - q @ dag(q)
    w, v = hermitian_eig((resid + dag(resid)) / 2, tol)
    return v[:, w > 0.5]
