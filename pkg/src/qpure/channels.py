"""Quantum channels in Kraus form.

A channel maps ``chi -> sum_a A_a chi A_a^dagger``.  Kraus lists are kept
exactly as constructed; use :func:`normal_form` to drop negligible operators.
Two channels are compared by their action (Choi matrices), never by their
Kraus lists, see :func:`channels_equal`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import matcore as mc
from .errors import DimensionMismatch, NotTracePreserving, ShapeMismatch
from .matcore import DEFAULT_TOL, Tolerances
from .rng import random_isometry
from .states import as_density


@dataclass(frozen=True)
class KrausChannel:
    """Kraus operators of shape ``(dim_out, dim_in)``.

    ``trace_preserving`` records what the channel is meant to be; whether the
    completeness relation actually holds is checked by :func:`validate`.
    """

    dim_in: int
    dim_out: int
    kraus: tuple
    trace_preserving: bool = True

    def __post_init__(self):
        ops = tuple(mc.frozen(mc.as_matrix(k)) for k in self.kraus)
        if not ops:
            raise ShapeMismatch("a channel needs at least one Kraus operator")
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise ShapeMismatch(
                    f"Kraus operator of shape {k.shape}, expected {(self.dim_out, self.dim_in)}"
                )
        object.__setattr__(self, "kraus", ops)

    @classmethod
    def from_kraus(cls, kraus: Sequence, trace_preserving: bool = True) -> "KrausChannel":
        """Build a channel, inferring the dimensions from the first operator."""
        ops = [mc.as_matrix(k) for k in kraus]
        if not ops:
            raise ShapeMismatch("a channel needs at least one Kraus operator")
        d_out, d_in = ops[0].shape
        return cls(d_in, d_out, tuple(ops), trace_preserving)

    @property
    def n_kraus(self) -> int:
        return len(self.kraus)

    def completeness(self) -> np.ndarray:
        """``sum_a A_a^dagger A_a``."""
        return sum(mc.dag(k) @ k for k in self.kraus)

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    deviation: float


def _operator(rho) -> np.ndarray:
    if hasattr(rho, "matrix"):
        return rho.matrix
    arr = mc.as_matrix(rho, ndim=None)
    if arr.ndim == 1:
        return mc.projector(arr)
    return mc.as_matrix(arr)


def apply(ch: KrausChannel, rho) -> np.ndarray:
    """Image of ``rho`` (a state, a ket or any square operator) under ``ch``."""
    m = _operator(rho)
    if m.shape != (ch.dim_in, ch.dim_in):
        raise DimensionMismatch(f"operator of shape {m.shape}, channel input dim {ch.dim_in}")
    return sum(k @ m @ mc.dag(k) for k in ch.kraus)


def validate(ch, tol: Tolerances = DEFAULT_TOL) -> ValidationReport:
    """Check the completeness relation.

    For a trace-preserving channel the deviation is ``max|sum A^dagger A - 1|``;
    otherwise it is how far the largest eigenvalue of the sum exceeds one.
    A bare list of Kraus matrices is treated as a trace-preserving channel.
    """
    if not isinstance(ch, KrausChannel):
        ops = [mc.as_matrix(k) for k in ch]
        if not ops or any(k.shape != ops[0].shape for k in ops):
            raise ShapeMismatch("Kraus operators must share one shape")
        ch = KrausChannel.from_kraus(ops)
    s = ch.completeness()
    if ch.trace_preserving:
        dev = mc.max_abs(s - mc.identity(ch.dim_in))
    else:
        dev = max(0.0, float(np.linalg.eigvalsh((s + mc.dag(s)) / 2)[-1]) - 1.0)
    return ValidationReport(ok=dev <= tol.cptp_tol, deviation=dev)


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """``outer o inner``: apply ``inner`` first."""
    if inner.dim_out != outer.dim_in:
        raise DimensionMismatch(f"inner outputs dim {inner.dim_out}, outer expects {outer.dim_in}")
    ops = tuple(b @ a for b in outer.kraus for a in inner.kraus)
    return KrausChannel(
        inner.dim_in, outer.dim_out, ops, outer.trace_preserving and inner.trace_preserving
    )


def tensor_channels(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    ops = tuple(np.kron(x, y) for x in a.kraus for y in b.kraus)
    return KrausChannel(
        a.dim_in * b.dim_in,
        a.dim_out * b.dim_out,
        ops,
        a.trace_preserving and b.trace_preserving,
    )


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel(dim, dim, (mc.identity(dim),))


def unitary_channel(u, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    u = mc.check_unitary(u, tol)
    return KrausChannel(u.shape[1], u.shape[0], (u,))


def isometry_channel(v, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    v = mc.as_matrix(v)
    if not mc.is_isometry(v, tol):
        raise NotTracePreserving("matrix is not an isometry")
    return KrausChannel(v.shape[1], v.shape[0], (v,))


def append_channel(sigma, dim_in: int, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    """``chi -> chi (x) sigma`` on inputs of dimension ``dim_in``.

    Kraus operators are ``1 (x) sqrt(p_k)|l_k>`` over the spectral
    decomposition of ``sigma``.
    """
    sigma = as_density(sigma, tol)
    p = np.clip(sigma.eigenvalues, 0.0, None)
    eye = mc.identity(dim_in)
    ops = tuple(
        np.kron(eye, np.sqrt(pk) * sigma.eigenvectors[:, [k]]) for k, pk in enumerate(p)
    )
    return KrausChannel(dim_in, dim_in * sigma.dim, ops)


def partial_trace_channel(
    dims: Sequence[int], keep: Literal["first", "second"] = "first"
) -> KrausChannel:
    """Channel tracing out one factor of ``dA * dB``."""
    d_a, d_b = (int(x) for x in dims)
    if keep == "first":
        ops = tuple(np.kron(mc.identity(d_a), mc.basis_vector(j, d_b)[None, :]) for j in range(d_b))
        return KrausChannel(d_a * d_b, d_a, ops)
    ops = tuple(np.kron(mc.basis_vector(j, d_a)[None, :], mc.identity(d_b)) for j in range(d_a))
    return KrausChannel(d_a * d_b, d_b, ops)


def constant_channel(phi, dim_in: int) -> KrausChannel:
    """Channel sending every input to the pure state ``phi``."""
    phi = mc.as_matrix(phi, ndim=None).ravel()
    ops = tuple(np.outer(phi, mc.basis_vector(j, dim_in)) for j in range(dim_in))
    return KrausChannel(dim_in, phi.shape[0], ops)


def random_channel(dim_in: int, dim_out: int, n_kraus: int, seed) -> KrausChannel:
    """Channel whose Stinespring isometry is Haar random."""
    v = random_isometry(dim_out * n_kraus, dim_in, seed)
    blocks = v.reshape(dim_out, n_kraus, dim_in)
    return KrausChannel(dim_in, dim_out, tuple(blocks[:, a, :] for a in range(n_kraus)))


def stinespring(ch: KrausChannel, tol: Tolerances = DEFAULT_TOL) -> tuple[np.ndarray, int]:
    """Isometry ``V = sum_a A_a (x) e_a`` with the environment as second factor."""
    if not ch.trace_preserving or not validate(ch, tol).ok:
        raise NotTracePreserving("Stinespring dilation needs a trace-preserving channel")
    n = ch.n_kraus
    v = sum(np.kron(k, mc.basis_vector(a, n)[:, None]) for a, k in enumerate(ch.kraus))
    return v, n


def gamma_combinator(
    lam: KrausChannel, lam_prime: KrausChannel, tol: Tolerances = DEFAULT_TOL
) -> KrausChannel:
    """Purity-preserving lift of ``lam`` whose reverse is a partial trace.

    ``chi -> V lam[chi] V^dagger`` where ``V`` is the Stinespring isometry of
    ``lam_prime`` (ancilla in ``e_0``).  Tracing out the environment gives
    ``lam_prime o lam``.
    """
    if lam_prime.dim_in != lam.dim_out:
        raise DimensionMismatch(
            f"lam outputs dim {lam.dim_out}, lam_prime expects {lam_prime.dim_in}"
        )
    v, _ = stinespring(lam_prime, tol)
    ops = tuple(v @ a for a in lam.kraus)
    return KrausChannel(lam.dim_in, v.shape[0], ops, lam.trace_preserving)


def determinize(ch: KrausChannel, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    """Turn a trace-non-increasing map into a trace-preserving one.

    The missing weight ``tr chi - tr ch[chi]`` is put on an extra output level
    ``|?>`` (index ``dim_out``), orthogonal to every output of ``ch``.
    """
    d = ch.dim_out
    pad = np.zeros((1, ch.dim_in), dtype=complex)
    ops = [np.vstack([k, pad]) for k in ch.kraus]
    deficit = mc.identity(ch.dim_in) - ch.completeness()
    w, v = np.linalg.eigh((deficit + mc.dag(deficit)) / 2)
    flag = mc.basis_vector(d, d + 1)
    for mu, m in zip(w, v.T):
        if mu > tol.eig_zero:
            ops.append(np.sqrt(mu) * np.outer(flag, m.conj()))
    return KrausChannel(ch.dim_in, d + 1, tuple(ops), True)


def normal_form(ch: KrausChannel, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    """Drop Kraus operators whose Frobenius norm is at most ``eig_zero``."""
    ops = tuple(k for k in ch.kraus if np.linalg.norm(k) > tol.eig_zero)
    return KrausChannel(ch.dim_in, ch.dim_out, ops or ch.kraus[:1], ch.trace_preserving)


def choi(ch: KrausChannel) -> np.ndarray:
    """``sum_ij |i><j| (x) ch[|i><j|]``."""
    d = ch.dim_in
    out = np.zeros((d * ch.dim_out, d * ch.dim_out), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            out += np.kron(e, apply(ch, e))
    return out


def channels_equal(a: KrausChannel, b: KrausChannel, tol: Tolerances = DEFAULT_TOL) -> bool:
    if (a.dim_in, a.dim_out) != (b.dim_in, b.dim_out):
        return False
    return mc.max_abs(choi(a) - choi(b)) <= tol.equal_tol


def output_purity(ch: KrausChannel, rho) -> float:
    out = apply(ch, rho)
    return float(np.real(np.trace(out @ out)))


def purifies(ch: KrausChannel, rho, atol: float = 1e-8) -> bool:
    """Membership of ``rho`` in the set of states ``ch`` maps to pure outputs."""
    return output_purity(ch, rho) >= 1.0 - atol


def fixes(ch: KrausChannel, rho, atol: float = 1e-8) -> bool:
    """Membership of ``rho`` in the set of states left unchanged by ``ch``."""
    m = _operator(rho)
    return mc.max_abs(apply(ch, m) - m) <= atol


def reverses_on(forward: KrausChannel, reverse: KrausChannel, states, atol: float = 1e-8) -> bool:
    """Whether ``reverse o forward`` leaves every state in ``states`` unchanged."""
    both = compose(reverse, forward)
    return all(fixes(both, rho, atol) for rho in states)
