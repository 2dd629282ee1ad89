"""Purifying channels for pairs of states.

The main entry point is :func:`optimal_purifier`, which maps two states to
pure outputs whose trace distance equals their worst-case distinguishability,
the largest value any purifying channel can reach.  :func:`omega_phi` shrinks
the angle between two pure states and lets the optimal channel mimic every
weaker purifier.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels as chn
from . import matcore as mc
from .channels import KrausChannel
from .errors import AngleOutOfRange, CollinearInputs, DimensionMismatch, TargetTooLarge
from .geometry import JordanDecomposition, jordan_states, supports_overlap, wcd
from .matcore import DEFAULT_TOL, Tolerances
from .states import as_density, check_normalized, pure_vector, trace_distance


@dataclass(frozen=True)
class PurifierBundle:
    """The optimal purifier and its two building blocks.

    ``full`` equals ``tr_in o e_tilde o omega_tilde`` and maps the two input
    states to ``|target_outputs[i]><target_outputs[i]|`` on an auxiliary space
    of the same dimension as the input.
    """

    omega_tilde: KrausChannel
    e_tilde: KrausChannel
    full: KrausChannel
    target_outputs: tuple
    achieved_distance: float
    jordan: JordanDecomposition | None = None


def _omega_kraus(psi1, perp, theta: float, phi: float) -> list[np.ndarray]:
    """A_1, A_2 for one pair, ``perp`` the unit vector completing ``psi1`` in the plane."""
    if np.isclose(phi, theta, rtol=0.0, atol=1e-15):
        a = b = 1.0
    else:
        a = np.sin(phi) * np.cos(theta) / (np.cos(phi) * np.sin(theta))
        b = np.sin(phi) / np.sin(theta)
    p1 = mc.projector(psi1)
    pp = mc.projector(perp)
    a1 = p1 + a * pp
    out = np.sqrt(max(0.0, 1.0 - b * b)) * psi1 + np.sqrt(max(0.0, b * b - a * a)) * perp
    a2 = np.outer(out, perp.conj())
    return [a1, a2]


def _gauged_plane(psi1, psi2, tol: Tolerances):
    """Angle and orthonormal completion for the pair, with real overlap."""
    ov = np.vdot(psi1, psi2)
    resid = psi2 - ov * psi1
    sin = np.linalg.norm(resid)
    if sin <= tol.equal_tol:
        raise CollinearInputs("inputs describe the same pure state")
    theta = float(np.arctan2(sin, abs(ov)))
    # psi2 = e^{i g} (cos(theta) psi1 + sin(theta) perp) with the phase e^{i g} of ov
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return theta, np.conj(phase) * resid / sin


def omega_phi(psi1, psi2, phi: float, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    """Channel reducing the angle between two pure states to ``phi``.

    With ``sin(theta)`` the trace distance of the inputs, the outputs are pure
    and at trace distance ``sin(phi)``; ``psi1`` is left unchanged.  Requires
    ``0 <= phi <= theta``.

    Raises:
        CollinearInputs: the inputs are the same ray, so theta is zero.
        AngleOutOfRange: ``phi`` outside ``[0, theta]``.
    """
    psi1 = check_normalized(psi1, tol)
    psi2 = check_normalized(psi2, tol)
    if psi1.shape != psi2.shape:
        raise DimensionMismatch("vectors of different length")
    theta, perp = _gauged_plane(psi1, psi2, tol)
    if phi < 0 or phi > theta + 1e-12:
        raise AngleOutOfRange(f"phi={phi!r} not in [0, {theta!r}]")
    phi = min(phi, theta)
    a1, a2 = _omega_kraus(psi1, perp, theta, phi)
    a3 = mc.identity(len(psi1)) - mc.projector(psi1) - mc.projector(perp)
    return KrausChannel(len(psi1), len(psi1), (a1, a2, a3))


def mimic(outputs, target_distance: float, tol: Tolerances = DEFAULT_TOL) -> KrausChannel:
    """Angle-reducing channel bringing a pure pair down to ``target_distance``."""
    psi1, psi2 = (pure_vector(x, tol) for x in outputs)
    current = trace_distance(psi1, psi2)
    if target_distance > current + 1e-12:
        raise TargetTooLarge(f"target {target_distance!r} exceeds current distance {current!r}")
    if target_distance < 0:
        raise AngleOutOfRange("negative target distance")
    return omega_phi(psi1, psi2, float(np.arcsin(min(target_distance, current))), tol)


def target_vectors(distance: float, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Canonical output pair: ``e_0`` and ``cos e_0 + sin e_1``."""
    phi1 = mc.basis_vector(0, dim)
    phi2 = np.sqrt(max(0.0, 1.0 - distance**2)) * phi1
    if dim > 1:
        phi2 = phi2 + distance * mc.basis_vector(1, dim)
    return phi1, phi2


def optimal_purifier(rho1, rho2, tol: Tolerances = DEFAULT_TOL) -> PurifierBundle:
    """Purifying channel whose output distance equals ``wcd(rho1, rho2)``.

    First every Jordan pair is contracted by the angle-reducing channel so that
    all pairs end at the common angle ``arcsin(wcd)`` in mutually orthogonal
    planes (``omega_tilde``; the remaining projector keeps the surplus support
    of the higher-rank state).  The isometry ``e_tilde`` then sends plane ``k``
    to ``|k> (x) span{phi_1, phi_2}`` and surplus vectors of state ``i`` to
    ``|k> (x) |phi_i>``, so discarding the first factor leaves a pure state.
    Vectors outside both supports go to ``|k> (x) |phi_1>`` on unused levels.

    If the supports overlap, the result is the constant channel onto ``phi_1``.
    """
    rho1 = as_density(rho1, tol)
    rho2 = as_density(rho2, tol)
    if rho1.dim != rho2.dim:
        raise DimensionMismatch(f"dims {rho1.dim} and {rho2.dim} differ")
    d = rho1.dim
    jd = jordan_states(rho1, rho2, tol)
    trace_out_in = chn.partial_trace_channel((d, d), keep="second")

    if supports_overlap(jd, tol):
        phi1, phi2 = target_vectors(0.0, d)
        omega = chn.identity_channel(d)
        e_tilde = chn.isometry_channel(np.kron(mc.identity(d), phi1[:, None]), tol)
        full = chn.constant_channel(phi1, d)
        return PurifierBundle(omega, e_tilde, full, (phi1, phi2), 0.0, jd)

    w = float(jd.sines[0])
    target = float(np.arcsin(w))
    phi1, phi2 = target_vectors(w, d)
    m = len(jd.angles)

    kraus_1, kraus_2 = [], []
    handled = np.zeros((d, 0), dtype=complex)
    w_map = []  # (input vector, output vector) pairs defining e_tilde
    for k in range(m):
        psi1 = jd.basis1[:, k]
        theta, perp = _gauged_plane(psi1, jd.basis2[:, k], tol)
        a1, a2 = _omega_kraus(psi1, perp, theta, min(target, theta))
        kraus_1.append(a1)
        kraus_2.append(a2)
        level = mc.basis_vector(k, d)
        w_map.append((psi1, np.kron(level, mc.basis_vector(0, d))))
        w_map.append((perp, np.kron(level, mc.basis_vector(1, d))))
        handled = np.column_stack([handled, psi1, perp])
    a3 = mc.identity(d) - handled @ mc.dag(handled)

    for extra, phi in ((jd.leftover1, phi1), (jd.leftover2, phi2)):
        for j in range(extra.shape[1]):
            w_map.append((extra[:, j], np.kron(mc.basis_vector(m + j, d), phi)))
            handled = np.column_stack([handled, extra[:, j]])

    level = m + max(jd.leftover1.shape[1], jd.leftover2.shape[1])
    rest = mc.orthocomplement(handled, d, tol)
    for j in range(rest.shape[1]):
        w_map.append((rest[:, j], np.kron(mc.basis_vector(level + j, d), phi1)))

    w_cols = sum(np.outer(vout, vin.conj()) for vin, vout in w_map)

    omega = KrausChannel(d, d, tuple(kraus_1 + kraus_2 + [a3]))
    e_tilde = chn.isometry_channel(w_cols, tol)
    full = chn.compose(trace_out_in, chn.compose(e_tilde, omega))
    return PurifierBundle(omega, e_tilde, full, (phi1, phi2), w, jd)


def helstrom_channel(sigma1, sigma2, tol: Tolerances = DEFAULT_TOL):
    """Minimum-error measurement of ``sigma1`` vs ``sigma2`` written to a qubit.

    Measures the projector ``E`` onto the non-negative eigenspace of
    ``sigma1 - sigma2`` and prepares ``|0>`` on that outcome, ``|1>`` otherwise.

    Returns:
        ``(channel, q1, q2)`` with ``q1 = tr(E sigma1)`` and
        ``q2 = tr((1 - E) sigma2)``; ``q1 + q2 = 1 + D(sigma1, sigma2)``.
    """
    sigma1 = as_density(sigma1, tol)
    sigma2 = as_density(sigma2, tol)
    if sigma1.dim != sigma2.dim:
        raise DimensionMismatch(f"dims {sigma1.dim} and {sigma2.dim} differ")
    w, v = np.linalg.eigh(sigma1.matrix - sigma2.matrix)
    zero, one = mc.basis_vector(0, 2), mc.basis_vector(1, 2)
    ops = tuple(np.outer(zero if lam >= 0 else one, vec.conj()) for lam, vec in zip(w, v.T))
    e = v[:, w >= 0]
    proj = e @ mc.dag(e)
    q1 = float(np.trace(proj @ sigma1.matrix).real)
    q2 = float(1.0 - np.trace(proj @ sigma2.matrix).real)
    return KrausChannel(sigma1.dim, 2, ops), q1, q2


def product_bound(rho1, rho2, sigma1, sigma2, tol: Tolerances = DEFAULT_TOL) -> tuple[float, float]:
    """Both sides of the product-state trace distance bound.

    ``lhs = D(rho1 (x) sigma1, rho2 (x) sigma2)^2`` and
    ``rhs = 1 - (1 - wcd(rho1, rho2)^2) (1 - D(sigma1, sigma2)^2)``; always
    ``lhs >= rhs`` up to roundoff.
    """
    rho1, rho2, sigma1, sigma2 = (as_density(x, tol) for x in (rho1, rho2, sigma1, sigma2))
    if rho1.dim != rho2.dim or sigma1.dim != sigma2.dim:
        raise DimensionMismatch("factor dimensions do not match")
    left = trace_distance(
        mc.tensor(rho1.matrix, sigma1.matrix), mc.tensor(rho2.matrix, sigma2.matrix)
    )
    w = wcd(rho1, rho2, tol)
    ds = trace_distance(sigma1, sigma2)
    return left**2, 1.0 - (1.0 - w**2) * (1.0 - ds**2)


def product_bound_channel(rho1, rho2, sigma1, sigma2, tol: Tolerances = DEFAULT_TOL):
    """Channel witnessing the product bound: optimal purifier (x) Helstrom channel.

    Returns ``(channel, bundle, q1, q2)``.  On ``rho_i (x) sigma_i`` it outputs
    ``|phi_i><phi_i|`` tensored with a diagonal qubit state.
    """
    bundle = optimal_purifier(rho1, rho2, tol)
    hel, q1, q2 = helstrom_channel(sigma1, sigma2, tol)
    return chn.tensor_channels(bundle.full, hel), bundle, q1, q2
