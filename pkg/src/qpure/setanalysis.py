"""Criteria on sets of states: orthogonal blocks, essentially pure sets, USD.

A set admits a deterministic channel that is both purifying and reversible on
it exactly when it is an orthogonal union of essentially pure blocks, i.e.
blocks of the form ``U (|phi><phi| (x) sigma_B) U^dagger`` up to a fixed
appended factor.  For two states an operational test exists
(:func:`two_state_criterion`); for larger blocks only necessary conditions are
available, so :func:`decide` may answer ``UNKNOWN``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import channels as chn
from . import matcore as mc
from .channels import KrausChannel
from .errors import (
    DimensionMismatch,
    NotFeasible,
    POutOfRange,
    RecipeInconsistent,
    TooFewStates,
)
from .geometry import jordan_states, wcd
from .matcore import DEFAULT_TOL, Tolerances
from .states import DensityOperator, as_density, check_normalized, is_orthogonal, support, trace_distance

TWO_STATE_ATOL = 1e-8
SPECTRUM_ATOL = 1e-8
ANGLE_SPREAD_ATOL = 1e-8


class StateSet(tuple):
    """Non-empty tuple of density operators of one common dimension."""

    def __new__(cls, states, tol: Tolerances = DEFAULT_TOL):
        items = tuple(as_density(s, tol) for s in states)
        if not items:
            raise TooFewStates("a state set must not be empty")
        if len({s.dim for s in items}) != 1:
            raise DimensionMismatch("all states in a set must share one dimension")
        return super().__new__(cls, items)

    @property
    def dim(self) -> int:
        return self[0].dim


class Verdict(str, enum.Enum):
    ESSENTIALLY_PURE_OR_ORTHOGONAL = "essentially_pure_or_orthogonal"
    NOT = "not"


class Decision(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class EssentiallyPureRecipe:
    """Generator data for an essentially pure set.

    Members are ``rho`` with ``rho (x) omega_C = U (|phi><phi| (x) sigma_B) U^dagger``
    for each ``phi`` in ``pure_vectors``; requires
    ``dim_in * dim_C == dim_A * dim_B``.
    """

    dim_in: int
    dim_A: int
    dim_B: int
    dim_C: int
    U: np.ndarray
    sigma_B: DensityOperator
    omega_C: DensityOperator
    pure_vectors: tuple = field(default=())
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        if self.dim_in * self.dim_C != self.dim_A * self.dim_B:
            raise RecipeInconsistent(
                f"{self.dim_in}*{self.dim_C} != {self.dim_A}*{self.dim_B}"
            )
        u = mc.check_unitary(self.U, self.tol)
        if u.shape[0] != self.dim_A * self.dim_B:
            raise DimensionMismatch(f"U has shape {u.shape}")
        sigma = as_density(self.sigma_B, self.tol)
        omega = as_density(self.omega_C, self.tol)
        if sigma.dim != self.dim_B or omega.dim != self.dim_C:
            raise DimensionMismatch("sigma_B / omega_C dimensions do not match the recipe")
        vecs = tuple(check_normalized(v, self.tol) for v in self.pure_vectors)
        if any(v.shape[0] != self.dim_A for v in vecs):
            raise DimensionMismatch("pure vectors must live in H_A")
        object.__setattr__(self, "U", mc.frozen(u))
        object.__setattr__(self, "sigma_B", sigma)
        object.__setattr__(self, "omega_C", omega)
        object.__setattr__(self, "pure_vectors", vecs)

    def joint_state(self, phi) -> np.ndarray:
        """``U (|phi><phi| (x) sigma_B) U^dagger`` on ``H_A (x) H_B``."""
        return self.U @ mc.tensor(mc.projector(phi), self.sigma_B.matrix) @ mc.dag(self.U)


@dataclass(frozen=True)
class NecessaryReport:
    same_spectrum: bool
    degenerate_angles: bool


@dataclass(frozen=True)
class SetDecision:
    decision: Decision
    blocks: tuple
    block_decisions: tuple


def _need_two(ms):
    if len(ms) < 2:
        raise TooFewStates("at least two states are required")


def partition_orthogonal(ms, tol: Tolerances = DEFAULT_TOL) -> list[StateSet]:
    """Connected components of the "not orthogonal" graph, in input order."""
    ms = StateSet(ms, tol)
    n = len(ms)
    label = [-1] * n
    blocks = []
    for start in range(n):
        if label[start] >= 0:
            continue
        label[start] = len(blocks)
        members, stack = [], [start]
        while stack:
            i = stack.pop()
            members.append(i)
            for j in range(n):
                if label[j] < 0 and not is_orthogonal(ms[i], ms[j], tol):
                    label[j] = label[start]
                    stack.append(j)
        blocks.append(StateSet([ms[i] for i in sorted(members)], tol))
    return blocks


def generate_essentially_pure(recipe: EssentiallyPureRecipe) -> StateSet:
    """Members of the essentially pure set described by ``recipe``.

    Each joint state is read as an operator on ``H_in (x) H_C``; it must equal
    ``rho (x) omega_C`` for the reduced state ``rho``.

    Raises:
        RecipeInconsistent: the joint state does not factor with ``omega_C``.
    """
    tol = recipe.tol
    dims = (recipe.dim_in, recipe.dim_C)
    out = []
    for phi in recipe.pure_vectors:
        joint = recipe.joint_state(phi)
        c_part = mc.partial_trace(joint, dims, keep="second")
        if mc.max_abs(c_part - recipe.omega_C.matrix) > tol.equal_tol:
            raise RecipeInconsistent("traced-out factor differs from omega_C")
        rho = mc.partial_trace(joint, dims, keep="first")
        if mc.max_abs(joint - mc.tensor(rho, recipe.omega_C.matrix)) > tol.equal_tol:
            raise RecipeInconsistent("joint state is not rho (x) omega_C")
        out.append(DensityOperator(rho, tol))
    return StateSet(out, tol)


def verify_simplified(
    ms, rho0_index: int, U, labels: Sequence, tol: Tolerances = DEFAULT_TOL
) -> bool:
    """Check ``rho (x) |r0><r0| == U (rho0 (x) |r><r|) U^dagger`` for every member.

    ``labels[i]`` is the auxiliary vector attached to state ``i`` and
    ``|r0> = labels[rho0_index]``.
    """
    ms = StateSet(ms, tol)
    labels = [check_normalized(v, tol) for v in labels]
    if len(labels) != len(ms):
        raise DimensionMismatch(f"{len(labels)} labels for {len(ms)} states")
    aux = labels[0].shape[0]
    if any(v.shape[0] != aux for v in labels):
        raise DimensionMismatch("labels of different length")
    U = mc.as_matrix(U)
    if U.shape != (ms.dim * aux, ms.dim * aux):
        raise DimensionMismatch(f"U has shape {U.shape}, expected side {ms.dim * aux}")
    if not mc.is_unitary(U, tol):
        return False
    rho0 = ms[rho0_index].matrix
    r0 = mc.projector(labels[rho0_index])
    for rho, lab in zip(ms, labels):
        lhs = mc.tensor(rho.matrix, r0)
        rhs = U @ mc.tensor(rho0, mc.projector(lab)) @ mc.dag(U)
        if mc.max_abs(lhs - rhs) > tol.equal_tol:
            return False
    return True


def simplified_witness(recipe: EssentiallyPureRecipe) -> tuple[np.ndarray, list[np.ndarray]]:
    """``(U, labels)`` satisfying :func:`verify_simplified` for a recipe with ``dim_C == 1``.

    With ``H_in = H_A (x) H_B`` and auxiliary space ``H_A'``, the unitary is
    ``(U_r (x) 1) SWAP_{A,A'} (U_r^dagger (x) 1)`` and the label of each member
    is its pure vector, with ``rho0`` the first member.
    """
    if recipe.dim_C != 1:
        raise RecipeInconsistent("witness construction needs dim_C == 1")
    a, b = recipe.dim_A, recipe.dim_B
    perm = np.zeros((a * b * a, a * b * a))
    for i in range(a):
        for j in range(b):
            for k in range(a):
                perm[(k * b + j) * a + i, (i * b + j) * a + k] = 1.0
    ur = np.kron(recipe.U, mc.identity(a))
    return ur @ perm @ mc.dag(ur), list(recipe.pure_vectors)


def two_state_criterion(rho1, rho2, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Positive iff the pair is essentially pure or orthogonal (``wcd == D``)."""
    rho1 = as_density(rho1, tol)
    rho2 = as_density(rho2, tol)
    if rho1.dim != rho2.dim:
        raise DimensionMismatch(f"dims {rho1.dim} and {rho2.dim} differ")
    gap = abs(wcd(rho1, rho2, tol) - trace_distance(rho1, rho2))
    if gap <= TWO_STATE_ATOL:
        return Verdict.ESSENTIALLY_PURE_OR_ORTHOGONAL
    return Verdict.NOT


def necessary_criteria(ms, tol: Tolerances = DEFAULT_TOL) -> NecessaryReport:
    """Equal spectra and fully degenerate pairwise Jordan angles.

    Both hold for every essentially pure set; neither pair is sufficient.
    """
    ms = StateSet(ms, tol)
    _need_two(ms)
    ref = ms[0].eigenvalues
    same = all(mc.max_abs(s.eigenvalues - ref) <= SPECTRUM_ATOL for s in ms[1:])
    degenerate = True
    for r1, r2 in combinations(ms, 2):
        angles = jordan_states(r1, r2, tol).angles
        if angles.max() - angles.min() > ANGLE_SPREAD_ATOL:
            degenerate = False
            break
    return NecessaryReport(same_spectrum=bool(same), degenerate_angles=degenerate)


def decide(ms, tol: Tolerances = DEFAULT_TOL) -> SetDecision:
    """Whether ``ms`` admits a purifying and reversible channel.

    Blocks of one state are trivially essentially pure, two-state blocks are
    settled by :func:`two_state_criterion`.  Larger blocks are rejected when a
    necessary condition fails (including the two-state test on any pair, since
    subsets of essentially pure sets are essentially pure) and are otherwise
    left ``UNKNOWN``.
    """
    blocks = partition_orthogonal(ms, tol)
    verdicts = []
    for block in blocks:
        if len(block) == 1:
            verdicts.append(Decision.YES)
        elif len(block) == 2:
            ok = two_state_criterion(block[0], block[1], tol) is Verdict.ESSENTIALLY_PURE_OR_ORTHOGONAL
            verdicts.append(Decision.YES if ok else Decision.NO)
        else:
            report = necessary_criteria(block, tol)
            pairs_ok = all(
                two_state_criterion(x, y, tol) is Verdict.ESSENTIALLY_PURE_OR_ORTHOGONAL
                for x, y in combinations(block, 2)
            )
            if report.same_spectrum and report.degenerate_angles and pairs_ok:
                verdicts.append(Decision.UNKNOWN)
            else:
                verdicts.append(Decision.NO)
    if Decision.NO in verdicts:
        overall = Decision.NO
    elif Decision.UNKNOWN in verdicts:
        overall = Decision.UNKNOWN
    else:
        overall = Decision.YES
    return SetDecision(overall, tuple(blocks), tuple(verdicts))


def counter_example(p: float) -> tuple[DensityOperator, DensityOperator]:
    """Pair with equal spectra and degenerate Jordan angles that is not essentially pure.

    ``rho1 = p|0><0| + (1-p)|1><1|`` and ``rho2 = p|n+><n+| + (1-p)|n-><n-|``
    with ``|n+-> = (+-|0> + |1> +- |2> + |3>) / 2``, for ``0 < p < 1/2``.
    """
    if not 0.0 < p < 0.5:
        raise POutOfRange(f"p={p!r} must lie in (0, 1/2)")
    e = mc.identity(4)
    nu_plus = 0.5 * (e[0] + e[1] + e[2] + e[3])
    nu_minus = 0.5 * (-e[0] + e[1] - e[2] + e[3])
    rho1 = p * mc.projector(e[0]) + (1 - p) * mc.projector(e[1])
    rho2 = p * mc.projector(nu_plus) + (1 - p) * mc.projector(nu_minus)
    return DensityOperator(rho1), DensityOperator(rho2)


def _residual_defect(basis: np.ndarray, others: np.ndarray) -> float:
    """Largest squared norm of a unit vector of span(basis) outside span(others)."""
    resid = basis - others @ (mc.dag(others) @ basis)
    return float(np.linalg.svd(resid, compute_uv=False)[0] ** 2)


def usd_feasible(ms, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Whether an unambiguous discrimination of all members can succeed.

    True iff no support is contained in the sum of the other supports.
    """
    ms = StateSet(ms, tol)
    _need_two(ms)
    supports = [support(s, tol).basis for s in ms]
    for i, b in enumerate(supports):
        rest = np.column_stack([supports[j] for j in range(len(ms)) if j != i])
        span = mc.orthonormal_columns(rest, tol)
        if _residual_defect(b, span) <= tol.eig_zero:
            return False
    return True


@dataclass(frozen=True)
class USDPurifier:
    """Probabilistic purifier: unambiguous discrimination, then re-preparation.

    ``channel`` maps member ``i`` to ``success * |psi_i><psi_i|`` where
    ``psi_i`` is the spectral-square-root purification of member ``i`` on
    ``H_in (x) H_aux`` (``aux`` of the input dimension).
    """

    channel: KrausChannel
    success: float
    elements: tuple
    purifications: tuple


def purification(rho, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``sum_k sqrt(p_k) |l_k> (x) |k>`` over the spectrum of ``rho``."""
    rho = as_density(rho, tol)
    p = np.clip(rho.eigenvalues, 0.0, None)
    d = rho.dim
    return sum(
        np.sqrt(pk) * np.kron(rho.eigenvectors[:, k], mc.basis_vector(k, d))
        for k, pk in enumerate(p)
    )


def usd_purifier_demo(ms, tol: Tolerances = DEFAULT_TOL) -> USDPurifier:
    """Trace-non-increasing purifier built on unambiguous discrimination.

    Only sets whose supports are linearly independent are handled.  The
    measurement uses the dual frame ``D = B (B^dagger B)^{-1}`` of the stacked
    support bases with a common success probability
    ``lambda_min(B^dagger B)``; for two pure states this is the optimal
    ``1 - |<psi_1|psi_2>|``.

    Raises:
        NotFeasible: the supports are not linearly independent.
    """
    ms = StateSet(ms, tol)
    _need_two(ms)
    bases = [support(s, tol).basis for s in ms]
    stacked = np.column_stack(bases)
    gram = mc.dag(stacked) @ stacked
    gram_eigs = np.linalg.eigvalsh(gram)
    if gram_eigs[0] <= np.sqrt(tol.eig_zero):
        raise NotFeasible("supports are not linearly independent")
    success = float(gram_eigs[0])
    dual = stacked @ np.linalg.inv(gram)
    d = ms.dim
    ops, elements, purifs = [], [], []
    start = 0
    for rho, b in zip(ms, bases):
        cols = dual[:, start : start + b.shape[1]] * np.sqrt(success)
        start += b.shape[1]
        elements.append(cols @ mc.dag(cols))
        psi = purification(rho, tol)
        purifs.append(psi)
        for c in cols.T:
            ops.append(np.outer(psi, c.conj()))
    channel = KrausChannel(d, d * d, tuple(ops), trace_preserving=False)
    return USDPurifier(channel, success, tuple(elements), tuple(purifs))


def reversible_purifier(recipe: EssentiallyPureRecipe) -> tuple[KrausChannel, KrausChannel]:
    """Channels ``(forward, reverse)`` for the members of ``recipe``.

    ``forward`` appends ``omega_C``, undoes ``U``, discards ``H_B`` and prepares a
    purification of ``sigma_B`` on ``H_B (x) H_B'``; every member ends in the
    pure state ``|phi> (x) |s>``.  ``reverse`` discards ``H_B'``, applies ``U``
    and discards ``H_C``, restoring the member.
    """
    tol = recipe.tol
    a, b, c, d = recipe.dim_A, recipe.dim_B, recipe.dim_C, recipe.dim_in
    s = purification(recipe.sigma_B, tol)
    pure_s = DensityOperator.pure(s / np.linalg.norm(s), tol)
    forward = chn.append_channel(recipe.omega_C, d, tol)
    forward = chn.compose(chn.unitary_channel(mc.dag(recipe.U), tol), forward)
    forward = chn.compose(chn.partial_trace_channel((a, b), keep="first"), forward)
    forward = chn.compose(chn.append_channel(pure_s, a, tol), forward)
    reverse = chn.partial_trace_channel((a * b, b), keep="first")
    reverse = chn.compose(chn.unitary_channel(recipe.U, tol), reverse)
    reverse = chn.compose(chn.partial_trace_channel((d, c), keep="first"), reverse)
    return forward, reverse
