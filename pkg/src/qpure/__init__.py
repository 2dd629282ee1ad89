"""qpure: purifying and reversible quantum channels on finite-dimensional states."""

from .channels import (
    KrausChannel,
    ValidationReport,
    append_channel,
    apply,
    channels_equal,
    compose,
    determinize,
    gamma_combinator,
    identity_channel,
    partial_trace_channel,
    stinespring,
    tensor_channels,
    unitary_channel,
    validate,
)
from .geometry import JordanDecomposition, jordan, jordan_states, p_med, p_wcd, wcd
from .matcore import DEFAULT_TOL, Tolerances
from .purify import (
    PurifierBundle,
    helstrom_channel,
    mimic,
    omega_phi,
    optimal_purifier,
    product_bound,
)
from .setanalysis import (
    EssentiallyPureRecipe,
    StateSet,
    counter_example,
    generate_essentially_pure,
    necessary_criteria,
    partition_orthogonal,
    two_state_criterion,
    usd_feasible,
    usd_purifier_demo,
    verify_simplified,
)
from .states import (
    DensityOperator,
    Subspace,
    in_Q,
    is_orthogonal,
    purity,
    random_density,
    support,
    trace_distance,
)

__version__ = "0.1.0"
