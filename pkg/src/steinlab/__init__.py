"""Numerical laboratory for quantum Stein's lemma: relative entropy, type-class
pinching, abelian restrictions, hypothesis-testing exponents, typical sets and
channel monotonicity."""

from __future__ import annotations

__version__ = "0.1.0"

from .abelian import (
    AbelianRestriction,
    ClassicalReduction,
    HiaiPetzReport,
    build_abelian_restriction,
    choose_block_length,
    classical_reduction,
    hiai_petz_decomposition_check,
    restrict_state,
)
from .channels import (
    KrausChannel,
    StinespringDilation,
    apply,
    depolarizing_channel,
    dilate,
    dual_apply,
    monotonicity_gap,
    random_channel,
    tilde_states,
)
from .entropy import EntropyValue, classical_kl, relative_entropy, shannon, von_neumann
from .hypothesis_testing import (
    BetaBounds,
    NeymanPearsonResult,
    beta_bounds,
    exact_beta_commuting,
    projection_beta_upper,
    relaxed_beta,
    stein_curve,
    water_filling_beta,
)
from .operators import (
    BudgetExceededError,
    DimensionMismatchError,
    InvalidStateError,
    NotHermitianError,
    as_density,
    derive_seed,
    partial_trace,
    random_density,
    tensor_power,
)
from .type_classes import TypeDecomposition, build_type_decomposition, enumerate_types, pinch
from .typical import ReducedAlphabet, TypicalReport, lln_convergence, typical_report

__all__ = [name for name in dir() if not name.startswith("_") and name != "annotations"]
