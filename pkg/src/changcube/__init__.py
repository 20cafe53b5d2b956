"""Boolean Fourier spectra, KL divergence, and numerical checks of Chang's lemma."""
from .chang import (
    ChangReport,
    ExtremalResult,
    LevelKReport,
    ProofTrace,
    SweepSummary,
    TraceInvariantError,
    chang_bound,
    exhaustive_verify,
    extremal_search,
    level_k_report,
    proof_trace,
    sampled_verify,
    verify_chang,
)
from .fourier import (
    BinaryMarginal,
    CubeFunction,
    CubePoint,
    FourierSpectrum,
    conditional_marginals,
    cumulative_level_weight,
    density,
    indicator_from_points,
    level_weight,
    naive_fourier_coefficient,
    parse_set_spec,
    walsh_hadamard_transform,
)
from .info import (
    AbsoluteContinuityViolation,
    DiscreteDistribution,
    DivergenceBreakdown,
    NotAProductDistribution,
    conditional_divergence,
    counterexample_pair,
    entropy,
    kl_divergence,
    l1_distance,
    marginal,
    mutual_information,
    pinsker_slack,
    product_of,
    raw_breakdown,
    superadditivity_breakdown,
)

__version__ = "0.1.0"
