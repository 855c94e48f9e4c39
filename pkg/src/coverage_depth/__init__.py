"""Exact coverage-depth computations for random access in coded DNA storage.

A k x n generator matrix over GF(q) is sampled column by column, uniformly
with replacement; the package computes how many draws it takes, in
expectation, before a given information strand is recoverable, searches for
the best matrices, and evaluates upper and lower bounds on the optimum.
"""

from .errors import (
    ConstraintViolation,
    CoverageDepthError,
    DimensionOutOfRange,
    EnumerationTooLarge,
    IndexOutOfRange,
    InvalidParams,
    MaxSamplesExceeded,
    MixedFields,
    NotPrimePower,
    RankDeficient,
    SearchTooLarge,
    SingularDenominator,
    TooLarge,
    ZeroColumn,
)
from .expectation import (
    GeneratorMatrix,
    WeightProfile,
    all_expected_samples,
    alpha_oracle,
    expected_samples,
    expected_samples_oracle,
    g_r_matrix,
    simulate,
    t_ave,
    t_max,
    weight_profile,
    zeta,
)
from .gf import EchelonBasis, Field, FqVector, field_new, rank, span_contains
from .lattice import (
    Subspace,
    chi,
    enumerate_subspaces,
    gaussian_binomial,
    mobius_coeff,
    weight_distribution_census,
)
from .lower_bounds import (
    LowerBoundReport,
    constant_gap_check,
    prior_bound,
    simple_bound,
    theorem2_bound,
    zeta_lower_bound,
)
from .search import SearchResult, monotonicity_check, optimal_search
from .upper_bounds import (
    BoundCertificate,
    SymmetricWeights,
    asymptotic_F,
    eval_k3,
    optimize_asymptotic,
    optimize_upper_bound,
    symmetric_tmax,
)

__version__ = "0.1.0"
