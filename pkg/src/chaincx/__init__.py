"""chaincx: almost-sure homology of random chain complexes of real vector spaces.

The positive-probability rank vectors of a random complex with dimension
vector a are exactly the feasible rank vectors maximizing the stratum
dimension d(a, r).  This package computes them exactly, implements the
known closed forms for the resulting Betti numbers, scans for
counterexamples to the general smallest-total-homology conjecture, and
cross-checks the dimension formula numerically via the rank of the
linearized change-of-basis action.
"""

__version__ = "0.1.0"

from .core import (
    MAX_ENTRY,
    MAX_LENGTH,
    BettiVector,
    ComplexShape,
    InfeasibleRanksError,
    RankVector,
    UnrealizableBettiError,
    WorkCapExceeded,
    ambient_dimension,
    betti_from_ranks,
    betti_lower_bound,
    euler_characteristic,
    is_feasible,
    ranks_from_betti,
    stratum_dimension,
)
from .optimizer import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_WORK_CAP,
    MaximizerReport,
    betti_spectrum,
    brute_force_maximize,
    enumerate_maximizers,
    maximize_dp,
    maximizer_rank_sum_range,
)
from .predictions import (
    ComparisonResult,
    HypothesisReading,
    Prediction,
    ScanReport,
    SourceTheorem,
    SweepSummary,
    Verdict,
    all_predictions,
    check_shape,
    conjecture_scan,
    equal_dim_quadratic_form,
    hypothesis_holds,
    predict_conjecture,
    predict_equal_dim,
    predict_length1,
    predict_length2,
    predict_length3_sum,
    prediction_matches,
    spread_identity_check,
    sweep_theorems,
)
from .numerics import (
    DEFAULT_SIZE_CAP,
    DEFAULT_TOLERANCES,
    NumericalComplex,
    RankInconsistencyError,
    ToleranceConfig,
    canonical_complex,
    complex_from_json,
    complex_to_json,
    greedy_rank_vector,
    kernel_basis,
    numerical_betti,
    numerical_rank,
    orbit_dimension,
    random_conjugation,
    sequential_sample,
)

__all__ = [name for name in dir() if not name.startswith("_")]
