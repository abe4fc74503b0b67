"""Low-coherence sensing matrices by seeded rejection sampling, with bounds and validators."""

__version__ = "0.1.0"

from .errors import InfeasibleError, InvalidParameterError, MatrixFormatError
from .matrix import (
    UNBOUNDED,
    SensingMatrix,
    coherence,
    gram,
    load_matrix,
    max_recoverable_sparsity,
    save_matrix,
)
from .bounds import (
    BoundsReport,
    bounds_report,
    cap_measure_exact,
    column_success_bound,
    pair_reject_bound,
    required_m,
    welch_bound,
    width_ratio,
)
from .construct import (
    ConstructionParams,
    ConstructionReport,
    candidate_coherence,
    construct,
    sample_unit_vector,
    verify_complexity_claim,
)
from .recovery import (
    RecoveryResult,
    RicEstimate,
    SparseSignal,
    brute_force_l0,
    monte_carlo_cap,
    omp,
    recovery_experiment,
    ric_brute_force,
)
