"""Sparse recovery from partial Fourier samples.

A library plus CLI that reconstructs sparse signals and piecewise-constant
images from a subset of their Fourier coefficients by l1 and total-variation
minimization, builds and verifies the dual certificate that proves unique
recovery, and validates the set-partition moment bounds that control the
random restricted-Fourier operator, against brute-force oracles.
"""

from .bench import (
    PhaseGrid,
    PhantomRun,
    RunConfig,
    fifty_percent_crossing,
    run_phantom,
    run_phase_diagram,
)
from .certificates import (
    CertificateReport,
    HOperator,
    NeumannSplit,
    build_certificate_direct,
    build_certificate_neumann,
    build_h,
    spectral_norm_h0,
)
from .combinatorics import (
    MomentBoundInputs,
    MomentBoundResult,
    PartitionTables,
    TheoremParams,
    bell_number,
    convexity_check_f_k,
    expected_trace_enumeration,
    expected_trace_formula,
    f_tau,
    f_tau_bound,
    f_tau_series,
    inclusion_exclusion_check,
    log_ineq_holds,
    moment_bound,
    n_small_holds,
    no_singleton_count,
    set_partitions,
    stirling,
    theorem_params,
)
from .errors import (
    IllConditionedError,
    MissingDcError,
    UnsupportedSizeError,
    VacuousRegimeError,
)
from .recover import (
    RecoveryResult,
    SolveConfig,
    least_squares_known_support,
    solve_p0,
    solve_p1,
)
from .reporting import write_csv, write_pgm
from .rng import Rng, hash64
from .sampling import StarMask, bernoulli_omega, star_mask, uniform_omega
from .signals import (
    Image2D,
    IndexSet,
    Signal1D,
    gen_dirac_comb,
    gen_phantom,
    gen_sparse_signal,
)
from .spectral import (
    PartialFourierOp,
    RestrictedMatrix,
    dft,
    dft2,
    idft,
    idft2,
    injectivity_report,
    observe,
    observe_image,
    project_image_onto_data,
    project_onto_data,
    restricted_matrix,
)
from .tv import TvConfig, TvResult, minimum_energy_image, solve_tv_1d, solve_tv_2d, tv_norm_2d

__version__ = "0.1.0"
