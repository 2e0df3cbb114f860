"""Upper bounds on the relative entropy of entanglement.

The package approximates the separable set from the inside by the convex
hull of adaptively sampled pure product states, which turns the bound
computation into relative-entropy minimization over a probability simplex.
A projected-gradient solver over the positive-partial-transpose set
provides the matching benchmark value, and closed-form baselines cover the
Werner, isotropic, and pure-state families.
"""

from .analytic import (
    AnalyticValue,
    isotropic_er,
    isotropic_threshold,
    pure_state_er,
    werner_er,
    werner_threshold,
)
from .cha import (
    ActiveLearningConfig,
    CandidatePool,
    IterationRecord,
    SimplexSolution,
    UpperBoundReport,
    anchor_pool,
    initial_pool,
    resample,
    select_useful,
    solve_simplex,
    upper_bound,
)
from .estimators import ChaUpperBound, PptRelativeEntropy
from .linalg import (
    Spectral,
    frechet_log,
    hermitian_eig,
    kron,
    matrix_log_floored,
    partial_trace_b,
    partial_transpose,
    relative_entropy,
    trace_inner,
    von_neumann_entropy,
)
from .ppt import PptSolution, ppt_relative_entropy, project_feasible, project_psd
from .states import (
    DensityMatrix,
    ProductKet,
    as_density_matrix,
    is_ppt,
    isotropic,
    max_entangled,
    perturb_ket,
    product_projector,
    random_density,
    random_entangled,
    random_product_ket,
    swap_operator,
    tiles_family,
    tiles_state,
    werner,
)

__version__ = "0.1.0"

__all__ = [
    "ActiveLearningConfig",
    "AnalyticValue",
    "CandidatePool",
    "ChaUpperBound",
    "DensityMatrix",
    "IterationRecord",
    "PptRelativeEntropy",
    "PptSolution",
    "ProductKet",
    "SimplexSolution",
    "Spectral",
    "UpperBoundReport",
    "anchor_pool",
    "as_density_matrix",
    "frechet_log",
    "hermitian_eig",
    "initial_pool",
    "is_ppt",
    "isotropic",
    "isotropic_er",
    "isotropic_threshold",
    "kron",
    "matrix_log_floored",
    "max_entangled",
    "partial_trace_b",
    "partial_transpose",
    "perturb_ket",
    "ppt_relative_entropy",
    "product_projector",
    "project_feasible",
    "project_psd",
    "pure_state_er",
    "random_density",
    "random_entangled",
    "random_product_ket",
    "relative_entropy",
    "resample",
    "select_useful",
    "solve_simplex",
    "swap_operator",
    "tiles_family",
    "tiles_state",
    "trace_inner",
    "upper_bound",
    "von_neumann_entropy",
    "werner",
    "werner_er",
    "werner_threshold",
]
