"""Estimator-style wrappers so the solvers compose with scikit-learn tooling.

Both estimators fit a single density matrix, in the spirit of matrix
approximators like NMF: ``fit`` runs the solver and exposes the value and
the approximating state as trailing-underscore attributes.  Inputs may be a
``DensityMatrix`` or a raw complex array plus a ``dims`` parameter.
"""

from sklearn.base import BaseEstimator

from .cha import ActiveLearningConfig, upper_bound
from .ppt import ppt_relative_entropy
from .states import as_density_matrix


class ChaUpperBound(BaseEstimator):
    """Upper bound on the relative entropy of entanglement via hull search.

    Parameters mirror ``ActiveLearningConfig``; ``dims`` supplies the tensor
    factorization for raw array input and ``seed`` fixes all sampling.

    Attributes after ``fit``: ``value_bits_``, ``sigma_`` (closest mixture
    found), ``weights_``, ``history_``, ``converged_``, ``report_``.
    """

    def __init__(
        self,
        pool_size=2000,
        outer_iterations=50,
        weight_threshold=1e-6,
        delta0=0.2,
        delta_decay=0.85,
        delta_floor=0.01,
        resample_per_useful=20,
        fresh_fraction=0.25,
        solver_tol_nats=1e-7,
        solver_max_iters=5000,
        log_floor=1e-14,
        dims=None,
        seed=0,
    ):
        self.pool_size = pool_size
        self.outer_iterations = outer_iterations
        self.weight_threshold = weight_threshold
        self.delta0 = delta0
        self.delta_decay = delta_decay
        self.delta_floor = delta_floor
        self.resample_per_useful = resample_per_useful
        self.fresh_fraction = fresh_fraction
        self.solver_tol_nats = solver_tol_nats
        self.solver_max_iters = solver_max_iters
        self.log_floor = log_floor
        self.dims = dims
        self.seed = seed

    def _config(self) -> ActiveLearningConfig:
        return ActiveLearningConfig(
            pool_size=self.pool_size,
            outer_iterations=self.outer_iterations,
            weight_threshold=self.weight_threshold,
            delta0=self.delta0,
            delta_decay=self.delta_decay,
            delta_floor=self.delta_floor,
            resample_per_useful=self.resample_per_useful,
            fresh_fraction=self.fresh_fraction,
            solver_tol_nats=self.solver_tol_nats,
            solver_max_iters=self.solver_max_iters,
            log_floor=self.log_floor,
        )

    def fit(self, X, y=None):
        rho = as_density_matrix(X, dims=self.dims)
        report = upper_bound(rho, self._config(), seed=self.seed)
        self.report_ = report
        self.value_bits_ = report.best_value_bits
        self.sigma_ = report.best_solution.sigma.mat
        self.weights_ = report.best_solution.weights
        self.history_ = report.history
        self.converged_ = report.best_solution.converged
        self.n_iter_ = len(report.history)
        return self


class PptRelativeEntropy(BaseEstimator):
    """Benchmark bound from minimization over the PPT set.

    Attributes after ``fit``: ``value_bits_``, ``sigma_``, ``converged_``,
    ``grad_norm_``, ``n_iter_``, ``solution_``.
    """

    def __init__(self, tol=1e-6, max_iters=2000, log_floor=1e-14, dims=None):
        self.tol = tol
        self.max_iters = max_iters
        self.log_floor = log_floor
        self.dims = dims

    def fit(self, X, y=None):
        rho = as_density_matrix(X, dims=self.dims)
        sol = ppt_relative_entropy(
            rho, tol=self.tol, max_iters=self.max_iters, floor=self.log_floor
        )
        self.solution_ = sol
        self.value_bits_ = sol.value_bits
        self.sigma_ = sol.sigma.mat
        self.converged_ = sol.converged
        self.grad_norm_ = sol.grad_norm
        self.n_iter_ = sol.iterations
        return self
