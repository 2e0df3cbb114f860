"""Benchmark bound from relative-entropy minimization over the PPT set.

The set of states with positive partial transpose contains the separable
set, so minimizing S(rho || sigma) over it benchmarks the hull-based upper
bound from below.  The minimization is projected gradient descent; the
feasible-set projection is Dykstra's alternating scheme over the PSD cone,
the PSD-partial-transpose cone, and the unit-trace hyperplane.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import _frechet_log_eig, partial_transpose
from .states import DensityMatrix

LN2 = float(np.log(2.0))


@dataclass(frozen=True, eq=False)
class PptSolution:
    """Feasible PPT state reached by the solver, with diagnostics.

    ``grad_norm`` is the projected-gradient mapping norm at exit, i.e. the
    Frobenius length of the last accepted step divided by its step size.
    """

    sigma: DensityMatrix
    objective_nats: float
    iterations: int
    converged: bool
    grad_norm: float
    objective_trace: np.ndarray

    def __post_init__(self):
        if not isinstance(self.sigma, DensityMatrix):
            raise TypeError("sigma must be a DensityMatrix")
        pt = partial_transpose(self.sigma.mat, self.sigma.dim_a, self.sigma.dim_b)
        pt_min = float(np.linalg.eigvalsh(pt)[0])
        if pt_min < -1e-9:
            raise ValueError(
                f"sigma is not PPT within tolerance: min PT eigenvalue {pt_min:.3e}"
            )
        if not np.isfinite(self.objective_nats) or self.objective_nats < -1e-9:
            raise ValueError(
                f"objective_nats must be finite and >= -1e-9, got {self.objective_nats}"
            )

    @property
    def value_bits(self) -> float:
        return self.objective_nats / LN2


def project_psd(a: np.ndarray) -> np.ndarray:
    """Frobenius projection onto the PSD cone: clip negative eigenvalues."""
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    if w[0] >= 0:
        return h
    out = (v * np.maximum(w, 0.0)) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def project_feasible(
    a: np.ndarray,
    dim_a: int,
    dim_b: int,
    tol: float = 1e-10,
    max_sweeps: int = 2000,
) -> np.ndarray:
    """Frobenius projection onto {PSD} & {PSD partial transpose} & {Tr = 1}.

    Dykstra's algorithm with one correction term per set; sweeps end on the
    trace hyperplane so the returned trace is exact.  Stops when an entire
    sweep moves the iterate by at most ``tol`` in Frobenius norm.
    """
    d = dim_a * dim_b
    if a.shape != (d, d):
        raise ValueError(
            f"operator shape {a.shape} does not match dims ({dim_a}, {dim_b})"
        )

    def proj_ppt(x):
        return partial_transpose(
            project_psd(partial_transpose(x, dim_a, dim_b)), dim_a, dim_b
        )

    def proj_trace(x):
        shift = (np.trace(x) - 1.0) / d
        return x - shift * np.eye(d)

    x = 0.5 * (a + a.conj().T)
    corrections = [np.zeros_like(x) for _ in range(3)]
    projections = (project_psd, proj_ppt, proj_trace)
    for _ in range(max_sweeps):
        x_prev = x
        for i, proj in enumerate(projections):
            y = x + corrections[i]
            x = proj(y)
            corrections[i] = y - x
        if np.linalg.norm(x - x_prev) <= tol:
            return x
    warnings.warn(
        f"feasible-set projection hit the {max_sweeps}-sweep cap; "
        "constraints may only hold loosely",
        RuntimeWarning,
        stacklevel=2,
    )
    return x


def _floored_cross(sigma, rho, floor):
    w, u = np.linalg.eigh(sigma)
    overlaps = np.real(np.einsum("ji,jk,ki->i", u.conj(), rho, u))
    return float(overlaps @ np.log(np.maximum(w, floor))), w, u


def ppt_relative_entropy(
    rho: DensityMatrix,
    tol: float = 1e-6,
    max_iters: int = 2000,
    floor: float = 1e-14,
) -> PptSolution:
    """Minimize S(rho || sigma) over PPT states by projected gradient descent.

    The Euclidean gradient is -Dlog(sigma)[rho]; each step projects back
    onto the feasible set and the step size is halved until the objective
    decreases.  Starts from ``project_feasible(rho)`` mixed with a sliver of
    the maximally mixed state so the first logarithm is well conditioned.
    Converges (flag set) when the accepted step is shorter than ``tol`` in
    Frobenius norm; hitting ``max_iters`` or a dead line search returns the
    last iterate with ``converged=False``.

    For NPT states the result benchmarks the hull bound from below; for PPT
    states the objective can reach zero at sigma = rho.
    """
    r = rho.mat
    d = rho.dim
    wr = np.linalg.eigvalsh(r)
    wr_pos = wr[wr > floor]
    tr_rho_log_rho = float(wr_pos @ np.log(wr_pos))

    eta = 1e-3
    sigma = (1 - eta) * project_feasible(r, rho.dim_a, rho.dim_b) + eta * np.eye(
        d
    ) / d
    cross, w, u = _floored_cross(sigma, r, floor)
    f_cur = tr_rho_log_rho - cross
    trace = [f_cur]

    step = 1.0
    converged = False
    grad_norm = float("nan")
    iterations = 0
    for _ in range(max_iters):
        grad = -_frechet_log_eig(w, u, r, floor)
        accepted = False
        step_norm = float("inf")
        for _ in range(40):
            trial = project_feasible(sigma - step * grad, rho.dim_a, rho.dim_b)
            step_norm = float(np.linalg.norm(trial - sigma))
            cross, wt, ut = _floored_cross(trial, r, floor)
            f_new = tr_rho_log_rho - cross
            if f_new < f_cur:
                accepted = True
                break
            if step_norm <= tol:
                # Projection lands back on sigma: first-order stationary.
                break
            step *= 0.5
        grad_norm = step_norm / step
        if not accepted:
            converged = step_norm <= tol
            break
        sigma, w, u = trial, wt, ut
        f_cur = f_new
        trace.append(f_cur)
        iterations += 1
        if step_norm <= tol:
            converged = True
            break
        step = min(step * 1.5, 1e3)

    w_fix, v_fix = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    w_fix = np.maximum(w_fix, 0.0)
    cleaned = (v_fix * w_fix) @ v_fix.conj().T
    cleaned = 0.5 * (cleaned + cleaned.conj().T) / float(w_fix.sum())
    return PptSolution(
        sigma=DensityMatrix(rho.dim_a, rho.dim_b, cleaned),
        objective_nats=max(f_cur, 0.0),
        iterations=iterations,
        converged=converged,
        grad_norm=grad_norm,
        objective_trace=np.array(trace),
    )
