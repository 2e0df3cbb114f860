"""Upper bound on the relative entropy of entanglement via convex hulls.

The separable set is approximated from inside by the convex hull of a finite
pool of pure product states.  Minimizing S(rho || sigma) over that hull is a
convex program over the probability simplex, solved here with away-step
Frank-Wolfe; the Frank-Wolfe gap certifies how far the returned weights are
from the hull optimum.  An outer loop then refines the pool: vertices the
solver actually uses are kept, new candidates are sampled near them under a
shrinking unitary perturbation, the rest of the pool is refilled with fresh
Haar draws, and the best value over all rounds is reported.  Because every
sigma is an explicit convex mixture of product states, any returned value is
a certified upper bound regardless of how the pool was produced.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .linalg import _frechet_log_eig
from .states import DensityMatrix, ProductKet, perturb_ket

LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class ActiveLearningConfig:
    """Knobs for the pool, the outer loop, and the simplex solver."""

    pool_size: int = 2000
    outer_iterations: int = 50
    weight_threshold: float = 1e-6
    delta0: float = 0.2
    delta_decay: float = 0.85
    delta_floor: float = 0.01
    resample_per_useful: int = 20
    fresh_fraction: float = 0.25
    solver_tol_nats: float = 1e-7
    solver_max_iters: int = 5000
    log_floor: float = 1e-14

    def __post_init__(self):
        if self.pool_size < 1:
            raise ValueError("pool_size must be positive")
        if self.outer_iterations < 1:
            raise ValueError("outer_iterations must be positive")
        if self.weight_threshold <= 0:
            raise ValueError("weight_threshold must be positive")
        if self.delta0 < 0 or self.delta_floor < 0:
            raise ValueError("perturbation strengths must be nonnegative")
        if not 0 < self.delta_decay <= 1:
            raise ValueError("delta_decay must lie in (0, 1]")
        if self.resample_per_useful < 0:
            raise ValueError("resample_per_useful must be nonnegative")
        if not 0 <= self.fresh_fraction <= 1:
            raise ValueError("fresh_fraction must lie in [0, 1]")
        if self.solver_tol_nats <= 0 or self.solver_max_iters < 1:
            raise ValueError("solver tolerance and iteration cap must be positive")
        if self.log_floor <= 0:
            raise ValueError("log_floor must be positive")


@dataclass(frozen=True, eq=False)
class CandidatePool:
    """An ordered pool of pure product kets with their joint vectors cached.

    Layout: the first ``dim_a * dim_b`` entries are always the computational
    product basis (the anchors), then kept useful kets, then perturbed
    copies grouped by parent, then fresh draws.
    """

    dim_a: int
    dim_b: int
    kets: tuple
    vectors: np.ndarray
    n_useful: int = 0
    n_perturbed: int = 0
    n_fresh: int = 0

    def __post_init__(self):
        a = self.n_anchors
        if len(self.kets) < a:
            raise ValueError(
                f"pool of size {len(self.kets)} cannot hold the {a} anchors"
            )
        if self.vectors.shape != (len(self.kets), self.dim_a * self.dim_b):
            raise ValueError("cached vectors do not match the ket list")
        if a + self.n_useful + self.n_perturbed + self.n_fresh != len(self.kets):
            raise ValueError("pool composition counts do not add up")

    @property
    def n_anchors(self) -> int:
        return self.dim_a * self.dim_b

    @property
    def size(self) -> int:
        return len(self.kets)


@dataclass(frozen=True, eq=False)
class SimplexSolution:
    """Weights over a pool, the mixture they define, and solver diagnostics."""

    weights: np.ndarray
    sigma: DensityMatrix
    objective_nats: float
    fw_gap_nats: float
    iterations: int
    converged: bool

    def __post_init__(self):
        if np.any(self.weights < 0):
            raise ValueError("weights must be nonnegative")
        if abs(float(self.weights.sum()) - 1.0) > 1e-10:
            raise ValueError("weights must sum to 1")
        if self.fw_gap_nats < -1e-12:
            raise ValueError(f"Frank-Wolfe gap {self.fw_gap_nats} is negative")

    @property
    def objective_bits(self) -> float:
        return self.objective_nats / LN2


@dataclass(frozen=True)
class IterationRecord:
    """One outer-loop round: its pool composition and the value it reached."""

    index: int
    value_bits: float
    fw_gap_nats: float
    solver_iterations: int
    converged: bool
    delta: float
    n_useful: int
    n_perturbed: int
    n_fresh: int
    pool_size: int


@dataclass(frozen=True, eq=False)
class UpperBoundReport:
    """Outcome of the full active-learning run.

    ``best_value_bits`` is the running minimum over rounds, so it can only
    improve as the loop proceeds.
    """

    best_value_bits: float
    best_iteration: int
    best_solution: SimplexSolution
    history: tuple
    wall_seconds: float
    seed: int
    config: ActiveLearningConfig


def anchor_kets(dim_a: int, dim_b: int):
    """Computational product basis |i>|j| in row-major order."""
    ea = np.eye(dim_a, dtype=complex)
    eb = np.eye(dim_b, dtype=complex)
    return [ProductKet(ea[i], eb[j]) for i in range(dim_a) for j in range(dim_b)]


def _assemble(dim_a, dim_b, kets, n_useful, n_perturbed, n_fresh) -> CandidatePool:
    vectors = np.array([k.vec for k in kets])
    return CandidatePool(
        dim_a, dim_b, tuple(kets), vectors, n_useful, n_perturbed, n_fresh
    )


def anchor_pool(dim_a: int, dim_b: int) -> CandidatePool:
    """Pool holding only the computational product basis."""
    return _assemble(dim_a, dim_b, anchor_kets(dim_a, dim_b), 0, 0, 0)


def _fresh_kets(rng, n, dim_a, dim_b):
    a = rng.standard_normal((n, dim_a)) + 1j * rng.standard_normal((n, dim_a))
    b = rng.standard_normal((n, dim_b)) + 1j * rng.standard_normal((n, dim_b))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    b /= np.linalg.norm(b, axis=1, keepdims=True)
    return [ProductKet(a[i], b[i]) for i in range(n)]


def initial_pool(dim_a: int, dim_b: int, size: int, seed: int = 0) -> CandidatePool:
    """Anchors plus fresh Haar product kets, ``size`` entries in total."""
    anchors = anchor_kets(dim_a, dim_b)
    if size < len(anchors):
        raise ValueError(
            f"pool size {size} cannot hold the {len(anchors)} anchors"
        )
    rng = np.random.default_rng(seed)
    fresh = _fresh_kets(rng, size - len(anchors), dim_a, dim_b)
    return _assemble(dim_a, dim_b, anchors + fresh, 0, 0, len(fresh))


def _mixture(vectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
    sigma = (vectors.T * weights) @ vectors.conj()
    return 0.5 * (sigma + sigma.conj().T)


def _cross_term(sigma, rho, floor):
    """Tr(rho log sigma) with a floored log, plus the eig pair of sigma."""
    w, u = np.linalg.eigh(sigma)
    overlaps = np.real(np.einsum("ji,jk,ki->i", u.conj(), rho, u))
    value = float(overlaps @ np.log(np.maximum(w, floor)))
    return value, w, u


def solve_simplex(
    rho: DensityMatrix, pool: CandidatePool, cfg: ActiveLearningConfig
) -> SimplexSolution:
    """Minimize S(rho || sum_i c_i P_i) over the probability simplex.

    Away-step Frank-Wolfe with backtracking line search.  The gradient
    coordinate for vertex i is -<v_i| Dlog(sigma)[rho] |v_i>; the toward
    vertex minimizes it and the away vertex maximizes it over the support.
    Terminates when the Frank-Wolfe gap drops below ``cfg.solver_tol_nats``
    (a convexity certificate of near-optimality over this pool) or when the
    iteration cap is reached, in which case the solution is still returned
    with ``converged=False``.

    Starts from the uniform anchor mixture, whose sigma is the maximally
    mixed state, so the first logarithm is always well conditioned.
    """
    if (rho.dim_a, rho.dim_b) != (pool.dim_a, pool.dim_b):
        raise ValueError(
            f"state dims ({rho.dim_a}, {rho.dim_b}) do not match pool dims "
            f"({pool.dim_a}, {pool.dim_b})"
        )
    vectors = pool.vectors
    n = vectors.shape[0]
    r = rho.mat
    floor = cfg.log_floor

    wr = np.linalg.eigvalsh(r)
    wr_pos = wr[wr > floor]
    tr_rho_log_rho = float(wr_pos @ np.log(wr_pos))

    c = np.zeros(n)
    c[: pool.n_anchors] = 1.0 / pool.n_anchors
    sigma = _mixture(vectors, c)

    iterations = 0
    converged = False
    while True:
        cross, w, u = _cross_term(sigma, r, floor)
        f_cur = tr_rho_log_rho - cross
        if not np.isfinite(f_cur):
            raise RuntimeError(
                f"objective became non-finite at iteration {iterations} "
                f"(pool: {pool.n_anchors} anchors, {pool.n_useful} useful, "
                f"{pool.n_perturbed} perturbed, {pool.n_fresh} fresh)"
            )
        grad_mat = _frechet_log_eig(w, u, r, floor)
        g = -np.real(np.sum((vectors.conj() @ grad_mat) * vectors, axis=1))

        toward = int(np.argmin(g))
        g_dot_c = float(g @ c)
        fw_gap = g_dot_c - float(g[toward])
        if fw_gap <= cfg.solver_tol_nats:
            converged = True
            break
        if iterations >= cfg.solver_max_iters:
            break

        support = np.flatnonzero(c > 1e-12)
        away = int(support[np.argmax(g[support])])
        away_gap = float(g[away]) - g_dot_c

        use_fw = fw_gap >= away_gap or c[away] >= 1.0 - 1e-12
        if use_fw:
            gamma_max = 1.0
            slope = -fw_gap
            vtx = np.outer(vectors[toward], vectors[toward].conj())
            direction = vtx - sigma
        else:
            gamma_max = c[away] / (1.0 - c[away])
            slope = -away_gap
            vtx = np.outer(vectors[away], vectors[away].conj())
            direction = sigma - vtx

        gamma = gamma_max
        accepted = False
        for _ in range(60):
            cross_new, _, _ = _cross_term(sigma + gamma * direction, r, floor)
            f_new = tr_rho_log_rho - cross_new
            if f_new <= f_cur + 1e-4 * gamma * slope:
                accepted = True
                break
            gamma *= 0.5
        if not accepted:
            break

        if use_fw:
            c *= 1.0 - gamma
            c[toward] += gamma
        else:
            c *= 1.0 + gamma
            c[away] -= gamma
            if gamma == gamma_max:
                c[away] = 0.0
        np.clip(c, 0.0, None, out=c)
        c /= c.sum()
        sigma = _mixture(vectors, c)
        iterations += 1

    return SimplexSolution(
        weights=c,
        sigma=DensityMatrix(pool.dim_a, pool.dim_b, sigma),
        objective_nats=max(f_cur, 0.0),
        fw_gap_nats=max(fw_gap, 0.0),
        iterations=iterations,
        converged=converged,
    )


def select_useful(
    sol: SimplexSolution, pool: CandidatePool, eps: float
) -> np.ndarray:
    """Indices of vertices worth keeping: weight >= eps, plus all anchors.

    Non-anchor indices come back sorted by descending weight so that later
    truncation (if the pool budget is tight) drops the lightest first.  If
    no non-anchor vertex clears the threshold, the single highest-weight
    vertex is kept alongside the anchors.
    """
    weights = sol.weights
    if weights.shape[0] != pool.size:
        raise ValueError("solution does not belong to this pool")
    anchors = np.arange(pool.n_anchors)
    heavy = np.flatnonzero(weights >= eps)
    heavy = heavy[heavy >= pool.n_anchors]
    if heavy.size == 0:
        top = int(np.argmax(weights))
        extra = [] if top < pool.n_anchors else [top]
        return np.concatenate([anchors, extra]).astype(int)
    order = np.argsort(-weights[heavy], kind="stable")
    return np.concatenate([anchors, heavy[order]])


def resample(
    dim_a: int,
    dim_b: int,
    useful,
    cfg: ActiveLearningConfig,
    delta: float,
    seed: int = 0,
) -> CandidatePool:
    """Build the next pool around the kets that earned weight.

    Composition, in order: anchors; the given useful kets unchanged (anchor
    duplicates dropped, lightest kets dropped first if the budget is tight);
    up to ``cfg.resample_per_useful`` perturbed copies per surviving useful
    ket, spread round-robin; fresh Haar product kets filling up to
    ``cfg.pool_size``, never fewer than ``fresh_fraction * pool_size`` of
    them.  Pure function of its arguments: the same seed gives the same
    pool, and ``delta = 0`` makes perturbed copies exact duplicates.
    """
    anchors = anchor_kets(dim_a, dim_b)
    n_anchors = len(anchors)
    pool_size = cfg.pool_size
    fresh_min = int(np.ceil(cfg.fresh_fraction * pool_size))
    if pool_size < n_anchors + fresh_min:
        raise ValueError(
            f"pool_size {pool_size} cannot hold {n_anchors} anchors plus "
            f"{fresh_min} fresh draws"
        )

    anchor_vecs = np.array([a.vec for a in anchors])

    def matches_anchor(ket):
        v = ket.vec
        return any(np.array_equal(v, av) for av in anchor_vecs)

    anchor_like = [k for k in useful if matches_anchor(k)]
    outside = [k for k in useful if not matches_anchor(k)]
    keep = outside[: pool_size - n_anchors - fresh_min]
    parents = keep + anchor_like

    budget = pool_size - n_anchors - len(keep) - fresh_min
    slots = min(budget, cfg.resample_per_useful * len(parents))
    copies = [0] * len(parents)
    if parents:
        base, extra = divmod(slots, len(parents))
        copies = [base + (1 if i < extra else 0) for i in range(len(parents))]

    ss = np.random.SeedSequence(seed)
    child = ss.generate_state(max(slots, 0) + 1, dtype=np.uint64)
    perturbed = []
    pos = 0
    for parent, m in zip(parents, copies):
        for _ in range(m):
            perturbed.append(perturb_ket(parent, delta, int(child[pos])))
            pos += 1

    n_fresh = pool_size - n_anchors - len(keep) - len(perturbed)
    rng = np.random.default_rng(int(child[-1]))
    fresh = _fresh_kets(rng, n_fresh, dim_a, dim_b)

    kets = anchors + keep + perturbed + fresh
    return _assemble(dim_a, dim_b, kets, len(keep), len(perturbed), n_fresh)


def upper_bound(
    rho: DensityMatrix, cfg: ActiveLearningConfig = None, seed: int = 0
) -> UpperBoundReport:
    """Certified upper bound on the relative entropy of entanglement, in bits.

    Runs the outer active-learning loop: solve over the current pool, keep
    the vertices that earned weight, resample near them with perturbation
    strength ``delta0 * delta_decay^k`` floored at ``delta_floor``, and
    report the best round.  Every round's value is a valid upper bound, so
    the running minimum is too; a failed round (solver stall) simply leaves
    the best value where it was.

    Parameters
    ----------
    rho : DensityMatrix
        The state to bound.
    cfg : ActiveLearningConfig, optional
        Pool and solver knobs; defaults are the full-scale settings.
    seed : int
        Master seed; all pool randomness derives from it.

    Returns
    -------
    UpperBoundReport
        Best value in bits, the solution achieving it, and per-round history.
    """
    if cfg is None:
        cfg = ActiveLearningConfig()
    t0 = time.perf_counter()
    seeds = np.random.SeedSequence(seed).generate_state(
        cfg.outer_iterations + 1, dtype=np.uint64
    )
    pool = initial_pool(rho.dim_a, rho.dim_b, cfg.pool_size, int(seeds[0]))
    delta = 0.0
    best = None
    best_iter = -1
    history = []
    for k in range(cfg.outer_iterations):
        try:
            sol = solve_simplex(rho, pool, cfg)
        except RuntimeError:
            # One bad round must not kill the run: record it and rebuild
            # the pool from scratch (anchors plus fresh draws).
            sol = None
        if sol is None:
            history.append(
                IterationRecord(
                    index=k,
                    value_bits=float("inf"),
                    fw_gap_nats=float("inf"),
                    solver_iterations=0,
                    converged=False,
                    delta=delta,
                    n_useful=pool.n_useful,
                    n_perturbed=pool.n_perturbed,
                    n_fresh=pool.n_fresh,
                    pool_size=pool.size,
                )
            )
        else:
            history.append(
                IterationRecord(
                    index=k,
                    value_bits=sol.objective_nats / LN2,
                    fw_gap_nats=sol.fw_gap_nats,
                    solver_iterations=sol.iterations,
                    converged=sol.converged,
                    delta=delta,
                    n_useful=pool.n_useful,
                    n_perturbed=pool.n_perturbed,
                    n_fresh=pool.n_fresh,
                    pool_size=pool.size,
                )
            )
            if best is None or sol.objective_nats < best.objective_nats:
                best = sol
                best_iter = k
        if k + 1 < cfg.outer_iterations:
            delta = max(cfg.delta0 * cfg.delta_decay**k, cfg.delta_floor)
            if sol is None:
                useful = []
            else:
                idx = select_useful(sol, pool, cfg.weight_threshold)
                useful = [pool.kets[i] for i in idx]
            pool = resample(rho.dim_a, rho.dim_b, useful, cfg, delta, int(seeds[k + 1]))
    if best is None:
        raise RuntimeError("every outer round failed; no upper bound was produced")
    return UpperBoundReport(
        best_value_bits=best.objective_nats / LN2,
        best_iteration=best_iter,
        best_solution=best,
        history=tuple(history),
        wall_seconds=time.perf_counter() - t0,
        seed=seed,
        config=cfg,
    )
