"""Bipartite density matrices, named state families, and product-state sampling.

States live on a tensor product A (x) B with row-major index (i, j) -> i * dim_b + j.
All random constructors are pure functions of an explicit 64-bit seed.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import check_hermitian, partial_transpose


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A bipartite density matrix with its tensor factorization.

    Invariants checked at construction: Hermitian, unit trace within 1e-10,
    minimum eigenvalue >= -1e-10.
    """

    dim_a: int
    dim_b: int
    mat: np.ndarray

    def __post_init__(self):
        d = self.dim_a * self.dim_b
        if self.dim_a < 2 or self.dim_b < 2:
            raise ValueError("both local dimensions must be at least 2")
        if self.mat.shape != (d, d):
            raise ValueError(
                f"matrix shape {self.mat.shape} does not match dims "
                f"({self.dim_a}, {self.dim_b})"
            )
        check_hermitian(self.mat, atol=1e-10)
        tr = self.mat.trace()
        if abs(tr - 1.0) > 1e-10:
            raise ValueError(f"trace must be 1, got {tr:.12g}")
        w_min = float(np.linalg.eigvalsh(self.mat)[0])
        if w_min < -1e-10:
            raise ValueError(f"matrix is not PSD: minimum eigenvalue {w_min:.3e}")

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


@dataclass(frozen=True, eq=False)
class ProductKet:
    """A pure product ket, stored as its two unit-norm local factors."""

    ket_a: np.ndarray
    ket_b: np.ndarray

    def __post_init__(self):
        for name, k in (("ket_a", self.ket_a), ("ket_b", self.ket_b)):
            if k.ndim != 1:
                raise ValueError(f"{name} must be a vector, got shape {k.shape}")
            n = np.linalg.norm(k)
            if abs(n - 1.0) > 1e-12:
                raise ValueError(f"{name} must have unit norm, got {n:.15g}")

    @property
    def vec(self) -> np.ndarray:
        """The joint ket in the product basis."""
        return np.kron(self.ket_a, self.ket_b)


def as_density_matrix(x, dims=None, trace_atol: float = 1e-8) -> DensityMatrix:
    """Coerce an array (or pass through a DensityMatrix) after validation.

    Arrays need ``dims=(dim_a, dim_b)``.  A trace within ``trace_atol`` of 1
    is renormalized exactly; anything further off is rejected.
    """
    if isinstance(x, DensityMatrix):
        return x
    mat = np.asarray(x, dtype=complex)
    if dims is None:
        raise ValueError("dims=(dim_a, dim_b) is required for array input")
    dim_a, dim_b = int(dims[0]), int(dims[1])
    tr = mat.trace() if mat.ndim == 2 and mat.shape[0] == mat.shape[1] else None
    if tr is not None:
        if abs(tr - 1.0) > trace_atol:
            raise ValueError(f"trace must be within {trace_atol:g} of 1, got {tr:.12g}")
        mat = mat / tr
    return DensityMatrix(dim_a, dim_b, mat)


def swap_operator(d: int) -> np.ndarray:
    """The swap F = sum_ij |ij><ji| on a d x d bipartite space."""
    f = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            f[i * d + j, j * d + i] = 1.0
    return f


def max_entangled(d: int) -> DensityMatrix:
    """Projector onto the maximally entangled ket sum_j |jj> / sqrt(d)."""
    psi = np.zeros(d * d, dtype=complex)
    psi[:: d + 1] = 1.0 / np.sqrt(d)
    return DensityMatrix(d, d, np.outer(psi, psi.conj()))


def werner(d: int, alpha: float) -> DensityMatrix:
    """Werner state (I - alpha F) / (d^2 - d alpha), alpha in [-1, 1]."""
    if not -1.0 <= alpha <= 1.0:
        raise ValueError(
            f"alpha={alpha} gives a negative eigenvalue; need -1 <= alpha <= 1"
        )
    f = swap_operator(d)
    mat = (np.eye(d * d, dtype=complex) - alpha * f) / (d * d - d * alpha)
    return DensityMatrix(d, d, mat)


def isotropic(d: int, alpha: float) -> DensityMatrix:
    """Isotropic state (1 - alpha) I / d^2 + alpha |psi+><psi+|."""
    lo = -1.0 / (d * d - 1)
    if not lo <= alpha <= 1.0:
        raise ValueError(
            f"alpha={alpha} gives a negative eigenvalue; need {lo:.6g} <= alpha <= 1"
        )
    mat = (1 - alpha) * np.eye(d * d, dtype=complex) / (d * d) + alpha * max_entangled(
        d
    ).mat
    return DensityMatrix(d, d, mat)


def _tiles_kets() -> np.ndarray:
    """The five orthonormal product kets of the 3x3 tiles construction."""
    e = np.eye(3, dtype=complex)
    s = np.ones(3, dtype=complex) / np.sqrt(3)
    r2 = 1 / np.sqrt(2)
    rows = [
        np.kron(e[0], r2 * (e[0] - e[1])),
        np.kron(e[2], r2 * (e[1] - e[2])),
        np.kron(r2 * (e[0] - e[1]), e[2]),
        np.kron(r2 * (e[1] - e[2]), e[0]),
        np.kron(s, s),
    ]
    return np.array(rows)


def tiles_state() -> DensityMatrix:
    """Bound entangled 3x3 state built on the tiles unextendible product basis.

    The five tile kets span a product-free subspace; the normalized projector
    onto its complement is PPT yet entangled.
    """
    v = _tiles_kets()
    proj = v.T @ v.conj()
    mat = (np.eye(9, dtype=complex) - proj) / 4.0
    return DensityMatrix(3, 3, mat)


def tiles_family(alpha: float) -> DensityMatrix:
    """Interpolation alpha * tiles + (1 - alpha) I / 9, alpha in [0, 1]."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [0, 1]")
    mat = alpha * tiles_state().mat + (1 - alpha) * np.eye(9, dtype=complex) / 9.0
    return DensityMatrix(3, 3, mat)


def random_density(dim_a: int, dim_b: int, rank=None, seed: int = 0) -> DensityMatrix:
    """Random density matrix G G^dag / Tr from a complex Gaussian G.

    ``rank`` columns of G set the maximum rank; default is full rank.
    Deterministic given the seed.
    """
    d = dim_a * dim_b
    if rank is None:
        rank = d
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    mat = g @ g.conj().T
    mat /= mat.trace().real
    return DensityMatrix(dim_a, dim_b, 0.5 * (mat + mat.conj().T))


def random_entangled(
    dim_a: int, dim_b: int, seed: int = 0, max_tries: int = 1000
) -> DensityMatrix:
    """Rejection-sample full-rank random states until one fails the PPT test."""
    child = np.random.SeedSequence(seed).generate_state(max_tries, dtype=np.uint64)
    for k in range(max_tries):
        rho = random_density(dim_a, dim_b, seed=int(child[k]))
        if not is_ppt(rho):
            return rho
    raise RuntimeError(
        f"no NPT state found in {max_tries} tries at {dim_a}x{dim_b}; "
        "the separable volume may dominate at this dimension"
    )


def _normalized_rows(rows: np.ndarray) -> np.ndarray:
    return rows / np.linalg.norm(rows, axis=1, keepdims=True)


def random_product_ket(dim_a: int, dim_b: int, seed: int = 0) -> ProductKet:
    """Haar-random product ket via normalized complex Gaussian local factors."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(dim_a) + 1j * rng.standard_normal(dim_a)
    b = rng.standard_normal(dim_b) + 1j * rng.standard_normal(dim_b)
    return ProductKet(a / np.linalg.norm(a), b / np.linalg.norm(b))


def _gue(rng, d: int) -> np.ndarray:
    """GUE draw: unit-variance entries, spectral radius O(sqrt(d))."""
    a = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    return (a + a.conj().T) / np.sqrt(2)


def _local_unitary(rng, d: int, delta: float) -> np.ndarray:
    w, v = np.linalg.eigh(_gue(rng, d))
    return (v * np.exp(-1j * delta * w)) @ v.conj().T


def perturb_ket(ket: ProductKet, delta: float, seed: int = 0) -> ProductKet:
    """Rotate each local factor by exp(-i H delta) with independent GUE H.

    ``delta = 0`` returns the input unchanged, bit for bit.
    """
    if delta < 0:
        raise ValueError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        return ket
    rng = np.random.default_rng(seed)
    ua = _local_unitary(rng, ket.ket_a.shape[0], delta)
    ub = _local_unitary(rng, ket.ket_b.shape[0], delta)
    return ProductKet(ua @ ket.ket_a, ub @ ket.ket_b)


def is_ppt(rho: DensityMatrix, tol: float = 1e-10) -> bool:
    """True when the partial transpose has no eigenvalue below -tol."""
    pt = partial_transpose(rho.mat, rho.dim_a, rho.dim_b)
    return float(np.linalg.eigvalsh(pt)[0]) >= -tol


def product_projector(ket: ProductKet) -> DensityMatrix:
    """Rank-1 density matrix |a b><a b| of a product ket."""
    v = ket.vec
    return DensityMatrix(
        ket.ket_a.shape[0], ket.ket_b.shape[0], np.outer(v, v.conj())
    )
