"""Dense Hermitian linear algebra for small bipartite operators.

Everything works on complex ndarrays at dimensions where dense
eigendecompositions are cheap (total dimension <= 16 or so).  Logarithms
are natural; unit conversion happens only at reporting boundaries.
"""

import warnings
from typing import NamedTuple

import numpy as np

DEFAULT_LOG_FLOOR = 1e-14


class Spectral(NamedTuple):
    """Eigendecomposition of a Hermitian operator, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def check_hermitian(a: np.ndarray, atol: float = 1e-12) -> None:
    """Raise ValueError if ``a`` is not Hermitian within ``atol``."""
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    dev = np.abs(a - a.conj().T)
    worst = float(dev.max())
    if worst > atol:
        i, j = np.unravel_index(int(dev.argmax()), dev.shape)
        raise ValueError(
            f"matrix is not Hermitian: entries ({i},{j})={a[i, j]:.6g} and "
            f"({j},{i})={a[j, i]:.6g} disagree by {worst:.3e} (atol={atol:.1e})"
        )


def hermitian_eig(a: np.ndarray, atol: float = 1e-12) -> Spectral:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    check_hermitian(a, atol=atol)
    w, v = np.linalg.eigh(a)
    return Spectral(w, v)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two operators (or kets)."""
    return np.kron(a, b)


def matrix_log_floored(a: np.ndarray, floor: float = DEFAULT_LOG_FLOOR) -> np.ndarray:
    """Hermitian matrix logarithm with eigenvalues clamped to ``floor``.

    Eigenvalues below ``floor`` are treated as ``floor``, so the result is
    always finite.  Eigenvalues below ``-100 * floor`` trigger a positivity
    warning since the input is then materially non-PSD.
    """
    w, v = hermitian_eig(a)
    if w[0] < -100.0 * floor:
        warnings.warn(
            f"matrix_log_floored: eigenvalue {w[0]:.3e} is well below zero; "
            "input is not PSD",
            RuntimeWarning,
            stacklevel=2,
        )
    logw = np.log(np.maximum(w, floor))
    out = (v * logw) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def _log_phi(w: np.ndarray, floor: float) -> np.ndarray:
    """Divided-difference table of the floored log on clamped eigenvalues."""
    wc = np.maximum(w, floor)
    lw = np.log(wc)
    diff = wc[:, None] - wc[None, :]
    mean = 0.5 * (wc[:, None] + wc[None, :])
    close = np.abs(diff) <= 1e-8 * mean
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = (lw[:, None] - lw[None, :]) / diff
    phi[close] = (1.0 / mean)[close]
    return phi


def _frechet_log_eig(
    w: np.ndarray, v: np.ndarray, x: np.ndarray, floor: float
) -> np.ndarray:
    """Frechet derivative of the floored log at eig pair (w, v), applied to x."""
    phi = _log_phi(w, floor)
    xt = v.conj().T @ x @ v
    out = v @ (phi * xt) @ v.conj().T
    return 0.5 * (out + out.conj().T)


def frechet_log(
    a: np.ndarray, x: np.ndarray, floor: float = DEFAULT_LOG_FLOOR
) -> np.ndarray:
    """Frechet derivative of the matrix log at ``a`` in direction ``x``.

    Uses divided differences of the floored log over the eigenbasis of
    ``a``: off the diagonal ``(log u - log v) / (u - v)``, on the diagonal
    ``1 / u``.  Eigenvalues of ``a`` are clamped to ``floor`` first.

    Parameters
    ----------
    a : ndarray
        Hermitian base point, expected positive definite after flooring.
    x : ndarray
        Hermitian direction, same dimension as ``a``.
    floor : float
        Eigenvalue clamp applied to ``a``.

    Returns
    -------
    ndarray
        Hermitian matrix ``D log(a)[x]``.
    """
    if a.shape != x.shape:
        raise ValueError(f"dimension mismatch: a is {a.shape}, x is {x.shape}")
    check_hermitian(x)
    w, v = hermitian_eig(a)
    return _frechet_log_eig(w, v, x, floor)


def partial_transpose(a: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """Transpose the second tensor factor of a bipartite operator."""
    d = dim_a * dim_b
    if a.shape != (d, d):
        raise ValueError(
            f"operator shape {a.shape} does not match dims ({dim_a}, {dim_b})"
        )
    t = a.reshape(dim_a, dim_b, dim_a, dim_b)
    return t.transpose(0, 3, 2, 1).reshape(d, d)


def partial_trace_b(a: np.ndarray, dim_a: int, dim_b: int) -> np.ndarray:
    """Trace out the second tensor factor, returning a dim_a x dim_a operator."""
    d = dim_a * dim_b
    if a.shape != (d, d):
        raise ValueError(
            f"operator shape {a.shape} does not match dims ({dim_a}, {dim_b})"
        )
    t = a.reshape(dim_a, dim_b, dim_a, dim_b)
    return np.einsum("ijkj->ik", t)


def von_neumann_entropy(
    rho: np.ndarray, base: float = 2, floor: float = DEFAULT_LOG_FLOOR
) -> float:
    """Von Neumann entropy -Tr(rho log rho), eigenvalues below floor dropped."""
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    w = w[w > floor]
    return float(-(w @ np.log(w)) / np.log(base))


def relative_entropy(
    rho: np.ndarray,
    sigma: np.ndarray,
    base: float = 2,
    floor: float = DEFAULT_LOG_FLOOR,
) -> float:
    """Quantum relative entropy S(rho || sigma) with floored logarithms.

    Computes ``Tr(rho log rho) - Tr(rho log sigma)`` where both logs clamp
    eigenvalues at ``floor``, so the result is always finite.  If ``rho``
    places weight on the sub-floor eigenspace of ``sigma`` (a support
    violation, infinite in exact arithmetic) the value is large but finite
    and a RuntimeWarning is emitted.

    Parameters
    ----------
    rho, sigma : ndarray
        Density matrices of equal dimension, unit trace.
    base : float
        Reporting base, 2 for bits or ``np.e`` for nats.
    floor : float
        Eigenvalue clamp applied inside every logarithm.
    """
    if rho.shape != sigma.shape:
        raise ValueError(
            f"dimension mismatch: rho is {rho.shape}, sigma is {sigma.shape}"
        )
    for name, m in (("rho", rho), ("sigma", sigma)):
        tr = np.trace(m)
        if abs(tr - 1.0) > 1e-8:
            raise ValueError(f"{name} must have unit trace, got {tr:.12g}")
    wr = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    wr_pos = wr[wr > floor]
    tr_rho_log_rho = float(wr_pos @ np.log(wr_pos))

    ws, vs = np.linalg.eigh(0.5 * (sigma + sigma.conj().T))
    overlaps = np.real(np.einsum("ji,jk,ki->i", vs.conj(), rho, vs))
    sub = ws < floor
    if np.any(sub):
        leak = float(overlaps[sub].sum())
        if leak > 1e-12:
            warnings.warn(
                f"support violation: rho places weight {leak:.3e} outside the "
                "support of sigma; returning a floored finite value",
                RuntimeWarning,
                stacklevel=2,
            )
    tr_rho_log_sigma = float(overlaps @ np.log(np.maximum(ws, floor)))
    return (tr_rho_log_rho - tr_rho_log_sigma) / float(np.log(base))


def trace_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Real part of the trace inner product Tr(a b)."""
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: a is {a.shape}, b is {b.shape}")
    return float(np.real(np.sum(a * b.T)))
