"""Closed-form relative entropy of entanglement for named state families.

Values are reported in bits.  Each formula is exact for its family, so these
serve as ground truth when judging the numerical solvers.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import partial_trace_b, von_neumann_entropy

LN2 = float(np.log(2.0))


@dataclass(frozen=True)
class AnalyticValue:
    """A closed-form value in bits together with its provenance."""

    family: str
    params: dict = field(default_factory=dict)
    value_bits: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.value_bits) or self.value_bits < -1e-12:
            raise ValueError(f"value_bits must be finite and >= 0, got {self.value_bits}")

    @property
    def value_nats(self) -> float:
        return self.value_bits * LN2


def _binary_entropy_bits(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-(p * np.log2(p) + (1 - p) * np.log2(1 - p)))


def _check_cap(value: float, d: int) -> None:
    if value > np.log2(d) + 1e-9:
        raise ValueError(f"value {value} exceeds the log2({d}) cap for this family")


def _check_d(d: int) -> None:
    if d < 2:
        raise ValueError(f"local dimension d must be >= 2, got {d}")


def werner_threshold(d: int) -> float:
    """Largest alpha at which the d x d Werner state is separable: 1/d."""
    _check_d(d)
    return 1.0 / d


def isotropic_threshold(d: int) -> float:
    """Largest alpha at which the d x d isotropic state is separable: 1/(d+1).

    Derived from the partial-transpose boundary, which is tight for this
    family.  Note the value shrinks with d; quoting 1/3 independently of d
    overstates the separable region for every d >= 3.
    """
    _check_d(d)
    return 1.0 / (d + 1)


def werner_er(d: int, alpha: float) -> AnalyticValue:
    """Relative entropy of entanglement of the Werner state, in bits.

    Uses the swap expectation f = Tr(rho_W F) = (1 - alpha d) / (d - alpha);
    the state is separable when f >= 0, and otherwise the value is
    1 - H2((1 + f) / 2) bits.
    """
    _check_d(d)
    if not -1.0 <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [-1, 1]")
    f = (1.0 - alpha * d) / (d - alpha)
    value = 0.0 if f >= 0 else 1.0 - _binary_entropy_bits((1.0 + f) / 2.0)
    _check_cap(value, d)
    return AnalyticValue("werner", {"d": d, "alpha": alpha}, value)


def isotropic_er(d: int, alpha: float) -> AnalyticValue:
    """Relative entropy of entanglement of the isotropic state, in bits.

    In terms of the maximally entangled fraction F = (1 - alpha) / d^2 + alpha:
    zero when F <= 1/d, otherwise
    log2(d) - (1 - F) log2(d - 1) - H2(F).
    The leading term grows as log2(d), which the maximally entangled limit
    pins down: at alpha = 1 the value must equal log2(d).
    """
    _check_d(d)
    lo = -1.0 / (d * d - 1)
    if not lo <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [{lo:.6g}, 1]")
    big_f = (1.0 - alpha) / (d * d) + alpha
    if big_f <= 1.0 / d:
        value = 0.0
    else:
        log_dm1 = float(np.log2(d - 1)) if d > 2 else 0.0
        value = float(np.log2(d)) - (1.0 - big_f) * log_dm1 - _binary_entropy_bits(big_f)
    _check_cap(value, d)
    return AnalyticValue("isotropic", {"d": d, "alpha": alpha}, value)


def isotropic_er_flat_leading_term(d: int, alpha: float) -> float:
    """Variant of ``isotropic_er`` whose leading term stays at one bit.

    Kept for side-by-side comparison in verbose output: for d > 2 it fails
    the maximally entangled limit (which must reach log2(d) bits), so it is
    not used for reported values.
    """
    _check_d(d)
    lo = -1.0 / (d * d - 1)
    if not lo <= alpha <= 1.0:
        raise ValueError(f"alpha={alpha} outside [{lo:.6g}, 1]")
    big_f = (1.0 - alpha) / (d * d) + alpha
    if big_f <= 1.0 / d:
        return 0.0
    log_dm1 = float(np.log2(d - 1)) if d > 2 else 0.0
    return 1.0 - (1.0 - big_f) * log_dm1 - _binary_entropy_bits(big_f)


def pure_state_er(psi: np.ndarray, dim_a: int, dim_b: int) -> AnalyticValue:
    """Relative entropy of entanglement of a pure state: its entanglement entropy.

    Equals the von Neumann entropy of either reduced state, in bits.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape[0] != dim_a * dim_b:
        raise ValueError(
            f"ket length {psi.shape[0]} does not match dims ({dim_a}, {dim_b})"
        )
    n = np.linalg.norm(psi)
    if abs(n - 1.0) > 1e-10:
        raise ValueError(f"ket must have unit norm, got {n:.12g}")
    reduced = partial_trace_b(np.outer(psi, psi.conj()), dim_a, dim_b)
    value = max(von_neumann_entropy(reduced, base=2), 0.0)
    _check_cap(value, min(dim_a, dim_b))
    return AnalyticValue(
        "pure", {"dim_a": dim_a, "dim_b": dim_b}, value
    )
