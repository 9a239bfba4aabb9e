"""Positive-evidence order predicates on probability vectors and states.

The central relation compares states after rescaling by their top eigenvalue:
rho is below sigma when sigma+ rho - rho+ sigma is PSD. Variants swap the
rescaling functional (least nonzero eigenvalue, general norms) or relax the
matrix inequality.
"""
from __future__ import annotations

import warnings

import numpy as np

from .config import DEFAULT_CONFIG, ToleranceConfig
from .exceptions import BadParameter, DimensionMismatch, InvalidState, NonpositiveScalar
from .linalg import FAILS, HOLDS, MARGINAL, OrderVerdict, is_psd, schatten_norm
from .states import (
    DensityMatrix,
    bottom_eigenspace_nonzero,
    kernel,
    matrix_of,
    subspace_intersects,
    top_eigenvalue,
)

__all__ = [
    "OrderVerdict",
    "as_probability_vector",
    "classical_pe_leq",
    "qpe_leq",
    "lev_leq",
    "primed_leq",
    "f_renormalized_leq",
    "majorizes",
]


def as_probability_vector(x) -> np.ndarray:
    """Validate and normalize a probability vector.

    Entries may dip to -1e-12 (clipped to 0); the sum may be off by up to
    1e-6 (renormalized with a warning).
    """
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.size == 0:
        raise InvalidState("empty probability vector")
    if v.min() < -1e-12:
        raise InvalidState(f"negative entry {v.min():.3e} in probability vector")
    v = np.clip(v, 0.0, None)
    total = v.sum()
    if abs(total - 1.0) >= 1e-6:
        raise InvalidState(f"probability vector sums to {total}")
    if abs(total - 1.0) > 1e-9:
        warnings.warn(f"renormalizing probability vector off by {total - 1.0:.2e}",
                      stacklevel=2)
    return v / total


def classical_pe_leq(x, y, cfg: ToleranceConfig = DEFAULT_CONFIG) -> OrderVerdict:
    """x below y iff y_i / y+ <= x_i / x+ for every component.

    Computed as the cross-multiplied margin min_i (x_i y+ - y_i x+), which
    doubles as the verdict slack.
    """
    xv = as_probability_vector(x)
    yv = as_probability_vector(y)
    if xv.size != yv.size:
        raise DimensionMismatch("probability vectors differ in length")
    margins = xv * yv.max() - yv * xv.max()
    slack = float(margins.min())
    if slack >= -cfg.psd_slack:
        return OrderVerdict(HOLDS, slack)
    if slack < -10.0 * cfg.psd_slack:
        witness = np.zeros(xv.size)
        witness[int(margins.argmin())] = 1.0
        return OrderVerdict(FAILS, slack, witness=witness)
    return OrderVerdict(MARGINAL, slack)


def qpe_leq(rho, sigma, cfg: ToleranceConfig = DEFAULT_CONFIG) -> OrderVerdict:
    """Positive-evidence order: sigma+ rho - rho+ sigma PSD."""
    R = matrix_of(rho)
    S = matrix_of(sigma)
    if R.shape != S.shape:
        raise DimensionMismatch(f"state shapes differ: {R.shape} vs {S.shape}")
    M = top_eigenvalue(sigma) * R - top_eigenvalue(rho) * S
    return is_psd(M, cfg)


def lev_leq(rho, sigma, cfg: ToleranceConfig = DEFAULT_CONFIG) -> OrderVerdict:
    """Least-nonzero-eigenvalue order.

    Two ways to be below: equal kernels with rho- sigma - sigma- rho PSD,
    or a strictly larger kernel on sigma that absorbs part of rho's bottom
    eigenspace. The second route is structural, so its slack is 0.
    """
    R = matrix_of(rho)
    S = matrix_of(sigma)
    if R.shape != S.shape:
        raise DimensionMismatch(f"state shapes differ: {R.shape} vs {S.shape}")
    ker_r = kernel(rho, cfg)
    ker_s = kernel(sigma, cfg)

    if ker_r.dim == ker_s.dim:
        same = ker_r.dim == 0 or subspace_equal(ker_r.basis, ker_s.basis)
        if same:
            r_min = bottom_eigenspace_nonzero(rho, cfg).eigenvalue
            s_min = bottom_eigenspace_nonzero(sigma, cfg).eigenvalue
            return is_psd(r_min * S - s_min * R, cfg)
        return OrderVerdict(FAILS, -1.0)

    if ker_s.dim > ker_r.dim:
        contained = ker_r.dim == 0 or _contained_in(ker_r.basis, ker_s.basis)
        if contained and subspace_intersects(
            bottom_eigenspace_nonzero(rho, cfg), ker_s, cfg
        ):
            return OrderVerdict(HOLDS, 0.0)
    return OrderVerdict(FAILS, -1.0)


def subspace_equal(A: np.ndarray, B: np.ndarray, atol: float = 1e-8) -> bool:
    if A.shape[1] != B.shape[1]:
        return False
    PA = A @ A.conj().T
    PB = B @ B.conj().T
    return bool(np.abs(PA - PB).max(initial=0.0) <= atol)


def _contained_in(A: np.ndarray, B: np.ndarray, atol: float = 1e-8) -> bool:
    """Whether span(A) is a subspace of span(B)."""
    PB = B @ B.conj().T
    return bool(np.abs(PB @ A - A).max(initial=0.0) <= atol)


def primed_leq(rho, sigma, cfg: ToleranceConfig = DEFAULT_CONFIG) -> OrderVerdict:
    """Relaxed order: sigma - rho <= (sigma+ - rho+) I."""
    R = matrix_of(rho)
    S = matrix_of(sigma)
    if R.shape != S.shape:
        raise DimensionMismatch(f"state shapes differ: {R.shape} vs {S.shape}")
    gap = top_eigenvalue(sigma) - top_eigenvalue(rho)
    M = gap * np.eye(R.shape[0]) - (S - R)
    return is_psd(M, cfg)


def _renorm_scalar(f, X) -> float:
    """Evaluate a renormalization functional from the small catalog."""
    if f == "op_norm":
        val = schatten_norm(X, np.inf)
    elif isinstance(f, (tuple, list)) and len(f) == 3 and f[0] == "schatten":
        _, p, r = f
        val = schatten_norm(X, p) ** r
    else:
        raise BadParameter(
            f"unknown functional {f!r}; use 'op_norm' or ('schatten', p, r)"
        )
    if not val > 0.0:
        raise NonpositiveScalar(f"functional {f!r} returned {val}")
    return float(val)


def f_renormalized_leq(rho, sigma, f, cfg: ToleranceConfig = DEFAULT_CONFIG) -> OrderVerdict:
    """Order induced by an alternative rescaling: f(sigma) rho - f(rho) sigma PSD."""
    R = matrix_of(rho)
    S = matrix_of(sigma)
    if R.shape != S.shape:
        raise DimensionMismatch(f"state shapes differ: {R.shape} vs {S.shape}")
    M = _renorm_scalar(f, S) * R - _renorm_scalar(f, R) * S
    return is_psd(M, cfg)


def majorizes(x, y, atol: float = 1e-12) -> bool:
    """Whether x majorizes y: descending prefix sums of x dominate y's."""
    xv = as_probability_vector(x)
    yv = as_probability_vector(y)
    if xv.size != yv.size:
        raise DimensionMismatch("probability vectors differ in length")
    cx = np.cumsum(np.sort(xv)[::-1])
    cy = np.cumsum(np.sort(yv)[::-1])
    return bool(np.all(cx >= cy - atol))


def eigenvalue_shadow(rho: DensityMatrix) -> np.ndarray:
    """Descending spectrum of a state, as a probability vector."""
    return np.clip(rho.eigenvalues, 0.0, None)
