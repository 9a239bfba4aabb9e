"""Renyi entropies, sandwiched divergences, and the order gap.

The max-divergence (alpha = infinity limit of the sandwiched family) has a
closed form log ||rho^-1/2 sigma rho^-1/2|| and detects the
positive-evidence order exactly: the gap against the log-ratio of top
eigenvalues vanishes precisely when the order holds. The same quantity is
an operationally attainable bound on measurement distinguishability ratios.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, ToleranceConfig
from .exceptions import BadAlpha, DimensionMismatch
from .linalg import OrderVerdict, eig, matrix_power, operator_norm
from .orders import as_probability_vector, qpe_leq
from .states import DensityMatrix, Effect, kernel, matrix_of, top_eigenvalue


@dataclass(frozen=True)
class DivergenceValue:
    """A divergence with the parameters that produced it."""

    value: float
    alpha: float
    log_base: str
    support_violation: bool = False


def renyi_entropy(rho: DensityMatrix, alpha: float,
                  cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Renyi entropy of order alpha; alpha = 1 is von Neumann, inf is min-entropy."""
    if not alpha > 0:
        raise BadAlpha(f"order must be positive, got {alpha}")
    lam = np.clip(rho.eigenvalues, 0.0, None)
    if np.isinf(alpha):
        return float(-cfg.log(lam.max()))
    if alpha == 1:
        live = lam > 0
        return float(-(lam[live] * cfg.log(lam[live])).sum())
    return float(cfg.log((lam[lam > 0] ** alpha).sum()) / (1.0 - alpha))


def max_divergence(sigma: DensityMatrix, rho: DensityMatrix,
                   cfg: ToleranceConfig = DEFAULT_CONFIG) -> DivergenceValue:
    """D_inf(sigma || rho) = log || rho^-1/2 sigma rho^-1/2 ||.

    Infinite when sigma has weight outside rho's support.
    """
    if sigma.dim != rho.dim:
        raise DimensionMismatch("state dimensions differ")
    if _support_escapes(sigma, rho, cfg):
        return DivergenceValue(np.inf, np.inf, cfg.log_base, support_violation=True)
    inv_half = matrix_power(rho.matrix, -0.5, cfg)
    sandwich = inv_half @ sigma.matrix @ inv_half
    sandwich = (sandwich + sandwich.conj().T) / 2.0
    return DivergenceValue(float(cfg.log(operator_norm(sandwich))),
                           np.inf, cfg.log_base)


def renyi_divergence(sigma: DensityMatrix, rho: DensityMatrix, alpha: float,
                     cfg: ToleranceConfig = DEFAULT_CONFIG) -> DivergenceValue:
    """Sandwiched Renyi divergence D_alpha(sigma || rho).

    alpha = 1 is the standard relative entropy, alpha = inf the
    max-divergence, alpha = 1/2 gives -log of the squared fidelity.
    """
    if not alpha > 0:
        raise BadAlpha(f"order must be positive, got {alpha}")
    if sigma.dim != rho.dim:
        raise DimensionMismatch("state dimensions differ")
    if np.isinf(alpha):
        return max_divergence(sigma, rho, cfg)
    escapes = _support_escapes(sigma, rho, cfg)
    if alpha >= 1 and escapes:
        return DivergenceValue(np.inf, alpha, cfg.log_base, support_violation=True)
    if alpha == 1:
        return _umegaki(sigma, rho, cfg)
    exponent = (1.0 - alpha) / (2.0 * alpha)
    half = matrix_power(rho.matrix, exponent, cfg)
    inner = half @ sigma.matrix @ half
    inner = (inner + inner.conj().T) / 2.0
    w = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    total = (w[w > 0] ** alpha).sum()
    if total <= 0:
        # disjoint supports with alpha < 1
        return DivergenceValue(np.inf, alpha, cfg.log_base, support_violation=True)
    return DivergenceValue(float(cfg.log(total) / (alpha - 1.0)),
                           alpha, cfg.log_base)


def _umegaki(sigma, rho, cfg):
    w_s, V_s = eig(sigma.matrix)
    w_r, V_r = eig(rho.matrix)
    w_s = np.clip(w_s, 0.0, None)
    w_r = np.clip(w_r, 0.0, None)
    live = w_s > 0
    ent = (w_s[live] * cfg.log(w_s[live])).sum()
    # tr sigma log rho through the overlap matrix, restricted to rho's support
    overlap = np.abs(V_s.conj().T @ V_r) ** 2
    log_r = np.where(w_r > 0, cfg.log(np.where(w_r > 0, w_r, 1.0)), 0.0)
    cross = (w_s[:, None] * overlap * log_r[None, :]).sum()
    return DivergenceValue(float(ent - cross), 1.0, cfg.log_base)


def _support_escapes(sigma, rho, cfg) -> bool:
    ker = kernel(rho, cfg)
    if ker.dim == 0:
        return False
    K = ker.basis
    mass = float(operator_norm(K.conj().T @ sigma.matrix @ K))
    return mass > cfg.rank_cutoff * max(top_eigenvalue(sigma), 1e-300)


def classical_max_divergence(x, y, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Max-divergence of probability vectors: log max_i x_i / y_i."""
    xv = as_probability_vector(x)
    yv = as_probability_vector(y)
    if xv.size != yv.size:
        raise DimensionMismatch("vectors differ in length")
    cutoff = cfg.rank_cutoff
    if np.any((xv > cutoff) & (yv <= cutoff)):
        return np.inf
    live = xv > cutoff
    if not np.any(live):
        return -np.inf
    return float(cfg.log((xv[live] / yv[live]).max()))


def povm_distinguishability_lower_bound(
    sigma: DensityMatrix,
    rho: DensityMatrix,
    trials: int = 64,
    seed: int = 0,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> float:
    """Best log-ratio log tr(sigma M) / tr(rho M) over a measurement family.

    The family includes the warped projectors that attain the max-divergence
    when supports align, so the bound is tight for full-rank rho; it is a
    certified lower bound in general because every candidate is a bona fide
    effect.
    """
    if sigma.dim != rho.dim:
        raise DimensionMismatch("state dimensions differ")
    n = rho.dim
    rng = np.random.default_rng(seed)
    candidates: list[np.ndarray] = []
    for i in range(n):
        P = np.zeros((n, n), dtype=complex)
        P[i, i] = 1.0
        candidates.append(P)
    inv_half = matrix_power(rho.matrix, -0.5, cfg)
    sandwich = inv_half @ sigma.matrix @ inv_half
    sandwich = (sandwich + sandwich.conj().T) / 2.0
    _, vecs = eig(sandwich)
    for j in range(n):
        v = vecs[:, j]
        candidates.append(np.outer(v, v.conj()))
        u = inv_half @ v
        nu = np.linalg.norm(u)
        if nu > 1e-12:
            u = u / nu
            candidates.append(np.outer(u, u.conj()))
    ker = kernel(rho, cfg)
    if ker.dim > 0:
        K = ker.basis
        candidates.append(K @ K.conj().T)
    for _ in range(trials):
        G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        H = G @ G.conj().T
        candidates.append(H / operator_norm(H))
    best = -np.inf
    tol = cfg.rank_cutoff
    for M in candidates:
        p_rho = float(np.trace(rho.matrix @ M).real)
        p_sig = float(np.trace(sigma.matrix @ M).real)
        if p_rho <= tol:
            if p_sig > max(10 * tol, 1e-10):
                return np.inf
            continue
        if p_sig <= 0:
            continue
        best = max(best, float(cfg.log(p_sig) - cfg.log(p_rho)))
    return best


def order_divergence_gap(rho: DensityMatrix, sigma: DensityMatrix,
                         cfg: ToleranceConfig = DEFAULT_CONFIG,
                         ) -> tuple[float, OrderVerdict]:
    """Gap D_inf(sigma || rho) - log(sigma+ / rho+), paired with the order verdict.

    Nonnegative always; zero exactly when rho is below sigma.
    """
    div = max_divergence(sigma, rho, cfg)
    ratio = float(cfg.log(top_eigenvalue(sigma)) - cfg.log(top_eigenvalue(rho)))
    verdict = qpe_leq(rho, sigma, cfg)
    if np.isinf(div.value):
        return np.inf, verdict
    return div.value - ratio, verdict


def effect_probability(state: DensityMatrix, effect: Effect) -> float:
    """Born probability tr(E rho)."""
    if state.dim != effect.dim:
        raise DimensionMismatch("state and effect dimensions differ")
    return float(np.trace(matrix_of(effect) @ state.matrix).real)
