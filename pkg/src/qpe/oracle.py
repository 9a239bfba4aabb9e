"""Independent verification routes and stored counterexamples.

Everything here deliberately avoids the main code paths: positivity is
probed by Rayleigh quotients instead of an eigensolver, the diagonal order
by elementwise division instead of cross-multiplication, and entropies by
the direct sum formula. A disagreement between these routes and the main
library is a bug in one of them, never a tolerance artifact to be absorbed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_CONFIG, ToleranceConfig
from .exceptions import DegenerateDraw, DimensionMismatch
from .linalg import FAILS, HOLDS, MARGINAL, OrderVerdict
from .orders import majorizes, qpe_leq
from .states import DensityMatrix


@dataclass(frozen=True)
class ProbeResult:
    """One-sided positivity probe: violated means certainly not PSD."""

    violated: bool
    min_quotient: float
    trials: int


def psd_probe(A, trials: int = 200, seed: int = 0,
              slack: float = 1e-9) -> ProbeResult:
    """Hunt for a negative Rayleigh quotient without an eigensolver.

    Samples random unit vectors and the coordinate directions; finding
    v* A v below the noise floor certifies non-positivity, finding nothing
    is inconclusive.
    """
    M = np.asarray(A, dtype=complex)
    n = M.shape[0]
    rng = np.random.default_rng(seed)
    floor = -10.0 * slack * max(1.0, float(np.linalg.norm(M)))
    worst = np.inf
    for i in range(n):
        worst = min(worst, float(M[i, i].real))
    for _ in range(trials):
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v = v / np.linalg.norm(v)
        worst = min(worst, float(np.vdot(v, M @ v).real))
    return ProbeResult(worst < floor, worst, trials)


def diagonal_order_oracle(x, y, slack: float = 1e-9) -> OrderVerdict:
    """Order check on probability vectors by dividing out the peaks.

    Forms the ratios y_i / y_max and x_i / x_max directly and compares them,
    a different arithmetic route from the cross-multiplied form used by the
    library predicate.
    """
    xv = np.asarray(x, dtype=float).reshape(-1)
    yv = np.asarray(y, dtype=float).reshape(-1)
    if xv.size != yv.size:
        raise DimensionMismatch("vectors differ in length")
    x_top = xv.max()
    y_top = yv.max()
    margin = np.inf
    for xi, yi in zip(xv, yv):
        if xi <= 0.0:
            if yi > 0.0:
                margin = min(margin, -yi / y_top)
            continue
        margin = min(margin, xi / x_top - yi / y_top)
    if margin >= -slack:
        return OrderVerdict(HOLDS, float(margin))
    if margin < -10.0 * slack:
        return OrderVerdict(FAILS, float(margin))
    return OrderVerdict(MARGINAL, float(margin))


def shannon_entropy(p, base: str = "natural") -> float:
    """Direct -sum p log p, bypassing any matrix machinery."""
    pv = np.asarray(p, dtype=float).reshape(-1)
    live = pv > 0
    logs = np.log2(pv[live]) if base == "two" else np.log(pv[live])
    return float(-(pv[live] * logs).sum())


@dataclass
class PartialTraceReport:
    """A verified instance where discarding a subsystem breaks the order."""

    dim: int
    t: float
    seed: int
    rho: np.ndarray
    pure_target: np.ndarray
    order_verdict: OrderVerdict
    marginal_rho: np.ndarray
    marginal_deviation: float
    monotone_broken: bool


def partial_trace_counterexample(n: int = 2, t: float = 0.5, seed: int = 9,
                                 cfg: ToleranceConfig = DEFAULT_CONFIG,
                                 ) -> PartialTraceReport:
    """Build a state below a maximally entangled one with a non-bottom marginal.

    The target's marginal is the maximally mixed state, the bottom of the
    order, and nothing but the bottom sits below it; so any below-target
    state whose marginal moves away from the bottom witnesses that the
    partial trace is not monotone.
    """
    rng = np.random.default_rng(seed)
    m = np.eye(n).reshape(-1) / np.sqrt(n)
    P = np.outer(m, m.conj())
    G = rng.standard_normal((n * n, n * n)) + 1j * rng.standard_normal((n * n, n * n))
    G[:, 0] = m
    Q, _ = np.linalg.qr(G)
    comp = Q[:, 1:]
    H = rng.standard_normal((n * n - 1,) * 2) + 1j * rng.standard_normal((n * n - 1,) * 2)
    body = H @ H.conj().T
    A = comp @ (body / np.trace(body).real) @ comp.conj().T
    rho_raw = t * P + (1.0 - t) * A
    rho = DensityMatrix(rho_raw, cfg)
    target = DensityMatrix(P, cfg)
    verdict = qpe_leq(rho, target, cfg)
    marginal = rho_raw.reshape(n, n, n, n).trace(axis1=1, axis2=3)
    deviation = float(np.abs(marginal - np.eye(n) / n).max())
    if deviation < 1e-3:
        raise DegenerateDraw("marginal landed on the bottom; re-seed")
    return PartialTraceReport(
        dim=n, t=t, seed=seed,
        rho=rho.matrix, pure_target=target.matrix,
        order_verdict=verdict,
        marginal_rho=marginal,
        marginal_deviation=deviation,
        monotone_broken=bool(verdict.holds and deviation > 1e-3),
    )


@dataclass
class CounterexampleReport:
    """A stored pair with the claims it witnesses and a stability flag."""

    name: str
    lower: np.ndarray
    upper: np.ndarray
    checks: dict[str, bool] = field(default_factory=dict)
    values: dict[str, float] = field(default_factory=dict)
    stable: bool = False
    witnessed: bool = False


ORDER_NOT_MAJORIZATION = (
    np.array([0.46, 0.46, 0.08]),
    np.array([0.70, 0.20, 0.10]),
)

ENTROPY_UP_THE_ORDER = (
    np.array([30.0, 29.0, 11.0, 10.0]) / 80.0,
    np.array([34.0, 23.0, 12.0, 11.0]) / 80.0,
)


def _perturbed(v: np.ndarray, eps: float, sign: float) -> np.ndarray:
    out = v + sign * eps * np.linspace(1.0, 2.0, v.size)
    return out / out.sum()


def counterexample_suite(cfg: ToleranceConfig = DEFAULT_CONFIG,
                         eps: float = 1e-12) -> list[CounterexampleReport]:
    """Replay the stored counterexamples and re-verify every claim.

    Each pair is checked through the independent diagonal oracle, then
    perturbed at the stated scale to confirm the phenomena are not knife-edge
    artifacts.
    """
    reports = []

    x, y = ORDER_NOT_MAJORIZATION
    checks = {
        "order_holds": diagonal_order_oracle(x, y).holds,
        "upper_majorizes_lower": majorizes(y, x),
        "lower_majorizes_upper": majorizes(x, y),
    }
    stable = all(
        diagonal_order_oracle(_perturbed(x, eps, sx), _perturbed(y, eps, sy)).holds
        and not majorizes(_perturbed(y, eps, sy), _perturbed(x, eps, sx))
        and not majorizes(_perturbed(x, eps, sx), _perturbed(y, eps, sy))
        for sx in (-1.0, 1.0) for sy in (-1.0, 1.0)
    )
    reports.append(CounterexampleReport(
        name="order-without-majorization",
        lower=x, upper=y, checks=checks,
        values={"order_margin": diagonal_order_oracle(x, y).slack},
        stable=stable,
        witnessed=(checks["order_holds"]
                   and not checks["upper_majorizes_lower"]
                   and not checks["lower_majorizes_upper"]),
    ))

    x, y = ENTROPY_UP_THE_ORDER
    s_low = shannon_entropy(x, cfg.log_base)
    s_high = shannon_entropy(y, cfg.log_base)
    checks = {
        "order_holds": diagonal_order_oracle(x, y).holds,
        "entropy_increases": s_high > s_low,
    }
    stable = all(
        diagonal_order_oracle(_perturbed(x, eps, sx), _perturbed(y, eps, sy)).holds
        and shannon_entropy(_perturbed(y, eps, sy), cfg.log_base)
        > shannon_entropy(_perturbed(x, eps, sx), cfg.log_base)
        for sx in (-1.0, 1.0) for sy in (-1.0, 1.0)
    )
    reports.append(CounterexampleReport(
        name="entropy-increase-up-the-order",
        lower=x, upper=y, checks=checks,
        values={"entropy_low": s_low, "entropy_high": s_high,
                "entropy_gap": s_high - s_low},
        stable=stable,
        witnessed=checks["order_holds"] and checks["entropy_increases"],
    ))
    return reports
