"""Hermitian matrix calculus: spectra, PSD verdicts, powers, tensor algebra.

Everything here operates on plain complex ndarrays. Eigenvalues are always
reported in descending order. Positivity checks return a tri-state verdict
instead of a boolean so callers can surface numerically marginal cases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, ToleranceConfig
from .exceptions import (
    BadParameter,
    DimensionMismatch,
    NegativeEigenvalue,
    NonHermitianInput,
)

HOLDS = "holds"
FAILS = "fails"
MARGINAL = "marginal"

# relative scale for accepting a matrix as Hermitian
HERMITIAN_RTOL = 1e-9


@dataclass(frozen=True)
class OrderVerdict:
    """Tri-state outcome of a positivity or order test.

    slack is the smallest eigenvalue of the tested matrix (or the analogous
    componentwise margin for classical vectors). witness is a unit vector
    certifying the violation and is present exactly when the relation fails.
    """

    relation: str
    slack: float
    witness: np.ndarray | None = None

    @property
    def holds(self) -> bool:
        return self.relation == HOLDS

    @property
    def fails(self) -> bool:
        return self.relation == FAILS

    @property
    def marginal(self) -> bool:
        return self.relation == MARGINAL


def as_square_array(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {A.shape}")
    return A


def hermitian_deviation(A) -> float:
    """Largest entrywise deviation from A = A^dagger."""
    A = as_square_array(A)
    return float(np.abs(A - A.conj().T).max(initial=0.0))


def assert_hermitian(A) -> np.ndarray:
    A = as_square_array(A)
    dev = hermitian_deviation(A)
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    if dev > HERMITIAN_RTOL * scale:
        raise NonHermitianInput(
            f"matrix deviates from Hermitian by {dev:.3e} (scale {scale:.3e})"
        )
    # fold the (tiny) asymmetry away so downstream eigh sees clean input
    return (A + A.conj().T) / 2.0


def eig(A):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (values, vectors) with vectors[:, i] the unit eigenvector for
    values[i].
    """
    H = assert_hermitian(A)
    w, V = np.linalg.eigh(H)
    return w[::-1].copy(), V[:, ::-1].copy()


def eigvals(A) -> np.ndarray:
    H = assert_hermitian(A)
    return np.linalg.eigvalsh(H)[::-1].copy()


def operator_norm(A) -> float:
    """Largest eigenvalue magnitude of a Hermitian matrix."""
    w = eigvals(A)
    return float(np.abs(w).max(initial=0.0))


def schatten_norm(A, p) -> float:
    """Schatten p-norm via the eigenvalue magnitudes, p in [1, inf]."""
    if p != np.inf and p < 1:
        raise BadParameter(f"Schatten norm needs p >= 1, got {p}")
    mags = np.abs(eigvals(A))
    if p == np.inf:
        return float(mags.max(initial=0.0))
    return float(np.sum(mags**p) ** (1.0 / p))


def is_psd(A, cfg: ToleranceConfig = DEFAULT_CONFIG) -> OrderVerdict:
    """Tri-state positive-semidefiniteness verdict.

    holds    if lambda_min >= -psd_slack * max(1, ||A||)
    fails    if lambda_min < -10 * psd_slack * max(1, ||A||)
    marginal in between
    """
    H = assert_hermitian(A)
    w = np.linalg.eigvalsh(H)
    lam_min = float(w[0])
    scale = max(1.0, float(np.abs(w).max(initial=0.0)))
    if lam_min >= -cfg.psd_slack * scale:
        return OrderVerdict(HOLDS, lam_min)
    if lam_min < -10.0 * cfg.psd_slack * scale:
        _, V = np.linalg.eigh(H)
        return OrderVerdict(FAILS, lam_min, witness=V[:, 0].copy())
    return OrderVerdict(MARGINAL, lam_min)


def matrix_power(A, p, cfg: ToleranceConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Spectral power A^p of a PSD matrix.

    Negative powers are generalized inverses: eigenvalues below
    rank_cutoff * lambda_max map to zero. Slightly negative eigenvalues
    (within the PSD slack) are clamped to zero; anything worse raises
    NegativeEigenvalue.
    """
    verdict = is_psd(A, cfg)
    if verdict.fails:
        raise NegativeEigenvalue(
            f"matrix_power needs a PSD input (lambda_min = {verdict.slack:.3e})"
        )
    w, V = eig(A)
    lam_max = float(w[0]) if w.size else 0.0
    cutoff = cfg.rank_cutoff * max(lam_max, 0.0)
    out = np.zeros_like(w)
    for i, lam in enumerate(w):
        if lam > cutoff:
            out[i] = lam**p
        # lam <= cutoff: treated as kernel, stays 0 for every p
    return (V * out) @ V.conj().T


def tensor(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def _check_bipartite(A, dims):
    A = as_square_array(A)
    if len(dims) != 2:
        raise DimensionMismatch(f"need two factor dimensions, got {dims}")
    m, n = int(dims[0]), int(dims[1])
    if m <= 0 or n <= 0 or m * n != A.shape[0]:
        raise DimensionMismatch(
            f"factor dims {dims} incompatible with matrix of size {A.shape[0]}"
        )
    return A, m, n


def partial_trace(A, dims, subsystem: int) -> np.ndarray:
    """Trace out one tensor factor of a bipartite matrix.

    dims = (m, n) declares the factorization; subsystem is 1 or 2 and names
    the factor that gets traced out.
    """
    A, m, n = _check_bipartite(A, dims)
    T = A.reshape(m, n, m, n)
    if subsystem == 1:
        return np.einsum("ijil->jl", T)
    if subsystem == 2:
        return np.einsum("ijkj->ik", T)
    raise BadParameter(f"subsystem must be 1 or 2, got {subsystem}")


def partial_transpose(A, dims, subsystem: int) -> np.ndarray:
    """Transpose one tensor factor in place."""
    A, m, n = _check_bipartite(A, dims)
    T = A.reshape(m, n, m, n)
    if subsystem == 1:
        return T.transpose(2, 1, 0, 3).reshape(m * n, m * n)
    if subsystem == 2:
        return T.transpose(0, 3, 2, 1).reshape(m * n, m * n)
    raise BadParameter(f"subsystem must be 1 or 2, got {subsystem}")


def fidelity(rho, sigma, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1]."""
    sq = matrix_power(rho, 0.5, cfg)
    inner = sq @ as_square_array(sigma) @ sq
    w = np.linalg.eigvalsh((inner + inner.conj().T) / 2.0)
    val = float(np.sqrt(np.clip(w, 0.0, None)).sum())
    return min(max(val, 0.0), 1.0)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    # fix the phase ambiguity so the distribution is Haar
    return Q * (np.diag(R) / np.abs(np.diag(R)))
