"""States, effects and their spectral structure.

DensityMatrix and Effect validate their defining inequalities on construction
and cache one eigendecomposition for everything downstream. Eigenspace
extraction clusters eigenvalues that sit within cluster_width of each other so
near-degenerate spectra are treated as degenerate.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .config import DEFAULT_CONFIG, ToleranceConfig
from .exceptions import BadParameter, DimensionMismatch, InvalidState
from .linalg import assert_hermitian, eig, is_psd

TRACE_REJECT = 1e-6
TRACE_WARN = 1e-9


@dataclass(frozen=True)
class Eigenspace:
    """Orthonormal basis (columns) of an eigenvalue cluster."""

    basis: np.ndarray
    eigenvalue: float

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


class DensityMatrix:
    """Unit-trace PSD matrix with a cached spectrum.

    Inputs whose trace is off by less than 1e-6 are renormalized with a
    warning; anything worse is rejected. A decisively negative eigenvalue
    (beyond ten times the PSD slack) is rejected.
    """

    def __init__(self, matrix, cfg: ToleranceConfig = DEFAULT_CONFIG):
        H = assert_hermitian(matrix)
        tr = float(np.trace(H).real)
        if abs(tr - 1.0) >= TRACE_REJECT:
            raise InvalidState(f"trace {tr} is not 1 within {TRACE_REJECT}")
        if abs(tr - 1.0) > TRACE_WARN:
            warnings.warn(
                f"renormalizing state with trace off by {tr - 1.0:.2e}",
                stacklevel=2,
            )
            H = H / tr
        verdict = is_psd(H, cfg)
        if verdict.fails:
            raise InvalidState(
                f"not positive semidefinite (lambda_min = {verdict.slack:.3e})"
            )
        H.setflags(write=False)
        self._matrix = H

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @cached_property
    def _spectrum(self):
        return eig(self._matrix)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return self._spectrum[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._spectrum[1]

    @cached_property
    def sqrt(self) -> np.ndarray:
        w, V = self._spectrum
        return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, top={self.eigenvalues[0]:.6g})"

    @classmethod
    def maximally_mixed(cls, n: int, cfg: ToleranceConfig = DEFAULT_CONFIG):
        return cls(np.eye(n) / n, cfg)

    @classmethod
    def from_diag(cls, probs, cfg: ToleranceConfig = DEFAULT_CONFIG):
        return cls(np.diag(np.asarray(probs, dtype=float)), cfg)

    @classmethod
    def pure(cls, vector, cfg: ToleranceConfig = DEFAULT_CONFIG):
        v = np.asarray(vector, dtype=complex).reshape(-1)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise BadParameter("cannot build a pure state from the zero vector")
        v = v / nrm
        return cls(np.outer(v, v.conj()), cfg)


class Effect:
    """Measurement effect: Hermitian with 0 <= E <= I (within slack)."""

    def __init__(self, matrix, cfg: ToleranceConfig = DEFAULT_CONFIG):
        H = assert_hermitian(matrix)
        low = is_psd(H, cfg)
        if low.fails:
            raise InvalidState(
                f"effect not PSD (lambda_min = {low.slack:.3e})"
            )
        high = is_psd(np.eye(H.shape[0]) - H, cfg)
        if high.fails:
            raise InvalidState(
                f"effect exceeds identity (slack = {high.slack:.3e})"
            )
        H.setflags(write=False)
        self._matrix = H

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @cached_property
    def _spectrum(self):
        return eig(self._matrix)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._spectrum[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._spectrum[1]

    @cached_property
    def sqrt(self) -> np.ndarray:
        w, V = self._spectrum
        return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.conj().T

    def __repr__(self):
        return f"Effect(dim={self.dim}, top={self.eigenvalues[0]:.6g})"

    @classmethod
    def identity(cls, n: int):
        return cls(np.eye(n))

    @classmethod
    def from_diag(cls, values, cfg: ToleranceConfig = DEFAULT_CONFIG):
        return cls(np.diag(np.asarray(values, dtype=float)), cfg)


def _spectrum_of(x):
    """Cached spectrum for DensityMatrix/Effect, fresh eigh for raw arrays."""
    if isinstance(x, (DensityMatrix, Effect)):
        return x.eigenvalues, x.eigenvectors
    return eig(x)


def matrix_of(x) -> np.ndarray:
    return x.matrix if isinstance(x, (DensityMatrix, Effect)) else np.asarray(x, dtype=complex)


def top_eigenvalue(rho) -> float:
    w, _ = _spectrum_of(rho)
    return float(w[0])


def _cluster_cut(w_desc: np.ndarray, start: int, width: float) -> int:
    """Index one past the cluster beginning at position start."""
    stop = start + 1
    while stop < w_desc.size and w_desc[stop - 1] - w_desc[stop] <= width:
        stop += 1
    return stop


def top_eigenspace(rho, cfg: ToleranceConfig = DEFAULT_CONFIG) -> Eigenspace:
    """Eigenspace of the top eigenvalue cluster."""
    w, V = _spectrum_of(rho)
    width = cfg.cluster_width * max(abs(float(w[0])), 1e-300)
    stop = _cluster_cut(w, 0, width)
    return Eigenspace(V[:, :stop].copy(), float(w[0]))


def kernel(rho, cfg: ToleranceConfig = DEFAULT_CONFIG) -> Eigenspace:
    """Eigenspace of eigenvalues below rank_cutoff * lambda_max."""
    w, V = _spectrum_of(rho)
    cutoff = cfg.rank_cutoff * max(abs(float(w[0])), 1e-300)
    mask = w <= cutoff
    return Eigenspace(V[:, mask].copy(), 0.0)


def rank_of(rho, cfg: ToleranceConfig = DEFAULT_CONFIG) -> int:
    w, _ = _spectrum_of(rho)
    cutoff = cfg.rank_cutoff * max(abs(float(w[0])), 1e-300)
    return int(np.count_nonzero(w > cutoff))


def bottom_eigenspace_nonzero(rho, cfg: ToleranceConfig = DEFAULT_CONFIG) -> Eigenspace:
    """Eigenspace of the least nonzero eigenvalue cluster."""
    w, V = _spectrum_of(rho)
    cutoff = cfg.rank_cutoff * max(abs(float(w[0])), 1e-300)
    nz = np.flatnonzero(w > cutoff)
    if nz.size == 0:
        raise InvalidState("matrix has no nonzero eigenvalues")
    last = nz[-1]
    width = cfg.cluster_width * max(abs(float(w[0])), 1e-300)
    start = last
    while start > 0 and w[start - 1] - w[start] <= width and w[start - 1] > cutoff:
        start -= 1
    return Eigenspace(V[:, start : last + 1].copy(), float(w[last]))


def min_entropy(rho, cfg: ToleranceConfig = DEFAULT_CONFIG) -> float:
    """-log of the top eigenvalue, in the configured base."""
    return -cfg.log(top_eigenvalue(rho))


def subspace_intersects(a, b, cfg: ToleranceConfig = DEFAULT_CONFIG) -> bool:
    """Whether two subspaces share a common direction.

    True iff the smallest principal angle is numerically zero, i.e. the
    largest singular value of the basis cross-Gram matrix reaches
    1 - cluster_width.
    """
    A = a.basis if isinstance(a, Eigenspace) else np.asarray(a, dtype=complex)
    B = b.basis if isinstance(b, Eigenspace) else np.asarray(b, dtype=complex)
    if A.ndim == 1:
        A = A[:, None]
    if B.ndim == 1:
        B = B[:, None]
    if A.shape[0] != B.shape[0]:
        raise DimensionMismatch("subspace bases live in different spaces")
    if A.shape[1] == 0 or B.shape[1] == 0:
        return False
    s = np.linalg.svd(A.conj().T @ B, compute_uv=False)
    return bool(s.max(initial=0.0) >= 1.0 - max(cfg.cluster_width, 1e-12))


def random_state(
    dim: int,
    rank: int | None = None,
    rng: np.random.Generator | int | None = None,
    cfg: ToleranceConfig = DEFAULT_CONFIG,
) -> DensityMatrix:
    """G G^dagger / tr for a dim x rank complex Gaussian G."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    rank = dim if rank is None else rank
    if dim < 1 or rank < 1 or rank > dim:
        raise BadParameter(f"need 1 <= rank <= dim, got rank={rank}, dim={dim}")
    G = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    raw = G @ G.conj().T
    return DensityMatrix(raw / np.trace(raw).real, cfg)
