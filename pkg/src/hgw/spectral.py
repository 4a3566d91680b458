"""Dense symmetric eigendecomposition of the Laplacian and the heat kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DisconnectedGraph, NegativeTime, NonFinite, NotSymmetric

SYMMETRY_TOL = 1e-12
GAP_TOL = 1e-9


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns).

    ``laplacian`` is the matrix that was decomposed; it is kept so that
    residual checks and operator identities can be evaluated later.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    laplacian: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1]) if self.n else 0.0

    @property
    def gap_tol(self) -> float:
        return GAP_TOL * max(1.0, self.lambda_max)

    @property
    def positive(self) -> np.ndarray:
        """Boolean mask of eigenvalues treated as nonzero."""
        return self.eigenvalues > self.gap_tol

    @property
    def connected(self) -> bool:
        return self.n < 2 or bool(self.eigenvalues[1] > self.gap_tol)

    @property
    def fiedler_value(self) -> float:
        return float(self.eigenvalues[1]) if self.n > 1 else 0.0

    def require_connected(self) -> None:
        if not self.connected:
            raise DisconnectedGraph(
                f"graph is disconnected (lambda_1 = {self.fiedler_value:.3g} <= {self.gap_tol:.3g})"
            )


def _fix_signs(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude entry positive; argmax picks the lowest index on ties
    idx = np.argmax(np.abs(vecs), axis=0)
    signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
    signs[signs == 0] = 1.0
    return vecs * signs


def eigendecompose(lap: np.ndarray) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric matrix with a fixed sign convention.

    Each eigenvector is flipped so its largest-magnitude entry (lowest
    index on ties) is positive. For a connected Laplacian this makes the
    first eigenvector ``+1/sqrt(N)``.
    """
    a = np.array(lap, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix has non-finite entries")
    if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_TOL * max(1.0, np.max(np.abs(a), initial=0.0)):
        raise NotSymmetric("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    try:
        vals, vecs = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from None
    vecs = _fix_signs(vecs)
    for arr in (vals, vecs, a):
        arr.setflags(write=False)
    return SpectralDecomposition(vals, vecs, a)


def apply_function(d: SpectralDecomposition, values: np.ndarray) -> np.ndarray:
    """``V diag(values) V^T``, symmetrized."""
    v = d.eigenvectors
    m = (v * values) @ v.T
    return 0.5 * (m + m.T)


def heat_kernel(d: SpectralDecomposition, t: float) -> np.ndarray:
    """Heat kernel ``exp(-t L)`` from the spectral sum."""
    if t < 0:
        raise NegativeTime(f"time must be nonnegative, got {t}")
    return apply_function(d, np.exp(-t * d.eigenvalues))


def expm_taylor(a: np.ndarray, tol: float = 1e-16, max_terms: int = 60) -> np.ndarray:
    """Matrix exponential by Taylor series with scaling and squaring.

    Independent of any eigendecomposition; used as an oracle for the
    heat kernel.
    """
    a = np.asarray(a, dtype=float)
    norm = np.linalg.norm(a, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0.5 else 0
    b = a / 2.0**squarings
    result = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, max_terms + 1):
        term = term @ b / k
        result = result + term
        if np.linalg.norm(term, 1) <= tol * np.linalg.norm(result, 1):
            break
    else:
        raise ConvergenceFailure("Taylor series did not converge")
    for _ in range(squarings):
        result = result @ result
    return result


def heat_kernel_taylor(lap: np.ndarray, t: float) -> np.ndarray:
    if t < 0:
        raise NegativeTime(f"time must be nonnegative, got {t}")
    return expm_taylor(-t * np.asarray(lap, dtype=float))


def heat_kernel_nonnegative(lap: np.ndarray, t: float) -> np.ndarray:
    """Heat kernel with entrywise relative accuracy, for tiny far-off entries.

    ``exp(-tau L) = exp(-tau dmax) exp(tau (dmax I - L))`` where the second
    factor has a nonnegative argument, so every Taylor term, every squaring
    and the result are nonnegative and no cancellation occurs.
    """
    if t < 0:
        raise NegativeTime(f"time must be nonnegative, got {t}")
    lap = np.asarray(lap, dtype=float)
    n = lap.shape[0]
    dmax = float(np.max(np.diag(lap), initial=0.0))
    shifted = dmax * np.eye(n) - lap
    shifted[shifted < 0] = 0.0
    norm = t * np.linalg.norm(shifted, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0.5 else 0
    tau = t / 2.0**squarings
    b = tau * shifted
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, 80):
        term = term @ b / k
        result = result + term
        if np.all(term <= 1e-17 * result):
            break
    result *= np.exp(-tau * dmax)
    for _ in range(squarings):
        result = result @ result
    return 0.5 * (result + result.T)


def residuals(d: SpectralDecomposition) -> np.ndarray:
    """Per-pair residual norms ``||L phi_k - lambda_k phi_k||``."""
    v = d.eigenvectors
    return np.linalg.norm(d.laplacian @ v - v * d.eigenvalues, axis=0)


def orthonormality_error(d: SpectralDecomposition) -> float:
    v = d.eigenvectors
    return float(np.max(np.abs(v.T @ v - np.eye(d.n)), initial=0.0))
