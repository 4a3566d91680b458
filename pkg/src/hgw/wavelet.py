"""Hermitian graph wavelets: kernel x e^{-x}, atoms, transform and frames.

The wavelet at scale ``s`` centred on vertex ``x`` is column ``x`` of
``g(sL) = sL exp(-sL)``, the negated time derivative of the heat kernel
scaled by ``s``. Zero eigenvalues are dropped from every spectral sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DimensionMismatch, EmptyScaleSet, InvalidSpectrumRange, NonpositiveScale
from .spectral import SpectralDecomposition, apply_function

ADMISSIBILITY = 0.25
DEFAULT_N_SCALES = 9


def kernel_g(x):
    """``g(x) = x exp(-x)`` for ``x >= 0``; peaks at ``x = 1``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("kernel_g is defined for x >= 0")
    out = x * np.exp(-x)
    return float(out) if out.ndim == 0 else out


def admissibility_constant() -> float:
    """``int_0^inf g(x)^2 / x dx = int_0^inf x e^{-2x} dx = 1/4``."""
    return ADMISSIBILITY


def admissibility_quadrature(upper: float = 40.0) -> float:
    val, _ = quad(lambda x: x * np.exp(-2 * x), 0.0, upper, epsabs=1e-14, epsrel=1e-13)
    return val


def _check_scale(s: float) -> None:
    if not s > 0:
        raise NonpositiveScale(f"scale must be positive, got {s}")


def spectral_response(d: SpectralDecomposition, s: float) -> np.ndarray:
    """``g(s lambda_k)`` with zero-eigenvalue entries set to 0."""
    _check_scale(s)
    lam = np.where(d.positive, d.eigenvalues, 0.0)
    return np.where(d.positive, kernel_g(s * lam), 0.0)


def wavelet_atom(d: SpectralDecomposition, s: float, x: int) -> np.ndarray:
    """Wavelet ``psi_{s,x}`` as a vector over vertices."""
    if not 0 <= x < d.n:
        raise IndexError(f"vertex index {x} out of range for {d.n} vertices")
    v = d.eigenvectors
    return v @ (spectral_response(d, s) * v[x])


def wavelet_operator(d: SpectralDecomposition, s: float) -> np.ndarray:
    """All atoms at scale ``s`` as the columns of ``g(sL)``."""
    return apply_function(d, spectral_response(d, s))


def transform(d: SpectralDecomposition, scales: Sequence[float], f) -> np.ndarray:
    """Wavelet coefficients ``W[n, x] = <psi_{s_n, x}, f>``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (d.n,):
        raise DimensionMismatch(f"signal has shape {f.shape}, expected ({d.n},)")
    v = d.eigenvectors
    fhat = v.T @ f
    return np.stack([v @ (spectral_response(d, s) * fhat) for s in scales]) if len(scales) else np.empty((0, d.n))


def default_scales(lambda_1: float, lambda_max: float, n_scales: int = DEFAULT_N_SCALES) -> np.ndarray:
    """Geometric scales placing the peak of ``g(s lambda)`` across the spectrum.

    ``s_n = (1/lambda_max) (lambda_max/lambda_1)^{n/(J-1)}``; with a single
    scale the geometric midpoint ``1/sqrt(lambda_1 lambda_max)`` is used.
    """
    if not (0 < lambda_1 <= lambda_max) or not np.isfinite(lambda_max):
        raise InvalidSpectrumRange(f"need 0 < lambda_1 <= lambda_max, got {lambda_1}, {lambda_max}")
    if n_scales < 1:
        raise InvalidSpectrumRange(f"need at least one scale, got {n_scales}")
    if n_scales == 1:
        return np.array([1.0 / np.sqrt(lambda_1 * lambda_max)])
    n = np.arange(n_scales)
    return (lambda_max / lambda_1) ** (n / (n_scales - 1)) / lambda_max


def frame_function(d: SpectralDecomposition, scales: Sequence[float]) -> np.ndarray:
    """``G(lambda_k) = sum_n g(s_n lambda_k)^2`` on the full spectrum (0 at zero modes)."""
    if len(scales) == 0:
        raise EmptyScaleSet("frame needs at least one scale")
    return np.sum([spectral_response(d, s) ** 2 for s in scales], axis=0)


def frame_bounds(d: SpectralDecomposition, scales: Sequence[float]) -> tuple[float, float]:
    """Min and max of ``G`` over the positive eigenvalues."""
    big_g = frame_function(d, scales)[d.positive]
    if big_g.size == 0:
        return 0.0, 0.0
    return float(big_g.min()), float(big_g.max())


@dataclass(frozen=True)
class WaveletFrame:
    """A discrete scale set with its frame bounds on one spectrum.

    Scales are sorted ascending (highest frequency band first). Equal
    scales only occur when the positive spectrum is a single value.
    """

    scales: np.ndarray
    decomposition: SpectralDecomposition
    frame_A: float
    frame_B: float

    def __post_init__(self):
        s = np.asarray(self.scales, dtype=float)
        if s.size == 0:
            raise EmptyScaleSet("frame needs at least one scale")
        if np.any(s <= 0):
            raise NonpositiveScale("scales must be positive")
        if np.any(np.diff(s) < 0):
            raise ValueError("scales must be sorted ascending")
        s.setflags(write=False)
        object.__setattr__(self, "scales", s)

    def analyze(self, f) -> np.ndarray:
        return transform(self.decomposition, self.scales, f)

    def reconstruct(self, coeffs) -> np.ndarray:
        """Least-squares inverse on the zero-mean subspace (canonical dual frame)."""
        d = self.decomposition
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (len(self.scales), d.n):
            raise DimensionMismatch(f"coefficients have shape {coeffs.shape}")
        v = d.eigenvectors
        acc = np.zeros(d.n)
        for s, row in zip(self.scales, coeffs):
            acc += spectral_response(d, s) * (v.T @ row)
        big_g = frame_function(d, self.scales)
        ok = d.positive & (big_g > 0)
        fhat = np.where(ok, acc / np.where(ok, big_g, 1.0), 0.0)
        return v @ fhat


def build_frame(d: SpectralDecomposition, scales: Sequence[float] | None = None,
                n_scales: int = DEFAULT_N_SCALES) -> WaveletFrame:
    if scales is None:
        d.require_connected()
        scales = default_scales(d.fiedler_value, d.lambda_max, n_scales)
    scales = np.sort(np.asarray(scales, dtype=float))
    a, b = frame_bounds(d, scales)
    return WaveletFrame(scales, d, a, b)
