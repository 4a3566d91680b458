"""Mean diffusion time, information centrality and leader selection.

The mean diffusion time of a vertex is the total wavelet energy
``MDT(x) = int_0^inf ||psi_{t,x}||^2 dt``. Since
``int_0^inf t^2 lam^2 exp(-2 t lam) dt = 1/(4 lam)`` it has the closed form
``(1/4) sum_{k>=1} phi_k(x)^2 / lam_k``, a quarter of the diagonal of the
Laplacian pseudoinverse. Information centrality is a decreasing function of
the same diagonal, so the two rankings coincide.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DisconnectedGraph, HGWError, QuadratureNonconvergence, SingularSystem
from .graph import Graph, laplacian
from .spectral import SpectralDecomposition, eigendecompose

MDT_CONSTANT = 0.25
TIE_RTOL = 1e-9
QUAD_RTOL = 1e-9
_CHUNK = 1 << 15


def _positive_modes(d: SpectralDecomposition):
    d.require_connected()
    if d.n < 2:
        raise HGWError("centrality needs at least two vertices")
    mask = d.positive
    return d.eigenvalues[mask], d.eigenvectors[:, mask]


def wavelet_energy(d: SpectralDecomposition, t, x: int):
    """``||psi_{t,x}||^2 = sum_{k>=1} t^2 lam_k^2 exp(-2 t lam_k) phi_k(x)^2``.

    ``t`` may be an array; the result has the same shape.
    """
    lam, vecs = _positive_modes(d)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("time must be nonnegative")
    tl = np.multiply.outer(t, lam)
    out = (tl * tl * np.exp(-2.0 * tl)) @ (vecs[x] ** 2)
    return float(out) if out.ndim == 0 else out


def _pinv_diag_spectral(d: SpectralDecomposition) -> np.ndarray:
    lam, vecs = _positive_modes(d)
    return (vecs**2) @ (1.0 / lam)


def mdt_closed_form(d: SpectralDecomposition) -> np.ndarray:
    """Per-vertex mean diffusion time ``(1/4) sum_{k>=1} phi_k(x)^2 / lam_k``."""
    return MDT_CONSTANT * _pinv_diag_spectral(d)


def _energy_matrix(lam, weights, t):
    tl = np.multiply.outer(t, lam)
    return (tl * tl * np.exp(-2.0 * tl)) @ weights


def _tail(lam, weights, upper):
    # exact int_T^inf lam^2 t^2 exp(-2 lam t) dt per mode
    per_mode = np.exp(-2.0 * lam * upper) * (lam * upper**2 / 2.0 + upper / 2.0 + 1.0 / (4.0 * lam))
    return per_mode @ weights


def mdt_numeric_all(d: SpectralDecomposition, rtol: float = QUAD_RTOL,
                    initial_panels: int = 64, max_panels: int = 1 << 24) -> np.ndarray:
    """MDT of every vertex by composite Simpson quadrature of the wavelet energy.

    Integrates over ``[0, 30/lambda_1]``, doubling the panel count until
    successive Simpson estimates, plus the exact tail beyond the cut-off,
    are within ``rtol`` of the estimate for every vertex.
    """
    lam, vecs = _positive_modes(d)
    weights = (vecs**2).T
    upper = 30.0 / lam[0]
    tail = _tail(lam, weights, upper)

    n = initial_panels
    grid = np.linspace(0.0, upper, n + 1)
    f = _energy_matrix(lam, weights, grid)
    h = upper / n
    trap = h * (f.sum(axis=0) - 0.5 * (f[0] + f[-1]))
    simpson = None
    while True:
        # refine: add the midpoints of the current panels
        h /= 2.0
        mids_total = np.zeros(d.n)
        for start in range(0, n, _CHUNK):
            idx = np.arange(start, min(n, start + _CHUNK))
            mids_total += _energy_matrix(lam, weights, (2 * idx + 1) * h).sum(axis=0)
        trap_new = 0.5 * trap + h * mids_total
        simpson_new = (4.0 * trap_new - trap) / 3.0
        n *= 2
        if simpson is not None:
            budget = np.abs(simpson_new - simpson) + tail
            if np.all(budget <= rtol * np.abs(simpson_new)):
                return simpson_new
        if n >= max_panels:
            raise QuadratureNonconvergence(f"no convergence with {n} panels")
        trap, simpson = trap_new, simpson_new


def mdt_numeric(d: SpectralDecomposition, x: int, rtol: float = QUAD_RTOL) -> float:
    return float(mdt_numeric_all(d, rtol)[x])


def information_centrality(d: SpectralDecomposition) -> np.ndarray:
    """``IC(x) = 1 / (R(x) + mean_y R(y))`` with ``R = sum_{k>=1} phi_k^2 / lam_k``."""
    r = _pinv_diag_spectral(d)
    return 1.0 / (r + r.mean())


def ic_oracle(g: Graph) -> np.ndarray:
    """Information centrality from linear solves, without eigenvectors.

    Uses ``pinv(L) = inv(L + J/N) - J/N``.
    """
    n = g.n
    if n < 2:
        raise HGWError("centrality needs at least two vertices")
    m = laplacian(g) + np.full((n, n), 1.0 / n)
    if np.linalg.cond(m) > 1e12:
        raise SingularSystem("L + J/N is singular; the graph is disconnected")
    try:
        inv = np.linalg.solve(m, np.eye(n))
    except np.linalg.LinAlgError:
        raise SingularSystem("L + J/N is singular; the graph is disconnected") from None
    r = np.diag(inv) - 1.0 / n
    return 1.0 / (r + r.mean())


def near_min(values, rtol: float = TIE_RTOL) -> np.ndarray:
    values = np.asarray(values)
    lo = values.min()
    return np.flatnonzero(values <= lo + rtol * abs(lo))


def near_max(values, rtol: float = TIE_RTOL) -> np.ndarray:
    values = np.asarray(values)
    hi = values.max()
    return np.flatnonzero(values >= hi - rtol * abs(hi))


@dataclass(frozen=True)
class CentralityReport:
    labels: tuple[str, ...]
    mdt: np.ndarray
    ic: np.ndarray
    leader: str
    tie_set: tuple[str, ...]
    ic_set: tuple[str, ...]
    ranking: tuple[str, ...]

    @property
    def sets_agree(self) -> bool:
        return set(self.tie_set) == set(self.ic_set)

    def rank(self, label: str) -> int:
        return self.ranking.index(label) + 1

    def to_dict(self) -> dict:
        idx = {lab: i for i, lab in enumerate(self.labels)}
        return {
            "vertices": [
                {"label": lab, "mdt": float(self.mdt[idx[lab]]), "ic": float(self.ic[idx[lab]]),
                 "rank": r + 1}
                for r, lab in enumerate(self.ranking)
            ],
            "leader": self.leader,
            "tie_set": list(self.tie_set),
        }


def select_leader(g: Graph, d: SpectralDecomposition | None = None,
                  rtol: float = TIE_RTOL) -> CentralityReport:
    """Leader = vertex of minimal mean diffusion time.

    Vertices within ``rtol`` of the minimum form the tie set; the
    lexicographically smallest label among them is the leader. The
    report also carries the argmax set of information centrality.
    """
    if not g.is_connected():
        raise DisconnectedGraph("leader selection needs a connected graph")
    if d is None:
        d = eigendecompose(laplacian(g))
    mdt = mdt_closed_form(d)
    ic = information_centrality(d)
    ties = tuple(sorted(g.labels[i] for i in near_min(mdt, rtol)))
    ic_set = tuple(sorted(g.labels[i] for i in near_max(ic, rtol)))
    return CentralityReport(g.labels, mdt, ic, ties[0], ties, ic_set, _ranking(g.labels, mdt, rtol))


def _ranking(labels, values, rtol):
    # values within rtol of a group's smallest member rank together, by label
    order = np.argsort(values, kind="stable")
    out, group, base = [], [], None
    for i in order:
        if base is None or values[i] > base + rtol * abs(base):
            out.extend(sorted(group))
            group, base = [], values[i]
        group.append(labels[i])
    out.extend(sorted(group))
    return tuple(out)
