"""Invariant suite run by ``hgw verify`` on a single input graph."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import centrality, graph, localization, spectral, wavelet


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    limit: float
    informational: bool = False

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "limit": self.limit, "informational": self.informational}


def _le(name, value, limit, informational=False):
    value = float(value)
    return Check(name, bool(value <= limit), value, float(limit), informational)


def _max_abs(a):
    return float(np.max(np.abs(a), initial=0.0))


def graph_checks(g: graph.Graph, m: graph.IntrinsicMetric, rng: np.random.Generator) -> list[Check]:
    lap = graph.laplacian(g)
    norm = max(np.linalg.norm(lap, 2), 1e-300)
    out = [_le("laplacian.row_sums", _max_abs(lap.sum(axis=1)), 1e-12 * norm)]
    v = rng.standard_normal((1000, g.n))
    quad = np.einsum("ij,jk,ik->i", v, lap, v)
    worst = float(np.max(-quad / np.sum(v * v, axis=1), initial=0.0))
    out.append(_le("laplacian.psd", worst, 1e-10 * norm))
    dist = m.dist
    out.append(_le("metric.symmetric", _max_abs(dist - dist.T), 0.0))
    if g.n >= 3:
        n_tri = min(10_000, g.n**3)
        x, y, z = rng.integers(0, g.n, size=(3, n_tri))
        out.append(_le("metric.triangle", float(np.max(dist[x, z] - dist[x, y] - dist[y, z])), 1e-12))
    audit = graph.verify_intrinsic(m)
    out.append(_le("metric.intrinsic", audit.max_vertex_sum, 1.0 + audit.tol,
                   informational=m.variant != graph.DEGREE_NORMALIZED))
    return out


def spectral_checks(d: spectral.SpectralDecomposition, rng: np.random.Generator) -> list[Check]:
    lam = d.eigenvalues
    norm = max(np.linalg.norm(d.laplacian, 2), 1e-300)
    out = [
        _le("spectral.residual", float(spectral.residuals(d).max(initial=0.0)), 1e-8 * norm),
        _le("spectral.orthonormal", spectral.orthonormality_error(d), 1e-10),
        _le("spectral.lambda0", abs(lam[0]), 1e-10 * max(1.0, d.lambda_max)),
        Check("spectral.connected", d.connected, d.fiedler_value, d.gap_tol),
    ]
    if d.connected:
        out.append(_le("spectral.phi0", _max_abs(d.eigenvectors[:, 0] - 1 / np.sqrt(d.n)), 1e-8))
    t_scale = 1.0 / max(d.fiedler_value, 1e-12) if d.connected else 1.0
    heat_err = semi_err = row_err = 0.0
    for t in (0.1 * t_scale, t_scale, 3.0 * t_scale):
        h = spectral.heat_kernel(d, t)
        row_err = max(row_err, _max_abs(h.sum(axis=1) - 1))
        if d.n <= 200:
            heat_err = max(heat_err, _max_abs(h - spectral.heat_kernel_taylor(d.laplacian, t)))
    for t, u in rng.uniform(0, 5, size=(5, 2)):
        semi_err = max(semi_err, _max_abs(spectral.heat_kernel(d, t) @ spectral.heat_kernel(d, u)
                                          - spectral.heat_kernel(d, t + u)))
    out += [_le("heat.rows_stochastic", row_err, 1e-10),
            _le("heat.semigroup", semi_err, 1e-8)]
    if d.n <= 200:
        out.append(_le("heat.taylor_oracle", heat_err, 1e-7))
    flipped = spectral.SpectralDecomposition(lam, d.eigenvectors * rng.choice([-1.0, 1.0], size=d.n), d.laplacian)
    out.append(_le("heat.sign_flip", _max_abs(spectral.heat_kernel(d, t_scale)
                                              - spectral.heat_kernel(flipped, t_scale)), 1e-12))
    return out


def wavelet_checks(d: spectral.SpectralDecomposition, n_scales: int, rng: np.random.Generator,
                   n_signals: int = 1000) -> list[Check]:
    out = [_le("wavelet.admissibility", abs(wavelet.admissibility_quadrature() - wavelet.admissibility_constant()), 1e-10)]
    if not d.connected:
        return out
    lap = d.laplacian
    op_err = deriv_err = 0.0
    scales = (1.0 / d.lambda_max, 1.0 / np.sqrt(d.fiedler_value * d.lambda_max), 1.0 / d.fiedler_value)
    for s in scales:
        psi = wavelet.wavelet_operator(d, s)
        op_err = max(op_err, _max_abs(psi - s * lap @ spectral.heat_kernel(d, s)))
        h = 1e-5 * s
        dh = (spectral.heat_kernel(d, s + h) - spectral.heat_kernel(d, s - h)) / (2 * h)
        deriv_err = max(deriv_err, _max_abs(psi + s * dh) / _max_abs(psi))
    out += [_le("wavelet.operator_identity", op_err, 1e-9),
            _le("wavelet.time_derivative", deriv_err, 1e-5)]
    frame = wavelet.build_frame(d, n_scales=n_scales)
    f = rng.standard_normal((n_signals, d.n))
    f -= f.mean(axis=1, keepdims=True)
    energy = np.array([np.sum(frame.analyze(row) ** 2) for row in f])
    norm2 = np.sum(f * f, axis=1)
    lower = float(np.max((frame.frame_A * norm2 - energy) / (frame.frame_A * norm2)))
    upper = float(np.max((energy - frame.frame_B * norm2) / (frame.frame_B * norm2)))
    out += [_le("wavelet.frame_lower", lower, 1e-10), _le("wavelet.frame_upper", upper, 1e-10)]
    sflip = rng.choice([-1.0, 1.0], size=d.n)
    flipped = spectral.SpectralDecomposition(d.eigenvalues, d.eigenvectors * sflip, lap)
    out.append(_le("wavelet.sign_flip", _max_abs(wavelet.wavelet_operator(d, scales[1])
                                                 - wavelet.wavelet_operator(flipped, scales[1])), 1e-9))
    return out


def localization_checks(g, m, d, t_grid, rng) -> list[Check]:
    out = []
    s, t, r = rng.uniform(0.1, 3.0, size=(3, 200))
    h = 1e-6 * t
    fd = (np.asarray(localization.zeta(s, t + h, r)) - np.asarray(localization.zeta(s, t - h, r))) / (2 * h)
    an = np.asarray(localization.zeta_dt(s, t, r))
    out.append(_le("localization.zeta_dt_fd", float(np.max(np.abs(fd - an) / np.abs(an))), 1e-6))
    if not d.connected:
        return out
    informational = m.variant != graph.DEGREE_NORMALIZED
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for target in ("heat", "wavelet"):
            rep = localization.verify_localization(g, m, t_grid, target=target, d=d)
            out.append(_le(f"localization.{target}_violations", rep.violations.size, 0, informational))
    return out


def centrality_checks(g, d, rng) -> list[Check]:
    if not d.connected or g.n < 2:
        return []
    mdt = centrality.mdt_closed_form(d)
    num = centrality.mdt_numeric_all(d)
    ic = centrality.information_centrality(d)
    oracle = centrality.ic_oracle(g)
    rep = centrality.select_leader(g, d)
    perm = rng.permutation(g.n)
    gp = g.permuted(perm)
    mdt_p = centrality.mdt_closed_form(spectral.eigendecompose(graph.laplacian(gp)))
    return [
        _le("centrality.mdt_quadrature", float(np.max(np.abs(mdt - num) / mdt)), 1e-6),
        _le("centrality.ic_oracle", float(np.max(np.abs(ic - oracle) / oracle)), 1e-8),
        Check("centrality.theorem2_sets", rep.sets_agree, float(len(rep.tie_set)), float(len(rep.ic_set))),
        _le("centrality.relabel", _max_abs(mdt_p - mdt[perm]) / _max_abs(mdt), 1e-10),
    ]


def run_checks(g: graph.Graph, variant: str = graph.DEGREE_NORMALIZED, n_scales: int = wavelet.DEFAULT_N_SCALES,
               t_grid=None, seed: int = 42) -> list[Check]:
    rng = np.random.default_rng(seed)
    d = spectral.eigendecompose(graph.laplacian(g))
    checks = spectral_checks(d, rng)
    if d.connected:
        m = graph.intrinsic_metric(g, variant)
        checks = graph_checks(g, m, rng) + checks
    checks += wavelet_checks(d, n_scales, rng)
    if d.connected:
        checks += localization_checks(g, m, d, t_grid, rng)
    checks += centrality_checks(g, d, rng)
    return checks
