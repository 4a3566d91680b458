import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import decomp
from hgw import generators as gen
from hgw.errors import NegativeTime, NonFinite, NotSymmetric
from hgw.graph import laplacian
from hgw.spectral import (
    SpectralDecomposition,
    eigendecompose,
    expm_taylor,
    heat_kernel,
    heat_kernel_nonnegative,
    heat_kernel_taylor,
    orthonormality_error,
    residuals,
)


class TestEigendecompose:
    def test_single_edge(self, edge):
        d = decomp(edge)
        np.testing.assert_allclose(d.eigenvalues, [0, 2], atol=1e-14)
        r = 1 / np.sqrt(2)
        np.testing.assert_allclose(d.eigenvectors[:, 0], [r, r], atol=1e-15)
        np.testing.assert_allclose(d.eigenvectors[:, 1], [r, -r], atol=1e-15)

    def test_k3(self, k3):
        np.testing.assert_allclose(decomp(k3).eigenvalues, [0, 3, 3], atol=1e-14)

    def test_p3_matches_characteristic_roots(self, p3):
        lap = laplacian(p3)
        roots = np.sort(np.roots(np.poly(lap)).real)
        np.testing.assert_allclose(roots, [0, 1, 3], atol=1e-12)
        np.testing.assert_allclose(decomp(p3).eigenvalues, roots, atol=1e-12)

    def test_invariants_random(self, random_graphs):
        for g in random_graphs:
            d = decomp(g)
            norm = np.linalg.norm(d.laplacian, 2)
            assert np.all(np.diff(d.eigenvalues) >= 0)
            assert abs(d.eigenvalues[0]) <= 1e-10 * max(1, d.lambda_max)
            assert residuals(d).max() <= 1e-8 * norm
            assert orthonormality_error(d) <= 1e-10
            assert d.connected
            np.testing.assert_allclose(d.eigenvectors[:, 0], 1 / np.sqrt(g.n), atol=1e-8)

    def test_sign_convention(self, random_graphs):
        for g in random_graphs:
            v = decomp(g).eigenvectors
            idx = np.argmax(np.abs(v), axis=0)
            assert np.all(v[idx, np.arange(g.n)] > 0)

    def test_disconnected_flag(self):
        g = gen.Graph.from_edges([("a", "b"), ("c", "d")])
        assert not decomp(g).connected

    def test_rejects_asymmetric(self):
        with pytest.raises(NotSymmetric):
            eigendecompose(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_rejects_nonfinite(self):
        with pytest.raises(NonFinite):
            eigendecompose(np.array([[np.nan, 0.0], [0.0, 1.0]]))


class TestHeatKernel:
    def test_time_zero_is_identity(self, k3):
        np.testing.assert_allclose(heat_kernel(decomp(k3), 0.0), np.eye(3), atol=1e-15)

    @pytest.mark.parametrize("t", [0.01, 0.3, 1.0, 4.0])
    def test_single_edge_closed_form(self, edge, t):
        h = heat_kernel(decomp(edge), t)
        e = np.exp(-2 * t)
        np.testing.assert_allclose(h, [[(1 + e) / 2, (1 - e) / 2], [(1 - e) / 2, (1 + e) / 2]], atol=1e-15)

    def test_rows_stochastic(self, k3):
        np.testing.assert_allclose(heat_kernel(decomp(k3), 0.7).sum(axis=1), 1.0, atol=1e-10)

    def test_negative_time(self, k3):
        with pytest.raises(NegativeTime):
            heat_kernel(decomp(k3), -1.0)

    def test_matches_taylor_oracle(self, random_graphs):
        for g in random_graphs:
            d = decomp(g)
            for t in (0.05, 0.5, 2.0, 10.0):
                np.testing.assert_allclose(heat_kernel(d, t), heat_kernel_taylor(d.laplacian, t), atol=1e-7, rtol=0)

    def test_nonnegative_route_matches(self, random_graphs):
        for g in random_graphs[:8]:
            d = decomp(g)
            for t in (0.01, 1.0, 50.0):
                h = heat_kernel_nonnegative(d.laplacian, t)
                assert np.all(h >= 0)
                np.testing.assert_allclose(h, heat_kernel(d, t), atol=1e-12, rtol=0)

    def test_nonnegative_route_resolves_far_entries(self):
        # H_t(0, 9) on P10 at small t is t^9/9! to leading order
        g = gen.path_graph(10)
        t = 1e-3
        h = heat_kernel_nonnegative(laplacian(g), t)
        assert h[0, 9] == pytest.approx(t**9 / 362880, rel=1e-2)

    def test_expm_taylor_scalar(self):
        np.testing.assert_allclose(expm_taylor(np.array([[3.0]])), [[np.exp(3.0)]], rtol=1e-14)

    def test_psd(self, random_graphs):
        for g in random_graphs[:5]:
            w = np.linalg.eigvalsh(heat_kernel(decomp(g), 0.4))
            assert w.min() > -1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(0.01, 5.0), st.floats(0.01, 5.0), st.integers(0, 2**32 - 1))
def test_semigroup(t, u, seed):
    g = gen.random_connected_graph(12, np.random.default_rng(seed))
    d = decomp(g)
    err = np.max(np.abs(heat_kernel(d, t) @ heat_kernel(d, u) - heat_kernel(d, t + u)))
    assert err <= 1e-8


def test_basis_independence_degenerate(rng):
    g = gen.complete_graph(6)
    d = decomp(g)
    perm = rng.permutation(6)
    dp = decomp(g.permuted(perm))
    inv = np.argsort(perm)
    h = heat_kernel(d, 0.3)
    hp = heat_kernel(dp, 0.3)[np.ix_(inv, inv)]
    np.testing.assert_allclose(hp, h, atol=1e-9)


def test_sign_flip_invariance(random_graphs, rng):
    for g in random_graphs[:5]:
        d = decomp(g)
        flipped = SpectralDecomposition(d.eigenvalues, d.eigenvectors * rng.choice([-1.0, 1.0], g.n), d.laplacian)
        np.testing.assert_allclose(heat_kernel(flipped, 0.8), heat_kernel(d, 0.8), atol=1e-12, rtol=0)
