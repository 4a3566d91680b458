import numpy as np
import pytest
from scipy.integrate import quad

from conftest import decomp
from hgw import generators as gen
from hgw.centrality import (
    ic_oracle,
    information_centrality,
    mdt_closed_form,
    mdt_numeric,
    mdt_numeric_all,
    select_leader,
    wavelet_energy,
)
from hgw.errors import DisconnectedGraph, SingularSystem
from hgw.graph import Graph
from hgw.wavelet import wavelet_atom


def brute_mdt(g, x):
    # adaptive quadrature of ||psi_{t,x}||^2 built from explicit atoms
    d = decomp(g)
    f = lambda t: float(np.sum(wavelet_atom(d, t, x) ** 2)) if t > 0 else 0.0
    breaks = sorted(1.0 / d.eigenvalues[1:])
    val, _ = quad(f, 0, 60 / d.eigenvalues[1], points=breaks, limit=400, epsabs=0, epsrel=1e-12)
    return val


class TestEnergy:
    def test_zero_time(self, k3):
        assert wavelet_energy(decomp(k3), 0.0, 0) == 0.0

    @pytest.mark.parametrize("t", [0.1, 0.25, 1.0, 3.0])
    def test_single_edge(self, edge, t):
        assert wavelet_energy(decomp(edge), t, 0) == pytest.approx(2 * t * t * np.exp(-4 * t), rel=1e-13)

    def test_matches_atom_norm(self, random_graphs):
        for g in random_graphs[:8]:
            d = decomp(g)
            for x in range(g.n):
                for t in (0.05, 0.9, 4.0):
                    assert abs(wavelet_energy(d, t, x) - np.sum(wavelet_atom(d, t, x) ** 2)) <= 1e-10

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraph):
            wavelet_energy(decomp(Graph.from_edges([("a", "b"), ("c", "d")])), 1.0, 0)


class TestMDT:
    def test_single_edge(self, edge):
        np.testing.assert_allclose(mdt_closed_form(decomp(edge)), 1 / 16, rtol=1e-14)

    def test_k3(self, k3):
        np.testing.assert_allclose(mdt_closed_form(decomp(k3)), 1 / 18, rtol=1e-14)

    @pytest.mark.parametrize("n", [4, 7, 12])
    def test_complete_graph_formula(self, n):
        np.testing.assert_allclose(mdt_closed_form(decomp(gen.complete_graph(n))), (n - 1) / (4 * n * n), rtol=1e-12)

    def test_p3_middle_smallest(self, p3):
        m = mdt_closed_form(decomp(p3))
        # phi_1 = (1,0,-1)/sqrt2 at lam=1, phi_2 = (1,-2,1)/sqrt6 at lam=3
        np.testing.assert_allclose(m, 0.25 * np.array([1 / 2 + 1 / 18, 4 / 18, 1 / 2 + 1 / 18]), rtol=1e-13)
        assert m[1] < m[0] and m[1] < m[2]

    def test_numeric_spot_values(self, edge, k3):
        assert mdt_numeric(decomp(edge), 0) == pytest.approx(0.0625, abs=1e-8)
        assert mdt_numeric(decomp(k3), 2) == pytest.approx(1 / 18, abs=1e-8)

    def test_brute_quadrature(self, random_graphs):
        for g in random_graphs[:4]:
            closed = mdt_closed_form(decomp(g))
            for x in (0, g.n - 1):
                assert brute_mdt(g, x) == pytest.approx(closed[x], rel=1e-8)

    def test_numeric_vs_closed(self, random_graphs):
        for g in random_graphs:
            d = decomp(g)
            np.testing.assert_allclose(mdt_numeric_all(d), mdt_closed_form(d), rtol=1e-6)

    @pytest.mark.parametrize("alpha", [0.5, 2.0, 10.0])
    def test_weight_scaling(self, random_graphs, alpha):
        g = random_graphs[4]
        base = select_leader(g)
        scaled = select_leader(g.scaled(alpha))
        np.testing.assert_allclose(scaled.mdt, base.mdt / alpha, rtol=1e-10)
        assert scaled.ranking == base.ranking
        assert scaled.tie_set == base.tie_set

    @pytest.mark.parametrize("g", [gen.complete_graph(6), gen.cycle_graph(7), gen.cycle_graph(10)], ids=["K6", "C7", "C10"])
    def test_vertex_transitive_constant(self, g):
        d = decomp(g)
        for v in (mdt_closed_form(d), information_centrality(d)):
            assert (v.max() - v.min()) <= 1e-9 * v.mean()

    def test_relabel_invariance(self, rng):
        g = gen.complete_graph(7)
        perm = rng.permutation(7)
        a = mdt_closed_form(decomp(g))
        b = mdt_closed_form(decomp(g.permuted(perm)))
        np.testing.assert_allclose(b, a[perm], atol=1e-10, rtol=0)


class TestIC:
    def test_k3(self, k3):
        np.testing.assert_allclose(information_centrality(decomp(k3)), 2.25, rtol=1e-13)
        np.testing.assert_allclose(ic_oracle(k3), 2.25, rtol=1e-13)

    def test_single_edge(self, edge):
        np.testing.assert_allclose(information_centrality(decomp(edge)), 2.0, rtol=1e-13)
        np.testing.assert_allclose(ic_oracle(edge), 2.0, rtol=1e-13)

    def test_oracle_agreement(self, random_graphs):
        for g in random_graphs:
            np.testing.assert_allclose(information_centrality(decomp(g)), ic_oracle(g), rtol=1e-8)

    def test_oracle_singular(self):
        with pytest.raises(SingularSystem):
            ic_oracle(Graph.from_edges([("a", "b"), ("c", "d")]))


class TestLeader:
    def test_star(self, s4):
        rep = select_leader(s4)
        assert rep.leader == "c" and rep.tie_set == ("c",)
        # brute force: centre beats every leaf
        m = rep.mdt
        assert all(m[0] < m[i] for i in range(1, 4))

    def test_complete(self):
        g = Graph.from_edges([(u, v) for u in "dcba" for v in "dcba" if u < v])
        rep = select_leader(g)
        assert set(rep.tie_set) == set("abcd")
        assert rep.leader == "a"
        assert rep.sets_agree

    def test_path(self, p3):
        assert select_leader(p3).leader == "v1"

    def test_report_dict(self, s4):
        data = select_leader(s4).to_dict()
        assert data["leader"] == "c"
        assert [v["rank"] for v in data["vertices"]] == [1, 2, 3, 4]
        assert data["vertices"][0]["label"] == "c"

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraph):
            select_leader(Graph.from_edges([("a", "b"), ("c", "d")]))

    def test_sets_agree_random(self, random_graphs):
        for g in random_graphs:
            rep = select_leader(g)
            assert rep.sets_agree and rep.leader in rep.tie_set
            assert np.all(rep.mdt > 0) and np.all(rep.ic > 0)
