"""Small named graphs and seeded random connected graphs."""

from __future__ import annotations

import numpy as np

from .graph import Graph


def _labels(n, prefix="v"):
    width = len(str(n - 1))
    return [f"{prefix}{i:0{width}d}" for i in range(n)]


def complete_graph(n: int, weight: float = 1.0) -> Graph:
    labels = _labels(n)
    return Graph.from_edges([(labels[i], labels[j], weight) for i in range(n) for j in range(i + 1, n)], labels)


def path_graph(n: int, weight: float = 1.0) -> Graph:
    labels = _labels(n)
    return Graph.from_edges([(labels[i], labels[i + 1], weight) for i in range(n - 1)], labels)


def cycle_graph(n: int, weight: float = 1.0) -> Graph:
    labels = _labels(n)
    return Graph.from_edges([(labels[i], labels[(i + 1) % n], weight) for i in range(n)], labels)


def star_graph(leaves: int, weight: float = 1.0) -> Graph:
    """Star with centre ``"c"`` first and leaves ``l1..lk``."""
    labels = ["c"] + [f"l{i + 1}" for i in range(leaves)]
    return Graph.from_edges([("c", lab, weight) for lab in labels[1:]], labels)


def random_connected_graph(n: int, rng: np.random.Generator, p: float | None = None,
                           low: float = 0.1, high: float = 2.0) -> Graph:
    """Random spanning tree plus Erdos-Renyi extra edges, Uniform(low, high) weights."""
    if p is None:
        p = min(1.0, 3.0 / max(n - 1, 1))
    mask = np.triu(rng.random((n, n)) < p, k=1)
    perm = rng.permutation(n)
    for k in range(1, n):
        a, b = perm[k], perm[rng.integers(0, k)]
        mask[min(a, b), max(a, b)] = True
    w = np.where(mask, rng.uniform(low, high, size=(n, n)), 0.0)
    w = w + w.T
    return Graph(tuple(_labels(n)), w)


def random_graph_suite(count: int, seed: int = 42, n_min: int = 3, n_max: int = 40) -> list[Graph]:
    rng = np.random.default_rng(seed)
    return [random_connected_graph(int(rng.integers(n_min, n_max + 1)), rng) for _ in range(count)]
