"""Weighted undirected graphs: ingestion, Laplacian and intrinsic metrics."""

from __future__ import annotations

import io
import logging
import math
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra

from .errors import (
    ConflictingDuplicateEdge,
    DisconnectedGraph,
    GraphFormatError,
    MalformedLine,
    NegativeWeight,
    NotSymmetric,
)

log = logging.getLogger(__name__)

PAPER = "paper"
DEGREE_NORMALIZED = "degree-normalized"
METRIC_VARIANTS = (PAPER, DEGREE_NORMALIZED)

INTRINSIC_TOL = 1e-12
MM_SYMMETRY_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on string-labelled vertices.

    ``weights[i, j]`` is the edge weight between ``labels[i]`` and
    ``labels[j]``; zero means no edge. The matrix is stored read-only.
    """

    labels: tuple[str, ...]
    weights: np.ndarray
    dropped_self_loops: int = 0

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        w = _frozen(self.weights)
        n = len(labels)
        if w.shape != (n, n):
            raise GraphFormatError(f"weights shape {w.shape} does not match {n} labels")
        if len(set(labels)) != n:
            raise GraphFormatError("vertex labels must be unique")
        if not np.all(np.isfinite(w)):
            raise GraphFormatError("weights must be finite")
        if np.any(w < 0):
            raise NegativeWeight("edge weights must be nonnegative")
        if np.any(np.diag(w) != 0):
            raise GraphFormatError("self-loops are not allowed in the weight matrix")
        if not np.array_equal(w, w.T):
            raise NotSymmetric("weight matrix must be exactly symmetric")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return int(np.count_nonzero(np.triu(self.weights)))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown vertex {label!r}") from None

    def edges(self) -> list[tuple[str, str, float]]:
        """Edges as ``(u, v, w)`` with ``u`` before ``v`` in index order."""
        rows, cols = np.nonzero(np.triu(self.weights))
        return [(self.labels[i], self.labels[j], float(self.weights[i, j])) for i, j in zip(rows, cols)]

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        ncomp, _ = connected_components(csr_matrix(self.weights), directed=False)
        return ncomp == 1

    def permuted(self, perm: Iterable[int]) -> "Graph":
        """Relabelled copy whose vertex ``i`` is this graph's vertex ``perm[i]``."""
        p = np.asarray(list(perm), dtype=int)
        return Graph(tuple(self.labels[i] for i in p), self.weights[np.ix_(p, p)], self.dropped_self_loops)

    def scaled(self, alpha: float) -> "Graph":
        return Graph(self.labels, alpha * self.weights, self.dropped_self_loops)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], labels: Iterable[str] | None = None) -> "Graph":
        """Build a graph from ``(u, v, w)`` triples (``w`` defaults to 1).

        Vertices appear in ``labels`` order if given, otherwise in order of
        first appearance. Self-loops are dropped and counted.
        """
        order: dict[str, int] = {}
        if labels is not None:
            for lab in labels:
                order.setdefault(str(lab), len(order))
        entries: dict[tuple[int, int], float] = {}
        loops = 0
        for e in edges:
            u, v = str(e[0]), str(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            i = order.setdefault(u, len(order))
            j = order.setdefault(v, len(order))
            if w < 0:
                raise NegativeWeight(f"negative weight {w} on edge ({u}, {v})")
            if i == j:
                loops += 1
                continue
            _merge(entries, i, j, w, u, v)
        return cls._from_entries(order, entries, loops)

    @classmethod
    def _from_entries(cls, order, entries, loops):
        n = len(order)
        w = np.zeros((n, n))
        for (i, j), val in entries.items():
            w[i, j] = w[j, i] = val
        if loops:
            log.warning("dropped %d self-loop(s)", loops)
        return cls(tuple(order), w, loops)


def _merge(entries, i, j, w, u, v):
    key = (min(i, j), max(i, j))
    old = entries.get(key)
    if old is not None and old != w:
        raise ConflictingDuplicateEdge(f"edge ({u}, {v}) given with weights {old} and {w}")
    entries[key] = w


def parse_edge_list(text: str | TextIO) -> Graph:
    """Parse a whitespace-separated ``u v w`` edge list.

    ``#`` starts a comment; blank lines are skipped. A symmetric duplicate
    with the same weight is merged, a different weight is an error.
    Self-loop lines are dropped and counted in ``Graph.dropped_self_loops``.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text
    order: dict[str, int] = {}
    entries: dict[tuple[int, int], float] = {}
    loops = 0
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise MalformedLine(lineno, raw)
        u, v, ws = parts
        try:
            w = float(ws)
        except ValueError:
            raise MalformedLine(lineno, raw, "weight is not a number") from None
        if not math.isfinite(w):
            raise MalformedLine(lineno, raw, "weight is not finite")
        if w < 0:
            raise NegativeWeight(f"line {lineno}: negative weight {w}")
        i = order.setdefault(u, len(order))
        j = order.setdefault(v, len(order))
        if i == j:
            loops += 1
            continue
        try:
            _merge(entries, i, j, w, u, v)
        except ConflictingDuplicateEdge as exc:
            raise ConflictingDuplicateEdge(f"line {lineno}: {exc}") from None
    return Graph._from_entries(order, entries, loops)


def read_matrix_market(source: str | PathLike | TextIO) -> Graph:
    """Read a Matrix Market file as a weighted adjacency matrix.

    Vertices are labelled ``"1".."N"``. ``general`` matrices are accepted
    only when symmetric to within 1e-12; diagonal entries are dropped.
    """
    from scipy.io import mmread

    try:
        m = mmread(source)
    except (ValueError, OSError, IndexError) as exc:
        raise GraphFormatError(f"cannot read Matrix Market input: {exc}") from None
    a = m.toarray() if hasattr(m, "toarray") else np.asarray(m)
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise GraphFormatError(f"adjacency must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise GraphFormatError("adjacency has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if np.max(np.abs(a - a.T), initial=0.0) > MM_SYMMETRY_TOL * scale:
        raise NotSymmetric("Matrix Market matrix is not symmetric")
    if np.any(a < 0):
        raise NegativeWeight("adjacency has negative entries")
    loops = int(np.count_nonzero(np.diag(a)))
    if loops:
        log.warning("dropped %d self-loop(s)", loops)
    a = 0.5 * (a + a.T)
    np.fill_diagonal(a, 0.0)
    return Graph(tuple(str(i + 1) for i in range(a.shape[0])), a, loops)


def load_graph(path: str | PathLike, fmt: str = "auto") -> Graph:
    """Load a graph file; ``auto`` picks Matrix Market for ``.mtx``."""
    path = Path(path)
    if fmt == "auto":
        fmt = "matrixmarket" if path.suffix.lower() == ".mtx" else "edgelist"
    if fmt == "matrixmarket":
        return read_matrix_market(str(path))
    if fmt == "edgelist":
        with open(path, encoding="utf-8") as fh:
            return parse_edge_list(fh)
    raise ValueError(f"unknown input format {fmt!r}")


def laplacian(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian ``D - A`` with ``D`` the weighted degrees."""
    w = np.array(g.weights)
    lap = -w
    lap[np.diag_indices_from(lap)] = w.sum(axis=1)
    return lap


def degrees(g: Graph, weighted: bool = True) -> np.ndarray:
    if weighted:
        return g.weights.sum(axis=1)
    return np.count_nonzero(g.weights, axis=1).astype(float)


@dataclass(frozen=True)
class IntrinsicMetric:
    """Edge lengths, path distances and intrinsic-condition data.

    ``edge_length`` is an N x N matrix, zero off the edge set. ``dist`` is
    the shortest-path extension of the edge lengths to all pairs.
    """

    variant: str
    edge_length: np.ndarray
    dist: np.ndarray
    jump_size: float
    vertex_sums: np.ndarray
    labels: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class IntrinsicAudit:
    passed: bool
    max_vertex_sum: float
    violating: tuple[int, ...]
    tol: float = INTRINSIC_TOL


def edge_lengths(g: Graph, variant: str = DEGREE_NORMALIZED, weighted_degree: bool = True) -> np.ndarray:
    w = g.weights
    mask = w > 0
    length = np.zeros_like(w)
    if variant == DEGREE_NORMALIZED:
        deg = degrees(g, weighted_degree)
        big = np.maximum.outer(deg, deg)
        length[mask] = 1.0 / np.sqrt(big[mask])
    elif variant == PAPER:
        # taken verbatim; fails the intrinsic condition, see verify_intrinsic
        max_deg = float(degrees(g, weighted_degree).max(initial=0.0))
        length[mask] = max_deg / np.sqrt(w[mask])
    else:
        raise ValueError(f"unknown metric variant {variant!r}; expected one of {METRIC_VARIANTS}")
    return length


def intrinsic_metric(g: Graph, variant: str = DEGREE_NORMALIZED, weighted_degree: bool = True) -> IntrinsicMetric:
    """Intrinsic metric of the requested variant with all-pairs distances.

    ``degree-normalized`` gives edge ``(x, y)`` length
    ``1/sqrt(max(Deg x, Deg y))`` and always satisfies the intrinsic
    condition. ``paper`` uses ``maxdeg / sqrt(w)``.

    Raises
    ------
    DisconnectedGraph
        If some pair of vertices is at infinite distance.
    """
    length = edge_lengths(g, variant, weighted_degree)
    if g.n > 1:
        dist = dijkstra(csr_matrix(length), directed=False)
    else:
        dist = np.zeros((g.n, g.n))
    if not np.all(np.isfinite(dist)):
        raise DisconnectedGraph("graph is disconnected: some distances are infinite")
    dist = np.minimum(dist, dist.T)
    np.fill_diagonal(dist, 0.0)
    jump = float(length.max(initial=0.0))
    sums = (g.weights * length**2).sum(axis=1)
    return IntrinsicMetric(variant, _frozen(length), _frozen(dist), jump, _frozen(sums), g.labels)


def verify_intrinsic(m: IntrinsicMetric, tol: float = INTRINSIC_TOL) -> IntrinsicAudit:
    """Check ``sum_y w(x,y) rho(x,y)^2 <= 1`` at every vertex. Never raises."""
    sums = np.asarray(m.vertex_sums)
    bad = tuple(int(i) for i in np.flatnonzero(sums > 1.0 + tol))
    return IntrinsicAudit(not bad, float(sums.max(initial=0.0)), bad, tol)
