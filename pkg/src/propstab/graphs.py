"""Weighted digraphs, Laplacian spectra, and source-separating cutset machinery.

Vertices are numbered 1..N.  An edge (tail, head, weight) means the tail's
output is fed to the head, so the head listens to the tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DimensionMismatch,
    GraphTooLarge,
    NonPositiveWeight,
    NotSeparating,
    SchemaError,
    SelfLoop,
    Unreachable,
)

__all__ = [
    "WeightedDigraph",
    "LaplacianSpectrum",
    "CutsetPartition",
    "laplacian",
    "validate_cutset",
    "enumerate_separating_cutsets",
    "graph_distance",
    "monotone_path_exists",
    "reachable_from",
    "is_strongly_connected",
    "CUTSET_ENUM_CAP",
]

# refuse exhaustive cutset enumeration beyond this many vertices
CUTSET_ENUM_CAP = 12

# |eig| below this fraction of the largest magnitude counts as zero
_ZERO_EIG_RTOL = 1e-9

# eigenvector-matrix condition number above this flags a defective Laplacian
_DIAG_COND_CAP = 1e8


@dataclass(frozen=True)
class WeightedDigraph:
    """Immutable digraph with positive edge weights and vertices 1..n_vertices."""

    n_vertices: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise SchemaError("graph needs at least one vertex")
        incoming: dict[int, dict[int, float]] = {v: {} for v in range(1, self.n_vertices + 1)}
        outgoing: dict[int, dict[int, float]] = {v: {} for v in range(1, self.n_vertices + 1)}
        normalized = []
        for edge in self.edges:
            tail, head, weight = int(edge[0]), int(edge[1]), float(edge[2])
            for v in (tail, head):
                if not 1 <= v <= self.n_vertices:
                    raise SchemaError(f"vertex {v} outside 1..{self.n_vertices}")
            if tail == head:
                raise SelfLoop(f"self-loop at vertex {tail}")
            if weight <= 0.0 or not np.isfinite(weight):
                raise NonPositiveWeight(f"edge ({tail}, {head}) has weight {weight}")
            if head in outgoing[tail]:
                raise SchemaError(f"duplicate edge ({tail}, {head})")
            outgoing[tail][head] = weight
            incoming[head][tail] = weight
            normalized.append((tail, head, weight))
        object.__setattr__(self, "edges", tuple(normalized))
        object.__setattr__(self, "_incoming", incoming)
        object.__setattr__(self, "_outgoing", outgoing)

    @property
    def vertices(self) -> range:
        return range(1, self.n_vertices + 1)

    def in_neighbors(self, vertex: int) -> frozenset[int]:
        """Tails of edges arriving at `vertex`."""
        return frozenset(self._incoming[self._check(vertex)])

    def out_neighbors(self, vertex: int) -> frozenset[int]:
        return frozenset(self._outgoing[self._check(vertex)])

    def weighted_in_degree(self, vertex: int) -> float:
        """Total incoming weight at `vertex`."""
        return float(sum(self._incoming[self._check(vertex)].values()))

    def max_weighted_in_degree(self) -> float:
        return max(self.weighted_in_degree(v) for v in self.vertices)

    def weight(self, tail: int, head: int) -> float:
        """Weight of the edge tail -> head, 0.0 when absent."""
        return self._outgoing[self._check(tail)].get(self._check(head), 0.0)

    def incoming_weights(self, vertex: int) -> dict[int, float]:
        return dict(self._incoming[self._check(vertex)])

    def _check(self, vertex: int) -> int:
        if not 1 <= vertex <= self.n_vertices:
            raise SchemaError(f"vertex {vertex} outside 1..{self.n_vertices}")
        return vertex

    def __repr__(self) -> str:
        return f"WeightedDigraph(n_vertices={self.n_vertices}, n_edges={len(self.edges)})"


@dataclass(frozen=True, eq=False)
class LaplacianSpectrum:
    """Laplacian matrix with its eigenvalues sorted by magnitude."""

    matrix: NDArray[np.float64]
    eigenvalues: NDArray[np.complex128]
    zero_multiplicity: int
    diagonalizable: bool

    def __post_init__(self) -> None:
        self.matrix.setflags(write=False)
        self.eigenvalues.setflags(write=False)

    @property
    def nonzero(self) -> NDArray[np.complex128]:
        """Eigenvalues past the single structural zero (coupled modes)."""
        return self.eigenvalues[1:]


def laplacian(graph: WeightedDigraph) -> LaplacianSpectrum:
    """In-degree Laplacian L = D_in - A_in and its spectrum.

    Row i holds -w(j -> i) off the diagonal and the total incoming weight on
    the diagonal, so every row sums to zero.
    """
    n = graph.n_vertices
    L = np.zeros((n, n))
    for tail, head, weight in graph.edges:
        L[head - 1, tail - 1] -= weight
        L[head - 1, head - 1] += weight
    eigvals, eigvecs = np.linalg.eig(L)
    order = np.argsort(np.abs(eigvals), kind="stable")
    eigvals = eigvals[order]
    scale = float(np.max(np.abs(eigvals))) if n > 0 else 0.0
    if scale == 0.0:
        zero_mult = n
    else:
        zero_mult = int(np.sum(np.abs(eigvals) < _ZERO_EIG_RTOL * scale))
    cond = float(np.linalg.cond(eigvecs))
    return LaplacianSpectrum(
        matrix=L,
        eigenvalues=eigvals,
        zero_multiplicity=zero_mult,
        diagonalizable=bool(np.isfinite(cond) and cond <= _DIAG_COND_CAP),
    )


def reachable_from(
    graph: WeightedDigraph, source: int, avoid: frozenset[int] | set[int] = frozenset()
) -> frozenset[int]:
    """Vertices reachable from `source` along edges that never enter `avoid`.

    The source itself is included only when it is outside `avoid`.
    """
    graph._check(source)
    if source in avoid:
        return frozenset()
    seen = {source}
    stack = [source]
    while stack:
        v = stack.pop()
        for w in graph.out_neighbors(v):
            if w not in seen and w not in avoid:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


@dataclass(frozen=True)
class CutsetPartition:
    """Partition of the vertices induced by a source-separating cutset.

    `near` is the source side, `cut` the separating vertices, and `far` the
    vertices every source-to-far path must cross the cut to reach.  No edge
    runs directly from `near` to `far`.
    """

    source: int
    near: frozenset[int]
    cut: frozenset[int]
    far: frozenset[int]


def validate_cutset(
    graph: WeightedDigraph, source: int, cut: Iterable[int]
) -> CutsetPartition:
    """Canonical partition for a candidate cutset, with the far side maximal.

    The near side is what the source reaches without entering the cut (empty
    when the source is itself a cut vertex); everything else is far.  An empty
    far side is a valid, if vacuous, partition.  Raises NotSeparating only
    when the construction is inconsistent.
    """
    cut_set = frozenset(int(v) for v in cut)
    for v in cut_set:
        graph._check(v)
    graph._check(source)
    near = reachable_from(graph, source, avoid=cut_set)
    far = frozenset(graph.vertices) - cut_set - near
    if source in far:
        raise NotSeparating(f"source {source} landed on the far side")
    # re-assert the defining property: no edge may jump the cut directly
    for tail, head, _ in graph.edges:
        if tail in near and head in far:
            raise NotSeparating(f"edge ({tail}, {head}) crosses from near to far")
    return CutsetPartition(source=source, near=near, cut=cut_set, far=far)


def enumerate_separating_cutsets(
    graph: WeightedDigraph, source: int, cap: int = CUTSET_ENUM_CAP
) -> list[CutsetPartition]:
    """All cutsets separating `source` from a nonempty far side.

    Exhaustive over vertex subsets, deduplicated by the induced partition.
    Refuses graphs beyond `cap` vertices.
    """
    n = graph.n_vertices
    if n > cap:
        raise GraphTooLarge(f"{n} vertices exceeds the enumeration cap of {cap}")
    graph._check(source)
    others = [v for v in graph.vertices]
    seen: set[tuple[frozenset[int], frozenset[int]]] = set()
    out: list[CutsetPartition] = []
    for size in range(0, n):
        for combo in combinations(others, size):
            try:
                part = validate_cutset(graph, source, combo)
            except NotSeparating:
                continue
            if not part.far:
                continue
            key = (part.cut, part.far)
            if key in seen:
                continue
            seen.add(key)
            out.append(part)
    return out


def graph_distance(graph: WeightedDigraph, source: int) -> dict[int, int]:
    """Directed hop distance from `source` for every reachable vertex."""
    graph._check(source)
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for v in frontier:
            for w in graph.out_neighbors(v):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = nxt
    return dist


def _energy_lookup(energies: Mapping[int, float] | Sequence[float], n: int):
    if isinstance(energies, Mapping):
        def get(v: int) -> float:
            return float(energies[v])
        return get
    arr = np.asarray(energies, dtype=float)
    if arr.shape != (n,):
        raise DimensionMismatch(f"expected {n} energies, got shape {arr.shape}")

    def get(v: int) -> float:
        return float(arr[v - 1])
    return get


def monotone_path_exists(
    graph: WeightedDigraph,
    source: int,
    target: int,
    energies: Mapping[int, float] | Sequence[float],
    rel_tol: float = 1e-6,
) -> bool:
    """Whether some source-to-target path has non-increasing vertex energies.

    Each hop tail -> head must satisfy E_head <= E_tail * (1 + rel_tol).
    Raises Unreachable when no directed path exists at all.
    """
    graph._check(target)
    if target not in reachable_from(graph, source):
        raise Unreachable(f"no directed path from {source} to {target}")
    energy = _energy_lookup(energies, graph.n_vertices)
    seen = {source}
    stack = [source]
    while stack:
        v = stack.pop()
        if v == target:
            return True
        ev = energy(v)
        for w in graph.out_neighbors(v):
            if w not in seen and energy(w) <= ev * (1.0 + rel_tol):
                seen.add(w)
                stack.append(w)
    return target in seen


def is_strongly_connected(
    graph: WeightedDigraph, region: Iterable[int] | None = None
) -> bool:
    """Strong connectivity of the subgraph induced by `region` (default: all)."""
    verts = frozenset(graph.vertices) if region is None else frozenset(int(v) for v in region)
    if not verts:
        return False
    for v in verts:
        graph._check(v)
    start = next(iter(verts))

    def sweep(forward: bool) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            nbrs = graph.out_neighbors(v) if forward else graph.in_neighbors(v)
            for w in nbrs:
                if w in verts and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    return sweep(True) == verts and sweep(False) == verts
