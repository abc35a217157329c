"""Weighted digraphs, Laplacians, and separating-cutset machinery."""
from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from conftest import (
    complete_graph,
    directed_cycle,
    directed_line,
    random_sc_digraph,
    unit_path,
)
from propstab import (
    GraphTooLarge,
    NonPositiveWeight,
    SchemaError,
    SelfLoop,
    Unreachable,
    WeightedDigraph,
    enumerate_separating_cutsets,
    graph_distance,
    is_strongly_connected,
    laplacian,
    monotone_path_exists,
    reachable_from,
    validate_cutset,
)


class TestConstruction:
    def test_degree_bookkeeping(self):
        # edge (tail, head, w) feeds the head: in-degree sums arriving weight
        g = WeightedDigraph(3, ((1, 2, 0.5), (3, 2, 1.5), (2, 1, 2.0)))
        assert g.weighted_in_degree(2) == pytest.approx(2.0)
        assert g.weighted_in_degree(1) == pytest.approx(2.0)
        assert g.weighted_in_degree(3) == 0.0
        assert g.max_weighted_in_degree() == pytest.approx(2.0)
        assert set(g.in_neighbors(2)) == {1, 3}
        assert set(g.out_neighbors(2)) == {1}

    def test_self_loop_rejected(self):
        with pytest.raises(SelfLoop):
            WeightedDigraph(2, ((1, 1, 1.0),))

    def test_zero_weight_rejected(self):
        with pytest.raises(NonPositiveWeight):
            WeightedDigraph(2, ((1, 2, 0.0),))

    def test_negative_weight_rejected(self):
        with pytest.raises(NonPositiveWeight):
            WeightedDigraph(2, ((1, 2, -0.3),))

    def test_duplicate_edge_rejected(self):
        with pytest.raises(SchemaError):
            WeightedDigraph(2, ((1, 2, 1.0), (1, 2, 2.0)))

    def test_vertex_out_of_range_rejected(self):
        with pytest.raises(SchemaError):
            WeightedDigraph(2, ((1, 3, 1.0),))

    def test_empty_graph_rejected(self):
        with pytest.raises(SchemaError):
            WeightedDigraph(0, ())


class TestLaplacian:
    def test_rows_sum_to_zero(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            g = random_sc_digraph(rng, int(rng.integers(2, 8)))
            spec = laplacian(g)
            assert np.allclose(spec.matrix.sum(axis=1), 0.0, atol=1e-12)

    def test_unit_path_spectrum_closed_form(self):
        # bidirectional unit path on n vertices: eigenvalues 2 - 2 cos(k pi / n)
        n = 6
        spec = laplacian(unit_path(n))
        expected = np.sort(2.0 - 2.0 * np.cos(np.pi * np.arange(n) / n))
        got = np.sort(spec.eigenvalues.real)
        assert np.allclose(got, expected, atol=1e-9)
        assert np.allclose(spec.eigenvalues.imag, 0.0, atol=1e-9)

    def test_directed_cycle_spectrum_closed_form(self):
        # circulant: eigenvalues 1 - exp(2 pi i k / n)
        n = 5
        spec = laplacian(directed_cycle(n))
        expected = np.sort_complex(1.0 - np.exp(2j * np.pi * np.arange(n) / n))
        got = np.sort_complex(spec.eigenvalues)
        assert np.allclose(got, expected, atol=1e-9)

    def test_zero_multiplicity_counts_components(self):
        g = WeightedDigraph(4, ((1, 2, 1.0), (2, 1, 1.0), (3, 4, 1.0), (4, 3, 1.0)))
        assert laplacian(g).zero_multiplicity == 2
        assert laplacian(unit_path(4)).zero_multiplicity == 1

    def test_directed_line_is_defective(self):
        # all eigenvalues collide, eigenvector space is deficient
        spec = laplacian(directed_line(3))
        assert not spec.diagonalizable

    def test_symmetric_case_is_diagonalizable(self):
        assert laplacian(unit_path(5)).diagonalizable


class TestReachability:
    def test_reachable_respects_direction(self):
        g = directed_line(4)
        assert reachable_from(g, 2) == frozenset({2, 3, 4})
        assert reachable_from(g, 4) == frozenset({4})

    def test_avoid_set_blocks_paths(self):
        g = unit_path(5)
        assert reachable_from(g, 1, avoid={3}) == frozenset({1, 2})

    def test_source_inside_avoid_reaches_nothing(self):
        g = unit_path(3)
        assert reachable_from(g, 1, avoid={1}) == frozenset()

    def test_distance_bfs(self):
        g = unit_path(4)
        assert graph_distance(g, 2) == {2: 0, 1: 1, 3: 1, 4: 2}
        gl = directed_line(3)
        assert graph_distance(gl, 2) == {2: 0, 3: 1}

    def test_strong_connectivity(self):
        assert is_strongly_connected(directed_cycle(4))
        assert not is_strongly_connected(directed_line(3))
        assert is_strongly_connected(unit_path(5))

    def test_strong_connectivity_of_region(self):
        g = directed_line(4)
        assert is_strongly_connected(g, region={2})
        gg = WeightedDigraph(4, ((1, 2, 1.0), (2, 3, 1.0), (3, 2, 1.0), (3, 4, 1.0)))
        assert is_strongly_connected(gg, region={2, 3})
        assert not is_strongly_connected(gg, region={2, 3, 4})


class TestCutsetPartitions:
    def test_path_interior_cut(self):
        g = unit_path(3)
        part = validate_cutset(g, 1, [2])
        assert part.near == frozenset({1})
        assert part.cut == frozenset({2})
        assert part.far == frozenset({3})

    def test_everything_but_source_is_a_valid_vacuous_cut(self):
        g = unit_path(3)
        part = validate_cutset(g, 1, [2, 3])
        assert part.near == frozenset({1})
        assert part.far == frozenset()

    def test_triangle_cut_with_detour_has_empty_far_side(self):
        g = complete_graph(3)
        part = validate_cutset(g, 1, [2])
        assert part.far == frozenset()  # vertex 3 still reachable around the cut
        assert part.near == frozenset({1, 3})

    def test_source_inside_cut_gives_maximal_far_side(self):
        g = unit_path(3)
        part = validate_cutset(g, 1, [1])
        assert part.near == frozenset()
        assert part.far == frozenset({2, 3})

    def test_unknown_vertex_rejected(self):
        g = unit_path(3)
        with pytest.raises(SchemaError):
            validate_cutset(g, 1, [9])

    def test_partition_tiles_the_vertex_set(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            g = random_sc_digraph(rng, n)
            source = int(rng.integers(1, n + 1))
            size = int(rng.integers(1, n + 1))
            cut = list(rng.choice(np.arange(1, n + 1), size=size, replace=False))
            part = validate_cutset(g, source, cut)
            pieces = [part.near, part.cut, part.far]
            assert frozenset().union(*pieces) == frozenset(g.vertices)
            assert sum(len(p) for p in pieces) == n
            assert source not in part.far
            # defining property, checked against the raw edge list
            for tail, head, _ in g.edges:
                assert not (tail in part.near and head in part.far)


def _oracle_partitions(g: WeightedDigraph, source: int):
    """Independent reimplementation: subset scan + hand-rolled BFS."""
    verts = list(range(1, g.n_vertices + 1))
    adjacency = {v: [] for v in verts}
    for tail, head, _ in g.edges:
        adjacency[tail].append(head)
    found = set()
    for size in range(0, g.n_vertices):
        for cut in combinations(verts, size):
            cut_set = frozenset(cut)
            if source in cut_set:
                near = frozenset()
            else:
                seen = {source}
                stack = [source]
                while stack:
                    v = stack.pop()
                    for w in adjacency[v]:
                        if w not in seen and w not in cut_set:
                            seen.add(w)
                            stack.append(w)
                near = frozenset(seen)
            far = frozenset(verts) - cut_set - near
            if far:
                found.add((cut_set, near, far))
    return found


class TestCutsetEnumeration:
    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(23)
        for trial in range(12):
            n = int(rng.integers(2, 6))
            g = random_sc_digraph(rng, n)
            source = int(rng.integers(1, n + 1))
            got = {
                (p.cut, p.near, p.far)
                for p in enumerate_separating_cutsets(g, source)
            }
            assert got == _oracle_partitions(g, source), f"trial {trial}"

    def test_path_enumeration_contains_known_partitions(self):
        g = unit_path(3)
        parts = {
            (tuple(sorted(p.cut)), tuple(sorted(p.far)))
            for p in enumerate_separating_cutsets(g, 1)
        }
        assert ((2,), (3,)) in parts
        assert ((1,), (2, 3)) in parts

    def test_complete_graph_needs_detour_blocking(self):
        # no cut avoiding the source splits a complete graph
        parts = enumerate_separating_cutsets(complete_graph(3), 1)
        for p in parts:
            assert 1 in p.cut

    def test_enumeration_skips_vacuous_far_sides(self):
        for p in enumerate_separating_cutsets(unit_path(4), 2):
            assert p.far

    def test_cap_guard(self):
        g = unit_path(13)
        with pytest.raises(GraphTooLarge):
            enumerate_separating_cutsets(g, 1)
        assert enumerate_separating_cutsets(g, 1, cap=13)


class TestMonotonePaths:
    def test_direct_decreasing_chain(self):
        g = directed_line(3)
        energies = {1: 4.0, 2: 2.0, 3: 1.0}
        assert monotone_path_exists(g, 1, 3, energies)

    def test_bump_on_only_path_fails(self):
        g = directed_line(3)
        energies = {1: 1.0, 2: 2.0, 3: 0.5}
        assert not monotone_path_exists(g, 1, 3, energies)

    def test_detour_around_bump_succeeds(self):
        g = WeightedDigraph(
            4, ((1, 2, 1.0), (2, 4, 1.0), (1, 3, 1.0), (3, 4, 1.0))
        )
        energies = {1: 4.0, 2: 9.0, 3: 3.0, 4: 1.0}
        assert monotone_path_exists(g, 1, 4, energies)

    def test_tolerance_absorbs_round_off(self):
        g = directed_line(2)
        energies = {1: 1.0, 2: 1.0 + 1e-9}
        assert monotone_path_exists(g, 1, 2, energies, rel_tol=1e-6)
        assert not monotone_path_exists(g, 1, 2, energies, rel_tol=1e-12)

    def test_unreachable_target_raises(self):
        g = directed_line(3)
        with pytest.raises(Unreachable):
            monotone_path_exists(g, 3, 1, {1: 1.0, 2: 1.0, 3: 1.0})

    def test_source_is_its_own_monotone_path(self):
        g = directed_line(2)
        assert monotone_path_exists(g, 1, 1, {1: 0.5, 2: 0.1})
