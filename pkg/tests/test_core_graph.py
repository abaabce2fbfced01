#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
基础图模块测试
"""

import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlab.core_graph import (Graph, bipartite_complement, cycle_graph, find_induced_cycle,
                              induced_subgraph, is_induced_cycle, matching_graph, path_graph,
                              similarity_partition)
from cwlab.errors import GraphError, SearchBudgetExceeded
from cwlab.word_model import WordSpec, build_window


@st.composite
def graphs(draw, max_vertices=8):
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    names = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(names, 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(names, chosen)


class TestGraph:
    def test_rejects_self_loop(self):
        with pytest.raises(GraphError):
            Graph.from_edges(['a'], [('a', 'a')])

    def test_rejects_unknown_endpoint(self):
        with pytest.raises(GraphError):
            Graph.from_edges(['a'], [('a', 'b')])

    def test_edges_are_normalised(self):
        graph = Graph.from_edges(['a', 'b'], [('b', 'a')])
        assert graph.edges == frozenset({('a', 'b')})
        assert graph.has_edge('b', 'a')

    def test_neighbours_and_degree(self, c5):
        assert c5.neighbours('a') == frozenset({'b', 'e'})
        assert c5.degree('c') == 2
        with pytest.raises(GraphError):
            c5.neighbours('z')

    def test_relabel_requires_injective_mapping(self, c5):
        with pytest.raises(GraphError):
            c5.relabel({'a': 'b'})
        swapped = c5.relabel({'a': 'b', 'b': 'a'})
        assert swapped.has_edge('b', 'e')

    def test_networkx_view(self, c5):
        assert nx.is_isomorphic(c5.to_networkx(), nx.cycle_graph(5))


class TestInducedSubgraph:
    def test_identity(self, c5):
        assert induced_subgraph(c5, c5.vertices) == c5

    def test_empty(self, c5):
        assert len(induced_subgraph(c5, [])) == 0

    def test_c5_prefix_is_path(self, c5):
        sub = induced_subgraph(c5, ['a', 'b', 'c'])
        assert sub.edges == frozenset({('a', 'b'), ('b', 'c')})

    def test_unknown_vertex(self, c5):
        with pytest.raises(GraphError):
            induced_subgraph(c5, ['a', 'x'])

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_composes(self, graph, data):
        order = graph.sorted_vertices()
        outer = data.draw(st.lists(st.sampled_from(order), unique=True))
        inner = data.draw(st.lists(st.sampled_from(outer), unique=True)) if outer else []
        assert induced_subgraph(induced_subgraph(graph, outer), inner) == induced_subgraph(graph, inner)


class TestSimilarityPartition:
    def test_whole_vertex_set_is_one_class(self, c5):
        assert similarity_partition(c5, c5.vertices).mu == 1

    def test_two_paths(self):
        graph = Graph.from_edges(
            ['v11', 'v12', 'v13', 'v21', 'v22', 'v23'],
            [('v11', 'v12'), ('v12', 'v13'), ('v21', 'v22'), ('v22', 'v23')])
        partition = similarity_partition(graph, ['v11', 'v21'])
        assert partition.mu == 2
        assert partition.classes == (frozenset({'v11'}), frozenset({'v21'}))

    def test_column_prefix_of_matching_window(self):
        window = build_window(WordSpec('', '0'), 4, (1, 5))
        prefix = window.column(1) + window.column(2)
        partition = similarity_partition(window.graph, prefix)
        # 第1列没有外部邻居，第2列每行各自连向第3列
        assert partition.mu == 5
        assert frozenset(window.column(1)) in partition.classes

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_classes_match_outside_neighbourhoods(self, graph, data):
        subset = data.draw(st.lists(st.sampled_from(graph.sorted_vertices()), unique=True))
        partition = similarity_partition(graph, subset)
        assert partition.mu <= len(subset)
        assert set().union(*partition.classes) == set(subset)
        outside = graph.vertices - set(subset)
        for u, v in itertools.combinations(subset, 2):
            same = partition.class_of(u) == partition.class_of(v)
            assert same == ((graph.adjacency[u] & outside) == (graph.adjacency[v] & outside))


class TestBipartiteComplement:
    def test_matching_becomes_cross_matching(self, two_k2):
        result = bipartite_complement(two_k2, ['x1', 'x2'], ['y1', 'y2'])
        assert result.edges == frozenset({('x1', 'y2'), ('x2', 'y1')})

    def test_empty_becomes_complete_bipartite(self):
        graph = Graph.from_edges(['a1', 'a2', 'b1', 'b2', 'b3'])
        result = bipartite_complement(graph, ['a1', 'a2'], ['b1', 'b2', 'b3'])
        assert len(result.edges) == 6

    def test_overlap_rejected(self, two_k2):
        with pytest.raises(GraphError):
            bipartite_complement(two_k2, ['x1'], ['x1', 'y1'])

    def test_assert_bipartite(self, two_k2):
        with pytest.raises(GraphError):
            bipartite_complement(two_k2, ['x1', 'y1'], ['x2'], assert_bipartite=True)

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_involution(self, graph, data):
        order = graph.sorted_vertices()
        sides = data.draw(st.lists(st.sampled_from([0, 1, 2]), min_size=len(order), max_size=len(order)))
        side_a = [v for v, s in zip(order, sides) if s == 1]
        side_b = [v for v, s in zip(order, sides) if s == 2]
        once = bipartite_complement(graph, side_a, side_b)
        assert bipartite_complement(once, side_a, side_b) == graph


class TestFindInducedCycle:
    def test_c5(self, c5):
        found = find_induced_cycle(c5, 5)
        assert sorted(found) == ['a', 'b', 'c', 'd', 'e']
        assert is_induced_cycle(c5, found)

    def test_c5_has_no_c4(self, c5):
        assert find_induced_cycle(c5, 4) is None

    def test_length_too_small(self, c5):
        with pytest.raises(GraphError):
            find_induced_cycle(c5, 2)

    def test_guard(self):
        with pytest.raises(GraphError):
            find_induced_cycle(path_graph(10), 4, guard=5)

    def test_budget_is_distinct_from_absence(self):
        with pytest.raises(SearchBudgetExceeded):
            find_induced_cycle(cycle_graph(8), 8, max_nodes=3)

    def test_c6_in_alternating_window(self):
        window = build_window(WordSpec('', '01'), 6, (1, 8))
        found = find_induced_cycle(window.graph, 6, guard=48)
        assert found is not None
        assert is_induced_cycle(window.graph, found)
        assert nx.is_isomorphic(induced_subgraph(window.graph, found).to_networkx(), nx.cycle_graph(6))

    def test_c6_inside_one_complemented_gap(self):
        # 三行时 K_{3,3} 去掉完美匹配即为 C6
        window = build_window(WordSpec('', '001'), 3, (3, 4))
        found = find_induced_cycle(window.graph, 6)
        assert found is not None
        assert sorted(found) == sorted(window.graph.vertices)
        assert find_induced_cycle(build_window(WordSpec('', '001'), 2, (1, 12)).graph, 6) is None

    def test_matches_brute_force_on_random_graphs(self):
        rng = random.Random(7)
        for _ in range(30):
            names = [f"v{i}" for i in range(7)]
            edges = [p for p in itertools.combinations(names, 2) if rng.random() < 0.35]
            graph = Graph.from_edges(names, edges)
            for length in (4, 5):
                found = find_induced_cycle(graph, length)
                expected = any(
                    is_induced_cycle(graph, [c[0]] + list(rest))
                    for c in itertools.combinations(names, length)
                    for rest in itertools.permutations(c[1:])
                )
                assert (found is not None) == expected
                if found is not None:
                    assert is_induced_cycle(graph, found)


class TestCatalog:
    def test_shapes(self):
        assert len(cycle_graph(6).edges) == 6
        assert len(path_graph(4).edges) == 3
        assert matching_graph(2).edges == frozenset({('x1', 'y1'), ('x2', 'y2')})
        with pytest.raises(GraphError):
            cycle_graph(2)
