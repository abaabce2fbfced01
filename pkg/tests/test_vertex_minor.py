#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
顶点子式与因子约化测试
"""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlab.core_graph import Graph, complete_graph, matching_graph
from cwlab.errors import GraphError, InsufficientRowsError, ReductionError, TargetUnreachableError
from cwlab.serialization import validate_trace_json
from cwlab.vertex_minor import (StepKind, apply_operation, complement_between_neighbourhoods,
                                cut_rank, delete_column, local_complement, pivot, plan_rows,
                                reduce_00, reduce_01, reduce_02, reduce_211, reduce_212,
                                reduce_to_target, row_budget)
from cwlab.word_model import WordSpec, build_F, build_window


@st.composite
def graphs(draw, max_vertices=7):
    n = draw(st.integers(min_value=2, max_value=max_vertices))
    names = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(names, 2))
    return Graph.from_edges(names, draw(st.lists(st.sampled_from(pairs), unique=True)))


@st.composite
def bipartite_with_edge(draw):
    left = [f"a{i}" for i in range(draw(st.integers(min_value=1, max_value=4)))]
    right = [f"b{i}" for i in range(draw(st.integers(min_value=1, max_value=4)))]
    pairs = [(a, b) for a in left for b in right]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=1))
    x, y = draw(st.sampled_from(chosen))
    return Graph.from_edges(left + right, chosen), x, y


class TestLocalComplement:
    def test_star_becomes_clique(self):
        star = Graph.from_edges(['c', 'a', 'b', 'd'], [('c', 'a'), ('c', 'b'), ('c', 'd')])
        result = local_complement(star, 'c')
        assert len(result.edges) == 6

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_involution(self, graph, data):
        v = data.draw(st.sampled_from(graph.sorted_vertices()))
        assert local_complement(local_complement(graph, v), v) == graph

    @given(graphs(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_cut_rank_is_invariant(self, graph, data):
        order = graph.sorted_vertices()
        v = data.draw(st.sampled_from(order))
        subset = data.draw(st.lists(st.sampled_from(order), unique=True))
        assert cut_rank(local_complement(graph, v), subset) == cut_rank(graph, subset)


    @given(bipartite_with_edge())
    @settings(max_examples=500, deadline=None)
    def test_involution_on_bipartite(self, case):
        graph, x, _ = case
        assert local_complement(local_complement(graph, x), x) == graph

    def test_cut_rank_invariant_over_all_subsets(self):
        rng = random.Random(99)
        for _ in range(100):
            n = rng.randint(2, 7)
            names = [f"v{i}" for i in range(n)]
            edges = [pair for pair in itertools.combinations(names, 2) if rng.random() < 0.5]
            graph = Graph.from_edges(names, edges)
            v = rng.choice(names)
            flipped = local_complement(graph, v)
            for size in range(n + 1):
                for subset in itertools.combinations(names, size):
                    assert cut_rank(flipped, subset) == cut_rank(graph, subset)


class TestPivot:
    def test_requires_edge(self, two_k2):
        with pytest.raises(GraphError):
            pivot(two_k2, 'x1', 'x2')
        with pytest.raises(GraphError):
            complement_between_neighbourhoods(two_k2, 'x1', 'y2')

    @given(bipartite_with_edge())
    @settings(max_examples=500, deadline=None)
    def test_bipartite_pivot_is_neighbourhood_complement(self, case):
        graph, x, y = case
        expected = complement_between_neighbourhoods(graph, x, y).relabel({x: y, y: x})
        assert pivot(graph, x, y) == expected

    def test_symmetric_on_window(self):
        graph = build_F(3).graph
        assert pivot(graph, 'r1c1', 'r2c2') == pivot(graph, 'r2c2', 'r1c1')


class TestCutRank:
    def test_small_cases(self, k3):
        assert cut_rank(k3, ['v1']) == 1
        assert cut_rank(matching_graph(2), ['x1', 'x2']) == 2
        assert cut_rank(complete_graph(4), ['v1', 'v2']) == 1
        assert cut_rank(k3, []) == 0
        assert cut_rank(k3, k3.vertices) == 0

    def test_column_cut_of_F(self):
        window = build_F(4)
        # J - I 在二元域上的秩：4阶时满秩
        assert cut_rank(window.graph, window.column(1)) == 4

    def test_unknown_vertex(self, k3):
        with pytest.raises(GraphError):
            cut_rank(k3, ['zz'])


class TestColumnOperations:
    def test_delete_column_renumbers(self):
        window = build_window(WordSpec('', '0'), 2, (1, 4))
        graph = delete_column(window.graph, 2)
        assert sorted(graph.vertices) == ['r1c1', 'r1c2', 'r1c3', 'r2c1', 'r2c2', 'r2c3']
        assert graph.has_edge('r1c2', 'r1c3')
        assert not graph.has_edge('r1c1', 'r1c2')

    def test_apply_operation(self):
        graph = build_F(3).graph
        assert apply_operation(graph, (StepKind.LC, 'r1c2')) == local_complement(graph, 'r1c2')
        assert len(apply_operation(graph, ('DeleteRows', (1, 2))).vertices) == 3
        assert len(apply_operation(graph, ('DeleteVertex', 'r1c1')).vertices) == 8


class TestFactorReductions:
    def test_00(self):
        window = build_window(WordSpec('', '0'), 3, (1, 4))
        result, step = reduce_00(window, 1)
        assert result.cols == (1, 3)
        assert result.graph == build_window(WordSpec('', '0'), 3, (1, 3)).graph
        assert step.rule == '00->0'
        assert step.rows_after == 3

    def test_01_needs_even_rows(self):
        spec = WordSpec('', '01')
        result, step = reduce_01(build_window(spec, 4, (1, 3)), 1)
        assert result.word.letters(1, 2) == '10'
        assert len(result.rows) == 4
        with pytest.raises(ReductionError):
            reduce_01(build_window(spec, 3, (1, 3)), 1)

    def test_02_halves_rows(self):
        spec = WordSpec('', '02')
        result, step = reduce_02(build_window(spec, 6, (1, 4)), 1)
        assert result.rows == (2, 4, 6)
        assert step.rows_removed == (1, 3, 5)
        assert result.word.letters(1, 2) == '20'

    def test_211_and_212(self):
        result, step = reduce_211(build_window(WordSpec('', '211'), 5, (1, 4)), 1)
        assert result.word.letters(1, 3) == '200'
        assert result.rows == (2, 3, 4)
        assert step.kind is StepKind.PIVOT
        result, _ = reduce_212(build_window(WordSpec('', '212'), 4, (1, 4)), 1)
        assert result.word.letters(1, 3) == '202'
        assert result.rows == (2, 3)

    def test_random_words_match_fresh_build(self):
        reducers = {'00': reduce_00, '01': reduce_01, '02': reduce_02,
                    '211': reduce_211, '212': reduce_212}
        rng = random.Random(2024)
        applied = 0
        for _ in range(200):
            period = ''.join(rng.choice('012') for _ in range(rng.randint(1, 6)))
            spec = WordSpec('', period)
            rows = rng.randint(1, 16)
            window = build_window(spec, rows, (1, len(period) + 3))
            for j in range(1, len(period) + 1):
                for factor, reducer in reducers.items():
                    if spec.letters(j, j + len(factor) - 1) != factor:
                        continue
                    if factor == '01' and rows % 2:
                        continue
                    try:
                        result, step = reducer(window, j)
                    except InsufficientRowsError:
                        continue
                    fresh = build_window(result.word, result.rows, result.cols)
                    assert result.graph == fresh.graph
                    assert step.rows_after == len(result.rows)
                    applied += 1
        assert applied > 100

    def test_wrong_factor(self):
        with pytest.raises(ReductionError):
            reduce_00(build_window(WordSpec('', '01'), 2, (1, 3)), 1)
        with pytest.raises(ReductionError):
            reduce_00(build_window(WordSpec('', '0'), 2, (1, 2)), 1)
        with pytest.raises(InsufficientRowsError):
            reduce_211(build_window(WordSpec('', '211'), 2, (1, 4)), 1)


class TestPipelines:
    def test_alternating_to_F(self):
        trace = reduce_to_target(WordSpec.parse('|01'), 'F', 4)
        assert trace.factor == (2, 8)
        assert trace.ledger() == [4, 4, 4, 4]
        extracted = trace.extract_target()
        assert extracted.matches
        assert extracted.window.graph == build_F(4).graph
        assert trace.replay() == trace.final.graph

    def test_parity_repair(self):
        trace = reduce_to_target(WordSpec.parse('|01'), 'F', 4, rows=5)
        assert trace.ledger() == [5, 4, 4, 4, 4]
        assert trace.steps[0].kind is StepKind.DELETE_ROWS
        assert trace.extract_target().matches

    def test_zero_two_to_X(self):
        trace = reduce_to_target(WordSpec.parse('|02'), 'X', 3, rows=12)
        assert trace.ledger() == [12, 6, 3]
        assert trace.extract_target().matches

    def test_two_one_two_to_X(self):
        trace = reduce_to_target(WordSpec.parse('|212'), 'X', 2)
        assert trace.ledger() == [12, 10, 5]
        assert [step.rule for step in trace.steps] == ['212->202', '02->2']
        assert trace.extract_target().matches

    def test_already_target(self):
        trace = reduce_to_target(WordSpec.parse('|2'), 'X', 2)
        assert trace.steps == ()
        assert trace.ledger() == [4]
        assert trace.extract_target().matches

    def test_given_window(self):
        window = build_window(WordSpec('', '01'), 4, (1, 6))
        trace = reduce_to_target(window.word, 'F', 2, window=window)
        assert trace.initial.cols == (2, 5)
        assert trace.extract_target().matches
        assert trace.plan == {}

    def test_frames(self):
        trace = reduce_to_target(WordSpec.parse('|02'), 'X', 3, rows=12)
        frames = trace.frames()
        assert len(frames) == len(trace.steps) + 1
        assert frames[-1] == trace.final.graph
        assert trace.dot_frames()[0].startswith('graph frame0 {')

    def test_trace_json_is_valid(self):
        data = reduce_to_target(WordSpec.parse('|01'), 'F', 4, rows=5).to_dict()
        validate_trace_json(data)
        assert data['extracted']['matches'] is True
        assert data['ledger'][0] == 5

    def test_too_few_rows(self):
        with pytest.raises(InsufficientRowsError):
            reduce_to_target(WordSpec.parse('|02'), 'X', 3, rows=6)

    def test_unreachable_and_unknown_targets(self):
        with pytest.raises(TargetUnreachableError):
            reduce_to_target(WordSpec.parse('|0'), 'F', 2)
        with pytest.raises(ReductionError):
            reduce_to_target(WordSpec.parse('|01'), 'Y', 2)


class TestRowPlanning:
    def test_budgets(self):
        assert row_budget('F', 3, '111') == 4
        assert row_budget('F', 4, '1111') == 4
        assert row_budget('X', 2, '212') == 12
        assert row_budget('X', 3, '20202') == 12

    def test_plan(self):
        plan = plan_rows(WordSpec.parse('|01'), 'F', 4)
        assert plan['factor'] == [2, 8]
        assert plan['beta'] == '1010101'
        assert plan['minimal'] == 4
