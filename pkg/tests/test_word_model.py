#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
单词与网格窗口测试
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cwlab.core_graph import complete_graph, cycle_graph, is_induced_cycle, matching_graph, path_graph
from cwlab.errors import GraphError, WordSpecError
from cwlab.word_model import (WordSpec, build_F, build_H, build_window, build_X, edge_rule,
                              embed_check, find_factor, parse_tag, periodic_cycle_witness,
                              sample_subclass_layout, vertex_id)

letters = st.text(alphabet='012', max_size=4)
words = st.builds(WordSpec, letters, st.text(alphabet='012', min_size=1, max_size=4))


class TestWordSpec:
    def test_parse_and_format(self):
        spec = WordSpec.parse('0|01')
        assert spec == WordSpec('0', '01')
        assert spec.format() == '0|01'
        assert str(WordSpec.parse(' |2 ')) == '|2'

    @pytest.mark.parametrize('text, position', [
        ('01', 2),
        ('0|1|0', 3),
        ('0|', 2),
        ('3|0', 0),
        ('0|0x', 3),
    ])
    def test_parse_errors_carry_position(self, text, position):
        with pytest.raises(WordSpecError) as excinfo:
            WordSpec.parse(text)
        assert excinfo.value.position == position

    def test_letters(self):
        spec = WordSpec.parse('2|01')
        assert spec.letters(1, 6) == '201010'
        with pytest.raises(WordSpecError):
            spec.letter(0)

    def test_canonical(self):
        assert WordSpec('', '0101').canonical() == WordSpec('', '01')
        assert WordSpec('1', '01').canonical() == WordSpec('', '10')
        assert WordSpec('01', '0').canonical() == WordSpec('01', '0')
        assert WordSpec('1', '01').same_word(WordSpec('10', '1010'))

    @given(words, st.integers(min_value=0, max_value=9))
    @settings(max_examples=80, deadline=None)
    def test_suffix_shifts_letters(self, spec, offset):
        shifted = spec.suffix(offset)
        assert shifted.letters(1, 12) == spec.letters(offset + 1, offset + 12)

    def test_suffix_rejects_negative(self):
        with pytest.raises(WordSpecError):
            WordSpec('', '0').suffix(-1)

    def test_rewrite(self):
        spec = WordSpec('', '0').rewrite(2, '0', '1')
        assert spec.letters(1, 5) == '01000'
        with pytest.raises(WordSpecError):
            WordSpec('', '0').rewrite(1, '1', '0')

    @given(words, st.integers(min_value=1, max_value=8), st.data())
    @settings(max_examples=80, deadline=None)
    def test_rewrite_touches_only_the_factor(self, spec, position, data):
        size = data.draw(st.integers(min_value=1, max_value=3))
        old = spec.letters(position, position + size - 1)
        new = data.draw(st.text(alphabet='012', min_size=size, max_size=size))
        rewritten = spec.rewrite(position, old, new)
        for j in range(1, position + size + 12):
            if position <= j < position + size:
                assert rewritten.letter(j) == new[j - position]
            else:
                assert rewritten.letter(j) == spec.letter(j)


class TestTags:
    def test_round_trip(self):
        assert parse_tag(vertex_id(12, 3)) == (12, 3)

    def test_rejects_foreign_id(self):
        with pytest.raises(GraphError):
            parse_tag('x1')

    @pytest.mark.parametrize('letter, i, k, expected', [
        ('0', 1, 1, True), ('0', 1, 2, False),
        ('1', 1, 1, False), ('1', 2, 1, True),
        ('2', 1, 2, True), ('2', 2, 2, True), ('2', 2, 1, False),
    ])
    def test_edge_rule(self, letter, i, k, expected):
        assert edge_rule(letter, i, k) is expected

    def test_edge_rule_rejects_letter(self):
        with pytest.raises(WordSpecError):
            edge_rule('3', 1, 1)


class TestWindows:
    def test_F_and_X_sizes(self):
        assert len(build_F(3).graph) == 9
        assert len(build_F(3).graph.edges) == 12
        assert len(build_X(3).graph.edges) == 12
        assert build_X(3).graph.has_edge('r1c1', 'r3c2')
        assert not build_X(3).graph.has_edge('r3c1', 'r1c2')

    def test_matching_word_is_disjoint_paths(self):
        window = build_window(WordSpec('', '0'), 3, (1, 4))
        assert len(window.graph.edges) == 9
        assert window.row(2) == ['r2c1', 'r2c2', 'r2c3', 'r2c4']

    def test_no_edges_inside_a_column(self):
        window = build_window(WordSpec.parse('|012'), 4, (1, 6))
        for col in window.columns():
            column = window.column(col)
            assert not any(window.graph.has_edge(a, b) for a in column for b in column)

    def test_H_start_uses_shifted_letters(self):
        spec = WordSpec('', '01')
        window = build_H(spec, 2, 3, start=2)
        assert window.cols == (2, 4)
        # 第2列与第3列之间是字母1
        assert window.graph.has_edge('r1c2', 'r2c3')
        assert not window.graph.has_edge('r1c2', 'r1c3')

    def test_invalid_windows(self):
        with pytest.raises(GraphError):
            build_window(WordSpec('', '0'), 2, (3, 2))
        with pytest.raises(GraphError):
            build_window(WordSpec('', '0'), [], (1, 2))
        with pytest.raises(GraphError):
            build_F(0)

    def test_restrict(self):
        window = build_F(4)
        sub = window.restrict(rows=[1, 3], cols=(2, 3))
        assert sub.rows == (1, 3)
        assert sorted(sub.graph.vertices) == ['r1c2', 'r1c3', 'r3c2', 'r3c3']
        assert sub.graph.has_edge('r1c2', 'r3c3')
        with pytest.raises(GraphError):
            window.restrict(cols=(0, 2))

    def test_tags(self):
        tags = build_X(2).tags()
        assert tags['r2c1'] == (2, 1)
        assert len(tags) == 4


class TestEmbedCheck:
    def test_matching_embeds_in_small_F(self):
        mapping = embed_check(matching_graph(2), WordSpec('', '1'), 2, 2)
        assert mapping is not None
        host = build_H(WordSpec('', '1'), 2, 2).graph
        graph = matching_graph(2)
        for a in graph.vertices:
            for b in graph.vertices:
                if a < b:
                    assert graph.has_edge(a, b) == host.has_edge(vertex_id(*mapping[a]), vertex_id(*mapping[b]))

    def test_short_paths_only(self):
        spec = WordSpec('', '1')
        assert embed_check(path_graph(3), spec, 2, 3) is not None
        assert embed_check(path_graph(4), spec, 2, 3) is None

    def test_triangle_never_embeds(self):
        assert embed_check(complete_graph(3), WordSpec('', '1'), 3, 3) is None

    def test_empty_pattern(self):
        assert embed_check(complete_graph(0), WordSpec('', '0'), 1, 1) == {}

    def test_guard(self):
        with pytest.raises(GraphError):
            embed_check(cycle_graph(6), WordSpec('', '0'), 3, 3, guard=4)


class TestFactors:
    def test_simple(self):
        assert find_factor(WordSpec('', '0'), '0', 3, ['0']) == (1, 3)
        assert find_factor(WordSpec('1', '0'), '0', 2, ['0']) == (2, 3)

    def test_allowed_letters(self):
        spec = WordSpec('', '01')
        assert find_factor(spec, '0', 2, ['0']) is None
        assert find_factor(spec, '0', 2, ['1']) == (1, 3)

    def test_end_limit(self):
        assert find_factor(WordSpec('', '01'), '0', 3, ['1'], end=4) is None


class TestPeriodicCycles:
    @pytest.mark.parametrize('n', [0, 1, 2, 3])
    def test_witness_is_induced_cycle(self, n):
        spec, window, order = periodic_cycle_witness(n)
        assert spec == WordSpec('', '0' * n + '1')
        assert len(order) == 2 * (n + 2)
        assert is_induced_cycle(window.graph, order)

    def test_negative(self):
        with pytest.raises(WordSpecError):
            periodic_cycle_witness(-1)


class TestSubclassSampling:
    def test_deterministic(self):
        spec = WordSpec.parse('|01')
        first = sample_subclass_layout(spec, 6, 2, 12, seed=3)
        second = sample_subclass_layout(spec, 6, 2, 12, seed=3)
        assert first.black == second.black

    @pytest.mark.parametrize('seed', range(8))
    def test_no_full_k_by_k_block(self, seed):
        k, n = 2, 6
        layout = sample_subclass_layout(WordSpec.parse('|01'), n, k, 12, seed)
        assert len(layout.black) <= 12
        for c in range(1, n - k + 2):
            full_rows = [r for r in range(1, n + 1)
                         if all(vertex_id(r, m) in layout.black for m in range(c, c + k))]
            assert len(full_rows) < k
