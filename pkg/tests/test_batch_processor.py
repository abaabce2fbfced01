#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
批量实验报告测试
"""

import json

import pytest

from cwlab.batch_processor import EXHAUSTED_CELL, TABLE_COLUMNS, BatchProcessor
from cwlab.errors import CwLabError
from cwlab.exact_search import SearchBudget


@pytest.fixture
def processor(isolated_config):
    budget = SearchBudget(max_k=6, max_nodes=500_000, time_cap=60.0)
    return BatchProcessor(budget, seed=7, show_progress=False)


class TestRender:
    def test_no_tables_gives_header_only(self):
        assert BatchProcessor.render({}, 'csv') == 'table,rows\n'

    def test_unknown_format(self):
        with pytest.raises(CwLabError):
            BatchProcessor.render({}, 'xlsx')

    def test_unknown_table(self, processor):
        with pytest.raises(CwLabError) as excinfo:
            processor.build_table('nope')
        assert 'widths' in excinfo.value.details['known']


class TestTables:
    def test_widths(self, processor):
        frame = processor.build_table('widths', sizes=(2,))
        assert list(frame.columns) == TABLE_COLUMNS['widths']
        rows = frame.set_index('graph').to_dict('index')
        assert rows['F_2,2']['cwd'] == 2
        assert rows['F_2,2']['lcwd'] == 3
        assert rows['X_2,2']['cwd'] == 3
        assert rows['F_2,2']['lower_bound'] == 1
        assert all(row['compiler_labels'] <= row['bound_4t'] for row in rows.values())

    def test_exhausted_cells_are_marked(self, isolated_config):
        processor = BatchProcessor(SearchBudget(max_k=4, max_nodes=1, time_cap=5.0),
                                   show_progress=False)
        rows = processor.widths_rows(sizes=(2,))
        assert all(row['cwd'] == EXHAUSTED_CELL for row in rows)
        assert all(row['lcwd'] == EXHAUSTED_CELL for row in rows)
        assert processor.exhausted_cells == 4

    def test_window_compilation(self, processor):
        rows = processor.window_rows()
        assert len(rows) == 5 * 4 * 4
        assert {row['word'] for row in rows} == {'|0', '|1', '|01', '|2', '|012'}
        for row in rows:
            assert row['defines'] and row['linear']
            assert row['labels'] <= row['bound'] == 4 * row['t']

    def test_subclass_samples(self, processor):
        rows = processor.subclass_rows(samples=3)
        assert len(rows) <= 3
        for row in rows:
            assert row['defines']
            assert row['labels'] <= row['bound']
            assert row['vertices'] <= 12

    def test_reductions(self, processor):
        rows = processor.reduction_rows()
        assert [row['ledger'] for row in rows] == ['4 4 4 4', '12 6 3', '12 10 5']
        assert all(row['matches'] for row in rows)

    def test_cycles(self, processor):
        rows = processor.cycle_rows([('|01', 6, 8, 6), ('|001', 3, 12, 8)])
        assert [row['found'] for row in rows] == [True, True]
        assert len(rows[0]['witness'].split()) == 6


class TestReport:
    def test_run_report_writes_table(self, processor, tmp_path):
        output = str(tmp_path / 'out' / 'report.md')
        stats = processor.run_report(['reductions'], output, 'md')
        assert stats['row_counts'] == {'reductions': 3}
        assert stats['exhausted_cells'] == 0
        text = open(output, encoding='utf-8').read()
        assert text == stats['text']
        assert '| word' in text

    def test_two_tables_get_headings(self, processor):
        stats = processor.run_report(['reductions', 'cycles'], fmt='csv',
                                     params={'cycles': {'cases': [('|01', 6, 8, 6)]}})
        assert '# reductions\n' in stats['text']
        assert '# cycles\n' in stats['text']

    def test_empty_selection(self, processor):
        stats = processor.run_report([])
        assert stats['text'] == 'table,rows\n'
        assert stats['tables'] == []

    def test_summary_omits_text(self, processor, tmp_path):
        stats = processor.run_report(['reductions'])
        summary = tmp_path / 'summary.json'
        processor.save_processing_report(stats, str(summary))
        data = json.loads(summary.read_text(encoding='utf-8'))
        assert 'text' not in data
        assert data['row_counts'] == {'reductions': 3}
