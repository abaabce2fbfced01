#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置测试
"""

from cwlab.exact_search import SearchBudget


class TestValidate:
    def test_defaults_are_valid(self, isolated_config):
        assert isolated_config.validate_config() == {'valid': True, 'issues': []}

    def test_reports_every_issue(self, isolated_config, monkeypatch):
        monkeypatch.setattr(isolated_config.Config, 'LOG_LEVEL', 'LOUD')
        monkeypatch.setattr(isolated_config.Config, 'MAX_NODES', 0)
        monkeypatch.setattr(isolated_config.Config, 'TIME_CAP_OVERRIDE', -1.0)
        result = isolated_config.validate_config()
        assert result['valid'] is False
        assert len(result['issues']) == 3


class TestTimeCap:
    def test_requested_then_default(self, isolated_config):
        assert isolated_config.time_cap(12.5) == 12.5
        assert isolated_config.time_cap() == isolated_config.Config.DEFAULT_TIME_CAP

    def test_environment_override_wins(self, isolated_config, monkeypatch):
        monkeypatch.setattr(isolated_config.Config, 'TIME_CAP_OVERRIDE', 3.0)
        assert isolated_config.time_cap(12.5) == 3.0
        assert isolated_config.default_budget(time_cap=100.0).time_cap == 3.0


def test_default_budget(isolated_config):
    budget = isolated_config.default_budget(max_k=3, max_nodes=50)
    assert isinstance(budget, SearchBudget)
    assert (budget.max_k, budget.max_nodes) == (3, 50)
    assert isolated_config.default_budget().max_k == isolated_config.Config.MAX_K
