#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试公共夹具
目录图、C5 的 4-表达式与隔离的配置
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from cwlab import config as config_module  # noqa: E402
from cwlab.core_graph import (complete_graph, cycle_graph, edgeless_graph,  # noqa: E402
                              matching_graph, path_graph)
from cwlab.cw_algebra import parse_expr  # noqa: E402

C5_TEXT = 'n(4,1,n(4,3,u(c(4,e),r(4->3,r(3->2,n(4,3,u(c(4,d),n(3,2,u(c(3,c),n(2,1,u(c(2,b),c(1,a)' + ')' * 11


@pytest.fixture
def k1():
    return complete_graph(['v'])


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def p4():
    return path_graph(4)


@pytest.fixture
def two_k2():
    return matching_graph(2)


@pytest.fixture
def c5():
    return cycle_graph(['a', 'b', 'c', 'd', 'e'])


@pytest.fixture
def edgeless3():
    return edgeless_graph(3)


@pytest.fixture
def c5_expr():
    return parse_expr(C5_TEXT)


@pytest.fixture
def isolated_config(tmp_path, monkeypatch):
    """日志与输出目录指向临时目录，清除时间上限覆盖"""
    log_file = str(tmp_path / 'logs' / 'cwlab.log')
    monkeypatch.setattr(config_module, 'LOG_FILE', log_file)
    monkeypatch.setattr(config_module, 'OUTPUT_DIR', str(tmp_path / 'output'))
    monkeypatch.setattr(config_module.Config, 'LOG_FILE', log_file)
    monkeypatch.setattr(config_module.Config, 'TIME_CAP_OVERRIDE', None)
    return config_module
