#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
配置管理模块
统一管理工作台的日志、搜索预算、随机种子等配置参数
"""

import os
from typing import Dict, Any, Optional
from dotenv import load_dotenv

# 加载环境变量
load_dotenv()


def _optional_float(name: str) -> Optional[float]:
    value = os.getenv(name, '').strip()
    return float(value) if value else None


class Config:
    """项目配置类"""

    # 日志配置
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE = os.getenv('LOG_FILE', 'logs/cwlab.log')
    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

    # 搜索预算配置（CWLAB_TIME_CAP 设置后覆盖所有命令的时间上限）
    TIME_CAP_OVERRIDE = _optional_float('CWLAB_TIME_CAP')
    DEFAULT_TIME_CAP = 30.0
    MAX_NODES = int(os.getenv('CWLAB_MAX_NODES', '2000000'))
    MAX_K = int(os.getenv('CWLAB_MAX_K', '8'))

    # 小规模搜索的顶点数上限
    CYCLE_GUARD = int(os.getenv('CWLAB_CYCLE_GUARD', '64'))
    EMBED_GUARD = int(os.getenv('CWLAB_EMBED_GUARD', '12'))

    # 随机采样的默认种子
    DEFAULT_SEED = int(os.getenv('CWLAB_SEED', '20240611'))

    # 文件路径配置
    OUTPUT_DIR = os.getenv('OUTPUT_DIR', 'output')

    @classmethod
    def time_cap(cls, requested: Optional[float] = None) -> float:
        """返回生效的时间上限：环境变量优先，其次是命令参数"""
        if cls.TIME_CAP_OVERRIDE is not None:
            return cls.TIME_CAP_OVERRIDE
        if requested is not None:
            return requested
        return cls.DEFAULT_TIME_CAP

    @classmethod
    def default_budget(cls, max_k: Optional[int] = None, max_nodes: Optional[int] = None,
                       time_cap: Optional[float] = None):
        """构造默认搜索预算"""
        from .exact_search import SearchBudget

        return SearchBudget(
            max_k=max_k or cls.MAX_K,
            max_nodes=max_nodes or cls.MAX_NODES,
            time_cap=cls.time_cap(time_cap),
        )

    @classmethod
    def validate_config(cls) -> Dict[str, Any]:
        """验证配置有效性"""
        issues = []

        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            issues.append(f"LOG_LEVEL取值无效: {cls.LOG_LEVEL}")

        if cls.TIME_CAP_OVERRIDE is not None and cls.TIME_CAP_OVERRIDE <= 0:
            issues.append("CWLAB_TIME_CAP必须大于0")

        if cls.MAX_NODES <= 0:
            issues.append("CWLAB_MAX_NODES必须大于0")

        if cls.MAX_K <= 0:
            issues.append("CWLAB_MAX_K必须大于0")

        if cls.CYCLE_GUARD <= 0 or cls.EMBED_GUARD <= 0:
            issues.append("搜索顶点上限必须大于0")

        return {
            'valid': len(issues) == 0,
            'issues': issues
        }


# 创建全局配置实例
config = Config()

# 导出配置变量供其他模块使用
LOG_LEVEL = Config.LOG_LEVEL
LOG_FILE = Config.LOG_FILE
LOG_FORMAT = Config.LOG_FORMAT
MAX_NODES = Config.MAX_NODES
MAX_K = Config.MAX_K
CYCLE_GUARD = Config.CYCLE_GUARD
EMBED_GUARD = Config.EMBED_GUARD
DEFAULT_SEED = Config.DEFAULT_SEED
OUTPUT_DIR = Config.OUTPUT_DIR
validate_config = Config.validate_config
default_budget = Config.default_budget
time_cap = Config.time_cap
