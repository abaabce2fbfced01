#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常定义模块
所有子模块抛出的错误都继承自 CwLabError，命令行据此输出机器可读的错误对象
"""

from typing import Any, Dict, Optional


class CwLabError(Exception):
    """工作台基础异常"""

    code = "cwlab"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = dict(details or {})

    def to_dict(self) -> Dict[str, Any]:
        """转换为错误对象（命令行 JSON 输出）"""
        return {
            'error': self.code,
            'message': self.message,
            'details': self.details,
        }


class ConfigError(CwLabError):
    code = "config"


class GraphError(CwLabError):
    code = "graph"


class WordSpecError(CwLabError):
    code = "word_spec"

    def __init__(self, message: str, position: Optional[int] = None,
                 details: Optional[Dict[str, Any]] = None):
        merged = dict(details or {})
        if position is not None:
            merged['position'] = position
        super().__init__(message, merged)
        self.position = position


class ExpressionError(CwLabError):
    code = "expression"


class ExpressionParseError(ExpressionError):
    code = "expression_parse"

    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message, {'position': position} if position is not None else None)
        self.position = position


class SearchBudgetExceeded(CwLabError):
    code = "budget_exceeded"


class ReductionError(CwLabError):
    code = "reduction"


class InsufficientRowsError(ReductionError):
    code = "insufficient_rows"


class TargetUnreachableError(ReductionError):
    code = "target_unreachable"


class ConditionViolation(CwLabError):
    code = "condition_violation"


class MuBoundError(ConditionViolation):
    code = "mu_bound"


class CertificateError(CwLabError):
    code = "certificate"
