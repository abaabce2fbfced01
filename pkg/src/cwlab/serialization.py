#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
序列化模块
图的 JSON/DOT 读写、约化轨迹的 JSON 校验，以及确定性的 JSON 文件写出
"""

import json
import logging
import os
from typing import Any, Dict

import jsonschema

from .core_graph import Graph
from .errors import GraphError, ReductionError

logger = logging.getLogger(__name__)

GRAPH_SCHEMA: Dict[str, Any] = {
    'type': 'object',
    'required': ['vertices', 'edges'],
    'properties': {
        'vertices': {
            'type': 'array',
            'items': {'type': 'string', 'pattern': '^[A-Za-z0-9]+$'},
            'uniqueItems': True,
        },
        'edges': {
            'type': 'array',
            'items': {
                'type': 'array',
                'items': {'type': 'string'},
                'minItems': 2,
                'maxItems': 2,
            },
        },
    },
}

_STEP_SCHEMA: Dict[str, Any] = {
    'type': 'object',
    'required': ['kind', 'rule', 'word_before', 'word_after', 'rows_after'],
    'properties': {
        'kind': {'enum': ['LC', 'Pivot', 'DeleteVertex', 'DeleteColumn', 'DeleteRows']},
        'rule': {'type': ['string', 'null']},
        'column': {'type': ['integer', 'null']},
        'rows_removed': {'type': 'array', 'items': {'type': 'integer'}},
        'operations': {'type': 'array', 'items': {'type': 'array'}},
        'word_before': {'type': 'string'},
        'word_after': {'type': 'string'},
        'rows_after': {'type': 'integer', 'minimum': 0},
    },
}

TRACE_SCHEMA: Dict[str, Any] = {
    'type': 'object',
    'required': ['target', 'n', 'word', 'steps', 'ledger'],
    'properties': {
        'target': {'enum': ['F', 'X']},
        'n': {'type': 'integer', 'minimum': 1},
        'word': {'type': 'string'},
        'ledger': {'type': 'array', 'items': {'type': 'integer', 'minimum': 0}},
        'steps': {'type': 'array', 'items': _STEP_SCHEMA},
    },
}


def _json_path(error: jsonschema.ValidationError) -> str:
    return '$' + ''.join(f'[{p}]' if isinstance(p, int) else f'.{p}' for p in error.absolute_path)


def validate_graph_json(data: Any) -> None:
    """
    按 GRAPH_SCHEMA 校验图 JSON

    Raises:
        GraphError: 校验失败，details 中给出 JSON 路径
    """
    try:
        jsonschema.validate(data, GRAPH_SCHEMA)
    except jsonschema.ValidationError as e:
        path = _json_path(e)
        raise GraphError(f"图 JSON 格式错误 ({path}): {e.message}", {'path': path})


def validate_trace_json(data: Any) -> None:
    try:
        jsonschema.validate(data, TRACE_SCHEMA)
    except jsonschema.ValidationError as e:
        path = _json_path(e)
        raise ReductionError(f"轨迹 JSON 格式错误 ({path}): {e.message}", {'path': path})


def graph_to_json(graph: Graph) -> Dict[str, Any]:
    """边按字典序较小的端点在前存储"""
    return {
        'vertices': graph.sorted_vertices(),
        'edges': [list(edge) for edge in graph.sorted_edges()],
    }


def graph_from_json(data: Any) -> Graph:
    validate_graph_json(data)
    return Graph.from_edges(data['vertices'], [tuple(edge) for edge in data['edges']])


def graph_to_dot(graph: Graph, name: str = 'G') -> str:
    """DOT 文本，顶点与边均排序"""
    lines = [f'graph {name} {{']
    lines.extend(f'  {v};' for v in graph.sorted_vertices())
    lines.extend(f'  {a} -- {b};' for a, b in graph.sorted_edges())
    lines.append('}')
    return '\n'.join(lines) + '\n'


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True)


def write_json(data: Any, path: str) -> str:
    """确定性写出 JSON（相同输入字节一致）"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(dumps(data))
        f.write('\n')
    logger.info(f"已写出: {path}")
    return path


def write_text(text: str, path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    logger.info(f"已写出: {path}")
    return path


def load_json(path: str) -> Any:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise GraphError(f"无法解析 JSON 文件 {path}: {e.msg}", {'line': e.lineno, 'column': e.colno})


def load_graph(path: str) -> Graph:
    return graph_from_json(load_json(path))
