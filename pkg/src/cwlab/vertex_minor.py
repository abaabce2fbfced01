#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
顶点子式模块
局部补、枢轴、切秩，以及把窗口改写为 F_{n,n} 或 X_{n,n} 的五种因子约化
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core_graph import Graph, _edge
from .errors import GraphError, InsufficientRowsError, ReductionError, TargetUnreachableError
from .word_model import GridGraph, WordSpec, build_F, build_X, build_window, find_factor, parse_tag, vertex_id

logger = logging.getLogger(__name__)


class StepKind(str, Enum):
    LC = 'LC'
    PIVOT = 'Pivot'
    DELETE_VERTEX = 'DeleteVertex'
    DELETE_COLUMN = 'DeleteColumn'
    DELETE_ROWS = 'DeleteRows'


# ---------------------------------------------------------------------------
# 基本运算

def local_complement(graph: Graph, v: str) -> Graph:
    """局部补：翻转v的任意两个不同邻居之间的邻接关系"""
    neighbours = sorted(graph.neighbours(v))
    edges = set(graph.edges)
    for i, a in enumerate(neighbours):
        for b in neighbours[i + 1:]:
            edges ^= {(a, b)}
    return Graph(graph.vertices, frozenset(edges))


def pivot(graph: Graph, x: str, y: str) -> Graph:
    """沿边xy枢轴：依次在x、y、x处做局部补"""
    if not graph.has_edge(x, y):
        raise GraphError(f"枢轴要求 {x}{y} 是边", {'x': x, 'y': y})
    return local_complement(local_complement(local_complement(graph, x), y), x)


def complement_between_neighbourhoods(graph: Graph, x: str, y: str) -> Graph:
    """
    二部图上枢轴的集合形式：翻转 N(x)∖{y} 与 N(y)∖{x} 之间的邻接

    对二部图，三次局部补得到的图等于本运算的结果再交换x与y的名字。
    """
    if not graph.has_edge(x, y):
        raise GraphError(f"枢轴要求 {x}{y} 是边", {'x': x, 'y': y})
    side_x = graph.neighbours(x) - {y}
    side_y = graph.neighbours(y) - {x}
    edges = set(graph.edges)
    for a in side_x:
        for b in side_y:
            if a != b:
                edges ^= {_edge(a, b)}
    return Graph(graph.vertices, frozenset(edges))


def _gf2_rank(matrix: np.ndarray) -> int:
    work = (np.asarray(matrix, dtype=np.uint8) % 2).copy()
    rows, cols = work.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        candidates = np.nonzero(work[rank:, col])[0]
        if candidates.size == 0:
            continue
        found = rank + candidates[0]
        if found != rank:
            work[[rank, found]] = work[[found, rank]]
        below = np.nonzero(work[:, col])[0]
        below = below[below != rank]
        work[below] ^= work[rank]
        rank += 1
    return rank


def cut_rank(graph: Graph, subset: Iterable[str]) -> int:
    """S × (V∖S) 邻接矩阵在二元域上的秩"""
    side = sorted(set(subset))
    graph._require(side)
    other = sorted(graph.vertices - set(side))
    if not side or not other:
        return 0
    position = {v: i for i, v in enumerate(other)}
    matrix = np.zeros((len(side), len(other)), dtype=np.uint8)
    for i, v in enumerate(side):
        for w in graph.adjacency[v]:
            if w in position:
                matrix[i, position[w]] = 1
    return _gf2_rank(matrix)


def delete_column(graph: Graph, col: int) -> Graph:
    """删除第col列的全部顶点，并把其后的列号各减一"""
    rename: Dict[str, str] = {}
    removed = []
    for vid in graph.vertices:
        row, c = parse_tag(vid)
        if c == col:
            removed.append(vid)
        elif c > col:
            rename[vid] = vertex_id(row, c - 1)
    return graph.delete_vertices(removed).relabel(rename)


def delete_rows(graph: Graph, rows: Iterable[int]) -> Graph:
    rows = set(rows)
    return graph.delete_vertices(vid for vid in graph.vertices if parse_tag(vid)[0] in rows)


def apply_operation(graph: Graph, operation: Sequence[Any]) -> Graph:
    """执行一条基本运算记录"""
    kind = StepKind(operation[0])
    if kind is StepKind.LC:
        return local_complement(graph, operation[1])
    if kind is StepKind.PIVOT:
        return pivot(graph, operation[1], operation[2])
    if kind is StepKind.DELETE_VERTEX:
        return graph.delete_vertices([operation[1]])
    if kind is StepKind.DELETE_COLUMN:
        return delete_column(graph, int(operation[1]))
    return delete_rows(graph, operation[1])


# ---------------------------------------------------------------------------
# 约化步骤与轨迹

@dataclass(frozen=True)
class ReductionStep:
    """一次约化：基本运算序列以及改写前后的单词"""

    kind: StepKind
    rule: Optional[str]
    column: Optional[int]
    rows_removed: Tuple[int, ...]
    operations: Tuple[Tuple[Any, ...], ...]
    word_before: str
    word_after: str
    rows_after: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.value,
            'rule': self.rule,
            'column': self.column,
            'rows_removed': list(self.rows_removed),
            'operations': [[op[0].value if isinstance(op[0], StepKind) else op[0]] +
                           [list(x) if isinstance(x, tuple) else x for x in op[1:]]
                           for op in self.operations],
            'word_before': self.word_before,
            'word_after': self.word_after,
            'rows_after': self.rows_after,
        }


@dataclass(frozen=True)
class ExtractedTarget:
    window: GridGraph
    row_map: Dict[int, int]
    column_offset: int
    matches: bool


@dataclass(frozen=True)
class ReductionTrace:
    """约化轨迹：初始窗口、步骤序列、最终窗口"""

    initial: GridGraph
    steps: Tuple[ReductionStep, ...]
    final: GridGraph
    target: str
    n: int
    factor: Tuple[int, int]
    row_budget: int
    plan: Dict[str, Any] = field(default_factory=dict)

    def replay(self) -> Graph:
        """从初始图重新执行全部基本运算"""
        graph = self.initial.graph
        for step in self.steps:
            for operation in step.operations:
                graph = apply_operation(graph, operation)
        return graph

    def frames(self) -> List[Graph]:
        graphs = [self.initial.graph]
        for step in self.steps:
            graph = graphs[-1]
            for operation in step.operations:
                graph = apply_operation(graph, operation)
            graphs.append(graph)
        return graphs

    def dot_frames(self) -> List[str]:
        from .serialization import graph_to_dot
        return [graph_to_dot(graph, name=f"frame{i}") for i, graph in enumerate(self.frames())]

    def ledger(self) -> List[int]:
        """行数台账：开始时与每步之后的行数"""
        return [len(self.initial.rows)] + [step.rows_after for step in self.steps]

    def extract_target(self) -> ExtractedTarget:
        """取最终窗口的前n行、前n列，重编号为行列 1..n 并与 F/X 比较"""
        n = self.n
        final = self.final
        if len(final.rows) < n:
            raise InsufficientRowsError(f"剩余行数 {len(final.rows)} 少于 n={n}",
                                        {'rows': len(final.rows), 'n': n})
        if final.last_col - final.first_col + 1 < n:
            raise ReductionError(f"剩余列数少于 n={n}")
        rows = final.rows[:n]
        offset = final.first_col - 1
        part = final.restrict(rows=rows, cols=(final.first_col, final.first_col + n - 1))
        rename = {vid: vertex_id(rows.index(r) + 1, c - offset)
                  for vid, (r, c) in part.tags().items()}
        graph = part.graph.relabel(rename)
        word = WordSpec('', '1' if self.target == 'F' else '2')
        window = GridGraph(word, tuple(range(1, n + 1)), (1, n), graph)
        expected = build_F(n) if self.target == 'F' else build_X(n)
        return ExtractedTarget(window, {i + 1: r for i, r in enumerate(rows)}, offset,
                               graph == expected.graph)

    def to_dict(self) -> Dict[str, Any]:
        extracted = self.extract_target()
        return {
            'target': self.target,
            'n': self.n,
            'word': self.initial.word.format(),
            'factor': list(self.factor),
            'initial': {'rows': list(self.initial.rows), 'cols': list(self.initial.cols)},
            'final': {'rows': list(self.final.rows), 'cols': list(self.final.cols),
                      'word': self.final.word.format()},
            'row_budget': self.row_budget,
            'ledger': self.ledger(),
            'plan': self.plan,
            'steps': [step.to_dict() for step in self.steps],
            'extracted': {'row_map': {str(k): v for k, v in extracted.row_map.items()},
                          'column_offset': extracted.column_offset,
                          'matches': extracted.matches},
        }


# ---------------------------------------------------------------------------
# 五种因子约化

def _require_letters(window: GridGraph, j: int, factor: str) -> None:
    span_end = j + len(factor) - 1
    if j < window.first_col or span_end + 1 > window.last_col:
        raise ReductionError(f"第 {j}..{span_end + 1} 列不在窗口内",
                             {'column': j, 'cols': list(window.cols)})
    found = window.word.letters(j, span_end)
    if found != factor:
        raise ReductionError(f"第 {j} 列处的因子是 {found}，不是 {factor}",
                             {'column': j, 'found': found, 'expected': factor})


def _finish(window: GridGraph, graph: Graph, word: WordSpec, rows: Sequence[int],
            cols: Tuple[int, int]) -> GridGraph:
    fresh = build_window(word, rows, cols)
    if fresh.graph != graph:
        raise ReductionError(f"约化结果与单词 {word.format()} 的新建窗口不一致",
                             {'word': word.format(), 'rows': list(rows), 'cols': list(cols)})
    return GridGraph(word, tuple(rows), cols, graph)


def _reduce_zero(window: GridGraph, j: int, follower: str) -> Tuple[GridGraph, ReductionStep]:
    factor = '0' + follower
    _require_letters(window, j, factor)
    rows = window.rows
    if follower == '1' and len(rows) % 2:
        raise ReductionError(f"约化 01 要求行数为偶数，当前为 {len(rows)}", {'rows': len(rows)})
    if follower == '2' and len(rows) < 2:
        raise InsufficientRowsError("约化 02 至少需要两行", {'rows': len(rows)})

    operations: List[Tuple[Any, ...]] = []
    graph = window.graph
    for vid in window.column(j + 1):
        graph = local_complement(graph, vid)
        operations.append((StepKind.LC, vid))
    graph = delete_column(graph, j + 1)
    operations.append((StepKind.DELETE_COLUMN, j + 1))

    removed: Tuple[int, ...] = ()
    survivors = rows
    if follower == '2':
        # 按位置保留偶数位的行
        removed = tuple(r for i, r in enumerate(rows) if i % 2 == 0)
        survivors = tuple(r for i, r in enumerate(rows) if i % 2 == 1)
        graph = delete_rows(graph, removed)
        operations.append((StepKind.DELETE_ROWS, removed))

    word = window.word.rewrite(j, factor, follower)
    result = _finish(window, graph, word, survivors, (window.first_col, window.last_col - 1))
    step = ReductionStep(StepKind.DELETE_COLUMN, f"{factor}->{follower}", j, removed,
                         tuple(operations), window.word.format(), word.format(), len(survivors))
    logger.debug(f"约化 {factor}->{follower} @ {j}: 行数 {len(rows)} -> {len(survivors)}")
    return result, step


def reduce_00(window: GridGraph, j: int) -> Tuple[GridGraph, ReductionStep]:
    """在第j+1列的每个顶点上依次做局部补后删除该列，因子00变为0"""
    return _reduce_zero(window, j, '0')


def reduce_01(window: GridGraph, j: int) -> Tuple[GridGraph, ReductionStep]:
    """因子01变为1，要求行数为偶数"""
    return _reduce_zero(window, j, '1')


def reduce_02(window: GridGraph, j: int) -> Tuple[GridGraph, ReductionStep]:
    """因子02变为2，同时删去奇数位的行，行数减半"""
    return _reduce_zero(window, j, '2')


def _reduce_two_one(window: GridGraph, j: int, last: str) -> Tuple[GridGraph, ReductionStep]:
    factor = '21' + last
    rewritten = '20' + ('0' if last == '1' else '2')
    end = j + 2
    if j < window.first_col or end > window.last_col:
        raise ReductionError(f"第 {j}..{end} 列不在窗口内", {'column': j, 'cols': list(window.cols)})
    found = window.word.letters(j, end)
    if found != factor:
        raise ReductionError(f"第 {j} 列处的因子是 {found}，不是 {factor}",
                             {'column': j, 'found': found, 'expected': factor})
    rows = window.rows
    if len(rows) < 3:
        raise InsufficientRowsError(f"约化 {factor} 至少需要三行", {'rows': len(rows)})

    top, bottom = rows[0], rows[-1]
    x, y = vertex_id(top, j + 1), vertex_id(bottom, j + 2)
    if not window.graph.has_edge(x, y):
        raise ReductionError(f"{x}{y} 不是边")
    graph = pivot(window.graph, x, y)
    graph = delete_rows(graph, (top, bottom))
    survivors = rows[1:-1]

    word = window.word.rewrite(j, factor, rewritten)
    result = _finish(window, graph, word, survivors, window.cols)
    operations = ((StepKind.PIVOT, x, y), (StepKind.DELETE_ROWS, (top, bottom)))
    step = ReductionStep(StepKind.PIVOT, f"{factor}->{rewritten}", j, (top, bottom), operations,
                         window.word.format(), word.format(), len(survivors))
    logger.debug(f"约化 {factor}->{rewritten} @ {j}: 枢轴 {x}{y}")
    return result, step


def reduce_211(window: GridGraph, j: int) -> Tuple[GridGraph, ReductionStep]:
    """沿 (首行第j+1列, 末行第j+2列) 枢轴并删去首末两行，因子211变为200"""
    return _reduce_two_one(window, j, '1')


def reduce_212(window: GridGraph, j: int) -> Tuple[GridGraph, ReductionStep]:
    """同上，因子212变为202"""
    return _reduce_two_one(window, j, '2')


# ---------------------------------------------------------------------------
# 目标约化流水线

_TARGET_LETTER = {'F': '1', 'X': '2'}
_TARGET_ALLOWED = {'F': '01', 'X': '012'}


def _next_rewrite(beta: str) -> Optional[Tuple[int, str]]:
    """最左的可约化因子：先消去0，无0时处理21x"""
    zero = beta.find('0')
    if zero >= 0:
        return zero, '0' + beta[zero + 1]
    pair = beta.find('21')
    if pair >= 0:
        return pair, beta[pair:pair + 3]
    return None


def _rewrite_factor(beta: str, offset: int, rule: str) -> str:
    if rule[0] == '0':
        return beta[:offset] + rule[1] + beta[offset + 2:]
    return beta[:offset] + '20' + ('0' if rule[2] == '1' else '2') + beta[offset + 3:]


def _simulate_rows(beta: str, rows: int, n: int) -> Optional[List[int]]:
    """只在因子上演算行数变化；行数不足时返回None"""
    ledger = [rows]
    while True:
        move = _next_rewrite(beta)
        if move is None:
            break
        offset, rule = move
        if rule == '01' and rows % 2:
            if rows < 3:
                return None
            rows -= 1
            ledger.append(rows)
        elif rule == '02':
            if rows < 2:
                return None
            rows //= 2
        elif rule in ('211', '212'):
            if rows < 3:
                return None
            rows -= 2
        beta = _rewrite_factor(beta, offset, rule)
        ledger.append(rows)
    return ledger if rows >= n else None


def row_budget(target: str, n: int, beta: str) -> int:
    """约化路线给出的行数预算"""
    if target == 'F':
        return n if n % 2 == 0 else n + 1
    if '1' in beta:
        return n * 2 ** n + n * n
    return n * 2 ** (n - 1)


def _locate(spec: WordSpec, target: str, n: int, start: int = 1,
            end: Optional[int] = None) -> Tuple[int, int]:
    if target not in _TARGET_LETTER:
        raise ReductionError(f"未知目标: {target}（只支持 F 或 X）")
    if n < 1:
        raise ReductionError(f"n必须为正整数: {n}")
    found = find_factor(spec, _TARGET_LETTER[target], n, _TARGET_ALLOWED[target], start, end)
    if found is None:
        raise TargetUnreachableError(
            f"单词 {spec.format()} 中没有可约化为 {target}_{{{n},{n}}} 的因子",
            {'word': spec.format(), 'target': target, 'n': n})
    return found


def plan_rows(spec: WordSpec, target: str, n: int) -> Dict[str, Any]:
    """
    行数规划：在因子上空跑约化，求能留下至少n行的最小初始行数

    Returns:
        factor、budget（路线给出的预算）、minimal（最小充分行数）、ledger（以minimal起算的台账）
    """
    start, end = _locate(spec, target, n)
    beta = spec.letters(start, end)
    budget = row_budget(target, n, beta)
    limit = max(budget, n) * 2 + 4
    for rows in range(n, limit + 1):
        ledger = _simulate_rows(beta, rows, n)
        if ledger is not None:
            return {'factor': [start, end], 'beta': beta, 'budget': budget,
                    'minimal': rows, 'ledger': ledger}
    raise InsufficientRowsError(f"在 {limit} 行以内找不到足够的行数", {'beta': beta, 'limit': limit})


def reduce_to_target(spec: WordSpec, target: str, n: int, rows: Optional[int] = None,
                     window: Optional[GridGraph] = None) -> ReductionTrace:
    """
    用顶点子式约化把窗口改写为 F_{n,n} 或 X_{n,n}

    Args:
        spec: 单词
        target: 'F' 或 'X'
        n: 目标规模
        rows: 初始行数（默认取路线预算与规划最小值中较大者）
        window: 给定窗口时在其列范围内寻找因子，行取窗口的行

    Returns:
        ReductionTrace

    Raises:
        InsufficientRowsError: 行数不足
        TargetUnreachableError: 单词中没有合适的因子
    """
    if window is not None:
        spec = window.word
        start, end = _locate(spec, target, n, window.first_col, window.last_col - 1)
        current = window.restrict(cols=(start, end + 1))
        plan: Dict[str, Any] = {}
    else:
        plan = plan_rows(spec, target, n)
        start, end = plan['factor']
        if rows is None:
            rows = max(plan['budget'], plan['minimal'])
        current = build_window(spec, rows, (start, end + 1))
    beta = spec.letters(start, end)
    budget = row_budget(target, n, beta)
    initial = current
    span = (start, end)
    steps: List[ReductionStep] = []

    logger.info(f"开始约化: 单词 {spec.format()}, 目标 {target}_{{{n},{n}}}, "
                f"因子 {beta} @ {start}, 行数 {len(current.rows)}")
    while True:
        beta = current.word.letters(start, end)
        move = _next_rewrite(beta)
        if move is None:
            break
        offset, rule = move
        j = start + offset
        if rule == '01' and len(current.rows) % 2:
            if len(current.rows) < 3:
                raise InsufficientRowsError("约化 01 前的奇偶修补没有多余的行",
                                            {'rows': len(current.rows)})
            dropped = current.rows[-1]
            graph = delete_rows(current.graph, (dropped,))
            repaired = GridGraph(current.word, current.rows[:-1], current.cols, graph)
            steps.append(ReductionStep(StepKind.DELETE_ROWS, None, None, (dropped,),
                                       ((StepKind.DELETE_ROWS, (dropped,)),),
                                       current.word.format(), current.word.format(),
                                       len(repaired.rows)))
            current = repaired
        reducer = {'00': reduce_00, '01': reduce_01, '02': reduce_02,
                   '211': reduce_211, '212': reduce_212}[rule]
        current, step = reducer(current, j)
        steps.append(step)
        if rule[0] == '0':
            end -= 1

    trace = ReductionTrace(initial, tuple(steps), current, target, n, span, budget, plan)
    if len(current.rows) < n:
        raise InsufficientRowsError(f"约化后只剩 {len(current.rows)} 行，少于 n={n}",
                                    {'rows': len(current.rows), 'n': n, 'ledger': trace.ledger()})
    if not trace.extract_target().matches:
        raise ReductionError("约化结果与目标窗口不一致")
    logger.info(f"约化完成: {len(steps)} 步, 行数台账 {trace.ledger()}")
    return trace
