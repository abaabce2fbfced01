#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
下界证书模块
给定定义 F_{n,n} 的任一表达式，找出最低的“含满列”并节点，按子树着色并
沿列推进，抽取至少 ⌊n/2⌋ 个在该节点处标签两两不同的红色顶点。
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Set, Tuple

from .cw_algebra import Create, CwExpr, Union, defines, eval_expr, labels_at_node, labels_used
from .errors import CertificateError
from .word_model import GridGraph, vertex_id

logger = logging.getLogger(__name__)

RED = 'red'
BLUE = 'blue'
YELLOW = 'yellow'

# 依次尝试的规范化变换: (交换红蓝, 列反转)
_TRANSFORMS = (
    ('identity', False, False),
    ('swap', True, False),
    ('reverse', False, True),
    ('reverse+swap', True, True),
)


@dataclass(frozen=True)
class Coloring:
    """
    F_{n,n} 顶点的红/蓝/黄三色及规范化后的坐标

    未交换时 red = F(右子节点)、blue = F(左子节点)；yellow 为其余顶点。
    positions 给出规范化（可能列反转）后的 1 起始 (行, 列)。
    """

    handle: int
    colours: Dict[str, str]
    positions: Dict[str, Tuple[int, int]]
    n: int
    r: int
    transform: str
    swapped: bool
    reversed: bool

    def grid(self) -> List[List[str]]:
        cells = [[''] * (self.n + 1) for _ in range(self.n + 1)]
        for vid, (i, j) in self.positions.items():
            cells[i][j] = vid
        return cells

    def colour_at(self, i: int, j: int) -> str:
        return self.colours[self.grid()[i][j]]

    def column_counts(self) -> List[Dict[str, int]]:
        """规范化坐标下每列的三色计数"""
        counts = [{RED: 0, BLUE: 0, YELLOW: 0} for _ in range(self.n)]
        for vid, (_, j) in self.positions.items():
            counts[j - 1][self.colours[vid]] += 1
        return counts

    def to_dict(self) -> Dict[str, Any]:
        return {
            'handle': self.handle,
            'r': self.r,
            'transform': self.transform,
            'columns': self.column_counts(),
        }


@dataclass(frozen=True)
class WitnessSet:
    """抽取出的红色顶点集U"""

    vertices: Tuple[str, ...]
    bound: int
    iterations: int
    terminated_by: str

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Certificate:
    """下界证书"""

    n: int
    handle: Optional[int]
    witness: WitnessSet
    labels: Dict[str, int]
    distinct: bool
    labels_used: int
    coloring: Optional[Coloring] = None

    @property
    def verdict(self) -> bool:
        return self.distinct and len(self.witness) >= self.witness.bound

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'handle': self.handle,
            'witness': list(self.witness.vertices),
            'witness_labels': {v: self.labels[v] for v in self.witness.vertices},
            'bound': self.witness.bound,
            'iterations': self.witness.iterations,
            'terminated_by': self.witness.terminated_by,
            'distinct': self.distinct,
            'labels_used': self.labels_used,
            'verdict': self.verdict,
            'coloring': self.coloring.to_dict() if self.coloring else None,
        }


def _square_positions(F: GridGraph) -> Tuple[int, Dict[str, Tuple[int, int]]]:
    n = len(F.rows)
    width = F.last_col - F.first_col + 1
    if n != width or n < 1:
        raise CertificateError(f"需要方形窗口 F_{{n,n}}，实际为 {n}×{width}")
    positions = {}
    for i, row in enumerate(F.rows, 1):
        for j, col in enumerate(F.columns(), 1):
            positions[vertex_id(row, col)] = (i, j)
    return n, positions


def _tree(expr: CwExpr) -> Tuple[List[CwExpr], List[List[int]]]:
    """先序节点与每个节点的子节点句柄"""
    nodes: List[CwExpr] = []
    children: List[List[int]] = []
    stack: List[Tuple[CwExpr, Optional[int]]] = [(expr, None)]
    while stack:
        node, parent = stack.pop()
        handle = len(nodes)
        nodes.append(node)
        children.append([])
        if parent is not None:
            children[parent].append(handle)
        stack.extend((child, handle) for child in reversed(node.children()))
    return nodes, children


def _vertex_sets(nodes: List[CwExpr], children: List[List[int]]) -> List[Set[str]]:
    sets: List[Set[str]] = [set() for _ in nodes]
    for handle in range(len(nodes) - 1, -1, -1):
        node = nodes[handle]
        if isinstance(node, Create):
            sets[handle] = {node.vertex}
        else:
            for child in children[handle]:
                sets[handle] |= sets[child]
    return sets


def _require_defines(expr: CwExpr, F: GridGraph) -> None:
    if not defines(expr, F.graph):
        raise CertificateError("表达式没有定义给定的 F_{n,n}")


def lowest_full_column_node(expr: CwExpr, F: GridGraph) -> int:
    """
    最低的、其顶点集含某一整列的并节点句柄（并列时取句柄最小者）

    Raises:
        CertificateError: 表达式不定义F，或不含满足条件的并节点
    """
    _require_defines(expr, F)
    nodes, children = _tree(expr)
    sets = _vertex_sets(nodes, children)
    columns = [set(F.column(col)) for col in F.columns()]

    def full(handle: int) -> bool:
        return any(column <= sets[handle] for column in columns)

    qualifying = [h for h, node in enumerate(nodes) if isinstance(node, Union) and full(h)]
    if not qualifying:
        raise CertificateError("表达式中没有含整列的并节点")

    below: List[bool] = [False] * len(nodes)
    for handle in range(len(nodes) - 1, -1, -1):
        below[handle] = any(below[c] or (isinstance(nodes[c], Union) and full(c))
                            for c in children[handle])
    lowest = [h for h in qualifying if not below[h]]
    return min(lowest)


def derive_coloring(expr: CwExpr, handle: int, F: GridGraph) -> Coloring:
    """
    由并节点a的两棵子树着色并规范化

    依次尝试 恒等、交换红蓝、列反转、列反转+交换，取第一个存在可用列r的变换：
    r 为不含黄色顶点的列，r ≤ ⌈n/2⌉ 且红色顶点数 ≥ n/2，取最小者。

    Raises:
        CertificateError: a不是并节点，或没有任何变换给出可用列
    """
    nodes, children = _tree(expr)
    if not isinstance(handle, int) or not 0 <= handle < len(nodes):
        raise CertificateError(f"无效的节点句柄: {handle}")
    if not isinstance(nodes[handle], Union):
        raise CertificateError(f"句柄 {handle} 不是并节点")
    sets = _vertex_sets(nodes, children)
    left, right = children[handle]
    n, positions = _square_positions(F)

    base = {}
    for vid in positions:
        if vid in sets[right]:
            base[vid] = RED
        elif vid in sets[left]:
            base[vid] = BLUE
        else:
            base[vid] = YELLOW

    limit = -(-n // 2)
    for name, swap, flip in _TRANSFORMS:
        colours = {v: ({RED: BLUE, BLUE: RED}.get(c, c) if swap else c) for v, c in base.items()}
        placed = {v: (i, n + 1 - j if flip else j) for v, (i, j) in positions.items()}
        by_column: Dict[int, List[str]] = {}
        for vid, (_, j) in placed.items():
            by_column.setdefault(j, []).append(colours[vid])
        for r in range(1, limit + 1):
            column = by_column[r]
            if YELLOW in column:
                continue
            if 2 * column.count(RED) >= n:
                logger.debug(f"着色规范化: 变换 {name}, r={r}")
                return Coloring(handle, colours, placed, n, r, name, swap, flip)
    raise CertificateError("没有变换能给出可用的列r", {'handle': handle})


def extract_witness(coloring: Coloring, F: GridGraph) -> WitnessSet:
    """
    从第r列的红色行出发逐列推进

    每一步把下一列变为非红色的行在当前列的顶点放入U并移出I；
    I 为空即停止，推进到第n列时改取I中最小行在第 r..n-1 列的顶点。

    Raises:
        CertificateError: 推进过程中的不变式不成立
    """
    n, r = coloring.n, coloring.r
    if len(F.rows) != n:
        raise CertificateError("着色与窗口规模不一致")
    grid = coloring.grid()
    colours = coloring.colours

    def red(i: int, j: int) -> bool:
        return colours[grid[i][j]] == RED

    active = {i for i in range(1, n + 1) if red(i, r)}
    witness: List[str] = []
    j = r
    iterations = 0
    terminated_by = 'exhausted_rows'
    while True:
        iterations += 1
        if j < n:
            leaving = sorted(i for i in active if not red(i, j + 1))
            witness.extend(grid[i][j] for i in leaving)
            active.difference_update(leaving)
        if not active:
            break
        j += 1
        if j >= n:
            row = min(active)
            witness = [grid[row][m] for m in range(r, n)]
            terminated_by = 'full_row'
            break

    if any(colours[v] != RED for v in witness):
        raise CertificateError("抽取出的顶点并非全为红色")
    bound = n // 2
    if len(witness) < bound:
        raise CertificateError(f"抽取出的顶点数 {len(witness)} 少于 ⌊n/2⌋ = {bound}")
    return WitnessSet(tuple(witness), bound, iterations, terminated_by)


def verify_distinct_labels(expr: CwExpr, handle: int, witness) -> bool:
    """U 中的顶点在节点a处（运算执行前）是否两两标签不同"""
    vertices = witness.vertices if isinstance(witness, WitnessSet) else tuple(witness)
    labels = labels_at_node(expr, handle)
    missing = [v for v in vertices if v not in labels]
    if missing:
        raise CertificateError(f"顶点不在节点 {handle} 的子树中: {', '.join(missing)}")
    return len({labels[v] for v in vertices}) == len(vertices)


def certify(expr: CwExpr, F: GridGraph) -> Certificate:
    """
    生成完整的下界证书

    Raises:
        CertificateError: 表达式不定义F，或证书构造失败
    """
    n, positions = _square_positions(F)
    if n == 1:
        _require_defines(expr, F)
        (only,) = positions
        witness = WitnessSet((only,), 0, 0, 'trivial')
        return Certificate(1, None, witness, {only: eval_expr(expr).labels[only]},
                           True, labels_used(expr))

    handle = lowest_full_column_node(expr, F)
    coloring = derive_coloring(expr, handle, F)
    witness = extract_witness(coloring, F)
    labels = labels_at_node(expr, handle)
    distinct = verify_distinct_labels(expr, handle, witness)
    if not distinct:
        logger.error(f"节点 {handle} 处U的标签有重复")
    certificate = Certificate(n, handle, witness, {v: labels[v] for v in witness.vertices},
                              distinct, labels_used(expr), coloring)
    logger.info(f"证书: n={n}, 节点 {handle}, |U|={len(witness)}, 结论 {certificate.verdict}")
    return certificate
