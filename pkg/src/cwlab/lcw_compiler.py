#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
线性团宽编译模块
把图按顶点划分逐段编译为线性表达式，并给出可审计的标签预算：
- compose_linear: 分段组合，标签数不超过 ℓ(m+1)
- build_rows_parts / compile_window: 网格窗口逐行构造，标签数不超过 4t
- partition_black_white / compile_subclass_graph: 不含 k×k 全黑块的黑色子图，
  标签数不超过 (4k-2)(8k+1)
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, List, Optional, Sequence, Tuple

from .core_graph import Graph, SimilarityPartition, induced_subgraph, similarity_partition
from .cw_algebra import (CwExpr, Create, defines, from_program, is_linear, labels_used,
                         linear_program, max_live_labels)
from .errors import ConditionViolation, MuBoundError
from .word_model import GridGraph, parse_tag, vertex_id

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartSequence:
    """有序顶点划分 U_1..U_s，每段附一个至多m个标签的线性表达式"""

    parts: Tuple[FrozenSet[str], ...]
    expressions: Tuple[CwExpr, ...]
    m: int
    boundary: Tuple[FrozenSet[str], ...] = ()

    def class_maps(self, graph: Graph) -> List[SimilarityPartition]:
        return [similarity_partition(graph, part) for part in self.parts]

    def prefix_maps(self, graph: Graph) -> List[SimilarityPartition]:
        result = []
        prefix: set = set()
        for part in self.parts:
            prefix |= part
            result.append(similarity_partition(graph, prefix))
        return result


@dataclass(frozen=True)
class CompileReport:
    """编译预算报告"""

    m: int
    ell: int
    bound: int
    labels: int
    max_live: int
    defines: bool
    linear: bool
    parts: int
    mu_parts: Tuple[int, ...]
    mu_prefixes: Tuple[int, ...]
    prefix_mu_max: Optional[int] = None
    within_3k_minus_1: Optional[bool] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.defines and self.linear and self.labels <= self.bound and self.max_live <= self.bound

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'm': self.m,
            'ell': self.ell,
            'bound': self.bound,
            'labels': self.labels,
            'max_live': self.max_live,
            'defines': self.defines,
            'linear': self.linear,
            'parts': self.parts,
            'mu_parts': list(self.mu_parts),
            'mu_prefixes': list(self.mu_prefixes),
            'ok': self.ok,
        }
        if self.prefix_mu_max is not None:
            result['prefix_mu_max'] = self.prefix_mu_max
            result['within_3k_minus_1'] = self.within_3k_minus_1
        result.update(self.extra)
        return result


@dataclass(frozen=True)
class BlackWhiteLayout:
    """宿主窗口 H_{n,n} 与其中导出图G的黑色顶点集"""

    host: GridGraph
    black: FrozenSet[str]

    @property
    def graph(self) -> Graph:
        return induced_subgraph(self.host.graph, self.black)

    def blocks(self, k: int) -> List[Tuple[int, int]]:
        """按k列一组切分列（末尾不足k列时视为补齐的白色列）"""
        first, last = self.host.cols
        width = last - first + 1
        count = -(-width // k)
        return [(first + i * k, first + (i + 1) * k - 1) for i in range(count)]

    def is_black(self, row: int, col: int) -> bool:
        return vertex_id(row, col) in self.black


# ---------------------------------------------------------------------------
# 路径森林

def path_forest_expression(vertices: Sequence[str], graph: Graph) -> CwExpr:
    """
    按给定顺序逐个加入顶点的3标签构造，适用于只有相邻顶点可能相连的路径森林

    新顶点取标签3，与前一顶点（标签2）相邻时连边，之后 2→1、3→2。
    """
    if not vertices:
        raise ConditionViolation("路径森林至少需要一个顶点")
    program: List[tuple] = [('create', 2, vertices[0])]
    for previous, current in zip(vertices, vertices[1:]):
        program.append(('create', 3, current))
        if graph.has_edge(previous, current):
            program.append(('eta', 3, 2))
        program.append(('rho', 2, 1))
        program.append(('rho', 3, 2))
    return from_program(program)


def rows_parts(graph: Graph) -> PartSequence:
    """按网格行划分，每行按列序用3标签构造"""
    rows: Dict[int, List[Tuple[int, str]]] = {}
    for vid in graph.vertices:
        row, col = parse_tag(vid)
        rows.setdefault(row, []).append((col, vid))
    parts = []
    expressions = []
    for row in sorted(rows):
        ordered = [vid for _, vid in sorted(rows[row])]
        parts.append(frozenset(ordered))
        expressions.append(path_forest_expression(ordered, graph))
    return PartSequence(tuple(parts), tuple(expressions), 3)


def build_rows_parts(window: GridGraph) -> PartSequence:
    """H_{k,t} 的行划分：U_i 为第i行"""
    return rows_parts(window.graph)


# ---------------------------------------------------------------------------
# 分段组合

def _violation(message: str, part: int, bound: str, value: int, limit: int,
               error=ConditionViolation):
    logger.error(message)
    return error(message, {'part': part, 'bound': bound, 'value': value, 'limit': limit})


def compose_linear(graph: Graph, parts: PartSequence, ell: int) -> CwExpr:
    """
    分段组合为线性表达式

    前缀的相似类使用标签 1..ℓ；第i段的顶点使用提升标签
    ℓ + (c-1)·m + λ，其中c为顶点的 U_i-相似类编号，λ为段内表达式的标签（规范化到 1..m）。
    每创建一个顶点，就把它与完全相邻的前缀类连边；一段结束后把标签合并回
    新前缀的相似类。

    Args:
        graph: 目标图
        parts: 顶点划分及每段的线性表达式
        ell: 每段与每个前缀的相似类数上限

    Returns:
        线性表达式，标签数不超过 ℓ(m+1)

    Raises:
        ConditionViolation: 某段或某前缀超出界限，或段表达式不合要求
    """
    m = parts.m
    if ell < 1 or m < 1:
        raise ConditionViolation(f"ℓ与m必须为正: ℓ={ell}, m={m}")
    covered = [v for part in parts.parts for v in part]
    if len(covered) != len(set(covered)) or set(covered) != set(graph.vertices):
        raise ConditionViolation("各段没有恰好划分图的顶点集")
    if len(parts.parts) != len(parts.expressions):
        raise ConditionViolation("段数与段表达式数不一致")
    if len(graph) == 1:
        (only,) = graph.vertices
        return Create(1, only)

    program: List[tuple] = []
    prefix: set = set()
    prefix_labels: List[Tuple[FrozenSet[str], int]] = []

    for index, (part, expr) in enumerate(zip(parts.parts, parts.expressions), 1):
        if not defines(expr, induced_subgraph(graph, part)) or not is_linear(expr):
            raise _violation(f"第 {index} 段的表达式没有线性地定义 G[U_{index}]",
                             index, 'part_expression', 0, 0)
        steps = linear_program(expr)
        used = sorted({op[1] for op in steps if op[0] == 'create'} |
                      {x for op in steps if op[0] != 'create' for x in op[1:]})
        if len(used) > m:
            raise _violation(f"第 {index} 段使用 {len(used)} 个标签，超过 m={m}",
                             index, 'm', len(used), m)
        norm = {label: i + 1 for i, label in enumerate(used)}

        classes = similarity_partition(graph, part)
        if classes.mu > ell:
            raise _violation(f"μ(U_{index}) = {classes.mu} 超过 ℓ={ell}",
                             index, 'mu_part', classes.mu, ell)
        class_of = {v: c + 1 for v, c in classes.class_map().items()}

        def lift(v_class: int, lam: int) -> int:
            return ell + (v_class - 1) * m + lam

        current: Dict[str, int] = {}
        for op in steps:
            kind = op[0]
            if kind == 'create':
                lam, v = norm[op[1]], op[2]
                current[v] = lam
                lifted = lift(class_of[v], lam)
                program.append(('create', lifted, v))
                for block, label in prefix_labels:
                    touching = graph.adjacency[v] & block
                    if touching == block:
                        program.append(('eta', lifted, label))
                    elif touching:
                        raise _violation(f"顶点 {v} 与前缀类只部分相邻", index, 'prefix_class', 0, 0)
            elif kind == 'eta':
                a, b = norm[op[1]], norm[op[2]]
                side_a = sorted({class_of[v] for v, lam in current.items() if lam == a})
                side_b = sorted({class_of[v] for v, lam in current.items() if lam == b})
                for ca in side_a:
                    for cb in side_b:
                        program.append(('eta', lift(ca, a), lift(cb, b)))
            else:
                a, b = norm[op[1]], norm[op[2]]
                if a == b:
                    continue
                moved = [v for v, lam in current.items() if lam == a]
                for c in sorted({class_of[v] for v in moved}):
                    program.append(('rho', lift(c, a), lift(c, b)))
                for v in moved:
                    current[v] = b

        prefix |= part
        merged = similarity_partition(graph, prefix)
        if merged.mu > ell:
            raise _violation(f"μ(U_1∪…∪U_{index}) = {merged.mu} 超过 ℓ={ell}",
                             index, 'mu_prefix', merged.mu, ell)

        targets: Dict[FrozenSet[str], int] = {}
        for block in merged.classes:
            old = sorted(label for cls, label in prefix_labels if cls <= block)
            if old:
                for label in old[1:]:
                    program.append(('rho', label, old[0]))
                targets[block] = old[0]
        free = iter(sorted(set(range(1, ell + 1)) - set(targets.values())))
        for block in merged.classes:
            if block not in targets:
                targets[block] = next(free)
        for block in merged.classes:
            lifted = sorted({lift(class_of[v], current[v]) for v in block & part})
            for label in lifted:
                program.append(('rho', label, targets[block]))
        prefix_labels = [(block, targets[block]) for block in merged.classes]

    composed = from_program(program)
    bound = ell * (m + 1)
    if not defines(composed, graph) or not is_linear(composed):
        raise ConditionViolation("组合得到的表达式没有线性地定义原图")
    if labels_used(composed) > bound or max_live_labels(composed) > bound:
        raise ConditionViolation(f"组合得到的表达式超出标签上限 {bound}",
                                 {'labels': labels_used(composed), 'bound': bound})
    return composed


def audit_composition(graph: Graph, parts: PartSequence, ell: int, expr: CwExpr,
                      **extra: Any) -> CompileReport:
    """统计组合结果的标签数、同时存活标签数与各段的μ值"""
    return CompileReport(
        m=parts.m,
        ell=ell,
        bound=ell * (parts.m + 1),
        labels=labels_used(expr),
        max_live=max_live_labels(expr),
        defines=defines(expr, graph),
        linear=is_linear(expr),
        parts=len(parts.parts),
        mu_parts=tuple(p.mu for p in parts.class_maps(graph)),
        mu_prefixes=tuple(p.mu for p in parts.prefix_maps(graph)),
        extra=dict(extra),
    )


def compile_window(window: GridGraph) -> Tuple[CwExpr, CompileReport]:
    """H_{k,t} 的逐行编译：m=3，ℓ=t，标签数不超过 4t"""
    t = window.last_col - window.first_col + 1
    parts = build_rows_parts(window)
    expr = compose_linear(window.graph, parts, t)
    report = audit_composition(window.graph, parts, t, expr)
    logger.info(f"窗口编译完成: {len(window.rows)}×{t}, 标签 {report.labels}/{report.bound}")
    return expr, report


# ---------------------------------------------------------------------------
# 黑白划分

def partition_black_white(layout: BlackWhiteLayout, k: int) -> PartSequence:
    """
    黑色顶点的分段 U_1..U_t

    每k列为一块 W_i。U_1 取 W_1 的黑色顶点；对 i ≥ 2 的每一行：
    若该行在 W_i 中全黑，首个顶点归 U_{i-1}、其余归 U_i；
    否则第一个白色顶点之前的黑色顶点归 U_{i-1}，其余黑色顶点归 U_i。
    每段内部再按行编译（m=3，ℓ=2k）。

    Raises:
        ConditionViolation: 某块中全黑的行数达到k
        MuBoundError: μ(U_i) 或 μ(U_1∪…∪U_i) 超过 4k-2
    """
    if k < 1:
        raise ConditionViolation(f"k必须为正整数: {k}")
    graph = layout.graph
    blocks = layout.blocks(k)
    rows = layout.host.rows
    parts: List[set] = [set() for _ in blocks]

    for i, (first, last) in enumerate(blocks):
        columns = range(first, last + 1)
        full_rows = [r for r in rows if all(layout.is_black(r, c) for c in columns)]
        if len(full_rows) > k - 1:
            raise ConditionViolation(
                f"第 {i + 1} 块有 {len(full_rows)} 行全黑，超过 k-1={k - 1}",
                {'block': i + 1, 'full_rows': full_rows, 'k': k})
        for r in rows:
            black = [vertex_id(r, c) for c in columns if layout.is_black(r, c)]
            if i == 0:
                parts[0].update(black)
                continue
            if r in full_rows:
                parts[i - 1].add(black[0])
                parts[i].update(black[1:])
                continue
            first_white = next(c for c in columns if not layout.is_black(r, c))
            for c in columns:
                if layout.is_black(r, c):
                    parts[i - 1 if c < first_white else i].add(vertex_id(r, c))

    kept = [frozenset(p) for p in parts if p]
    boundary = []
    for index, part in enumerate(kept):
        before = kept[index - 1] if index > 0 else frozenset()
        after = kept[index + 1] if index + 1 < len(kept) else frozenset()
        edge_vertices = set()
        for vid in part:
            r, c = parse_tag(vid)
            if vertex_id(r, c - 1) in before or vertex_id(r, c + 1) in after:
                edge_vertices.add(vid)
        boundary.append(frozenset(edge_vertices))

    limit = 4 * k - 2
    prefix: set = set()
    for index, part in enumerate(kept, 1):
        mu_part = similarity_partition(graph, part).mu
        if mu_part > limit:
            raise _violation(f"μ(U_{index}) = {mu_part} 超过 4k-2 = {limit}",
                             index, 'mu_part', mu_part, limit, MuBoundError)
        prefix |= part
        mu_prefix = similarity_partition(graph, prefix).mu
        if mu_prefix > limit:
            raise _violation(f"μ(U_1∪…∪U_{index}) = {mu_prefix} 超过 4k-2 = {limit}",
                             index, 'mu_prefix', mu_prefix, limit, MuBoundError)

    expressions = []
    for part in kept:
        sub = induced_subgraph(graph, part)
        inner = rows_parts(sub)
        expressions.append(compose_linear(sub, inner, 2 * k))
    return PartSequence(tuple(kept), tuple(expressions), 8 * k, tuple(boundary))


def compile_subclass_with_report(layout: BlackWhiteLayout, k: int) -> Tuple[CwExpr, CompileReport]:
    """黑色子图的编译与预算报告：m=8k，ℓ=4k-2"""
    graph = layout.graph
    if len(graph) == 0:
        raise ConditionViolation("黑色顶点集为空，无法构造表达式")
    parts = partition_black_white(layout, k)
    ell = 4 * k - 2
    expr = compose_linear(graph, parts, ell)
    prefixes = tuple(p.mu for p in parts.prefix_maps(graph))
    prefix_max = max(prefixes) if prefixes else 0
    report = audit_composition(graph, parts, ell, expr, k=k, vertices=len(graph))
    report = CompileReport(
        m=report.m, ell=report.ell, bound=report.bound, labels=report.labels,
        max_live=report.max_live, defines=report.defines, linear=report.linear,
        parts=report.parts, mu_parts=report.mu_parts, mu_prefixes=report.mu_prefixes,
        prefix_mu_max=prefix_max, within_3k_minus_1=prefix_max <= 3 * k - 1,
        extra=report.extra,
    )
    if not report.within_3k_minus_1:
        logger.warning(f"前缀μ最大值 {prefix_max} 超过 3k-1 = {3 * k - 1}")
    logger.info(f"子类编译完成: k={k}, {len(graph)} 个顶点, 标签 {report.labels}/{report.bound}")
    return expr, report


def compile_subclass_graph(layout: BlackWhiteLayout, k: int) -> CwExpr:
    """不含 k×k 全黑块的黑色子图的线性表达式，标签数不超过 (4k-2)(8k+1)"""
    expr, _ = compile_subclass_with_report(layout, k)
    return expr
