#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
单词与网格窗口模块
最终周期的无限单词 prefix|period，以及由单词决定的网格图窗口 F、X、H
"""

import logging
import random
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .core_graph import Graph, induced_subgraph
from .errors import GraphError, SearchBudgetExceeded, WordSpecError

logger = logging.getLogger(__name__)

ALPHABET = frozenset('012')
_TAG_PATTERN = re.compile(r'^r(\d+)c(\d+)$')


@dataclass(frozen=True)
class WordSpec:
    """最终周期单词：有限前缀加无限重复的周期块"""

    prefix: str = ''
    period: str = '0'

    def __post_init__(self):
        for offset, letter in enumerate(self.prefix):
            if letter not in ALPHABET:
                raise WordSpecError(f"非法字母 '{letter}'", position=offset)
        if not self.period:
            raise WordSpecError("周期块不能为空", position=len(self.prefix) + 1)
        for offset, letter in enumerate(self.period):
            if letter not in ALPHABET:
                raise WordSpecError(f"非法字母 '{letter}'", position=len(self.prefix) + 1 + offset)

    @classmethod
    def parse(cls, text: str) -> 'WordSpec':
        """解析 prefix|period 文本形式，错误位置为字符下标"""
        text = text.strip()
        bar = text.find('|')
        if bar < 0:
            raise WordSpecError(f"缺少分隔符 '|': {text}", position=len(text))
        if '|' in text[bar + 1:]:
            raise WordSpecError("分隔符 '|' 只能出现一次", position=text.index('|', bar + 1))
        return cls(text[:bar], text[bar + 1:])

    def format(self) -> str:
        return f"{self.prefix}|{self.period}"

    def __str__(self) -> str:
        return self.format()

    def letter(self, j: int) -> str:
        """第j个字母（从1开始计数）"""
        if j < 1:
            raise WordSpecError(f"位置必须为正整数: {j}")
        if j <= len(self.prefix):
            return self.prefix[j - 1]
        return self.period[(j - len(self.prefix) - 1) % len(self.period)]

    def letters(self, start: int, end: int) -> str:
        """位置start..end（含两端）的字母串"""
        return ''.join(self.letter(j) for j in range(start, end + 1))

    def suffix(self, offset: int) -> 'WordSpec':
        """从位置offset+1开始读出的单词"""
        if offset < 0:
            raise WordSpecError(f"偏移量不能为负: {offset}")
        if offset <= len(self.prefix):
            return WordSpec(self.prefix[offset:], self.period).canonical()
        shift = (offset - len(self.prefix)) % len(self.period)
        return WordSpec('', self.period[shift:] + self.period[:shift]).canonical()

    def rewrite(self, position: int, old: str, new: str) -> 'WordSpec':
        """
        把从position开始的因子old替换为new

        Args:
            position: 因子起始位置（从1开始）
            old: 原因子，必须与单词在该处一致
            new: 替换后的因子

        Returns:
            新的最终周期单词（规范形式）
        """
        end = position + len(old) - 1
        found = self.letters(position, end)
        if found != old:
            raise WordSpecError(f"位置 {position} 处的因子是 {found}，不是 {old}", position=position)
        base = len(self.prefix)
        boundary = max(base, end)
        boundary += (-(boundary - base)) % len(self.period)
        head = self.letters(1, position - 1)
        tail = self.letters(end + 1, boundary)
        return WordSpec(head + new + tail, self.period).canonical()

    def canonical(self) -> 'WordSpec':
        """最短前缀加本原周期的规范形式"""
        period = self.period
        size = len(period)
        for d in range(1, size + 1):
            if size % d == 0 and period[:d] * (size // d) == period:
                period = period[:d]
                break
        prefix = self.prefix
        while prefix and prefix[-1] == period[-1]:
            period = period[-1] + period[:-1]
            prefix = prefix[:-1]
        return WordSpec(prefix, period)

    def same_word(self, other: 'WordSpec') -> bool:
        return self.canonical() == other.canonical()


def vertex_id(row: int, col: int) -> str:
    return f"r{row}c{col}"


def parse_tag(vid: str) -> Tuple[int, int]:
    """由顶点编号 r<row>c<col> 还原 (row, col)"""
    match = _TAG_PATTERN.match(vid)
    if not match:
        raise GraphError(f"顶点编号不是网格标签: {vid}")
    return int(match.group(1)), int(match.group(2))


def edge_rule(letter: str, i: int, k: int) -> bool:
    """
    相邻两列之间的邻接规则

    左列第i行与右列第k行：字母0时当且仅当i=k相邻，字母1时当且仅当i≠k，
    字母2时当且仅当i≤k。
    """
    letter = str(letter)
    if letter == '0':
        return i == k
    if letter == '1':
        return i != k
    if letter == '2':
        return i <= k
    raise WordSpecError(f"非法字母 '{letter}'")


@dataclass(frozen=True)
class GridGraph:
    """P^α 的有限窗口，顶点编号携带 (row, col) 标签"""

    word: WordSpec
    rows: Tuple[int, ...]
    cols: Tuple[int, int]
    graph: Graph

    @property
    def first_col(self) -> int:
        return self.cols[0]

    @property
    def last_col(self) -> int:
        return self.cols[1]

    def columns(self) -> range:
        return range(self.cols[0], self.cols[1] + 1)

    def column(self, col: int) -> List[str]:
        return [vertex_id(r, col) for r in self.rows]

    def row(self, row: int) -> List[str]:
        return [vertex_id(row, c) for c in self.columns()]

    def tags(self) -> Dict[str, Tuple[int, int]]:
        return {vid: parse_tag(vid) for vid in self.graph.vertices}

    def restrict(self, rows: Optional[Iterable[int]] = None,
                 cols: Optional[Tuple[int, int]] = None) -> 'GridGraph':
        """保留部分行与一段连续列的子窗口"""
        rows = tuple(sorted(set(rows))) if rows is not None else self.rows
        cols = cols or self.cols
        if not set(rows) <= set(self.rows) or cols[0] < self.cols[0] or cols[1] > self.cols[1]:
            raise GraphError("子窗口超出原窗口范围", {'rows': list(rows), 'cols': list(cols)})
        keep = [vertex_id(r, c) for r in rows for c in range(cols[0], cols[1] + 1)]
        return GridGraph(self.word, rows, cols, induced_subgraph(self.graph, keep))


def _normalize_rows(rows) -> Tuple[int, ...]:
    if isinstance(rows, int):
        rows = range(1, rows + 1)
    ordered = tuple(sorted(set(int(r) for r in rows)))
    if not ordered:
        raise GraphError("行集合不能为空")
    if ordered[0] < 1:
        raise GraphError(f"行号必须为正整数: {ordered[0]}")
    return ordered


def build_window(spec: WordSpec, rows, cols: Tuple[int, int]) -> GridGraph:
    """
    构造窗口：每个 (row, col) 一个顶点，相邻列之间按字母决定的规则连边

    Args:
        spec: 单词
        rows: 行号集合，或整数k表示行 1..k
        cols: 闭区间 (c1, c2)

    Returns:
        GridGraph 窗口
    """
    rows = _normalize_rows(rows)
    c1, c2 = int(cols[0]), int(cols[1])
    if c1 < 1 or c2 < c1:
        raise GraphError(f"列区间非法: {c1}..{c2}", {'cols': [c1, c2]})

    vertices = [vertex_id(r, c) for r in rows for c in range(c1, c2 + 1)]
    edges = []
    for c in range(c1, c2):
        letter = spec.letter(c)
        for i in rows:
            for k in rows:
                if edge_rule(letter, i, k):
                    edges.append((vertex_id(i, c), vertex_id(k, c + 1)))
    return GridGraph(spec, rows, (c1, c2), Graph.from_edges(vertices, edges))


def build_F(n: int) -> GridGraph:
    """F_{n,n}: 单词 1^∞ 的 n 行 n 列窗口"""
    _require_positive(n=n)
    return build_window(WordSpec('', '1'), n, (1, n))


def build_X(n: int) -> GridGraph:
    """X_{n,n}: 单词 2^∞ 的 n 行 n 列窗口"""
    _require_positive(n=n)
    return build_window(WordSpec('', '2'), n, (1, n))


def build_H(spec: WordSpec, k: int, t: int, start: int = 1) -> GridGraph:
    """H_{k,t}: 前k行、从start开始的t个连续列"""
    _require_positive(k=k, t=t, start=start)
    return build_window(spec, k, (start, start + t - 1))


def _require_positive(**values: int) -> None:
    for name, value in values.items():
        if value < 1:
            raise GraphError(f"参数 {name} 必须为正整数: {value}")


def embed_check(graph: Graph, spec: WordSpec, k: int, t: int, guard: Optional[int] = None,
                max_nodes: int = 2_000_000) -> Optional[Dict[str, Tuple[int, int]]]:
    """
    检查graph能否作为导出子图嵌入 H_{k,t}

    回溯搜索：模式顶点按与已放置顶点的连接数排序，宿主候选用位掩码过滤，
    邻接与不邻接都必须保持。

    Returns:
        顶点到 (row, col) 的映射；不可嵌入时返回None

    Raises:
        SearchBudgetExceeded: 节点预算耗尽
    """
    if guard is None:
        from .config import EMBED_GUARD
        guard = EMBED_GUARD
    if len(graph) > guard:
        raise GraphError(f"模式图顶点数 {len(graph)} 超过上限 {guard}",
                         {'vertices': len(graph), 'guard': guard})
    if len(graph) == 0:
        return {}

    host = build_H(spec, k, t)
    host_index = host.graph.index()
    host_adj = host_index.adjacency
    full = (1 << len(host_index.order)) - 1

    order = _pattern_order(graph)
    placed_before = [[(p, graph.has_edge(order[i], order[p])) for p in range(i)]
                     for i in range(len(order))]

    image: List[int] = []
    stack: List[int] = []
    used = 0
    expanded = 0

    def candidates(i: int) -> int:
        mask = full & ~used
        for p, adjacent in placed_before[i]:
            if adjacent:
                mask &= host_adj[image[p]]
            else:
                mask &= ~host_adj[image[p]]
        return mask

    stack.append(candidates(0))
    while stack:
        mask = stack[-1]
        if not mask:
            stack.pop()
            if image:
                used &= ~(1 << image.pop())
            continue
        low = mask & -mask
        stack[-1] = mask ^ low
        expanded += 1
        if expanded > max_nodes:
            raise SearchBudgetExceeded(f"嵌入搜索超出节点预算 {max_nodes}",
                                       {'k': k, 't': t, 'max_nodes': max_nodes})
        chosen = low.bit_length() - 1
        image.append(chosen)
        used |= low
        if len(image) == len(order):
            mapping = {order[i]: parse_tag(host_index.order[image[i]]) for i in range(len(order))}
            logger.debug(f"找到嵌入: {mapping}")
            return mapping
        stack.append(candidates(len(image)))
    return None


def _pattern_order(graph: Graph) -> List[str]:
    remaining = set(graph.vertices)
    order: List[str] = []
    while remaining:
        chosen = max(sorted(remaining),
                     key=lambda v: (len(graph.adjacency[v] & set(order)), graph.degree(v)))
        order.append(chosen)
        remaining.discard(chosen)
    return order


def find_factor(spec: WordSpec, letter: str, count: int, allowed: Iterable[str],
                start: int = 1, end: Optional[int] = None) -> Optional[Tuple[int, int]]:
    """
    查找最左的因子：以letter开头和结尾，恰含count个letter，且只含allowed中的字母

    Args:
        spec: 单词
        letter: 目标字母
        count: 目标字母出现次数
        allowed: 允许出现的字母
        start: 最早的起始位置
        end: 因子最后一个字母的位置上限（None表示不限）

    Returns:
        (起始位置, 结束位置)，找不到时返回None
    """
    allowed = set(allowed) | {letter}
    horizon = max(start, len(spec.prefix)) + len(spec.period) * (count + 1)
    if end is not None:
        horizon = min(horizon, end)
    for first in range(start, max(start, len(spec.prefix)) + len(spec.period) + 1):
        if first > horizon or spec.letter(first) != letter:
            continue
        seen = 0
        j = first
        while j <= horizon:
            current = spec.letter(j)
            if current not in allowed:
                break
            if current == letter:
                seen += 1
                if seen == count:
                    return first, j
            j += 1
    return None


def periodic_cycle_witness(n: int) -> Tuple[WordSpec, GridGraph, List[str]]:
    """
    单词 (0^n 1)^∞ 中长度 2(n+2) 的导出圈

    圈从第p列的d出发，沿a行走过第p+1..p+n+1列，经第p+n+2列的b，
    再沿c行走回第p+1列。p和p+n+1两处都是字母1。
    """
    if n < 0:
        raise WordSpecError(f"n不能为负: {n}")
    spec = WordSpec('', '0' * n + '1')
    p = n + 1
    row_a, row_c, row_bd = 1, 2, 3
    order = [vertex_id(row_bd, p)]
    order += [vertex_id(row_a, c) for c in range(p + 1, p + n + 2)]
    order.append(vertex_id(row_bd, p + n + 2))
    order += [vertex_id(row_c, c) for c in range(p + n + 1, p, -1)]
    window = build_window(spec, (row_a, row_c, row_bd), (p, p + n + 2))
    return spec, window, order


def sample_subclass_layout(spec: WordSpec, n: int, k: int, max_vertices: int, seed: int,
                           density: float = 0.5):
    """
    在 H_{n,n} 中随机采样黑色顶点集

    任意k个连续列上至多有k-1行全黑，因而黑色部分不含 k×k 的全黑块。

    Returns:
        lcw_compiler.BlackWhiteLayout
    """
    from .lcw_compiler import BlackWhiteLayout

    _require_positive(n=n, k=k, max_vertices=max_vertices)
    rng = random.Random(seed)
    host = build_H(spec, n, n)
    black = {vid for vid in sorted(host.graph.vertices) if rng.random() < density}

    for c in range(1, n - k + 2):
        span = range(c, c + k)
        while True:
            full_rows = [r for r in host.rows if all(vertex_id(r, m) in black for m in span)]
            if len(full_rows) < k:
                break
            victim_row = rng.choice(full_rows)
            black.discard(vertex_id(victim_row, rng.choice(list(span))))

    ordered = sorted(black)
    while len(ordered) > max_vertices:
        ordered.pop(rng.randrange(len(ordered)))
    return BlackWhiteLayout(host, frozenset(ordered))
