#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
基础图模块
有限无向简单图、导出子图、U-相似划分、二部补以及小规模的导出圈搜索
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx

from .errors import GraphError, SearchBudgetExceeded

logger = logging.getLogger(__name__)

Edge = Tuple[str, str]


def _edge(a: str, b: str) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class GraphIndex:
    """排序后的顶点序与整数位掩码邻接表，供各类搜索共享"""

    order: Tuple[str, ...]
    position: Dict[str, int]
    adjacency: Tuple[int, ...]

    def mask_of(self, vertices: Iterable[str]) -> int:
        mask = 0
        for v in vertices:
            mask |= 1 << self.position[v]
        return mask

    def vertices_of(self, mask: int) -> List[str]:
        result = []
        while mask:
            low = mask & -mask
            result.append(self.order[low.bit_length() - 1])
            mask ^= low
        return result


@dataclass(frozen=True)
class Graph:
    """有限无向简单图，顶点为不透明的字符串编号"""

    vertices: FrozenSet[str]
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        for a, b in self.edges:
            if a == b:
                raise GraphError(f"不允许自环: {a}", {'vertex': a})
            if a > b:
                raise GraphError(f"边端点未按字典序存储: ({a}, {b})")
            if a not in self.vertices or b not in self.vertices:
                raise GraphError(f"边端点不在顶点集中: ({a}, {b})", {'edge': [a, b]})

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[Sequence[str]] = ()) -> 'Graph':
        """由顶点与边列表构造，边端点自动规范化"""
        vertex_set = frozenset(str(v) for v in vertices)
        edge_set = set()
        for pair in edges:
            if len(pair) != 2:
                raise GraphError(f"边必须恰好有两个端点: {list(pair)}")
            a, b = str(pair[0]), str(pair[1])
            if a == b:
                raise GraphError(f"不允许自环: {a}", {'vertex': a})
            edge_set.add(_edge(a, b))
        return cls(vertex_set, frozenset(edge_set))

    @cached_property
    def adjacency(self) -> Dict[str, FrozenSet[str]]:
        table: Dict[str, set] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            table[a].add(b)
            table[b].add(a)
        return {v: frozenset(ns) for v, ns in table.items()}

    def _require(self, vertices: Iterable[str]) -> None:
        missing = sorted(set(vertices) - self.vertices)
        if missing:
            raise GraphError(f"未知顶点: {', '.join(missing)}", {'unknown': missing})

    def neighbours(self, v: str) -> FrozenSet[str]:
        self._require([v])
        return self.adjacency[v]

    def degree(self, v: str) -> int:
        return len(self.neighbours(v))

    def has_edge(self, a: str, b: str) -> bool:
        return a != b and _edge(a, b) in self.edges

    def sorted_vertices(self) -> List[str]:
        return sorted(self.vertices)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def relabel(self, mapping: Mapping[str, str]) -> 'Graph':
        """按映射重命名顶点（映射必须是单射，未列出的顶点保持原名）"""
        rename = {v: str(mapping.get(v, v)) for v in self.vertices}
        if len(set(rename.values())) != len(rename):
            raise GraphError("顶点重命名映射不是单射")
        return Graph.from_edges(rename.values(), ((rename[a], rename[b]) for a, b in self.edges))

    def delete_vertices(self, removed: Iterable[str]) -> 'Graph':
        removed = set(removed)
        self._require(removed)
        return induced_subgraph(self, self.vertices - removed)

    def index(self) -> GraphIndex:
        return self._index

    @cached_property
    def _index(self) -> GraphIndex:
        order = tuple(sorted(self.vertices))
        position = {v: i for i, v in enumerate(order)}
        adjacency = [0] * len(order)
        for a, b in self.edges:
            adjacency[position[a]] |= 1 << position[b]
            adjacency[position[b]] |= 1 << position[a]
        return GraphIndex(order, position, tuple(adjacency))

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(self.sorted_vertices())
        nx_graph.add_edges_from(self.sorted_edges())
        return nx_graph

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class SimilarityPartition:
    """U-相似类划分：U中在U之外邻域相同的顶点归为一类"""

    ground: FrozenSet[str]
    classes: Tuple[FrozenSet[str], ...]

    @property
    def mu(self) -> int:
        return len(self.classes)

    def class_of(self, v: str) -> int:
        for i, block in enumerate(self.classes):
            if v in block:
                return i
        raise GraphError(f"顶点不在划分的基础集中: {v}")

    def class_map(self) -> Dict[str, int]:
        return {v: i for i, block in enumerate(self.classes) for v in block}


def induced_subgraph(graph: Graph, subset: Iterable[str]) -> Graph:
    """
    导出子图

    Args:
        graph: 原图
        subset: 顶点子集

    Returns:
        以subset为顶点集、保留两端都在subset内的边的图
    """
    subset = frozenset(subset)
    graph._require(subset)
    return Graph(subset, frozenset(e for e in graph.edges if e[0] in subset and e[1] in subset))


def similarity_partition(graph: Graph, subset: Iterable[str]) -> SimilarityPartition:
    """
    计算U-相似划分

    两个顶点在同一类当且仅当它们在U之外的邻域相同。类按各自最小顶点排序，
    保证结果确定。
    """
    subset = frozenset(subset)
    graph._require(subset)
    groups: Dict[Tuple[str, ...], List[str]] = {}
    for v in sorted(subset):
        fingerprint = tuple(sorted(graph.adjacency[v] - subset))
        groups.setdefault(fingerprint, []).append(v)
    classes = sorted((frozenset(block) for block in groups.values()), key=min)
    return SimilarityPartition(subset, tuple(classes))


def bipartite_complement(graph: Graph, side_a: Iterable[str], side_b: Iterable[str],
                         assert_bipartite: bool = False) -> Graph:
    """
    二部补：翻转side_a与side_b之间每一对顶点的邻接关系

    Args:
        graph: 原图
        side_a: 第一侧顶点
        side_b: 第二侧顶点
        assert_bipartite: 为True时要求两侧各自为独立集

    Returns:
        翻转后的新图
    """
    side_a, side_b = frozenset(side_a), frozenset(side_b)
    graph._require(side_a | side_b)
    overlap = sorted(side_a & side_b)
    if overlap:
        raise GraphError(f"两侧顶点集相交: {', '.join(overlap)}", {'overlap': overlap})
    if assert_bipartite:
        for side in (side_a, side_b):
            inner = [e for e in graph.edges if e[0] in side and e[1] in side]
            if inner:
                raise GraphError(f"一侧不是独立集，存在边: {inner[0]}", {'edge': list(inner[0])})

    edges = set(graph.edges)
    for a in side_a:
        for b in side_b:
            edges ^= {_edge(a, b)}
    return Graph(graph.vertices, frozenset(edges))


def is_induced_cycle(graph: Graph, order: Sequence[str]) -> bool:
    """检查按顺序给出的顶点是否恰好导出一个无弦圈"""
    if len(order) < 3 or len(set(order)) != len(order):
        return False
    if any(v not in graph.vertices for v in order):
        return False
    expected = {_edge(order[i], order[(i + 1) % len(order)]) for i in range(len(order))}
    return set(induced_subgraph(graph, order).edges) == expected


def find_induced_cycle(graph: Graph, length: int, guard: Optional[int] = None,
                       max_nodes: int = 5_000_000) -> Optional[List[str]]:
    """
    深度优先搜索长度为length的导出圈

    圈的起点取圈上编号最小的顶点，第二个顶点小于最后一个顶点，
    每个圈只被枚举一次。

    Args:
        graph: 待搜索的图
        length: 圈长（至少为3）
        guard: 顶点数上限，默认取配置中的 CWLAB_CYCLE_GUARD
        max_nodes: 搜索节点预算

    Returns:
        圈上顶点的有序列表；不存在时返回None

    Raises:
        SearchBudgetExceeded: 预算耗尽仍未得出结论
    """
    if guard is None:
        from .config import CYCLE_GUARD
        guard = CYCLE_GUARD
    if length < 3:
        raise GraphError(f"圈长至少为3: {length}")
    if len(graph) > guard:
        raise GraphError(f"图的顶点数 {len(graph)} 超过搜索上限 {guard}",
                         {'vertices': len(graph), 'guard': guard})
    if length > len(graph):
        return None

    index = graph.index()
    adj = index.adjacency
    size = len(index.order)
    expanded = 0

    for start in range(size):
        above = ~((1 << (start + 1)) - 1)
        path = [start]
        # 每层保存尚未尝试的候选顶点
        stack: List[int] = [adj[start] & above]

        while stack:
            candidates = stack[-1]
            if not candidates:
                stack.pop()
                if len(path) > 1:
                    path.pop()
                continue
            low = candidates & -candidates
            stack[-1] = candidates ^ low
            w = low.bit_length() - 1

            expanded += 1
            if expanded > max_nodes:
                logger.warning(f"导出圈搜索超出预算: length={length}, nodes={max_nodes}")
                raise SearchBudgetExceeded(
                    f"导出圈搜索超出节点预算 {max_nodes}",
                    {'length': length, 'max_nodes': max_nodes},
                )

            path.append(w)
            if len(path) == length:
                found = [index.order[p] for p in path]
                logger.debug(f"找到导出圈: {found}")
                return found

            path_mask = 0
            for p in path:
                path_mask |= 1 << p
            inner_block = 0
            for p in path[:-1]:
                inner_block |= adj[p]

            if len(path) == length - 1:
                # 最后一个顶点须与起点相邻，且大于第二个顶点
                interior = 0
                for p in path[1:-1]:
                    interior |= adj[p]
                second_floor = ~((1 << (path[1] + 1)) - 1)
                nxt = adj[w] & adj[start] & ~interior & ~path_mask & above & second_floor
            else:
                nxt = adj[w] & ~inner_block & ~path_mask & above
            stack.append(nxt)

    return None


def _names(spec: Union[int, Sequence[str]], prefix: str = 'v') -> List[str]:
    if isinstance(spec, int):
        return [f"{prefix}{i}" for i in range(1, spec + 1)]
    return [str(v) for v in spec]


def complete_graph(spec: Union[int, Sequence[str]]) -> Graph:
    names = _names(spec)
    return Graph.from_edges(names, ((a, b) for i, a in enumerate(names) for b in names[i + 1:]))


def path_graph(spec: Union[int, Sequence[str]]) -> Graph:
    names = _names(spec)
    return Graph.from_edges(names, zip(names, names[1:]))


def cycle_graph(spec: Union[int, Sequence[str]]) -> Graph:
    names = _names(spec)
    if len(names) < 3:
        raise GraphError(f"圈至少需要3个顶点: {len(names)}")
    return Graph.from_edges(names, zip(names, names[1:] + names[:1]))


def edgeless_graph(spec: Union[int, Sequence[str]]) -> Graph:
    return Graph.from_edges(_names(spec))


def matching_graph(pairs: int) -> Graph:
    """pairs条互不相交的边（2K2 = matching_graph(2)）"""
    names = [(f"x{i}", f"y{i}") for i in range(1, pairs + 1)]
    return Graph.from_edges([v for pair in names for v in pair], names)
