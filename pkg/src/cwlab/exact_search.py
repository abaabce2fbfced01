#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
精确宽度搜索模块
小规模图的团宽与线性团宽判定，作为其他模块验收的独立预言机

搜索状态采用规范形式：已处理顶点集S上的带标签图恰为G[S]，标签类即S-相似类
（按S之外的邻域合并）。因此状态只由S决定，可用位掩码记忆化。
线性搜索逐个加入顶点；一般搜索在S = S1 ⊔ S2 的划分上做子集动态规划，
并允许两侧的标签类在并运算时共用同一标签。
"""

import logging
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .core_graph import Graph
from .cw_algebra import CwExpr, Create, Eta, Rho, Union, defines, from_program, is_linear, relabel_expr
from .errors import ConfigError, GraphError

logger = logging.getLogger(__name__)

PROVEN = 'proven'
EXHAUSTED = 'exhausted'


@dataclass(frozen=True)
class SearchBudget:
    """搜索预算：标签上限、状态扩展上限、时间上限（秒）"""

    max_k: int = 8
    max_nodes: int = 2_000_000
    time_cap: float = 30.0

    def __post_init__(self):
        if self.max_k < 1 or self.max_nodes < 1 or self.time_cap <= 0:
            raise ConfigError("搜索预算必须全部为正",
                              {'max_k': self.max_k, 'max_nodes': self.max_nodes,
                               'time_cap': self.time_cap})


@dataclass(frozen=True)
class SearchResult:
    """搜索结果；status为exhausted时k与witness为None，lower_bound是已被否定的最大k"""

    status: str
    k: Optional[int]
    witness: Optional[CwExpr]
    lower_bound: int
    nodes: int
    elapsed: float

    @property
    def proven(self) -> bool:
        return self.status == PROVEN

    def to_dict(self) -> Dict:
        return {
            'status': self.status,
            'k': self.k,
            'witness': str(self.witness) if self.witness is not None else None,
            'lower_bound': self.lower_bound,
            'nodes': self.nodes,
            'elapsed': round(self.elapsed, 6),
        }


class _BudgetHit(Exception):
    pass


class _WidthSearch:
    """两种搜索共享的位掩码状态、相似类缓存与预算计数"""

    def __init__(self, graph: Graph, budget: SearchBudget):
        if len(graph) == 0:
            raise GraphError("空图没有宽度可言")
        index = graph.index()
        self.graph = graph
        self.order = index.order
        self.adj = index.adjacency
        self.size = len(self.order)
        self.full = (1 << self.size) - 1
        self.budget = budget
        self.nodes = 0
        self.started = time.monotonic()
        self._classes: Dict[int, Tuple[Tuple[int, int], ...]] = {}

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _BudgetHit()
        if self.nodes & 0x3FF == 0 and time.monotonic() - self.started > self.budget.time_cap:
            raise _BudgetHit()

    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def bits(self, mask: int) -> List[int]:
        result = []
        while mask:
            low = mask & -mask
            result.append(low.bit_length() - 1)
            mask ^= low
        return result

    def classes(self, subset: int) -> Tuple[Tuple[int, int], ...]:
        """S-相似类：(类掩码, S之外的公共邻域) 列表，按类中最小顶点排序"""
        cached = self._classes.get(subset)
        if cached is not None:
            return cached
        groups: Dict[int, int] = {}
        for v in self.bits(subset):
            key = self.adj[v] & ~subset
            groups[key] = groups.get(key, 0) | (1 << v)
        cached = tuple(sorted(((mask, key) for key, mask in groups.items()),
                              key=lambda item: item[0] & -item[0]))
        self._classes[subset] = cached
        return cached

    def mu(self, subset: int) -> int:
        return len(self.classes(subset))

    def complete(self, left: int, right: int) -> bool:
        for v in self.bits(left):
            if self.adj[v] & right != right:
                return False
        return True

    def vertex(self, v: int) -> str:
        return self.order[v]


# ---------------------------------------------------------------------------
# 线性团宽

class _LinearSearch(_WidthSearch):

    def step_cost(self, subset: int, v: int) -> Tuple[int, Optional[int]]:
        """把v加入S时同时存活的标签数，以及v可直接并入的S-类（无则为None）"""
        classes = self.classes(subset)
        bit = 1 << v
        outside = self.adj[v] & ~subset & ~bit
        neighbour_classes = [mask for mask, _ in classes if mask & self.adj[v]]
        for mask, key in classes:
            if mask & self.adj[v]:
                continue
            if key & ~bit != outside:
                continue
            if all(self.complete(mask, other) for other in neighbour_classes):
                return len(classes), mask
        return len(classes) + 1, None

    def solve(self, k: int) -> Optional[List[int]]:
        dead: set = set()
        path: List[int] = []

        def extend(subset: int) -> bool:
            if subset == self.full:
                return True
            if subset in dead:
                return False
            self.tick()
            for v in self.bits(self.full & ~subset):
                cost, _ = self.step_cost(subset, v)
                if cost > k:
                    continue
                path.append(v)
                if extend(subset | (1 << v)):
                    return True
                path.pop()
            dead.add(subset)
            return False

        return list(path) if extend(0) else None

    def witness(self, path: List[int]) -> CwExpr:
        program: List[tuple] = []
        subset = 0
        labels: Dict[int, int] = {}  # 类掩码 -> 标签
        for v in path:
            _, joined = self.step_cost(subset, v)
            bit = 1 << v
            if joined is not None:
                own = labels[joined]
            else:
                own = min(set(range(1, self.size + 2)) - set(labels.values()))
            program.append(('create', own, self.vertex(v)))
            for mask, _ in self.classes(subset):
                if mask & self.adj[v]:
                    program.append(('eta', own, labels[mask]))

            parts = dict(labels)
            if joined is not None:
                parts[joined | bit] = parts.pop(joined)
            else:
                parts[bit] = own
            subset |= bit
            labels = _merge_into_classes(self.classes(subset), parts, program)
        return from_program(program)


def _merge_into_classes(classes, parts: Dict[int, int], program: List[tuple]) -> Dict[int, int]:
    """把旧标签块合并为新的相似类：每类取最小标签，其余标签重命名到它"""
    merged: Dict[int, int] = {}
    for mask, _ in classes:
        inside = sorted(label for part, label in parts.items() if part & mask)
        target = inside[0]
        for label in inside[1:]:
            program.append(('rho', label, target))
        merged[mask] = target
    return merged


# ---------------------------------------------------------------------------
# 团宽

class _CliqueSearch(_WidthSearch):

    def union_matching(self, left: int, right: int, k: int) -> Optional[List[Tuple[int, int]]]:
        """
        并运算时两侧标签类的共用方案，使并后标签数不超过k

        可共用的类对之间没有边、在S1∪S2之外邻域相同；
        并后任意两个需要跨侧连边的标签类之间必须完全相连。
        """
        subset = left | right
        left_classes = [mask for mask, _ in self.classes(left)]
        right_classes = [mask for mask, _ in self.classes(right)]
        need = len(left_classes) + len(right_classes) - k
        if need <= 0:
            return []
        if need > min(len(left_classes), len(right_classes)):
            return None

        outside_left = {mask: self.adj[self.bits(mask)[0]] & ~subset for mask in left_classes}
        outside_right = {mask: self.adj[self.bits(mask)[0]] & ~subset for mask in right_classes}
        options = {
            a: [b for b in right_classes
                if outside_left[a] == outside_right[b] and not self._touches(a, b)]
            for a in left_classes
        }

        chosen: List[Tuple[int, int]] = []
        used: set = set()

        def search(position: int) -> bool:
            self.tick()
            if len(chosen) + (len(left_classes) - position) < need:
                return False
            if position == len(left_classes):
                return self._joins_consistent(left, right, chosen)
            a = left_classes[position]
            for b in options[a]:
                if b in used:
                    continue
                chosen.append((a, b))
                used.add(b)
                if search(position + 1):
                    return True
                chosen.pop()
                used.discard(b)
            return search(position + 1)

        return list(chosen) if search(0) else None

    def _touches(self, a: int, b: int) -> bool:
        return any(self.adj[v] & b for v in self.bits(a))

    def _joins_consistent(self, left: int, right: int, pairs: List[Tuple[int, int]]) -> bool:
        paired_right = {b for _, b in pairs}
        blocks = [a | b for a, b in pairs]
        blocks += [a for a, _ in self.classes(left) if a not in {p for p, _ in pairs}]
        blocks += [b for b, _ in self.classes(right) if b not in paired_right]
        for i, x in enumerate(blocks):
            for y in blocks[i + 1:]:
                crossing = any(self.adj[v] & y & right for v in self.bits(x & left)) or \
                    any(self.adj[v] & y & left for v in self.bits(x & right))
                if crossing and not self.complete(x, y):
                    return False
        return True

    def solve(self, k: int) -> Optional[Dict[int, Tuple[int, int, List[Tuple[int, int]]]]]:
        plan: Dict[int, Tuple[int, int, List[Tuple[int, int]]]] = {}
        dead: set = set()

        def feasible(subset: int) -> bool:
            if subset & (subset - 1) == 0:
                return True
            if subset in plan:
                return True
            if subset in dead or self.mu(subset) > k:
                return False
            self.tick()
            low = subset & -subset
            rest = subset ^ low
            tail = rest
            while True:
                tail = (tail - 1) & rest
                first = low | tail
                second = subset ^ first
                if self.mu(first) <= k and self.mu(second) <= k \
                        and feasible(first) and feasible(second):
                    pairs = self.union_matching(first, second, k)
                    if pairs is not None:
                        plan[subset] = (first, second, pairs)
                        return True
                if tail == 0:
                    break
            dead.add(subset)
            return False

        return plan if feasible(self.full) else None

    def witness(self, plan, k: int) -> CwExpr:
        expr, _ = self._build(self.full, plan, k)
        return expr

    def _build(self, subset: int, plan, k: int) -> Tuple[CwExpr, Dict[int, int]]:
        if subset & (subset - 1) == 0:
            v = subset.bit_length() - 1
            return Create(1, self.vertex(v)), {subset: 1}

        first, second, pairs = plan[subset]
        left_expr, left_labels = self._build(first, plan, k)
        right_expr, right_labels = self._build(second, plan, k)

        # 右侧标签按1..k上的置换重命名：共用类取左侧伙伴的标签，其余取空闲标签
        partner = {b: a for a, b in pairs}
        taken = set(left_labels.values())
        free = iter(sorted(set(range(1, k + 1)) - taken))
        target: Dict[int, int] = {}
        for mask, label in sorted(right_labels.items(), key=lambda item: item[1]):
            target[label] = left_labels[partner[mask]] if mask in partner else next(free)
        spare = iter(sorted(set(range(1, k + 1)) - set(target.values())))
        permutation = {label: target.get(label) or next(spare) for label in range(1, k + 1)}
        right_expr = relabel_expr(right_expr, permutation)

        parts: Dict[int, int] = {}
        for mask, label in left_labels.items():
            parts[mask] = label
        for mask, label in right_labels.items():
            if mask in partner:
                a = partner[mask]
                parts[a | mask] = parts.pop(a)
            else:
                parts[mask] = permutation[label]

        expr: CwExpr = Union(left_expr, right_expr)
        blocks = sorted(parts.items(), key=lambda item: item[1])
        for i, (x, lx) in enumerate(blocks):
            for y, ly in blocks[i + 1:]:
                crossing = any(self.adj[v] & y & second for v in self.bits(x & first)) or \
                    any(self.adj[v] & y & first for v in self.bits(x & second))
                if crossing:
                    expr = Eta(lx, ly, expr)

        for mask, _ in self.classes(subset):
            inside = sorted(label for part, label in parts.items() if part & mask)
            for label in inside[1:]:
                expr = Rho(label, inside[0], expr)
        labels = {}
        for mask, _ in self.classes(subset):
            labels[mask] = min(label for part, label in parts.items() if part & mask)
        return expr, labels


# ---------------------------------------------------------------------------
# 对外接口

def _deepen(search: _WidthSearch, kind: str, budget: SearchBudget) -> SearchResult:
    refuted = 0
    try:
        for k in range(1, budget.max_k + 1):
            logger.debug(f"{kind}: 尝试 k={k}")
            if isinstance(search, _LinearSearch):
                path = search.solve(k)
                found = search.witness(path) if path is not None else None
            else:
                plan = search.solve(k)
                found = search.witness(plan, k) if plan is not None else None
            if found is None:
                refuted = k
                continue
            if not defines(found, search.graph):
                raise GraphError(f"{kind} 构造的见证表达式与原图不一致")
            result = SearchResult(PROVEN, k, found, refuted, search.nodes, search.elapsed())
            logger.info(f"{kind} = {k} (节点数 {search.nodes}, 用时 {result.elapsed:.3f}s)")
            return result
    except _BudgetHit:
        pass
    logger.warning(f"{kind} 搜索预算耗尽: 已否定 k≤{refuted}, 节点数 {search.nodes}")
    return SearchResult(EXHAUSTED, None, None, refuted, search.nodes, search.elapsed())


def exact_lcwd(graph: Graph, budget: Optional[SearchBudget] = None) -> SearchResult:
    """
    精确线性团宽

    Args:
        graph: 待求图（建议不超过12个顶点）
        budget: 搜索预算，默认取配置

    Returns:
        SearchResult；proven时witness为线性k-表达式
    """
    if budget is None:
        from .config import default_budget
        budget = default_budget()
    result = _deepen(_LinearSearch(graph, budget), 'lcwd', budget)
    if result.proven and not is_linear(result.witness):
        raise GraphError("线性搜索的见证表达式不是线性的")
    return result


def exact_cwd(graph: Graph, budget: Optional[SearchBudget] = None) -> SearchResult:
    """
    精确团宽

    Args:
        graph: 待求图（建议不超过10个顶点）
        budget: 搜索预算，默认取配置

    Returns:
        SearchResult；proven时witness为k-表达式
    """
    if budget is None:
        from .config import default_budget
        budget = default_budget()
    return _deepen(_CliqueSearch(graph, budget), 'cwd', budget)
