#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
团宽表达式代数模块
四种运算（创建、并、连边、重命名）的表达式树：构造、求值、标签统计、线性判定与文本读写
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union as TypingUnion

from funcparserlib.lexer import LexerError, make_tokenizer

from .core_graph import Graph
from .errors import ExpressionError, ExpressionParseError

logger = logging.getLogger(__name__)


class CwExpr:
    """表达式节点基类；相等、哈希与打印都按文本形式迭代计算，深层表达式不会递归溢出"""

    def children(self) -> Tuple['CwExpr', ...]:
        return ()

    def _text(self) -> str:
        cached = self.__dict__.get('_cached_text')
        if cached is None:
            cached = format_expr(self)
            object.__setattr__(self, '_cached_text', cached)
        return cached

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, CwExpr):
            return NotImplemented
        return self._text() == other._text()

    def __hash__(self) -> int:
        return hash(self._text())

    def __repr__(self) -> str:
        return self._text()

    def __str__(self) -> str:
        return self._text()


def _check_label(label: int) -> None:
    if not isinstance(label, int) or isinstance(label, bool) or label < 1:
        raise ExpressionError(f"标签必须为正整数: {label!r}")


@dataclass(frozen=True, eq=False, repr=False)
class Create(CwExpr):
    label: int
    vertex: str

    def __post_init__(self):
        _check_label(self.label)
        if not str(self.vertex).isalnum():
            raise ExpressionError(f"顶点编号必须由字母数字组成: {self.vertex!r}")


@dataclass(frozen=True, eq=False, repr=False)
class Union(CwExpr):
    left: CwExpr
    right: CwExpr

    def children(self) -> Tuple[CwExpr, ...]:
        return (self.left, self.right)


@dataclass(frozen=True, eq=False, repr=False)
class Eta(CwExpr):
    i: int
    j: int
    child: CwExpr

    def __post_init__(self):
        _check_label(self.i)
        _check_label(self.j)
        if self.i == self.j:
            raise ExpressionError(f"连边运算的两个标签必须不同: η({self.i},{self.j})")

    def children(self) -> Tuple[CwExpr, ...]:
        return (self.child,)


@dataclass(frozen=True, eq=False, repr=False)
class Rho(CwExpr):
    i: int
    j: int
    child: CwExpr

    def __post_init__(self):
        _check_label(self.i)
        _check_label(self.j)

    def children(self) -> Tuple[CwExpr, ...]:
        return (self.child,)


@dataclass(frozen=True)
class LabeledGraph:
    """带标签的图：每个顶点恰有一个标签"""

    graph: Graph
    labels: Dict[str, int]

    def label_classes(self) -> Dict[int, Set[str]]:
        classes: Dict[int, Set[str]] = {}
        for v, label in self.labels.items():
            classes.setdefault(label, set()).add(v)
        return classes


# ---------------------------------------------------------------------------
# 遍历

def preorder(expr: CwExpr) -> List[CwExpr]:
    """先序节点列表；节点句柄即为其在此列表中的下标（左子树先于右子树）"""
    order = []
    stack = [expr]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(reversed(node.children()))
    return order


def node_at(expr: CwExpr, handle: int) -> CwExpr:
    nodes = preorder(expr)
    if not isinstance(handle, int) or handle < 0 or handle >= len(nodes):
        raise ExpressionError(f"无效的节点句柄: {handle}", {'handle': handle, 'size': len(nodes)})
    return nodes[handle]


def _postorder(expr: CwExpr) -> Iterator[CwExpr]:
    stack: List[Tuple[CwExpr, bool]] = [(expr, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for child in reversed(node.children()):
            stack.append((child, False))


# ---------------------------------------------------------------------------
# 求值

class _State:
    """求值中间结果：标签到顶点集合的映射与边集"""

    __slots__ = ('classes', 'edges')

    def __init__(self):
        self.classes: Dict[int, Set[str]] = {}
        self.edges: Set[Tuple[str, str]] = set()

    def size(self) -> int:
        return sum(len(block) for block in self.classes.values())

    def labels(self) -> Dict[str, int]:
        return {v: label for label, block in self.classes.items() for v in block}

    def vertices(self) -> Set[str]:
        return {v for block in self.classes.values() for v in block}


def _apply(node: CwExpr, inputs: Sequence[_State]) -> _State:
    if isinstance(node, Create):
        state = _State()
        state.classes[node.label] = {node.vertex}
        return state

    if isinstance(node, Union):
        left, right = inputs
        if left.size() < right.size():
            left, right = right, left
        clash = left.vertices() & right.vertices()
        if clash:
            raise ExpressionError(f"并运算两侧存在重复顶点: {', '.join(sorted(clash))}",
                                  {'duplicates': sorted(clash)})
        for label, block in right.classes.items():
            left.classes.setdefault(label, set()).update(block)
        left.edges |= right.edges
        return left

    (state,) = inputs
    if isinstance(node, Eta):
        for a in state.classes.get(node.i, ()):
            for b in state.classes.get(node.j, ()):
                state.edges.add((a, b) if a < b else (b, a))
    elif isinstance(node, Rho):
        moved = state.classes.pop(node.i, None)
        if moved:
            state.classes.setdefault(node.j, set()).update(moved)
    return state


def _run(expr: CwExpr, observe=None) -> _State:
    results: List[_State] = []
    for node in _postorder(expr):
        arity = len(node.children())
        inputs = results[len(results) - arity:]
        del results[len(results) - arity:]
        state = _apply(node, inputs)
        if observe is not None:
            observe(node, state)
        results.append(state)
    return results.pop()


def _as_labeled(state: _State) -> LabeledGraph:
    labels = state.labels()
    return LabeledGraph(Graph.from_edges(labels.keys(), state.edges), labels)


def eval_expr(expr: CwExpr) -> LabeledGraph:
    """
    自底向上求值

    Raises:
        ExpressionError: 并运算两侧出现相同顶点
    """
    return _as_labeled(_run(expr))


def _node_labels(node: CwExpr) -> Tuple[int, ...]:
    if isinstance(node, Create):
        return (node.label,)
    if isinstance(node, (Eta, Rho)):
        return (node.i, node.j)
    return ()


def labels_used(expr: CwExpr) -> int:
    """表达式中出现的不同标签个数（创建标签与连边、重命名的操作数）"""
    return len({label for node in preorder(expr) for label in _node_labels(node)})


def max_live_labels(expr: CwExpr) -> int:
    """任一节点处带标签图上同时出现的不同标签数的最大值"""
    peak = 0

    def observe(_node, state: _State) -> None:
        nonlocal peak
        peak = max(peak, sum(1 for block in state.classes.values() if block))

    _run(expr, observe)
    return peak


def _subtree_counts(expr: CwExpr) -> Dict[int, Tuple[int, int]]:
    counts: Dict[int, Tuple[int, int]] = {}
    for node in _postorder(expr):
        unions = 1 if isinstance(node, Union) else 0
        creates = 1 if isinstance(node, Create) else 0
        for child in node.children():
            u, c = counts[id(child)]
            unions += u
            creates += c
        counts[id(node)] = (unions, creates)
    return counts


def _is_leaf_chain(counts: Dict[int, Tuple[int, int]], node: CwExpr) -> bool:
    return counts[id(node)] == (0, 1)


def is_linear(expr: CwExpr) -> bool:
    """每个并节点都至少有一个子树不含并节点且恰含一个创建节点"""
    counts = _subtree_counts(expr)
    for node in preorder(expr):
        if isinstance(node, Union):
            if not (_is_leaf_chain(counts, node.left) or _is_leaf_chain(counts, node.right)):
                return False
    return True


def defines(expr: CwExpr, graph: Graph) -> bool:
    return eval_expr(expr).graph == graph


def vertex_set_at(expr: CwExpr, handle: int) -> Set[str]:
    """F(x)：句柄x所指子树中创建的全部顶点"""
    node = node_at(expr, handle)
    return {n.vertex for n in preorder(node) if isinstance(n, Create)}


def labels_at_node(expr: CwExpr, handle: int) -> Dict[str, int]:
    """
    句柄x处运算执行之前各顶点的标签

    Args:
        expr: 表达式
        handle: 先序句柄

    Returns:
        F(x) 中每个顶点在x的运算执行前的标签
    """
    node = node_at(expr, handle)
    if isinstance(node, Create):
        return {node.vertex: node.label}
    labels: Dict[str, int] = {}
    for child in node.children():
        labels.update(_run(child).labels())
    return labels


def relabel_expr(expr: CwExpr, mapping: Mapping[int, int]) -> CwExpr:
    """对整个表达式做单射的标签重命名（未列出的标签不变）"""
    present = {label for node in preorder(expr) for label in _node_labels(node)}
    if len({mapping.get(label, label) for label in present}) != len(present):
        raise ExpressionError("标签重命名映射不是单射", {'mapping': dict(mapping)})

    def rename(label: int) -> int:
        return mapping.get(label, label)

    built: List[CwExpr] = []
    for node in _postorder(expr):
        if isinstance(node, Create):
            result: CwExpr = Create(rename(node.label), node.vertex)
        elif isinstance(node, Union):
            right = built.pop()
            result = Union(built.pop(), right)
        elif isinstance(node, Eta):
            result = Eta(rename(node.i), rename(node.j), built.pop())
        else:
            result = Rho(rename(node.i), rename(node.j), built.pop())
        built.append(result)
    return built.pop()


# ---------------------------------------------------------------------------
# 线性表达式与指令序列

Instruction = Tuple  # ('create', label, vertex) | ('eta', i, j) | ('rho', i, j)


def _fold_leaf_chain(node: CwExpr) -> Tuple[int, str]:
    """单顶点链上的重命名折叠进创建标签；单顶点上的连边是空操作"""
    chain = []
    while not isinstance(node, Create):
        chain.append(node)
        (node,) = node.children()
    label = node.label
    for op in reversed(chain):
        if isinstance(op, Rho) and op.i == label:
            label = op.j
    return label, node.vertex


def linear_program(expr: CwExpr) -> List[Instruction]:
    """
    把线性表达式展开为沿主干的指令序列

    Raises:
        ExpressionError: 表达式不是线性的
    """
    counts = _subtree_counts(expr)
    if not is_linear(expr):
        raise ExpressionError("表达式不是线性的，无法展开为指令序列")

    reversed_ops: List[Instruction] = []
    node = expr
    while True:
        if counts[id(node)][0] == 0:
            label, vertex = _fold_leaf_chain(node)
            reversed_ops.append(('create', label, vertex))
            break
        if isinstance(node, Union):
            if _is_leaf_chain(counts, node.right):
                fresh, spine = node.right, node.left
            else:
                fresh, spine = node.left, node.right
            label, vertex = _fold_leaf_chain(fresh)
            reversed_ops.append(('create', label, vertex))
            node = spine
        elif isinstance(node, Eta):
            reversed_ops.append(('eta', node.i, node.j))
            node = node.child
        else:
            reversed_ops.append(('rho', node.i, node.j))
            node = node.child
    reversed_ops.reverse()
    return reversed_ops


def from_program(program: Sequence[Instruction]) -> CwExpr:
    """由指令序列重建线性表达式"""
    expr: Optional[CwExpr] = None
    for op in program:
        kind = op[0]
        if kind == 'create':
            leaf = Create(int(op[1]), str(op[2]))
            expr = leaf if expr is None else Union(expr, leaf)
        elif expr is None:
            raise ExpressionError(f"指令序列必须以创建开始: {op}")
        elif kind == 'eta':
            expr = Eta(int(op[1]), int(op[2]), expr)
        elif kind == 'rho':
            expr = Rho(int(op[1]), int(op[2]), expr)
        else:
            raise ExpressionError(f"未知指令: {kind}")
    if expr is None:
        raise ExpressionError("指令序列为空")
    return expr


# ---------------------------------------------------------------------------
# 文本语法

_tokenize = make_tokenizer([
    ('Space', (r'\s+',)),
    ('Op', (r'->|[(),]',)),
    ('Name', (r'[A-Za-z0-9]+',)),
])

_KEYWORDS = ('c', 'u', 'n', 'r')


def format_expr(expr: CwExpr) -> str:
    """按文本语法输出表达式（无空白）"""
    pieces: List[str] = []
    stack: List[TypingUnion[CwExpr, str]] = [expr]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            pieces.append(item)
        elif isinstance(item, Create):
            pieces.append(f"c({item.label},{item.vertex})")
        elif isinstance(item, Union):
            stack.extend([')', item.right, ',', item.left])
            pieces.append('u(')
        elif isinstance(item, Eta):
            stack.extend([')', item.child])
            pieces.append(f"n({item.i},{item.j},")
        else:
            stack.extend([')', item.child])
            pieces.append(f"r({item.i}->{item.j},")
    return ''.join(pieces)


def _offset(text: str, place) -> int:
    line, col = place
    lines = text.split('\n')
    return sum(len(chunk) + 1 for chunk in lines[:line - 1]) + col - 1


def parse_expr(text: str) -> CwExpr:
    """
    解析文本语法：c(<label>,<id>) | u(<e>,<e>) | n(<i>,<j>,<e>) | r(<i>-><j>,<e>)

    funcparserlib 只用于分词；组合子解析是递归下降，嵌套数百层会超过递归上限，
    因此语法结构用显式栈处理，深层嵌套不受递归深度限制。

    Raises:
        ExpressionParseError: 语法错误，携带字符位置
    """
    try:
        tokens = [t for t in _tokenize(text) if t.type != 'Space']
    except LexerError as e:
        where = _offset(text, e.place)
        raise ExpressionParseError(f"无法识别的字符 '{text[where:where + 1]}'", position=where)

    pos = 0

    def here() -> int:
        if pos < len(tokens):
            return _offset(text, tokens[pos].start)
        return len(text)

    def take(kind: str, value: Optional[str] = None) -> str:
        nonlocal pos
        if pos >= len(tokens):
            raise ExpressionParseError(f"表达式意外结束，期望 {value or kind}", position=len(text))
        token = tokens[pos]
        if token.type != kind or (value is not None and token.value != value):
            raise ExpressionParseError(f"期望 {value or kind}，实际为 '{token.value}'",
                                       position=here())
        pos += 1
        return token.value

    def label() -> int:
        where = here()
        value = take('Name')
        if not value.isdigit() or int(value) < 1:
            raise ExpressionParseError(f"标签必须为正整数: '{value}'", position=where)
        return int(value)

    # 栈帧: [运算, 标签参数, 已解析的子表达式]
    frames: List[list] = []
    result: Optional[CwExpr] = None
    while result is None:
        where = here()
        keyword = take('Name')
        if keyword not in _KEYWORDS:
            raise ExpressionParseError(f"未知运算 '{keyword}'", position=where)
        take('Op', '(')
        if keyword == 'c':
            lab = label()
            take('Op', ',')
            vertex = take('Name')
            take('Op', ')')
            node: CwExpr = Create(lab, vertex)
        else:
            if keyword == 'u':
                frames.append(['u', (), []])
            else:
                i = label()
                take('Op', '->' if keyword == 'r' else ',')
                j = label()
                take('Op', ',')
                if keyword == 'n' and i == j:
                    raise ExpressionParseError(f"连边运算的两个标签必须不同: n({i},{j})",
                                               position=where)
                frames.append([keyword, (i, j), []])
            continue

        while True:
            if not frames:
                result = node
                break
            frame = frames[-1]
            frame[2].append(node)
            if frame[0] == 'u' and len(frame[2]) == 1:
                take('Op', ',')
                break
            take('Op', ')')
            frames.pop()
            kind, args, kids = frame
            if kind == 'u':
                node = Union(kids[0], kids[1])
            elif kind == 'n':
                node = Eta(args[0], args[1], kids[0])
            else:
                node = Rho(args[0], args[1], kids[0])

    if pos != len(tokens):
        raise ExpressionParseError(f"表达式之后存在多余内容 '{tokens[pos].value}'", position=here())
    return result
