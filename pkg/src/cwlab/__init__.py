"""团宽实验工具

由无限单词决定的网格图族：窗口构造、线性团宽编译、顶点子式约化与团宽下界证书。
"""

__version__ = "1.0.0"

from .config import Config
from .core_graph import Graph, induced_subgraph, similarity_partition, bipartite_complement, find_induced_cycle
from .word_model import WordSpec, GridGraph, build_window, build_F, build_X, build_H, embed_check
from .cw_algebra import CwExpr, Create, Union, Eta, Rho, eval_expr, parse_expr, format_expr
from .exact_search import SearchBudget, SearchResult, exact_cwd, exact_lcwd
from .lb_certificate import certify
from .vertex_minor import local_complement, pivot, cut_rank, reduce_to_target
from .lcw_compiler import compose_linear, compile_window, compile_subclass_graph
from .batch_processor import BatchProcessor
from .main import main

__all__ = [
    "Config",
    "Graph", "induced_subgraph", "similarity_partition", "bipartite_complement",
    "find_induced_cycle",
    "WordSpec", "GridGraph", "build_window", "build_F", "build_X", "build_H", "embed_check",
    "CwExpr", "Create", "Union", "Eta", "Rho", "eval_expr", "parse_expr", "format_expr",
    "SearchBudget", "SearchResult", "exact_cwd", "exact_lcwd",
    "certify",
    "local_complement", "pivot", "cut_rank", "reduce_to_target",
    "compose_linear", "compile_window", "compile_subclass_graph",
    "BatchProcessor",
    "main",
]
