#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
批量实验报告模块
逐行运行实验表（精确宽度、窗口编译、子类编译、约化账本、导出圈），
导出CSV/Markdown表格与JSON运行摘要
"""

import logging
import os
import time
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from . import config as config_module
from .core_graph import find_induced_cycle, is_induced_cycle
from .errors import CwLabError, SearchBudgetExceeded
from .exact_search import SearchBudget, exact_cwd, exact_lcwd
from .lcw_compiler import compile_subclass_with_report, compile_window
from .serialization import write_json
from .vertex_minor import reduce_to_target
from .word_model import WordSpec, build_F, build_H, build_window, build_X, sample_subclass_layout

EXHAUSTED_CELL = 'exhausted'

TABLE_COLUMNS: Dict[str, List[str]] = {
    'widths': ['graph', 'n', 'cwd', 'lcwd', 'lower_bound', 'compiler_labels', 'bound_4t'],
    'windows': ['word', 'k', 't', 'labels', 'max_live', 'bound', 'defines', 'linear'],
    'subclass': ['sample', 'seed', 'k', 'vertices', 'labels', 'max_live', 'bound', 'defines',
                 'prefix_mu_max', 'within_3k_minus_1'],
    'reductions': ['word', 'target', 'n', 'rows', 'steps', 'ledger', 'final_rows', 'matches'],
    'cycles': ['word', 'rows', 'cols', 'length', 'found', 'witness'],
}

DEFAULT_WORDS = ('|0', '|1', '|01', '|2', '|012')
DEFAULT_PIPELINES = (('|01', 'F', 4, None), ('|02', 'X', 3, 12), ('|212', 'X', 2, None))
DEFAULT_CYCLES = (('|01', 6, 8, 6), ('|001', 6, 12, 6), ('|001', 3, 12, 8))


def setup_logging() -> None:
    """设置日志配置"""
    # 创建logs目录
    log_dir = os.path.dirname(config_module.LOG_FILE)
    if log_dir and not os.path.exists(log_dir):
        os.makedirs(log_dir)

    logging.basicConfig(
        level=getattr(logging, config_module.LOG_LEVEL.upper(), logging.INFO),
        format=config_module.LOG_FORMAT,
        handlers=[
            logging.FileHandler(config_module.LOG_FILE, encoding='utf-8'),
            logging.StreamHandler()
        ]
    )


class BatchProcessor:
    """实验表批处理器"""

    def __init__(self, budget: Optional[SearchBudget] = None, seed: Optional[int] = None,
                 show_progress: bool = True):
        """
        初始化批处理器

        Args:
            budget: 精确搜索预算，默认取配置
            seed: 随机采样种子，默认取 CWLAB_SEED
            show_progress: 是否显示进度条
        """
        self.budget = budget or config_module.default_budget()
        self.seed = config_module.DEFAULT_SEED if seed is None else seed
        self.show_progress = show_progress
        self.logger = logging.getLogger(__name__)
        self.exhausted_cells = 0

    # ------------------------------------------------------------------
    # 行生成

    def _width_cell(self, runner: Callable, graph) -> Any:
        result = runner(graph, self.budget)
        if not result.proven:
            self.exhausted_cells += 1
            return EXHAUSTED_CELL
        return result.k

    def widths_rows(self, sizes: Iterable[int] = (2, 3)) -> List[Dict[str, Any]]:
        """F_{n,n} 与 X_{n,n} 的精确宽度、理论下界与编译器标签数"""
        rows = []
        for n in sizes:
            for name, builder, lower in (('F', build_F, n // 2), ('X', build_X, -(-n // 6))):
                window = builder(n)
                _, report = compile_window(window)
                rows.append({
                    'graph': f"{name}_{n},{n}",
                    'n': n,
                    'cwd': self._width_cell(exact_cwd, window.graph),
                    'lcwd': self._width_cell(exact_lcwd, window.graph),
                    'lower_bound': lower,
                    'compiler_labels': report.labels,
                    'bound_4t': 4 * n,
                })
        return rows

    def window_rows(self, words: Sequence[str] = DEFAULT_WORDS,
                    sizes: Iterable[int] = range(2, 6)) -> List[Dict[str, Any]]:
        """H_{k,t} 逐行编译的标签预算"""
        rows = []
        sizes = list(sizes)
        for text in words:
            spec = WordSpec.parse(text)
            for k in sizes:
                for t in sizes:
                    _, report = compile_window(build_H(spec, k, t))
                    rows.append({
                        'word': text, 'k': k, 't': t,
                        'labels': report.labels, 'max_live': report.max_live,
                        'bound': report.bound, 'defines': report.defines,
                        'linear': report.linear,
                    })
        return rows

    def subclass_rows(self, word: str = '|01', k: int = 2, samples: int = 20, n: int = 6,
                      max_vertices: int = 12) -> List[Dict[str, Any]]:
        """黑白子类的随机样本编译"""
        spec = WordSpec.parse(word)
        rows = []
        for index in range(samples):
            seed = self.seed + index
            layout = sample_subclass_layout(spec, n, k, max_vertices, seed)
            if not layout.black:
                continue
            _, report = compile_subclass_with_report(layout, k)
            rows.append({
                'sample': index, 'seed': seed, 'k': k, 'vertices': len(layout.black),
                'labels': report.labels, 'max_live': report.max_live, 'bound': report.bound,
                'defines': report.defines, 'prefix_mu_max': report.prefix_mu_max,
                'within_3k_minus_1': report.within_3k_minus_1,
            })
        return rows

    def reduction_rows(self, pipelines: Sequence[Tuple[str, str, int, Optional[int]]] = DEFAULT_PIPELINES
                       ) -> List[Dict[str, Any]]:
        """约化流水线的行数账本"""
        rows = []
        for text, target, n, row_count in pipelines:
            trace = reduce_to_target(WordSpec.parse(text), target, n, rows=row_count)
            ledger = trace.ledger()
            rows.append({
                'word': text, 'target': target, 'n': n, 'rows': ledger[0],
                'steps': len(trace.steps), 'ledger': ' '.join(str(x) for x in ledger),
                'final_rows': ledger[-1], 'matches': trace.extract_target().matches,
            })
        return rows

    def cycle_rows(self, cases: Sequence[Tuple[str, int, int, int]] = DEFAULT_CYCLES
                   ) -> List[Dict[str, Any]]:
        """窗口内的导出圈搜索"""
        rows = []
        for text, row_count, col_count, length in cases:
            window = build_window(WordSpec.parse(text), row_count, (1, col_count))
            try:
                found = find_induced_cycle(window.graph, length, guard=len(window.graph))
            except SearchBudgetExceeded:
                self.exhausted_cells += 1
                rows.append({'word': text, 'rows': row_count, 'cols': col_count,
                             'length': length, 'found': EXHAUSTED_CELL, 'witness': ''})
                continue
            if found is not None and not is_induced_cycle(window.graph, found):
                raise CwLabError(f"导出圈见证校验失败: {found}")
            rows.append({
                'word': text, 'rows': row_count, 'cols': col_count, 'length': length,
                'found': found is not None, 'witness': ' '.join(found) if found else '',
            })
        return rows

    # ------------------------------------------------------------------
    # 表格

    def build_table(self, name: str, **params: Any) -> pd.DataFrame:
        """生成单张实验表"""
        builders = {
            'widths': self.widths_rows,
            'windows': self.window_rows,
            'subclass': self.subclass_rows,
            'reductions': self.reduction_rows,
            'cycles': self.cycle_rows,
        }
        if name not in builders:
            raise CwLabError(f"未知的实验表: {name}", {'known': sorted(builders)})
        rows = builders[name](**params)
        return pd.DataFrame(rows, columns=TABLE_COLUMNS[name])

    def run_report(self, tables: Sequence[str], output_file: Optional[str] = None,
                   fmt: str = 'csv', params: Optional[Dict[str, Dict[str, Any]]] = None
                   ) -> Dict[str, Any]:
        """
        运行所选实验表并导出

        Args:
            tables: 表名列表；为空时输出只有表头的表
            output_file: 输出文件路径；为None时不写文件
            fmt: csv 或 md
            params: 每张表的参数覆盖

        Returns:
            运行统计
        """
        params = params or {}
        started = time.monotonic()
        self.exhausted_cells = 0
        frames: Dict[str, pd.DataFrame] = {}
        row_counts: Dict[str, int] = {}

        with tqdm(total=len(tables), desc="实验表", disable=not self.show_progress) as pbar:
            for name in tables:
                self.logger.info(f"开始生成实验表: {name}")
                frame = self.build_table(name, **params.get(name, {}))
                frames[name] = frame
                row_counts[name] = len(frame)
                pbar.update(1)

        text = self.render(frames, fmt)
        if output_file:
            output_dir = os.path.dirname(output_file)
            if output_dir and not os.path.exists(output_dir):
                os.makedirs(output_dir)
            with open(output_file, 'w', encoding='utf-8') as f:
                f.write(text)
            self.logger.info(f"实验表已保存到: {output_file}")

        return {
            'tables': list(tables),
            'row_counts': row_counts,
            'exhausted_cells': self.exhausted_cells,
            'elapsed_seconds': round(time.monotonic() - started, 3),
            'output_file': output_file,
            'format': fmt,
            'text': text,
        }

    @staticmethod
    def render(frames: Dict[str, pd.DataFrame], fmt: str = 'csv') -> str:
        """渲染表格；没有任何表时输出只有表头的表"""
        if fmt not in ('csv', 'md'):
            raise CwLabError(f"不支持的表格格式: {fmt}")
        if not frames:
            frames = {'': pd.DataFrame(columns=['table', 'rows'])}
        chunks = []
        for name, frame in frames.items():
            if fmt == 'csv':
                body = frame.to_csv(index=False, lineterminator='\n')
            else:
                body = frame.to_markdown(index=False) + '\n'
            chunks.append(f"# {name}\n{body}" if name and len(frames) > 1 else body)
        return '\n'.join(chunks)

    def save_processing_report(self, stats: Dict[str, Any], report_file: str):
        """保存处理报告"""
        try:
            summary = {key: value for key, value in stats.items() if key != 'text'}
            write_json(summary, report_file)
            self.logger.info(f"处理报告已保存到: {report_file}")
        except Exception as e:
            self.logger.error(f"保存处理报告失败: {str(e)}")
