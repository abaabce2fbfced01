#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行入口文件
构造窗口、求值与检查表达式、精确宽度搜索、编译、约化、证书与实验报告
"""

import os
import sys
from typing import Any, Dict, Optional

import click

from . import config as config_module
from .batch_processor import BatchProcessor, TABLE_COLUMNS, setup_logging
from .core_graph import Graph, find_induced_cycle, is_induced_cycle
from .cw_algebra import defines, eval_expr, format_expr, is_linear, labels_used, max_live_labels, parse_expr
from .errors import CwLabError, ConfigError, GraphError
from .exact_search import exact_cwd, exact_lcwd
from .lb_certificate import certify as certify_expression
from .lcw_compiler import compile_subclass_with_report, compile_window
from .serialization import dumps, graph_to_dot, graph_to_json, load_graph, write_json, write_text
from .vertex_minor import reduce_to_target
from .word_model import WordSpec, build_F, build_H, build_window, sample_subclass_layout


@click.group()
@click.version_option(version='1.0.0')
def cli():
    """团宽实验工具

    由单词决定的网格图族：构造窗口、线性团宽编译、顶点子式约化与下界证书。
    """
    setup_logging()


# ---------------------------------------------------------------------------
# 公共辅助

def _check_config() -> None:
    validation = config_module.validate_config()
    if not validation['valid']:
        raise ConfigError(f"配置错误: {', '.join(validation['issues'])}",
                          {'issues': validation['issues']})


def _fail(error: Exception) -> None:
    """错误对象输出到stderr并以非零状态退出"""
    if isinstance(error, CwLabError):
        payload = error.to_dict()
    else:
        payload = {'error': 'internal', 'message': str(error), 'details': {}}
    click.echo(dumps(payload), err=True)
    sys.exit(1)


def _emit(data: Any, output: Optional[str]) -> None:
    if output:
        write_json(data, output)
        click.echo(f"结果已保存到: {output}")
    else:
        click.echo(dumps(data))


def _parse_cols(text: str):
    """列区间 a..b（含两端）"""
    try:
        first, last = text.split('..')
        return int(first), int(last)
    except ValueError:
        raise GraphError(f"列区间格式应为 a..b: {text}", {'cols': text})


def _parse_rows(text: str):
    """整数k表示行 1..k，逗号分隔表示显式行集合"""
    try:
        if ',' in text:
            return [int(x) for x in text.split(',') if x.strip()]
        return int(text)
    except ValueError:
        raise GraphError(f"行参数格式错误: {text}", {'rows': text})


def _load_expression(expr: Optional[str], expr_file: Optional[str]):
    if expr_file:
        with open(expr_file, 'r', encoding='utf-8') as f:
            expr = f.read()
    if not expr:
        raise CwLabError("需要 --expr 或 --expr-file")
    return parse_expr(expr)


def _resolve_graph(graph_file: Optional[str], word: Optional[str], rows: Optional[str],
                   cols: Optional[str]) -> Graph:
    if graph_file:
        return load_graph(graph_file)
    if word and rows and cols:
        return build_window(WordSpec.parse(word), _parse_rows(rows), _parse_cols(cols)).graph
    raise GraphError("需要 --graph 文件，或同时给出 --word、--rows、--cols")


def _budget(max_k, max_nodes, time_cap):
    return config_module.default_budget(max_k=max_k, max_nodes=max_nodes, time_cap=time_cap)


def _graph_options(func):
    func = click.option('--cols', help='列区间 a..b')(func)
    func = click.option('--rows', help='行数k或逗号分隔的行号')(func)
    func = click.option('--word', '-w', help='单词，形如 prefix|period')(func)
    func = click.option('--graph', '-g', 'graph_file', type=click.Path(exists=True),
                        help='图JSON文件')(func)
    return func


def _budget_options(func):
    func = click.option('--time-cap', type=float, help='时间上限（秒），CWLAB_TIME_CAP优先')(func)
    func = click.option('--max-nodes', type=int, help='状态扩展上限')(func)
    func = click.option('--max-k', type=int, help='标签数上限')(func)
    return func


# ---------------------------------------------------------------------------
# 命令

@cli.command()
@click.option('--word', '-w', required=True, help='单词，形如 prefix|period')
@click.option('--rows', required=True, help='行数k或逗号分隔的行号')
@click.option('--cols', required=True, help='列区间 a..b')
@click.option('--format', 'fmt', type=click.Choice(['json', 'dot']), default='json', help='输出格式')
@click.option('--output', '-o', help='输出文件路径')
def build(word, rows, cols, fmt, output):
    """构造单词窗口"""
    try:
        _check_config()
        window = build_window(WordSpec.parse(word), _parse_rows(rows), _parse_cols(cols))
        if fmt == 'dot':
            text = graph_to_dot(window.graph)
            if output:
                write_text(text, output)
                click.echo(f"结果已保存到: {output}")
            else:
                click.echo(text, nl=False)
        else:
            _emit(graph_to_json(window.graph), output)
    except Exception as e:
        _fail(e)


@cli.command('eval-expr')
@click.option('--expr', '-e', help='表达式文本')
@click.option('--expr-file', type=click.Path(exists=True), help='表达式文件')
@click.option('--output', '-o', help='输出文件路径')
def eval_expr_cmd(expr, expr_file, output):
    """对表达式求值，输出图与各顶点标签"""
    try:
        _check_config()
        labeled = eval_expr(_load_expression(expr, expr_file))
        data = graph_to_json(labeled.graph)
        data['labels'] = dict(sorted(labeled.labels.items()))
        _emit(data, output)
    except Exception as e:
        _fail(e)


@cli.command('check-expr')
@click.option('--expr', '-e', help='表达式文本')
@click.option('--expr-file', type=click.Path(exists=True), help='表达式文件')
@_graph_options
@click.option('--output', '-o', help='输出文件路径')
def check_expr(expr, expr_file, graph_file, word, rows, cols, output):
    """检查表达式是否定义给定的图；不定义时以非零状态退出"""
    try:
        _check_config()
        parsed = _load_expression(expr, expr_file)
        graph = _resolve_graph(graph_file, word, rows, cols)
        data = {
            'defines': defines(parsed, graph),
            'labels_used': labels_used(parsed),
            'max_live': max_live_labels(parsed),
            'linear': is_linear(parsed),
        }
        _emit(data, output)
        if not data['defines']:
            sys.exit(1)
    except Exception as e:
        _fail(e)


def _exact(runner, graph_file, word, rows, cols, max_k, max_nodes, time_cap, output):
    graph = _resolve_graph(graph_file, word, rows, cols)
    result = runner(graph, _budget(max_k, max_nodes, time_cap))
    _emit(result.to_dict(), output)
    if not output:
        _display_search_result(result.to_dict())


@cli.command('exact-cw')
@_graph_options
@_budget_options
@click.option('--output', '-o', help='输出文件路径')
def exact_cw(graph_file, word, rows, cols, max_k, max_nodes, time_cap, output):
    """精确团宽"""
    try:
        _check_config()
        _exact(exact_cwd, graph_file, word, rows, cols, max_k, max_nodes, time_cap, output)
    except Exception as e:
        _fail(e)


@cli.command('exact-lcw')
@_graph_options
@_budget_options
@click.option('--output', '-o', help='输出文件路径')
def exact_lcw(graph_file, word, rows, cols, max_k, max_nodes, time_cap, output):
    """精确线性团宽"""
    try:
        _check_config()
        _exact(exact_lcwd, graph_file, word, rows, cols, max_k, max_nodes, time_cap, output)
    except Exception as e:
        _fail(e)


@cli.command('compile')
@click.option('--word', '-w', required=True, help='单词，形如 prefix|period')
@click.option('--k', 'k', type=int, required=True, help='行数k（子类模式下为禁止块的规模）')
@click.option('--t', 't', type=int, help='列数t（窗口模式）')
@click.option('--start', type=int, default=1, help='起始列')
@click.option('--subclass', is_flag=True, help='子类模式：随机黑色子图')
@click.option('--n', 'n', type=int, default=6, help='子类模式的宿主窗口规模')
@click.option('--max-vertices', type=int, default=12, help='子类模式的黑色顶点上限')
@click.option('--seed', type=int, help='随机种子（默认 CWLAB_SEED）')
@click.option('--output', '-o', help='输出文件路径')
def compile_cmd(word, k, t, start, subclass, n, max_vertices, seed, output):
    """编译线性表达式并给出标签预算报告；超出上限时以非零状态退出"""
    try:
        _check_config()
        spec = WordSpec.parse(word)
        if subclass:
            seed = config_module.DEFAULT_SEED if seed is None else seed
            layout = sample_subclass_layout(spec, n, k, max_vertices, seed)
            expr, report = compile_subclass_with_report(layout, k)
        else:
            if t is None:
                raise CwLabError("窗口模式需要 --t")
            expr, report = compile_window(build_H(spec, k, t, start))
        data = {'expression': format_expr(expr), 'report': report.to_dict()}
        _emit(data, output)
        if not report.ok:
            sys.exit(1)
    except Exception as e:
        _fail(e)


@cli.command()
@click.option('--word', '-w', required=True, help='单词，形如 prefix|period')
@click.option('--target', type=click.Choice(['F', 'X']), required=True, help='目标窗口')
@click.option('--n', 'n', type=int, required=True, help='目标规模')
@click.option('--rows', type=int, help='初始行数（默认取规划值）')
@click.option('--frames', type=click.Path(file_okay=False), help='DOT中间帧输出目录')
@click.option('--output', '-o', help='输出文件路径')
def reduce(word, target, n, rows, frames, output):
    """用顶点子式约化得到 F_{n,n} 或 X_{n,n}"""
    try:
        _check_config()
        trace = reduce_to_target(WordSpec.parse(word), target, n, rows=rows)
        if frames:
            os.makedirs(frames, exist_ok=True)
            for index, text in enumerate(trace.dot_frames()):
                write_text(text, os.path.join(frames, f"frame_{index:03d}.dot"))
        _emit(trace.to_dict(), output)
    except Exception as e:
        _fail(e)


@cli.command()
@click.option('--expr', '-e', help='表达式文本')
@click.option('--expr-file', type=click.Path(exists=True), help='表达式文件')
@click.option('--n', 'n', type=int, required=True, help='F_{n,n} 的规模')
@click.option('--output', '-o', help='输出文件路径')
def certify(expr, expr_file, n, output):
    """对定义 F_{n,n} 的表达式生成下界证书；标签不互异时以非零状态退出"""
    try:
        _check_config()
        certificate = certify_expression(_load_expression(expr, expr_file), build_F(n))
        _emit(certificate.to_dict(), output)
        if not certificate.verdict:
            sys.exit(1)
    except Exception as e:
        _fail(e)


@cli.command('find-cycle')
@_graph_options
@click.option('--length', type=int, required=True, help='圈长')
@click.option('--guard', type=int, help='顶点数上限（默认 CWLAB_CYCLE_GUARD）')
@click.option('--output', '-o', help='输出文件路径')
def find_cycle(graph_file, word, rows, cols, length, guard, output):
    """搜索导出圈"""
    try:
        _check_config()
        graph = _resolve_graph(graph_file, word, rows, cols)
        found = find_induced_cycle(graph, length, guard=guard)
        data = {
            'length': length,
            'found': found is not None,
            'cycle': found,
            'verified': found is not None and is_induced_cycle(graph, found),
        }
        _emit(data, output)
    except Exception as e:
        _fail(e)


@cli.command()
@click.option('--tables', default='widths,windows,subclass,reductions,cycles',
              help=f"逗号分隔的表名: {', '.join(TABLE_COLUMNS)}")
@click.option('--format', 'fmt', type=click.Choice(['csv', 'md']), default='csv', help='表格格式')
@click.option('--seed', type=int, help='随机种子（默认 CWLAB_SEED）')
@_budget_options
@click.option('--output', '-o', help='表格输出路径')
@click.option('--summary', help='JSON运行摘要输出路径')
def report(tables, fmt, seed, max_k, max_nodes, time_cap, output, summary):
    """运行实验表"""
    try:
        _check_config()
        selected = [name.strip() for name in tables.split(',') if name.strip()]
        processor = BatchProcessor(_budget(max_k, max_nodes, time_cap), seed)
        stats = processor.run_report(selected, output, fmt)
        if not output:
            click.echo(stats['text'], nl=False)
        else:
            _display_report_stats(stats)
        if summary:
            processor.save_processing_report(stats, summary)
    except Exception as e:
        _fail(e)


def _display_search_result(result: Dict[str, Any]):
    """显示精确搜索结果"""
    click.echo("\n=== 搜索结果 ===", err=True)
    if result['status'] == 'proven':
        click.echo(f"宽度: {result['k']}", err=True)
    else:
        click.echo(f"预算耗尽，已否定 k ≤ {result['lower_bound']}", err=True)
    click.echo(f"节点数: {result['nodes']}  用时: {result['elapsed']}s", err=True)


def _display_report_stats(stats: Dict[str, Any]):
    """显示实验表统计信息"""
    click.echo("\n=== 实验表统计 ===")
    for name, count in stats['row_counts'].items():
        click.echo(f"{name}: {count} 行")
    click.echo(f"预算耗尽的单元: {stats['exhausted_cells']}")
    click.echo(f"用时: {stats['elapsed_seconds']}s")


def main():
    """主程序入口点"""
    cli()


if __name__ == '__main__':
    main()
