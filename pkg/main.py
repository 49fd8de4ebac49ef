# main.py
import argparse
import dataclasses
import logging
import sys
from typing import Any, Dict, List, Optional

from client import ModelClientConfig, evaluate
from constants import BenchConfig, SnapshotMixin
from dataset import read_dataset, read_generations, write_dataset, write_generations
from debug import setup_logging
from enums import (
    Adjacency, Dimensionality, FrameMode, HeadingPolicy, Representation, ShotMode, StructureStyle, TaskKind,
)
from errors import BenchError, ConfigError
from parsing import load_synonyms
from registry import build_records, get_task, render_gold_answer
from runner import DEFAULT_BREAKDOWN_KEYS, format_report, save_report, score_dataset
from stats import dataset_stats, format_stats

logger = logging.getLogger(__name__)

NAV_TASKS = (TaskKind.NAV_FOLLOWER, TaskKind.NAV_INSTRUCTOR, TaskKind.CARD2EGO)
OL_TASKS = (TaskKind.OL_EGO, TaskKind.OL_ALLO)


def build_config(task: TaskKind, args: argparse.Namespace) -> SnapshotMixin:
    """The family's default config with any command-line overrides applied."""
    config = get_task(task).default_config()
    overrides: Dict[str, Any] = {}
    if task in NAV_TASKS:
        if args.mode:
            overrides['mode'] = FrameMode(args.mode)
        if args.dim:
            overrides['dimensionality'] = Dimensionality(args.dim)
    elif task in OL_TASKS:
        if args.adjacency:
            overrides['adjacency'] = Adjacency(args.adjacency)
        if args.heading_policy:
            overrides['heading_policy'] = HeadingPolicy(args.heading_policy)
    elif task == TaskKind.STRUCT_DESC:
        if args.representation:
            overrides['representation'] = Representation(args.representation)
        if args.style:
            overrides['style'] = StructureStyle(args.style)
    try:
        return dataclasses.replace(config, **overrides)
    except TypeError as e:
        raise ConfigError(str(e)) from e


def run_gen_mode(task: TaskKind, config: SnapshotMixin, size: int, seed: int, shots: ShotMode,
                 with_reasoning: bool, output: str) -> None:
    """Generate a dataset and write it as JSONL."""
    records = build_records(get_task(task), config, size, seed, shots, with_reasoning)
    write_dataset(records, output)
    print(f"Wrote {len(records)} {task.value} records to {output}")


def run_stats_mode(input_path: str) -> None:
    report = dataset_stats(read_dataset(input_path))
    print(format_stats(report) if report else "Empty dataset")


def run_render_mode(input_path: str, record_id: Optional[str], index: int) -> None:
    """Print one record's prompt and gold answer."""
    records = read_dataset(input_path)
    if record_id is not None:
        matches = [r for r in records if r.id == record_id]
        if not matches:
            raise ConfigError(f"no record with id {record_id}")
        record = matches[0]
    elif 0 <= index < len(records):
        record = records[index]
    else:
        raise ConfigError(f"index {index} outside a dataset of {len(records)} records")
    print(record.prompt)
    print("\n--- gold ---")
    print(render_gold_answer(record))
    if record.reasoning:
        print("\n--- reasoning ---")
        print(record.reasoning)


def run_eval_mode(input_path: str, client_config: str, output: str) -> None:
    config = ModelClientConfig.from_yaml(client_config)
    generations = evaluate(read_dataset(input_path), config)
    write_generations(generations, output)
    failed = sum(1 for g in generations if g.failed)
    print(f"Wrote {len(generations)} generations to {output} ({failed} failed)")


def run_score_mode(generations_path: str, dataset_path: str, report_path: Optional[str],
                   breakdown_keys: List[str], synonyms: Optional[str]) -> None:
    table = load_synonyms(synonyms) if synonyms else None
    report = score_dataset(read_generations(generations_path), read_dataset(dataset_path),
                           breakdown_keys, table, progress=True)
    path = save_report(report, report_path)
    print(format_report(report))
    print(f"\nReport saved to: {path}")


def build_parser() -> argparse.ArgumentParser:
    bench = BenchConfig()
    parser = argparse.ArgumentParser(description="Grid spatial-understanding benchmark toolkit")
    parser.add_argument('--debug', action='store_true', help="write a debug log under logs/")
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser('gen', help="generate a dataset")
    gen.add_argument('--task', required=True, choices=[k.value for k in TaskKind])
    gen.add_argument('--mode', choices=[m.value for m in FrameMode])
    gen.add_argument('--dim', choices=[d.value for d in Dimensionality])
    gen.add_argument('--adjacency', choices=[a.value for a in Adjacency])
    gen.add_argument('--heading-policy', choices=[h.value for h in HeadingPolicy])
    gen.add_argument('--representation', choices=[r.value for r in Representation])
    gen.add_argument('--style', choices=[s.value for s in StructureStyle])
    gen.add_argument('--size', type=int, default=bench.TEST_SET_SIZE)
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--shots', choices=[s.value for s in ShotMode], default=ShotMode.ZERO.value)
    gen.add_argument('--with-reasoning', action='store_true')
    gen.add_argument('--output', required=True)

    stats = sub.add_parser('stats', help="dataset distribution report")
    stats.add_argument('--input', required=True)

    render = sub.add_parser('render', help="preview one record")
    render.add_argument('--input', required=True)
    render.add_argument('--id')
    render.add_argument('--index', type=int, default=0)

    ev = sub.add_parser('eval', help="run a dataset against a model endpoint")
    ev.add_argument('--input', required=True)
    ev.add_argument('--client-config', required=True)
    ev.add_argument('--output', required=True)

    score = sub.add_parser('score', help="score generations against a dataset")
    score.add_argument('--generations', required=True)
    score.add_argument('--dataset', required=True)
    score.add_argument('--report')
    score.add_argument('--breakdown', nargs='*', default=list(DEFAULT_BREAKDOWN_KEYS))
    score.add_argument('--synonyms')

    combo = sub.add_parser('combo', help="generate navigation + structure localization scenes")
    combo.add_argument('--size', type=int, default=bench.TEST_SET_SIZE)
    combo.add_argument('--seed', type=int, default=0)
    combo.add_argument('--output', required=True)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    log_path = setup_logging(args.debug)
    if log_path:
        print(f"Debug log: {log_path}")
    try:
        if args.command == 'gen':
            task = TaskKind(args.task)
            run_gen_mode(task, build_config(task, args), args.size, args.seed, ShotMode(args.shots),
                         args.with_reasoning, args.output)
        elif args.command == 'stats':
            run_stats_mode(args.input)
        elif args.command == 'render':
            run_render_mode(args.input, args.id, args.index)
        elif args.command == 'eval':
            run_eval_mode(args.input, args.client_config, args.output)
        elif args.command == 'score':
            run_score_mode(args.generations, args.dataset, args.report, args.breakdown, args.synonyms)
        elif args.command == 'combo':
            family = get_task(TaskKind.COMBO)
            run_gen_mode(TaskKind.COMBO, family.default_config(), args.size, args.seed, ShotMode.ZERO,
                         False, args.output)
    except BenchError as e:
        logger.debug("command failed", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
