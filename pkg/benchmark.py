"""
Wall-clock timing of the t-value algorithms on Sobol' nets.
Run with: python benchmark.py --s 10 --m 14..18 --algorithms alg1,alg2
"""
from pathlib import Path
from time import perf_counter
from typing import List, Optional, Sequence
import argparse
import logging
import sys

from pydantic import BaseModel, Field

from config import settings
from main import parse_int_list
from models import ToolOutput
from sobol import DEFAULT_DIRECTION_FILE, load_direction_file, sobol_net
from tval import t_table, t_value_alg1, t_value_alg2

logger = logging.getLogger(__name__)

TIMERS = {"alg1": t_value_alg1, "alg2": t_value_alg2}


class TimingRow(BaseModel):
    algorithm: str
    s: int
    m: int
    t: int
    seconds: float
    per_point_us: float = Field(..., description="Wall time per point in microseconds")


class TimingReport(ToolOutput):
    """Per-(algorithm, m) timings of single nets, plus an optional table pass."""
    workers: int
    rows: List[TimingRow]
    table_seconds: Optional[float] = None


def time_nets(
    s: int,
    ms: Sequence[int],
    algorithms: Sequence[str],
    direction_file: Path = DEFAULT_DIRECTION_FILE,
    workers: Optional[int] = None,
) -> List[TimingRow]:
    entries = load_direction_file(direction_file)
    rows = []
    for m in ms:
        net = sobol_net(entries, s, m)
        for name in algorithms:
            start = perf_counter()
            report = TIMERS[name](net, workers=workers)
            elapsed = perf_counter() - start
            rows.append(TimingRow(
                algorithm=name, s=s, m=m, t=report.t, seconds=round(elapsed, 4),
                per_point_us=round(1e6 * elapsed / net.size, 3),
            ))
            logger.info(f"{name} s={s} m={m}: t={report.t} in {elapsed:.3f}s")
    return rows


def time_table(dims: Sequence[int], ms: Sequence[int], algorithm: str, workers: Optional[int] = None) -> float:
    """Seconds for one t_table pass over the leading blocks of a single net."""
    net = sobol_net(load_direction_file(), max(dims), max(ms))
    start = perf_counter()
    t_table(net, dims, ms, algorithm, workers)
    return round(perf_counter() - start, 4)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Time the t-value algorithms on Sobol' nets")
    parser.add_argument("--s", type=int, default=10)
    parser.add_argument("--m", dest="ms", type=parse_int_list, default=[14, 15, 16, 17, 18])
    parser.add_argument("--algorithms", default="alg2", help="comma list of alg1, alg2")
    parser.add_argument("--table-dims", type=parse_int_list, help="also time a table, e.g. 3..22")
    parser.add_argument("--table-m", type=parse_int_list, help="m range of the timed table, e.g. 2..16")
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    unknown = [a for a in algorithms if a not in TIMERS]
    if unknown or not algorithms:
        parser.error(f"algorithms must be chosen from {', '.join(TIMERS)}")
    if (args.table_dims is None) != (args.table_m is None):
        parser.error("--table-dims and --table-m go together")

    rows = time_nets(args.s, args.ms, algorithms, workers=args.workers)
    table_seconds = None
    if args.table_dims is not None:
        table_seconds = time_table(args.table_dims, args.table_m, "both", args.workers)
    report = TimingReport(workers=args.workers or settings.workers, rows=rows, table_seconds=table_seconds)
    print(report.model_dump_json(indent=2, exclude_none=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
