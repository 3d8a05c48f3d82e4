"""
Command-line front end for the digital net quality tool.
Main entry point exposing the tval, wep, check, project and worst commands.
"""
from pathlib import Path
from typing import List, Optional, Tuple
import argparse
import csv
import io
import logging
import sys

from pydantic import BaseModel, ValidationError, model_validator

from config import settings
from errors import InternalComputationError, NetInputError, NetQualityError
from models import (
    EnumeratorOutput,
    ErrorResponse,
    GwOutput,
    GwTerm,
    NetFile,
    PointSetFile,
    TableMismatch,
    TableOutput,
    TValueOutput,
    WorstProjectionOutput,
)
from net import DigitalNet
from sobol import DEFAULT_DIRECTION_FILE, load_direction_file, sobol_net
from tval import ALGORITHMS, Method, compute_t_reports, t_table
from verify import check_net, check_points, check_random, summarize
from wep import (
    WeightEnumerator,
    find_worst_projection,
    full_wep,
    general_full_wep,
    general_lower_bound,
    general_truncated_wep,
    overline_gw,
    projection_wep,
    truncated_wep,
)

logger = logging.getLogger(__name__)

COMMANDS = ("tval", "wep", "check", "project", "worst")

# (output model, csv rows or None, exit code)
CommandResult = Tuple[BaseModel, Optional[List[List[str]]], int]


def parse_int_list(text: Optional[str]) -> Optional[List[int]]:
    """'3..22' -> [3, ..., 22]; '1,3,5' -> [1, 3, 5]; '4' -> [4]."""
    if text is None:
        return None
    try:
        values: List[int] = []
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..", 1)
                values.extend(range(int(lo), int(hi) + 1))
            elif part:
                values.append(int(part))
    except ValueError as exc:
        raise NetInputError(f"cannot parse integer list {text!r}") from exc
    if not values:
        raise NetInputError(f"empty integer list {text!r}")
    return values


class RunConfig(BaseModel):
    """Validated command-line configuration; conflicting flags are rejected before anything runs."""
    command: str
    net: Optional[Path] = None
    points: Optional[Path] = None
    sobol: Optional[Path] = None
    random: bool = False
    dims: Optional[List[int]] = None
    ms: Optional[List[int]] = None
    algorithm: str = "alg2"
    ell: Optional[int] = None
    full: bool = False
    gw: bool = False
    cap: Optional[int] = None
    compare: Optional[Path] = None
    b: Optional[int] = None
    m: Optional[int] = None
    s: Optional[int] = None
    count: int = 100
    seed: int = 0
    subset: Optional[List[int]] = None
    max_dims: Optional[int] = None
    out: str = "json"
    workers: Optional[int] = None
    verbose: bool = False

    @model_validator(mode="after")
    def check_flags(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        sources = [name for name in ("net", "points", "sobol") if getattr(self, name) is not None]
        if self.random:
            sources.append("random")
        if len(sources) != 1:
            raise ValueError(f"give exactly one input source, got {sources or 'none'}")
        allowed = {
            "tval": {"net", "points", "sobol"},
            "wep": {"net", "points"},
            "check": {"net", "points", "random"},
            "project": {"net"},
            "worst": {"net"},
        }[self.command]
        if sources[0] not in allowed:
            raise ValueError(f"{self.command} does not accept --{sources[0]}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {', '.join(ALGORITHMS)}")
        if self.command == "tval" and self.points is not None and self.algorithm != "alg2":
            raise ValueError("--algorithm does not apply to a raw point set, which only has a lower bound")
        if (self.dims is not None or self.ms is not None) and self.sobol is None:
            raise ValueError("--dims and --m ranges need --sobol")
        if self.sobol is not None and (self.dims is None or self.ms is None):
            raise ValueError("--sobol needs --dims and --m")
        if self.compare is not None and self.sobol is None:
            raise ValueError("--compare needs --sobol")
        if self.ell is not None:
            if self.ell < 1:
                raise ValueError("--l must be >= 1")
            if self.command == "tval" and self.algorithm not in ("alg1", "both"):
                raise ValueError("--l applies to alg1 only")
            if self.full or self.gw:
                raise ValueError("--l conflicts with --full and --gw")
        if self.full and self.gw:
            raise ValueError("--full conflicts with --gw")
        if self.gw and self.points is not None:
            raise ValueError("--gw needs a net, not a raw point set")
        if self.cap is not None and not (self.gw or self.command == "project"):
            raise ValueError("--cap applies to --gw and project")
        if self.random and None in (self.b, self.m, self.s):
            raise ValueError("--random needs --b, --m and --s")
        if self.count < 1:
            raise ValueError("--count must be >= 1")
        if self.command == "project" and not self.subset:
            raise ValueError("project needs --subset")
        if self.command == "worst" and self.max_dims is None:
            raise ValueError("worst needs --max-dims")
        if self.out not in ("json", "csv"):
            raise ValueError("--out must be json or csv")
        if self.out == "csv" and self.command not in ("tval", "wep", "project"):
            raise ValueError(f"csv output is not available for {self.command}")
        if self.workers is not None and self.workers < 1:
            raise ValueError("--workers must be >= 1")
        return self


def load_net(path: Path) -> DigitalNet:
    try:
        text = path.read_text()
    except OSError as exc:
        raise NetInputError(f"cannot read net file {path}: {exc}") from exc
    return NetFile.model_validate_json(text).to_net()


def load_points(path: Path) -> PointSetFile:
    try:
        text = path.read_text()
    except OSError as exc:
        raise NetInputError(f"cannot read point file {path}: {exc}") from exc
    return PointSetFile.model_validate_json(text)


def enumerator_output(w: WeightEnumerator, exact_counts: bool = True, subset: Optional[List[int]] = None) -> EnumeratorOutput:
    scaled = [w.scaled_coefficient(a) for a in range(w.valid_to + 1)]
    coeffs = None
    if exact_counts:
        coeffs = [str(c) for c in w.counts()]
    elif all(c % w.scale == 0 for c in scaled):
        coeffs = [str(c // w.scale) for c in scaled]
    return EnumeratorOutput(
        b=w.b, m=w.m, s=w.s, n=w.n,
        scale=f"{w.b}^{w.m}",
        valid_to=w.valid_to,
        full=w.full,
        coeffs=coeffs,
        scaled_coeffs=[str(c) for c in scaled],
        subset=subset,
    )


def enumerator_rows(output: EnumeratorOutput) -> List[List[str]]:
    values = output.coeffs if output.coeffs is not None else output.scaled_coeffs
    header = "coefficient" if output.coeffs is not None else "scaled_coefficient"
    return [["degree", header]] + [[str(a), c] for a, c in enumerate(values)]


def read_reference_table(path: Path) -> dict:
    """{(s, m): t} from a CSV whose header row is 'm\\s,<s values>'."""
    try:
        with path.open(newline="") as handle:
            rows = list(csv.reader(handle))
    except OSError as exc:
        raise NetInputError(f"cannot read reference table {path}: {exc}") from exc
    if not rows:
        raise NetInputError(f"reference table {path} is empty")
    try:
        dims = [int(v) for v in rows[0][1:]]
        table = {}
        for row in rows[1:]:
            if not row:
                continue
            m = int(row[0])
            for s, value in zip(dims, row[1:]):
                if value.strip():
                    table[(s, m)] = int(value)
    except ValueError as exc:
        raise NetInputError(f"malformed reference table {path}: {exc}") from exc
    return table


def cmd_tval(config: RunConfig) -> CommandResult:
    if config.points is not None:
        point_file = load_points(config.points)
        points = point_file.to_points()
        bound = general_lower_bound(points, point_file.order, point_file.m)
        output = TValueOutput(
            lower_bound=bound, method="lower_bound",
            b=point_file.order, m=point_file.m, s=points.shape[1],
        )
        return output, [["lower_bound"], [str(bound)]], 0

    if config.sobol is not None:
        entries = load_direction_file(config.sobol)
        net = sobol_net(entries, max(config.dims), max(config.ms))
        table = t_table(net, config.dims, config.ms, config.algorithm, config.workers)
        dims, ms = sorted(set(config.dims)), sorted(set(config.ms))
        rows = [[table[(s, m)] for s in dims] for m in ms]
        mismatches = None
        code = 0
        if config.compare is not None:
            reference = read_reference_table(config.compare)
            mismatches = [
                TableMismatch(m=m, s=s, expected=reference[(s, m)], actual=table[(s, m)])
                for m in ms for s in dims
                if (s, m) in reference and reference[(s, m)] != table[(s, m)]
            ]
            if mismatches:
                logger.warning(f"{len(mismatches)} cells differ from {config.compare}")
                code = 1
        output = TableOutput(algorithm=config.algorithm, dims=dims, ms=ms, rows=rows, mismatches=mismatches)
        csv_rows = [["m\\s"] + [str(s) for s in dims]]
        csv_rows += [[str(m)] + [str(t) for t in row] for m, row in zip(ms, rows)]
        return output, csv_rows, code

    net = load_net(config.net)
    reports = compute_t_reports(net, config.algorithm, config.ell, config.workers)
    deg_q = next((r.deg_q for r in reports if r.method == Method.ALG2), None)
    output = TValueOutput(
        t=reports[-1].t, method=config.algorithm, degQ=deg_q, b=net.b, m=net.m, s=net.s,
    )
    return output, [["s", "m", "t"], [str(net.s), str(net.m), str(output.t)]], 0


def cmd_wep(config: RunConfig) -> CommandResult:
    if config.points is not None:
        point_file = load_points(config.points)
        points = point_file.to_points()
        if config.full:
            w = general_full_wep(points, point_file.order, point_file.m)
        else:
            w = general_truncated_wep(points, point_file.order, point_file.m)
        output = enumerator_output(w, exact_counts=False)
        return output, enumerator_rows(output), 0

    net = load_net(config.net)
    if config.gw:
        gw = overline_gw(net, cap=config.cap)
        terms = []
        for exps, c in sorted(gw.poly.items(), key=lambda item: (sum(item[0]), item[0])):
            count, remainder = divmod(c, gw.scale)
            if remainder:
                raise InternalComputationError(f"generalized coefficient {c} of {exps} is not divisible by {gw.scale}")
            terms.append(GwTerm(exponents=list(exps), count=str(count)))
        output = GwOutput(b=net.b, m=net.m, s=net.s, cap=gw.cap, scale=f"{net.b}^{net.m}", terms=terms)
        rows = [[f"e{i}" for i in range(1, net.s + 1)] + ["count"]]
        rows += [[str(e) for e in term.exponents] + [term.count] for term in terms]
        return output, rows, 0

    w = full_wep(net, config.workers) if config.full else truncated_wep(net, config.ell, config.workers)
    output = enumerator_output(w)
    return output, enumerator_rows(output), 0


def cmd_project(config: RunConfig) -> CommandResult:
    net = load_net(config.net)
    gw = overline_gw(net, cap=config.cap)
    w = projection_wep(gw, config.subset)
    output = enumerator_output(w, subset=sorted(set(config.subset)))
    return output, enumerator_rows(output), 0


def cmd_worst(config: RunConfig) -> CommandResult:
    net = load_net(config.net)
    subset, t = find_worst_projection(net, config.max_dims, config.workers)
    output = WorstProjectionOutput(subset=list(subset), t=t, max_dims=config.max_dims, m=net.m)
    return output, None, 0


def cmd_check(config: RunConfig) -> CommandResult:
    if config.random:
        results = check_random(config.b, config.m, config.s, config.count, config.seed, config.workers)
    elif config.points is not None:
        point_file = load_points(config.points)
        results = check_points(point_file.to_points(), point_file.spec(), point_file.m)
    else:
        results = check_net(load_net(config.net), config.workers)
    report = summarize(results)
    logger.info(f"checks: {report.passed}/{report.total} passed, {report.skipped} skipped")
    return report, None, 1 if report.failed else 0


HANDLERS = {
    "tval": cmd_tval,
    "wep": cmd_wep,
    "check": cmd_check,
    "project": cmd_project,
    "worst": cmd_worst,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None, help="thread count (default DNQ_WORKERS)")
    common.add_argument("--out", choices=("json", "csv"), default=settings.output_format)
    common.add_argument("--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog=settings.tool_name,
        description="Exact weight enumerators and t-values of digital nets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tval = sub.add_parser("tval", parents=[common], help="exact t-value of a net or a Sobol' table")
    tval.add_argument("--net", type=Path)
    tval.add_argument("--points", type=Path, help="raw point set; reports a lower bound")
    tval.add_argument("--sobol", type=Path, nargs="?", const=DEFAULT_DIRECTION_FILE,
                      help="direction-number file (default: the shipped table)")
    tval.add_argument("--dims", type=parse_int_list, help="dimension range, e.g. 3..22")
    tval.add_argument("--m", dest="ms", type=parse_int_list, help="m range, e.g. 2..12")
    tval.add_argument("--algorithm", choices=ALGORITHMS, default="alg2")
    tval.add_argument("--l", dest="ell", type=int)
    tval.add_argument("--compare", type=Path, help="reference t-value CSV")

    wep = sub.add_parser("wep", parents=[common], help="weight enumerator of the dual net")
    wep.add_argument("--net", type=Path)
    wep.add_argument("--points", type=Path)
    wep.add_argument("--full", action="store_true")
    wep.add_argument("--l", dest="ell", type=int)
    wep.add_argument("--gw", action="store_true", help="generalized per-coordinate enumerator")
    wep.add_argument("--cap", type=int)

    check = sub.add_parser("check", parents=[common], help="cross-check against brute-force oracles")
    check.add_argument("--net", type=Path)
    check.add_argument("--points", type=Path)
    check.add_argument("--random", action="store_true")
    check.add_argument("--b", type=int)
    check.add_argument("--m", type=int)
    check.add_argument("--s", type=int)
    check.add_argument("--count", type=int, default=100)
    check.add_argument("--seed", type=int, default=0)

    project = sub.add_parser("project", parents=[common], help="enumerator of a coordinate projection")
    project.add_argument("--net", type=Path)
    project.add_argument("--subset", type=parse_int_list, required=True)
    project.add_argument("--cap", type=int)

    worst = sub.add_parser("worst", parents=[common], help="worst projection up to a dimension")
    worst.add_argument("--net", type=Path)
    worst.add_argument("--max-dims", dest="max_dims", type=int, required=True)
    return parser


def write_output(output: BaseModel, rows: Optional[List[List[str]]], fmt: str) -> None:
    if fmt == "csv" and rows is not None:
        buffer = io.StringIO()
        csv.writer(buffer, lineterminator="\n").writerows(rows)
        sys.stdout.write(buffer.getvalue())
        return
    print(output.model_dump_json(indent=2, by_alias=True, exclude_none=True))


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors itself, with exit status 2
        return int(exc.code or 0)

    # Configure logging
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
    logger.info(f"Starting {settings.tool_name} {args.command}")

    try:
        config = RunConfig(**vars(args))
        output, rows, code = HANDLERS[config.command](config)
        write_output(output, rows, config.out)
        logger.info(f"{config.command} finished with exit code {code}")
        return code
    except ValidationError as exc:
        logger.error(f"Invalid input: {exc}")
        print(ErrorResponse(error_message=f"invalid input: {exc}").model_dump_json(indent=2))
        return NetInputError.exit_code
    except NetQualityError as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        print(ErrorResponse(error_message=str(exc)).model_dump_json(indent=2))
        return exc.exit_code
    except Exception as exc:
        logger.error(f"Unhandled exception: {exc}", exc_info=True)
        print(ErrorResponse(error_message=f"internal error: {exc}").model_dump_json(indent=2))
        return 1


if __name__ == "__main__":
    sys.exit(main())
