"""
Cross-check suite: the enumerator algorithms against the brute-force oracles.
Every check returns a CheckResult; failures carry a counterexample dump.
"""
from typing import Any, Callable, Dict, List, Optional
import logging

import numpy as np

from abelian import GroupSpec
from errors import ResourceBoundError
from models import CheckReport, CheckResult, Status
from net import DigitalNet, net_from_matrices
from oracle import (
    dual_enumerate,
    dual_weight_enumerator,
    inverse_q_polynomial,
    min_nrt,
    t_by_intervals,
    t_by_walsh_sums,
)
from tval import t_value_alg1, t_value_alg2
from wep import full_wep, general_lower_bound

logger = logging.getLogger(__name__)


def net_dump(net: DigitalNet) -> Dict[str, Any]:
    """Generator digits of a net, enough to rebuild it from a net file."""
    generators = net.spec.encode_digits(net.generators)
    return {"group": list(net.spec.factors), "generators": generators.tolist()}


def _guarded(name: str, check: Callable[[], CheckResult]) -> CheckResult:
    try:
        return check()
    except ResourceBoundError as exc:
        logger.info(f"{name}: skipped ({exc})")
        return CheckResult(name=name, passed=True, skipped=True, details=str(exc))


def check_agreement(net: DigitalNet, workers: Optional[int] = None, name: str = "t agreement") -> CheckResult:
    """alg1, alg2 (when n = m) and interval counting give the same t."""
    def run() -> CheckResult:
        values = {"alg1": t_value_alg1(net, workers=workers).t}
        if net.n == net.m:
            values["alg2"] = t_value_alg2(net, workers).t
        values["intervals"] = t_by_intervals(net.point_block(), net.b, net.m, net.s)
        passed = len(set(values.values())) == 1
        return CheckResult(
            name=name,
            passed=passed,
            details=", ".join(f"{k}={v}" for k, v in values.items()),
            counterexample=None if passed else {"net": net_dump(net), "t": values},
        )
    return _guarded(name, run)


def check_duality(net: DigitalNet) -> CheckResult:
    """m + 1 - minNRT(dual) equals the interval-counting t."""
    def run() -> CheckResult:
        dual = dual_enumerate(net)
        from_dual = net.m + 1 - min_nrt(dual)
        direct = t_by_intervals(net.point_block(), net.b, net.m, net.s)
        passed = from_dual == direct
        return CheckResult(
            name="duality",
            passed=passed,
            details=f"m+1-minNRT={from_dual}, intervals={direct}, |dual|={len(dual)}",
            counterexample=None if passed else {"net": net_dump(net)},
        )
    return _guarded("duality", run)


def check_full_enumerator(net: DigitalNet, workers: Optional[int] = None) -> CheckResult:
    """full_wep matches the brute-force dual weight enumerator and WP(1) = |dual|."""
    def run() -> CheckResult:
        dual = dual_enumerate(net)
        expected = dual_weight_enumerator(dual)
        computed = full_wep(net, workers).counts()
        passed = computed == expected and sum(computed) == len(dual)
        return CheckResult(
            name="full enumerator",
            passed=passed,
            details=f"N_a = {computed}",
            counterexample=None if passed else {"net": net_dump(net), "expected": expected, "computed": computed},
        )
    return _guarded("full enumerator", run)


def check_inverse_degree(net: DigitalNet, workers: Optional[int] = None) -> CheckResult:
    """deg Q from the top window equals the degree of the brute-force Q(z)."""
    name = "inverse identity degree"
    if net.n != net.m or net.m < 1:
        return CheckResult(name=name, passed=True, skipped=True, details="needs n = m >= 1")

    def run() -> CheckResult:
        report = t_value_alg2(net, workers)
        q = inverse_q_polynomial(dual_enumerate(net), net.b, net.m)
        expected = max(q.degree(), 0)
        passed = report.deg_q == expected
        return CheckResult(
            name=name,
            passed=passed,
            details=f"window degQ={report.deg_q}, brute force degQ={expected}",
            counterexample=None if passed else {"net": net_dump(net), "Q": list(q.trimmed())},
        )
    return _guarded(name, run)


def check_determinism(net: DigitalNet, workers: int = 4) -> CheckResult:
    single = full_wep(net, workers=1).scaled
    threaded = full_wep(net, workers=workers).scaled
    return CheckResult(
        name="thread determinism",
        passed=single.coeffs == threaded.coeffs,
        details=f"1 vs {workers} workers",
    )


def check_net(net: DigitalNet, workers: Optional[int] = None) -> List[CheckResult]:
    """The full suite for one net."""
    logger.info(f"checking net b={net.b}, s={net.s}, m={net.m}, n={net.n}")
    return [
        check_agreement(net, workers),
        check_duality(net),
        check_full_enumerator(net, workers),
        check_inverse_degree(net, workers),
        check_determinism(net),
    ]


def random_net(rng: np.random.Generator, b: int, m: int, s: int) -> DigitalNet:
    """Uniformly random s generating matrices of size m x m over Z_b."""
    return net_from_matrices(b, rng.integers(0, b, size=(s, m, m)).tolist())


def check_random(
    b: int,
    m: int,
    s: int,
    count: int,
    seed: int,
    workers: Optional[int] = None,
) -> List[CheckResult]:
    """alg1 / alg2 / interval agreement on count random nets."""
    rng = np.random.default_rng(seed)
    results = []
    for i in range(count):
        net = random_net(rng, b, m, s)
        results.append(check_agreement(net, workers, name=f"random net {i}"))
    return results


def check_points(points: np.ndarray, spec: GroupSpec, m: int) -> List[CheckResult]:
    """
    Raw point multisets: the enumerator only bounds t from below, so the
    bound is compared with both exact oracles and strictness is reported.
    """
    bound = general_lower_bound(points, spec.order, m)
    results = []

    def bound_check() -> CheckResult:
        exact = t_by_intervals(points, spec.order, m)
        strict = bound < exact
        return CheckResult(
            name="lower bound",
            passed=bound <= exact,
            details=f"lower bound {bound}, intervals t={exact}" + (" (strict)" if strict else ""),
            counterexample=None if bound <= exact else {"lower_bound": bound, "t": exact},
        )

    def walsh_check() -> CheckResult:
        by_intervals = t_by_intervals(points, spec.order, m)
        by_walsh = t_by_walsh_sums(points, spec, m)
        return CheckResult(
            name="walsh sums",
            passed=by_intervals == by_walsh,
            details=f"intervals t={by_intervals}, walsh t={by_walsh}",
        )

    results.append(_guarded("lower bound", bound_check))
    results.append(_guarded("walsh sums", walsh_check))
    return results


def summarize(results: List[CheckResult]) -> CheckReport:
    failed = sum(1 for r in results if not r.passed)
    skipped = sum(1 for r in results if r.skipped)
    for r in results:
        if not r.passed:
            logger.warning(f"check failed: {r.name}: {r.details}")
    return CheckReport(
        status=Status.SUCCESS,
        total=len(results),
        passed=len(results) - failed,
        failed=failed,
        skipped=skipped,
        results=results,
    )
