"""
Numeric verification of identities, certificates and recurrences.

All comparisons are exact over the rationals; points where either side has
a pole are skipped.
"""

from typing import List, Optional, Sequence, Tuple

import pandas as pd

from pisigma.config import get_settings
from pisigma.errors import PoleError
from pisigma.evaluation.oracle import Evaluator, check_bounds, parameter_samples
from pisigma.expr.nodes import Expr
from pisigma.expr.printer import pretty
from pisigma.expr.sumspec import ParamBound
from pisigma.logging_config import get_logger
from pisigma.recurrences.creative import (
    CERTIFICATE_POINTS,
    certificate_holds,
    certificate_symbolic,
    recurrence_holds,
)
from pisigma.recurrences.model import Recurrence
from pisigma.schemas import SamplePoint, VerifyVerdict

logger = get_logger(__name__)


def _status(compared: int, first: Optional[SamplePoint]) -> str:
    if first is not None:
        return "different"
    return "equal" if compared else "inconclusive"


def compare(
    lhs: Expr,
    rhs: Expr,
    var: str,
    params: Sequence[ParamBound] = (),
    start: int = 0,
    stop: Optional[int] = None,
    samples: Optional[int] = None,
) -> Tuple[VerifyVerdict, List[SamplePoint]]:
    """
    Compare two expressions pointwise for var in [start, stop].

    Args:
        lhs: Left-hand side
        rhs: Right-hand side
        var: Free variable
        params: Parameters, instantiated within their bounds
        start: First point
        stop: Last point (default start + verify_window)
        samples: Number of parameter instantiations (default germ_samples)

    Returns:
        Verdict with the first differing point, and every sampled point.
        A run in which every point was a pole is inconclusive, not equal.
    """
    settings = get_settings()
    stop = start + settings.verify_window if stop is None else stop
    count = settings.germ_samples if samples is None else samples
    envs = parameter_samples(params, count)
    evaluator = Evaluator()
    points: List[SamplePoint] = []
    first: Optional[SamplePoint] = None
    compared = 0
    for env in envs:
        check_bounds(env, params)
        for k in range(start, stop + 1):
            point = dict(env)
            point[var] = k
            try:
                left = evaluator.evaluate(lhs, point)
                right = evaluator.evaluate(rhs, point)
            except PoleError as e:
                logger.warning(f"Skipping {var}={k} with params {env}: {e}")
                points.append(SamplePoint(point=k, params=dict(env)))
                continue
            compared += 1
            sample = SamplePoint(point=k, params=dict(env), lhs=str(left), rhs=str(right), equal=left == right)
            points.append(sample)
            if left != right and first is None:
                first = sample
    verdict = VerifyVerdict(
        identity=f"{pretty(lhs)} = {pretty(rhs)}",
        range=f"{start}:{stop}",
        status=_status(compared, first),
        var=var,
        start=start,
        stop=stop,
        samples=len(envs),
        compared=compared,
        first_difference=first,
    )
    logger.info(f"Compared {compared} of {len(points)} points: {verdict.status}")
    return verdict, points


def points_table(points: Sequence[SamplePoint]) -> pd.DataFrame:
    """One row per compared point, one column per parameter"""
    rows = []
    for p in points:
        row = {"point": p.point}
        row.update(p.params)
        row.update({"lhs": p.lhs, "rhs": p.rhs, "equal": p.equal})
        rows.append(row)
    return pd.DataFrame(rows)


def export_table(points: Sequence[SamplePoint], path: str) -> None:
    points_table(points).to_csv(path, index=False)
    logger.info(f"Wrote {len(points)} sampled points to {path}")


def verify_recurrence(recurrence: Recurrence, samples: int = 3) -> VerifyVerdict:
    """
    Re-check a recurrence and its certificate.

    The certificate identity is checked on k = lower..lower+certificate_window
    for n in 5, 8, 13; the recurrence against brute-force sums of the
    certificate's summand on the recurrence check window.
    """
    settings = get_settings()
    envs = parameter_samples(recurrence.params, samples)
    certificate = recurrence.certificate
    start = recurrence.validity
    stop = start + settings.recurrence_check_window - 1
    if certificate is None:
        raise ValueError("recurrence carries no certificate")
    header = dict(identity=recurrence.describe(), range=f"{start}:{stop}", var=recurrence.var, start=start, stop=stop)
    symbolic = certificate_symbolic(certificate, recurrence.var, recurrence.params)
    if symbolic is False:
        return VerifyVerdict(**header, status="different", samples=0, symbolic=False)
    for env in envs:
        for n in CERTIFICATE_POINTS:
            if not certificate_holds(certificate, recurrence.var, env, n, settings.certificate_window):
                return VerifyVerdict(
                    **header,
                    status="different",
                    samples=len(envs),
                    first_difference=SamplePoint(point=n, params=dict(env)),
                    symbolic=symbolic,
                )
    failure, compared = recurrence_holds(
        recurrence, certificate.summand, certificate.index, start, settings.recurrence_check_window, envs
    )
    first = SamplePoint(point=failure, params={}) if failure is not None else None
    return VerifyVerdict(
        **header,
        status=_status(compared, first),
        samples=len(envs),
        compared=compared,
        first_difference=first,
        symbolic=symbolic,
    )
