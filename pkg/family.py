"""
Fiberwise harness for finite families of self-dual crystals sharing a break point
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from errors import FamilyMismatch, HypothesisFailed, PrecisionExhausted
from newton_hodge import check_hypothesis, self_dual_decompose
from polygon import SlopePolygon
from schemas import Verdict
from selfdual import SelfDualCrystal, validate

logger = logging.getLogger(__name__)

DECOMPOSED = "decomposed"
HYPOTHESIS_VIOLATION = "hypothesis_violation"
INVALID = "invalid"
PRECISION_EXHAUSTED = "precision_exhausted"


@dataclass(frozen=True)
class CrystalFamily:
    fibers: Tuple[SelfDualCrystal, ...]
    A: int
    B: Fraction

    def __post_init__(self):
        if not self.fibers:
            raise FamilyMismatch("a family needs at least one fiber")
        first = self.fibers[0]
        key = (first.params, first.n, first.kind, first.m)
        for i, S in enumerate(self.fibers[1:], start=1):
            if (S.params, S.n, S.kind, S.m) != key:
                raise FamilyMismatch(
                    f"fiber {i} does not share (p, a, N, modulus, n, kind, val(c)) with fiber 0"
                )
        object.__setattr__(self, "B", Fraction(self.B))


@dataclass
class FiberResult:
    index: int
    status: str
    verdicts: List[Verdict] = field(default_factory=list)
    message: str = ""
    data: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "status": self.status,
            "message": self.message,
            "verdicts": [v.model_dump() for v in self.verdicts],
            "data": self.data,
        }


@dataclass
class FamilyReport:
    fibers: List[FiberResult]

    @property
    def verdicts(self) -> List[Verdict]:
        return [
            Verdict(name=f"fiber_{r.index}", passed=r.status == DECOMPOSED,
                    details={"status": r.status, "message": r.message})
            for r in self.fibers
        ]

    def statuses(self) -> List[str]:
        return [r.status for r in self.fibers]


def _conclusions(S: SelfDualCrystal, A: int, decomposition) -> List[Verdict]:
    """Per-fiber versions of the filtration theorem's conclusions"""
    n = S.n
    newton = S.base.newton_slopes()
    middle = decomposition.S2
    middle_slopes = middle.base.newton_slopes()
    by_name = {v.name: v for v in decomposition.certificates}
    return [
        Verdict(name="middle_slopes",
                passed=middle_slopes == SlopePolygon(newton.slopes[A:n - A]),
                details={"slopes": middle_slopes.to_strings()}),
        Verdict(name="middle_self_dual",
                passed=all(v.passed for v in validate(middle))),
        Verdict(name="outer_duality", passed=by_name["outer_duality"].passed,
                details=by_name["outer_duality"].details),
    ]


def check_fiber(index: int, S: SelfDualCrystal, A: int, B: Fraction) -> FiberResult:
    failed = [v.name for v in validate(S) if not v.passed]
    if failed:
        return FiberResult(index, INVALID, message=f"fails {', '.join(failed)}")
    try:
        hypothesis = check_hypothesis(S.base, A, B)
    except PrecisionExhausted as e:
        return FiberResult(index, PRECISION_EXHAUSTED, message=str(e))
    newton = S.base.newton_slopes()
    data = {"newton": newton.to_strings(), "hodge": S.base.hodge_slopes().to_strings(),
            "hypothesis": hypothesis.to_dict()}
    if not hypothesis.holds:
        reason = "no break" if not hypothesis.is_break_on_newton else "not on the Hodge polygon"
        return FiberResult(index, HYPOTHESIS_VIOLATION, message=reason, data=data)
    try:
        decomposition = self_dual_decompose(S, A, B)
    except HypothesisFailed as e:
        return FiberResult(index, HYPOTHESIS_VIOLATION, message=str(e), data=data)
    except PrecisionExhausted as e:
        return FiberResult(index, PRECISION_EXHAUSTED, message=str(e), data=data)
    verdicts = decomposition.certificates + _conclusions(S, A, decomposition)
    data["decomposition"] = decomposition.to_dict()
    status = DECOMPOSED if all(v.passed for v in verdicts) else INVALID
    message = "" if status == DECOMPOSED else "certificate failure"
    return FiberResult(index, status, verdicts, message, data)


def family_filter_check(family: CrystalFamily) -> FamilyReport:
    """Check the break-point hypothesis and run the self-dual decomposition on every fiber"""
    results = []
    for i, S in enumerate(family.fibers):
        result = check_fiber(i, S, family.A, family.B)
        logger.info("fiber %s: %s %s", i, result.status, result.message)
        results.append(result)
    return FamilyReport(results)
