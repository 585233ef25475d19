import hashlib
import json
import logging
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from config import EXIT_CODES, GENERATOR_CONFIG, REPORT_CONFIG
from crystal import FCrystal, mazur_check
from errors import FCrystalError, HypothesisFailed, InputError, NoBreak, PrecisionExhausted
from family import (DECOMPOSED, HYPOTHESIS_VIOLATION, PRECISION_EXHAUSTED, CrystalFamily,
                    family_filter_check)
from matlat import MatrixW
from newton_hodge import decompose, self_dual_decompose, uniqueness_probe
from polygon import fraction_text
from schemas import CrystalFile, FamilyFile, Report, Verdict, parse_file
from selfdual import (SelfDualCrystal, duality_identity_holds, frobenius_lattice_perp, generate,
                      slope_symmetry_check, validate)
from witt import RingParams, parse_scalar

logger = logging.getLogger(__name__)


def parse_break(text: str) -> Tuple[int, Fraction]:
    """'A,B' with B an integer or a fraction such as 3/2"""
    try:
        a_text, b_text = text.split(",")
        return int(a_text), Fraction(b_text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"break point must look like A,B (got {text!r})") from e


def exit_code_for(verdicts: Sequence[Verdict]) -> int:
    return EXIT_CODES["pass"] if all(v.passed for v in verdicts) else EXIT_CODES["verdict_failure"]


def exit_code_for_error(error: Exception) -> int:
    if isinstance(error, (HypothesisFailed, NoBreak)):
        return EXIT_CODES["hypothesis_violation"]
    if isinstance(error, PrecisionExhausted):
        return EXIT_CODES["precision_exhausted"]
    if isinstance(error, InputError):
        return EXIT_CODES["usage"]
    return EXIT_CODES["verdict_failure"]


class AnalysisService:
    """Loads input files, runs the library operations and assembles reports"""

    def __init__(self, seed: Optional[int] = None):
        self.seed = GENERATOR_CONFIG["default_seed"] if seed is None else seed

    # --- loading ---------------------------------------------------------

    @staticmethod
    def digest(raw: bytes) -> str:
        return hashlib.new(REPORT_CONFIG["digest"], raw).hexdigest()

    @staticmethod
    def ring_params(parsed) -> RingParams:
        return RingParams.create(parsed.p, parsed.a, parsed.N, parsed.modulus)

    def load_crystal(self, raw: bytes) -> Tuple[FCrystal, Optional[SelfDualCrystal]]:
        """Crystal file; the self-dual part is returned when form, c and kind are present"""
        parsed = parse_file(CrystalFile, raw)
        params = self.ring_params(parsed)
        A = MatrixW.from_literal(parsed.matrix, params)
        if A.nrows != parsed.n or A.ncols != parsed.n:
            raise InputError(f"matrix is {A.nrows}x{A.ncols}, expected n = {parsed.n}")
        C = FCrystal(A)
        if not parsed.is_self_dual:
            return C, None
        G = MatrixW.from_literal(parsed.form, params)
        return C, SelfDualCrystal(C, G, parse_scalar(parsed.c, params), parsed.kind)

    def load_family(self, raw: bytes) -> CrystalFamily:
        parsed = parse_file(FamilyFile, raw)
        shared = parsed.shared
        params = self.ring_params(shared)
        A, B = int(shared.breakpoint[0]), Fraction(str(shared.breakpoint[1]))
        fibers = []
        for entry in parsed.fibers:
            matrix = MatrixW.from_literal(entry.matrix, params)
            if matrix.nrows != shared.n:
                raise InputError(f"fiber matrix has rank {matrix.nrows}, expected {shared.n}")
            fibers.append(SelfDualCrystal(FCrystal(matrix), MatrixW.from_literal(entry.form, params),
                                          parse_scalar(entry.c, params), shared.kind))
        return CrystalFamily(tuple(fibers), A, B)

    # --- commands ------------------------------------------------------

    def run(self, command: str, options: dict, raw: Optional[bytes],
            action: Callable[[Report], None]) -> Report:
        """Run `action` against a fresh report, turning package errors into exit codes"""
        report = Report(command=command, options=options,
                        input_digest=self.digest(raw) if raw is not None else None)
        try:
            action(report)
        except FCrystalError as e:
            logger.debug("%s failed: %s", command, e)
            report.exit_code = exit_code_for_error(e)
            report.verdicts.append(Verdict(
                name=type(e).__name__,
                passed=False,
                details={"message": str(e), **getattr(e, "diagnostics", {})},
            ))
        return report

    def info(self, raw: bytes) -> Report:
        def action(report: Report):
            C, S = self.load_crystal(raw)
            params = C.params
            newton = C.newton_slopes()
            report.data = {
                "p": params.p,
                "a": params.a,
                "N": params.N,
                "modulus": list(params.modulus),
                "n": C.n,
                "det_valuation": int(C.det_valuation),
                "hodge": C.hodge_slopes().to_strings(),
                "newton": newton.to_strings(),
                "newton_breaks": [[i, fraction_text(y)] for i, y in newton.break_points()],
                "self_dual": S is not None,
            }
            report.achieved_precision = params.N

        return self.run("info", {}, raw, action)

    def validate(self, raw: bytes) -> Report:
        def action(report: Report):
            C, S = self.load_crystal(raw)
            if S is None:
                raise InputError("validate needs form, c and kind")
            verdicts = validate(S) + slope_symmetry_check(S) + [mazur_check(C), frobenius_lattice_perp(S)]
            passed = {v.name: v.passed for v in verdicts}
            if passed["similitude"] and passed["dual_frobenius"]:
                verdicts.append(Verdict(name="duality_identity", passed=duality_identity_holds(S)))
            report.verdicts.extend(verdicts)
            report.achieved_precision = C.params.N
            report.exit_code = exit_code_for(report.verdicts)

        return self.run("validate", {}, raw, action)

    def decompose(self, raw: bytes, breakpoint: str, self_dual: bool = False, probe: int = 0) -> Report:
        options = {"break": breakpoint, "self_dual": self_dual, "probe": probe, "seed": self.seed}

        def action(report: Report):
            A, B = parse_break(breakpoint)
            C, S = self.load_crystal(raw)
            if self_dual:
                if S is None:
                    raise InputError("--self-dual needs form, c and kind")
                result = self_dual_decompose(S, A, B)
            else:
                result = decompose(C, A, B)
            report.verdicts.extend(result.certificates)
            if probe:
                report.verdicts.append(uniqueness_probe(C, A, B, probe, self.seed))
            report.data = result.to_dict()
            report.achieved_precision = result.precision
            report.exit_code = exit_code_for(report.verdicts)

        return self.run("decompose", options, raw, action)

    def family(self, raw: bytes) -> Report:
        def action(report: Report):
            family = self.load_family(raw)
            result = family_filter_check(family)
            report.verdicts.extend(result.verdicts)
            report.data = {
                "breakpoint": [family.A, fraction_text(family.B)],
                "fibers": [r.to_dict() for r in result.fibers],
            }
            report.achieved_precision = min(
                [r.data["decomposition"]["precision"] for r in result.fibers if r.status == DECOMPOSED]
                or [family.fibers[0].params.N]
            )
            statuses = result.statuses()
            if PRECISION_EXHAUSTED in statuses:
                report.exit_code = EXIT_CODES["precision_exhausted"]
            elif HYPOTHESIS_VIOLATION in statuses:
                report.exit_code = EXIT_CODES["hypothesis_violation"]
            else:
                report.exit_code = exit_code_for(report.verdicts)

        return self.run("family", {}, raw, action)

    def generate(self, p: int, a: int, N: Optional[int], n: int, mu: List[int],
                 kind: str = "symplectic", mode: str = "cartan", unit: int = 1) -> str:
        """Generated self-dual instance as crystal-file JSON"""
        params = RingParams.create(p, a, N)
        S = generate(params, n, mu, self.seed, kind=kind, mode=mode, unit=unit)
        return json.dumps(S.to_dict(), indent=REPORT_CONFIG["indent"]) + "\n"
