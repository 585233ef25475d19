"""
F-crystals over F_{p^a}: a σ-linear injection F(v) = A·σ(v) on W^n
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from config import PRECISION_CONFIG
from errors import EndpointMismatch, NotInjective, NotIntegral
from matlat import Lattice, MatrixW, column_span, inverse, smith, solve_integral, unit_inverse, charpoly
from polygon import SlopePolygon, dominance_defect, fraction_text
from schemas import Verdict
from witt import AtLeastN, RingParams, WittScalar, embed_scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FCrystal:
    """Rank-n crystal given by its Frobenius matrix in a fixed basis"""
    A: MatrixW

    def __post_init__(self):
        if not self.A.is_square:
            raise ValueError("Frobenius matrix must be square")
        v = self.det_valuation
        if isinstance(v, AtLeastN) or v >= self.params.N:
            raise NotInjective(f"det A vanishes modulo p^{self.params.N}")
        margin = PRECISION_CONFIG["heuristic_margin"]
        if self.params.N <= v * self.n + margin:
            logger.warning("precision N=%s is below the heuristic bound val(det A)*n + %s = %s",
                           self.params.N, margin, v * self.n + margin)

    @property
    def params(self) -> RingParams:
        return self.A.params

    @property
    def n(self) -> int:
        return self.A.nrows

    @cached_property
    def smith_form(self):
        return smith(self.A)

    @cached_property
    def det_valuation(self) -> int:
        exps = self.smith_form.divisor_exps
        if any(isinstance(d, AtLeastN) for d in exps):
            return AtLeastN(self.params.N)
        return sum(exps)

    def apply(self, v: MatrixW) -> MatrixW:
        """F on column vectors: A·σ(v)"""
        return self.A @ v.frobenius()

    def hodge_slopes(self) -> SlopePolygon:
        return SlopePolygon(tuple(int(d) for d in self.smith_form.divisor_exps))

    def twisted_power(self) -> MatrixW:
        """Π = A·σ(A)···σ^{a-1}(A), the matrix of the linear map F^a"""
        result = self.A
        for k in range(1, self.params.a):
            result = result @ self.A.frobenius(k)
        return result

    def newton_slopes(self) -> SlopePolygon:
        coeffs = charpoly(self.twisted_power())
        polygon = SlopePolygon.from_valuations([c.val() for c in coeffs])
        a = self.params.a
        return SlopePolygon(tuple(s / a for s in polygon.slopes))

    def image_lattice(self) -> Lattice:
        """F(M) as a lattice in M"""
        return column_span(self.A)

    def dual(self, c: WittScalar) -> "FCrystal":
        """Crystal with matrix c·(A^{-1})^t"""
        scaled = inverse(self.A).scale(c)
        try:
            D = scaled.integral().T
            return FCrystal(D.with_params(self.params.with_precision(scaled.integral_precision)))
        except NotIntegral as e:
            raise NotIntegral(f"c·(A^-1)^t is not integral for val(c) = {c.val()}") from e

    def conjugate(self, U: MatrixW) -> "FCrystal":
        """Matrix of F in the basis given by the columns of U: U^{-1}·A·σ(U)"""
        return FCrystal(unit_inverse(U) @ self.A @ U.frobenius())

    def base_extend(self, k: int) -> "FCrystal":
        """The same matrix read over W(F_{p^{ka}})"""
        small = self.params
        big = RingParams.create(small.p, small.a * k, small.N)
        rows = [[embed_scalar(x, big) for x in row] for row in self.A.entries]
        return FCrystal(MatrixW.from_rows(big, rows, ncols=self.n))

    def restrict(self, basis: MatrixW, precision: Optional[int] = None) -> "FCrystal":
        """Matrix X with A·σ(B) = B·X for an F-stable saturated sublattice with basis B"""
        X = solve_integral(basis, self.A @ basis.frobenius(), precision)
        if X is None:
            raise NotIntegral("sublattice is not F-stable")
        if precision is not None and precision < self.params.N:
            X = X.with_params(self.params.with_precision(precision))
        return FCrystal(X)

    def with_precision(self, N: int) -> "FCrystal":
        return FCrystal(self.A.with_params(self.params.with_precision(N)))

    def to_dict(self) -> dict:
        return {
            "p": self.params.p,
            "a": self.params.a,
            "N": self.params.N,
            "modulus": list(self.params.modulus),
            "n": self.n,
            "matrix": self.A.to_literal(),
        }


def mazur_check(C: FCrystal) -> Verdict:
    """Newton polygon lies on or above the Hodge polygon with common endpoint val(det A)"""
    newton, hodge = C.newton_slopes(), C.hodge_slopes()
    details = {
        "newton": newton.to_strings(),
        "hodge": hodge.to_strings(),
        "det_valuation": int(C.det_valuation),
    }
    if newton.endpoint != C.det_valuation or hodge.endpoint != C.det_valuation:
        details.update(failure="endpoint", newton_end=fraction_text(newton.endpoint),
                       hodge_end=fraction_text(hodge.endpoint))
        return Verdict(name="mazur", passed=False, details=details)
    try:
        witness = dominance_defect(newton, hodge)
    except EndpointMismatch as e:
        details.update(failure="endpoint", newton_end=e.upper_end, hodge_end=e.lower_end)
        return Verdict(name="mazur", passed=False, details=details)
    if witness is not None:
        details.update(failure="interior", witness=witness)
        return Verdict(name="mazur", passed=False, details=details)
    return Verdict(name="mazur", passed=True, details=details)


def crystal_from_literal(params: RingParams, literal) -> FCrystal:
    return FCrystal(MatrixW.from_literal(literal, params))
