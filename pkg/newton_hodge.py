"""
Constructive Newton-Hodge decomposition.

A break of the Newton polygon is separated by Hensel-factoring the
characteristic polynomial of T = Π^q, where q is chosen so that an integer t
lies strictly between the two scaled slopes at the break.  The summands are
kernels of the two factors evaluated at T.
"""

import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple

from config import DECOMPOSITION_CONFIG, GENERATOR_CONFIG
from crystal import FCrystal
from errors import (HenselFailure, HypothesisFailed, NoBreak, NotInjective, PrecisionExhausted,
                    RankTooLarge, SplitNotDirect)
from matlat import (Lattice, MatrixW, charpoly, companion, evaluate_polynomial, random_unit_matrix,
                    smith, solve_integral, unit_inverse)
from polygon import SlopePolygon, fraction_text
from schemas import Verdict
from selfdual import SelfDualCrystal, validate
from witt import AtLeastN, RingParams, WittScalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BreakPointHypothesis:
    A: int
    B: Fraction
    is_break_on_newton: bool
    lies_on_hodge: bool

    @property
    def holds(self) -> bool:
        return self.is_break_on_newton and self.lies_on_hodge

    def to_dict(self) -> dict:
        return {
            "A": self.A,
            "B": fraction_text(self.B),
            "is_break_on_newton": self.is_break_on_newton,
            "lies_on_hodge": self.lies_on_hodge,
        }


def check_hypothesis(C: FCrystal, A: int, B) -> BreakPointHypothesis:
    B = Fraction(B)
    return BreakPointHypothesis(
        A=A,
        B=B,
        is_break_on_newton=C.newton_slopes().is_break_point(A, B),
        lies_on_hodge=C.hodge_slopes().lies_on(A, B),
    )


# --- slope factorization ---------------------------------------------

@dataclass(frozen=True)
class SlopeFactorization:
    """f = low·high modulo p^precision; low carries the smaller slopes"""
    low: List[WittScalar]
    high: List[WittScalar]
    precision: int


def separating_power(low_slope: Fraction, high_slope: Fraction) -> Tuple[int, int]:
    """Smallest q >= 1 with an integer t strictly between q·low_slope and q·high_slope"""
    q = 1
    while True:
        t = math.floor(q * low_slope) + 1
        if t < q * high_slope:
            return q, t
        q += 1


def _poly_mul(f: Sequence[WittScalar], g: Sequence[WittScalar], params: RingParams) -> List[WittScalar]:
    out = [params.zero] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x.is_zero():
            continue
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_divmod(f: Sequence[WittScalar], g: Sequence[WittScalar]) -> Tuple[List[WittScalar], List[WittScalar]]:
    """Division by a monic g"""
    params = f[0].params
    rem = list(f)
    dg = len(g) - 1
    quot = [params.zero] * max(len(f) - dg, 1)
    for k in range(len(f) - 1, dg - 1, -1):
        c = rem[k]
        quot[k - dg] = c
        if not c.is_zero():
            for i in range(dg + 1):
                rem[k - dg + i] = rem[k - dg + i] - c * g[i]
    return quot, rem[:dg]


def _hensel_split(F: List[WittScalar], k0: int) -> List[WittScalar]:
    """Monic G of degree k0 with F = G·H, starting from G = z^{k0}, by Newton iteration"""
    params = F[0].params
    n = len(F) - 1
    d = n - k0
    G = [params.zero] * k0 + [params.one]
    H = list(F[k0:])
    for step in range(params.N + 1):
        E = [f - gh for f, gh in zip(F, _poly_mul(G, H, params))]
        if all(e.is_zero() for e in E):
            logger.debug("Hensel split of degree %s converged after %s steps", k0, step)
            return G
        # Sylvester system  G·δH + H·δG = E  with deg δG < k0, deg δH <= d
        columns = []
        for j in range(k0):
            col = [params.zero] * (n + 1)
            for i, h in enumerate(H):
                col[i + j] = h
            columns.append(col)
        for j in range(d + 1):
            col = [params.zero] * (n + 1)
            for i, g in enumerate(G):
                col[i + j] = g
            columns.append(col)
        S = MatrixW.from_columns(params, columns, n + 1)
        rhs = MatrixW.from_columns(params, [E], n + 1)
        delta = unit_inverse(S) @ rhs
        for j in range(k0):
            G[j] = G[j] + delta[j, 0]
        for j in range(d + 1):
            H[j] = H[j] + delta[k0 + j, 0]
    raise HenselFailure(f"slope factorization did not converge in {params.N} steps")


def _integral_split(g: List[WittScalar], d: int, t: int) -> SlopeFactorization:
    """Split a monic g at abscissa d when the integer t separates the slopes there"""
    params = g[0].params
    N = params.N
    n = len(g) - 1
    k0 = n - d
    vals = [c.val() for c in g]
    weights = [v + t * k for k, v in enumerate(vals)]
    m = min(weights)
    if weights.count(m) != 1 or weights.index(m) != k0 or m >= N:
        raise PrecisionExhausted("break is not separated at this precision",
                                 {"weights": [int(w) for w in weights], "t": t, "N": N})
    N_F = N - m
    params_F = params.with_precision(N_F)
    F = []
    for k, c in enumerate(g):
        if t * k >= m:
            F.append((c * params.p_power(t * k - m)).with_params(params_F))
        else:
            F.append(c.shift_down(m - t * k).with_params(params_F))
    G = _hensel_split(F, k0)
    high = [G[j].with_params(params) * params.p_power(t * (k0 - j)) for j in range(k0 + 1)]
    low, rem = _poly_divmod(g, high)
    precision = min([N_F] + [int(r.val()) for r in rem])
    return SlopeFactorization(low=low, high=high, precision=precision)


def loss_budget(precision: int) -> int:
    """Valuation a vanishing column may lose and still count as zero"""
    return max(DECOMPOSITION_CONFIG["min_loss_budget"],
               math.floor(DECOMPOSITION_CONFIG["kernel_loss_fraction"] * precision))


def _kernel(X: MatrixW, dim: int, precision: int) -> Tuple[MatrixW, int]:
    """Saturated basis of ker X (expected dimension `dim`) and the precision it is known to"""
    budget = loss_budget(precision)
    sf = smith(X)
    exps = sf.divisor_exps
    n = X.ncols
    threshold = precision - budget
    kernel_idx = [i for i in range(n) if i >= len(exps) or exps[i] >= threshold]
    if len(kernel_idx) != dim:
        raise PrecisionExhausted(
            f"kernel has dimension {len(kernel_idx)} at precision {precision}, expected {dim}",
            {"divisor_exps": [int(e) for e in exps], "threshold": threshold},
        )
    top = min([precision] + [int(exps[i]) for i in kernel_idx if i < len(exps)])
    rest = max([0] + [int(exps[i]) for i in range(len(exps)) if i not in kernel_idx])
    return sf.right.select_columns(kernel_idx), top - rest


def slope_factor(f: List[WittScalar], d: int) -> SlopeFactorization:
    """Monic f = f_low·f_high with f_low of degree d carrying the d smallest slopes"""
    n = len(f) - 1
    polygon = SlopePolygon.from_valuations([c.val() for c in f])
    if not 0 < d < n or polygon.slopes[d - 1] >= polygon.slopes[d]:
        raise NoBreak(f"polygon {polygon.to_strings()} has no corner at {d}")
    q, t = separating_power(polygon.slopes[d - 1], polygon.slopes[d])
    if q == 1:
        return _integral_split(list(f), d, t)
    # roots of f are separated only after raising them to the q-th power
    C = companion(f)
    T = C ** q
    split = _integral_split(charpoly(T), d, t)
    K_low, prec_low = _kernel(evaluate_polynomial(split.low, T), d, split.precision)
    K_high, prec_high = _kernel(evaluate_polynomial(split.high, T), n - d, split.precision)
    precision = min(prec_low, prec_high)
    blocks = []
    for K in (K_low, K_high):
        X = solve_integral(K, C @ K, precision)
        if X is None:
            raise PrecisionExhausted("factor subspace is not stable at this precision")
        blocks.append(charpoly(X))
    return SlopeFactorization(low=blocks[0], high=blocks[1], precision=precision)


# --- decomposition ---------------------------------------------------

@dataclass
class Decomposition:
    hypothesis: BreakPointHypothesis
    M1: Lattice
    M2: Lattice
    F1: FCrystal
    F2: FCrystal
    basis: MatrixW
    precision: int
    certificates: List[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.certificates)

    def to_dict(self) -> dict:
        return {
            "hypothesis": self.hypothesis.to_dict(),
            "M1": self.M1.to_dict(),
            "M2": self.M2.to_dict(),
            "F1": self.F1.A.to_literal(),
            "F2": self.F2.A.to_literal(),
            "precision": self.precision,
        }


def _blocks(A: MatrixW, P: MatrixW, sizes: Sequence[int]) -> Tuple[MatrixW, List[Tuple[int, int]]]:
    """P^{-1}·A·σ(P) and the index ranges of its diagonal blocks"""
    Fmat = unit_inverse(P) @ A @ P.frobenius()
    ranges, start = [], 0
    for s in sizes:
        ranges.append((start, start + s))
        start += s
    return Fmat, ranges


def _off_diagonal_valuation(Fmat: MatrixW, ranges: Sequence[Tuple[int, int]]) -> int:
    best = AtLeastN(Fmat.params.N)
    for i, (r0, r1) in enumerate(ranges):
        for j, (c0, c1) in enumerate(ranges):
            if i != j and r1 > r0 and c1 > c0:
                v = Fmat.block(r0, r1, c0, c1).min_valuation()
                if v < best:
                    best = v
    return best


def _require_unit(P: MatrixW, what: str):
    exps = smith(P).divisor_exps
    if any(e != 0 for e in exps):
        raise SplitNotDirect(f"{what} do not span M at this precision",
                             {"divisor_exps": [int(e) for e in exps]})


def _piece(Fmat: MatrixW, r: Tuple[int, int], precision: int) -> FCrystal:
    block = Fmat.block(r[0], r[1], r[0], r[1]).with_params(Fmat.params.with_precision(precision))
    try:
        return FCrystal(block)
    except NotInjective as e:
        raise PrecisionExhausted(
            f"summand of rank {r[1] - r[0]} has no certified determinant at precision {precision}",
            {"divisor_exps": [int(d) for d in smith(block).divisor_exps], "precision": precision},
        ) from e


def factor_polygon(coeffs: Sequence[WittScalar], precision: int, scale: int) -> SlopePolygon:
    """Newton polygon of a factor known modulo p^precision, slopes divided by `scale`"""
    vals = [v if v < precision else AtLeastN(precision) for v in (c.val() for c in coeffs)]
    polygon = SlopePolygon.from_valuations(vals)
    return SlopePolygon(tuple(s / scale for s in polygon.slopes))


@dataclass(frozen=True)
class BreakSplit:
    """Saturated bases of the two summands at a Newton break, with their Newton polygons"""
    low_basis: MatrixW
    high_basis: MatrixW
    low_newton: SlopePolygon
    high_newton: SlopePolygon
    precision: int


def split_at_break(C: FCrystal, A: int) -> BreakSplit:
    """Separate the slopes before and after the Newton break at abscissa A"""
    n = C.n
    slopes = C.newton_slopes().slopes
    a = C.params.a
    q, t = separating_power(slopes[A - 1] * a, slopes[A] * a)
    T = C.twisted_power() ** q
    split = _integral_split(charpoly(T), A, t)
    K1, prec1 = _kernel(evaluate_polynomial(split.low, T), A, split.precision)
    K2, prec2 = _kernel(evaluate_polynomial(split.high, T), n - A, split.precision)
    logger.debug("split at A=%s with q=%s t=%s, precision %s/%s", A, q, t, prec1, prec2)
    return BreakSplit(
        low_basis=K1,
        high_basis=K2,
        low_newton=factor_polygon(split.low, split.precision, q * a),
        high_newton=factor_polygon(split.high, split.precision, q * a),
        precision=min(prec1, prec2),
    )


def decompose(C: FCrystal, A: int, B) -> Decomposition:
    """Katz's splitting M = M1 ⊕ M2 at a Newton break lying on the Hodge polygon"""
    hypothesis = check_hypothesis(C, A, B)
    if not hypothesis.holds:
        raise HypothesisFailed(
            f"({A}, {fraction_text(hypothesis.B)}) is "
            + ("not a break of the Newton polygon" if not hypothesis.is_break_on_newton
               else "not on the Hodge polygon")
        )
    split = split_at_break(C, A)
    precision = split.precision
    if precision <= 0:
        raise PrecisionExhausted("no precision left after the slope split", {"precision": precision})
    M1 = Lattice(split.low_basis, precision=precision).canonical()
    M2 = Lattice(split.high_basis, precision=precision).canonical()
    P = M1.basis.hstack(M2.basis)
    _require_unit(P, "recovered summands")

    Fmat, ranges = _blocks(C.A, P, [A, C.n - A])
    leak = _off_diagonal_valuation(Fmat, ranges)
    F1 = _piece(Fmat, ranges[0], precision)
    F2 = _piece(Fmat, ranges[1], precision)

    newton, hodge = C.newton_slopes(), C.hodge_slopes()
    # the summands' Newton polygons come from the factors of the split polynomial
    newton1, newton2 = split.low_newton, split.high_newton
    certificates = [
        Verdict(name="direct_sum", passed=True, details={"rank_M1": A, "rank_M2": C.n - A}),
        Verdict(name="f_stability", passed=leak >= precision,
                details={"off_diagonal_valuation": int(leak), "precision": precision}),
        Verdict(name="hodge_low", passed=F1.hodge_slopes().slopes == hodge.slopes[:A],
                details={"slopes": F1.hodge_slopes().to_strings()}),
        Verdict(name="hodge_high", passed=F2.hodge_slopes().slopes == hodge.slopes[A:],
                details={"slopes": F2.hodge_slopes().to_strings()}),
        Verdict(name="newton_low", passed=newton1.slopes == newton.slopes[:A],
                details={"slopes": newton1.to_strings()}),
        Verdict(name="newton_high", passed=newton2.slopes == newton.slopes[A:],
                details={"slopes": newton2.to_strings()}),
    ]
    block_diag = MatrixW.zeros(C.params, C.n, C.n)
    rows = [list(r) for r in block_diag.entries]
    for r0, r1 in ranges:
        for i in range(r0, r1):
            for j in range(r0, r1):
                rows[i][j] = Fmat[i, j]
    glued = P @ MatrixW.from_rows(C.params, rows) @ unit_inverse(P.frobenius())
    certificates.append(Verdict(name="reglue", passed=glued.agrees_with(C.A, precision),
                                details={"precision": precision}))
    certificates.append(Verdict(
        name="slope_additivity",
        passed=(newton1 + newton2) == newton
        and (F1.hodge_slopes() + F2.hodge_slopes()) == hodge,
    ))
    return Decomposition(hypothesis, M1, M2, F1, F2, P, precision, certificates)


# --- self-dual decomposition -----------------------------------------

@dataclass
class SelfDualDecomposition:
    hypothesis: BreakPointHypothesis
    symmetric_break: Tuple[int, Fraction]
    M1: Lattice
    M2: Lattice
    M3: Lattice
    MS1: Lattice
    MS2: Lattice
    flag: List[Lattice]
    S1: SelfDualCrystal
    S2: SelfDualCrystal
    precision: int
    certificates: List[Verdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.certificates)

    def to_dict(self) -> dict:
        return {
            "hypothesis": self.hypothesis.to_dict(),
            "symmetric_break": [self.symmetric_break[0], fraction_text(self.symmetric_break[1])],
            "M1": self.M1.to_dict(),
            "M2": self.M2.to_dict(),
            "M3": self.M3.to_dict(),
            "MS1": self.MS1.to_dict(),
            "MS2": self.MS2.to_dict(),
            "flag_ranks": [L.rank for L in self.flag],
            "FS1": self.S1.A.to_literal(),
            "FS2": self.S2.A.to_literal(),
            "GS1": self.S1.G.to_literal(),
            "GS2": self.S2.G.to_literal(),
            "precision": self.precision,
        }


def symmetric_break(n: int, m: int, A: int, B) -> Tuple[int, Fraction]:
    """(n - A, m·(n/2 - A) + B), the mirror of (A, B) under slope symmetry"""
    return n - A, Fraction(m) * (Fraction(n, 2) - A) + Fraction(B)


def _orthogonal_complement(B1: MatrixW, G: MatrixW, precision: int) -> MatrixW:
    """Basis of {x in M : <B1, x> = 0}"""
    X = B1.T @ G
    sf = smith(X)
    r = sf.rank_below(precision)
    if r != B1.ncols:
        raise PrecisionExhausted("pairing against the summand is degenerate at this precision",
                                 {"divisor_exps": [int(d) for d in sf.divisor_exps], "precision": precision})
    return sf.right.select_columns(range(r, X.ncols))


def self_dual_decompose(S: SelfDualCrystal, A: int, B) -> SelfDualDecomposition:
    """
    M = M_S1 ⊕ M_S2 with M_S1 = M1 ⊕ M3 of rank 2A and a self-dual middle piece.

    Only the break at A is split; the rest follows from the form:
    M1 ⊕ M2 = M1^⊥, M3 = (M2 ⊕ M3)^⊥ and M2 = (M1 ⊕ M3)^⊥.
    """
    n = S.n
    if 2 * A >= n:
        raise RankTooLarge(f"A = {A} must be below n/2 = {Fraction(n, 2)}")
    if A <= 0:
        raise HypothesisFailed(f"A = {A} must be positive")
    if S.kind == "orthogonal" and n % 2:
        raise HypothesisFailed("odd-rank orthogonal crystals are not decomposed")
    failed = [v.name for v in validate(S) if not v.passed]
    if failed:
        raise HypothesisFailed(f"crystal is not self-dual: {', '.join(failed)}")

    C = S.base
    m = S.m
    hypothesis = check_hypothesis(C, A, B)
    if not hypothesis.holds:
        raise HypothesisFailed(f"({A}, {fraction_text(hypothesis.B)}) is not a Newton break on the Hodge polygon")
    A2, B2 = symmetric_break(n, m, A, B)

    outer = decompose(C, A, B)          # M1 | M2 ⊕ M3
    precision = outer.precision
    G = S.G
    B1 = outer.M1.basis
    B23 = outer.M2.basis
    B12 = _orthogonal_complement(B1, G, precision)
    B3 = _orthogonal_complement(B23, G, precision)
    B2m = _orthogonal_complement(B1.hstack(B3), G, precision)
    if B2m.ncols != n - 2 * A:
        raise PrecisionExhausted(f"middle piece has rank {B2m.ncols}, expected {n - 2 * A}",
                                 {"precision": precision})
    M1 = outer.M1
    M2 = Lattice(B2m, precision=precision).canonical()
    M3 = Lattice(B3, precision=precision).canonical()
    M12 = Lattice(B12, precision=precision)
    B2m, B3 = M2.basis, M3.basis

    P = B1.hstack(B2m, B3)
    _require_unit(P, "outer and middle pieces")
    thirds, third_ranges = _blocks(S.A, P, [A, n - 2 * A, A])
    leak = _off_diagonal_valuation(thirds, third_ranges)

    MS1_basis = B1.hstack(B3)
    MS1 = Lattice(MS1_basis, precision=precision)
    MS2 = Lattice(B2m, precision=precision)

    params = S.params
    reduced = params.with_precision(precision)
    c = S.c.with_params(reduced)

    Fmat, ranges = _blocks(S.A, MS1_basis.hstack(B2m), [2 * A, n - 2 * A])
    G_S1 = MS1_basis.T @ G @ MS1_basis
    G_S2 = B2m.T @ G @ B2m
    S1 = SelfDualCrystal(_piece(Fmat, ranges[0], precision), G_S1.with_params(reduced), c, S.kind)
    S2 = SelfDualCrystal(_piece(Fmat, ranges[1], precision), G_S2.with_params(reduced), c, S.kind)

    newton, hodge = C.newton_slopes(), C.hodge_slopes()
    outer_newton = SlopePolygon(newton.slopes[:A] + newton.slopes[n - A:])
    outer_hodge = SlopePolygon(hodge.slopes[:A] + hodge.slopes[n - A:])
    middle_newton = SlopePolygon(newton.slopes[A:n - A])
    middle_hodge = SlopePolygon(hodge.slopes[A:n - A])

    pairing = B1.T @ G @ B1.hstack(B2m)
    cross = MS1_basis.T @ G @ B2m
    outer_pairing = B1.T @ G @ B3
    induced_1, induced_2 = validate(S1), validate(S2)

    certificates = [
        Verdict(name="rank_ms1", passed=MS1.rank == 2 * A, details={"rank": MS1.rank}),
        Verdict(name="f_stability", passed=leak >= precision,
                details={"off_diagonal_valuation": int(leak), "precision": precision}),
        Verdict(name="pairing_vanishing", passed=pairing.min_valuation() >= precision,
                details={"valuation": int(pairing.min_valuation())}),
        Verdict(name="perpendicular", passed=cross.min_valuation() >= precision,
                details={"valuation": int(cross.min_valuation())}),
        Verdict(name="form_unit_ms1", passed=_unit(G_S1)),
        Verdict(name="form_unit_ms2", passed=_unit(G_S2)),
        Verdict(name="outer_duality", passed=_unit(outer_pairing),
                details={"pairing": outer_pairing.to_literal()}),
        Verdict(name="induced_ms1", passed=all(v.passed for v in induced_1),
                details={v.name: v.passed for v in induced_1}),
        Verdict(name="induced_ms2", passed=all(v.passed for v in induced_2),
                details={v.name: v.passed for v in induced_2}),
        Verdict(name="flag",
                passed=M12.contains(M1) and M12.equals(Lattice(B1.hstack(B2m), precision=precision)),
                details={"ranks": [0, A, n - A, n]}),
        Verdict(name="newton_ms1", passed=S1.base.newton_slopes() == outer_newton,
                details={"slopes": S1.base.newton_slopes().to_strings()}),
        Verdict(name="hodge_ms1", passed=S1.base.hodge_slopes() == outer_hodge,
                details={"slopes": S1.base.hodge_slopes().to_strings()}),
        Verdict(name="newton_ms2", passed=S2.base.newton_slopes() == middle_newton,
                details={"slopes": S2.base.newton_slopes().to_strings()}),
        Verdict(name="hodge_ms2", passed=S2.base.hodge_slopes() == middle_hodge,
                details={"slopes": S2.base.hodge_slopes().to_strings()}),
    ]
    flag = [M1, M12, Lattice.standard(params, n)]
    return SelfDualDecomposition(
        hypothesis=hypothesis,
        symmetric_break=(A2, B2),
        M1=M1, M2=M2, M3=M3, MS1=MS1.canonical(), MS2=MS2.canonical(),
        flag=flag,
        S1=S1, S2=S2,
        precision=precision,
        certificates=certificates,
    )


def _unit(M: MatrixW) -> bool:
    return all(d == 0 for d in smith(M).divisor_exps)


# --- uniqueness ------------------------------------------------------

def uniqueness_probe(C: FCrystal, A: int, B, trials: int = None, seed: int = None) -> Verdict:
    """Re-run decompose after random changes of basis; every recovered M1 must coincide"""
    trials = DECOMPOSITION_CONFIG["probe_trials"] if trials is None else trials
    seed = GENERATOR_CONFIG["default_seed"] if seed is None else seed
    reference = decompose(C, A, B)
    mismatches = []
    for k in range(trials):
        rng = random.Random(f"{seed}:{k}")
        U = random_unit_matrix(C.params, C.n, rng, GENERATOR_CONFIG["elementary_steps"])
        moved = decompose(C.conjugate(U), A, B)
        precision = min(reference.precision, moved.precision)
        recovered = Lattice(U @ moved.M1.basis, precision=precision)
        if not recovered.equals(reference.M1):
            mismatches.append({"trial": k, "conjugator": U.to_literal()})
    return Verdict(name="uniqueness", passed=not mismatches,
                   details={"trials": trials, "mismatches": mismatches})
