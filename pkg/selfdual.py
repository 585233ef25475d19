"""
Self-dual F-crystals: a crystal with a form G and similitude scalar c
such that A^t·G·A = c·σ(G).
"""

import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from config import FORM_KINDS, GENERATOR_CONFIG, GENERATOR_MODES
from crystal import FCrystal
from errors import InputError, InvalidExponents, NotIntegral, PrecisionExhausted
from matlat import (MatrixW, inverse, perp_lattice, random_unit_matrix, smith,
                    unit_inverse)
from schemas import Verdict
from witt import AtLeastN, RingParams, WittScalar, random_scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SelfDualCrystal:
    """(M, F, G, c) in collapsed matrix form; F_{M*} is recovered as c·(A^{-1})^t"""
    base: FCrystal
    G: MatrixW
    c: WittScalar
    kind: str

    def __post_init__(self):
        if self.kind not in FORM_KINDS:
            raise InputError(f"unknown form kind {self.kind!r}")
        if not self.G.is_square or self.G.nrows != self.base.n:
            raise InputError("form matrix must be n x n")
        if isinstance(self.c.val(), AtLeastN):
            raise InputError("similitude scalar c vanishes at the working precision")

    @property
    def A(self) -> MatrixW:
        return self.base.A

    @property
    def params(self) -> RingParams:
        return self.base.params

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def m(self) -> int:
        """ν(c)"""
        return int(self.c.val())

    def similitude_defect(self) -> MatrixW:
        return self.A.T @ self.G @ self.A - self.G.frobenius().scale(self.c)

    def dual_frobenius(self) -> Tuple[MatrixW, int]:
        """Matrix of F_{M*} in the dual basis and the precision it is known to"""
        scaled = inverse(self.A).scale(self.c)
        return scaled.integral().T, scaled.integral_precision

    def to_dict(self) -> dict:
        data = self.base.to_dict()
        data.update(form=self.G.to_literal(), c=self.c.to_literal(), kind=self.kind)
        return data


def _is_unit_matrix(M: MatrixW) -> bool:
    return all(d == 0 for d in smith(M).divisor_exps)


def validate(S: SelfDualCrystal) -> List[Verdict]:
    """One verdict per defining identity of the quintuple"""
    verdicts = []
    defect = S.similitude_defect()
    verdicts.append(Verdict(name="similitude", passed=defect.is_zero(),
                            details={"defect_valuation": int(defect.min_valuation())}))

    sign = -1 if S.kind == "symplectic" else 1
    kind_ok = S.G.T == S.G.scale(sign)
    verdicts.append(Verdict(name="kind", passed=kind_ok, details={"kind": S.kind}))

    verdicts.append(Verdict(name="form_unit", passed=_is_unit_matrix(S.G),
                            details={"divisor_exps": [int(d) for d in smith(S.G).divisor_exps]}))

    try:
        D, precision = S.dual_frobenius()
        identity = MatrixW.identity(S.params, S.n).scale(S.c)
        verdicts.append(Verdict(name="dual_frobenius",
                                passed=(S.A.T @ D).agrees_with(identity, precision),
                                details={"matrix": D.to_literal(), "precision": precision}))
    except (NotIntegral, PrecisionExhausted) as e:
        verdicts.append(Verdict(name="dual_frobenius", passed=False, details={"error": str(e)}))
    return verdicts


def slope_symmetry_check(S: SelfDualCrystal) -> List[Verdict]:
    """λ_i + λ_{n-i+1} = ν(c) and a_i + a_{n-i+1} = ν(c)"""
    verdicts = []
    for name, polygon in (("newton_symmetry", S.base.newton_slopes()),
                          ("hodge_symmetry", S.base.hodge_slopes())):
        witness = polygon.symmetry_defect(S.m)
        details = {"slopes": polygon.to_strings(), "m": S.m}
        if witness is not None:
            details["witness"] = witness
        verdicts.append(Verdict(name=name, passed=witness is None, details=details))
    return verdicts


def frobenius_lattice_perp(S: SelfDualCrystal) -> Verdict:
    """F(M)^⊥ = c^{-1}·F(M), compared by mutual containment"""
    image = S.base.image_lattice()
    perp = perp_lattice(image, S.G)
    # a unit factor of c does not move a lattice
    target = image.scaled(-S.m)
    passed = perp.equals(target)
    return Verdict(name="frobenius_lattice_perp", passed=passed,
                   details={"perp": perp.to_dict(), "scaled_image": target.to_dict()})


class BilinearForm:
    """⟨x, y⟩ = x^t·G·y on column vectors"""

    def __init__(self, S: SelfDualCrystal):
        self.S = S

    def __call__(self, x: MatrixW, y: MatrixW) -> WittScalar:
        return (x.T @ self.S.G @ y)[0, 0]

    def similitude_holds(self, x: MatrixW, y: MatrixW) -> bool:
        """⟨Fx, Fy⟩ = c·σ(⟨x, y⟩)"""
        F = self.S.base
        return self(F.apply(x), F.apply(y)) == self.S.c * self(x, y).frobenius()


def form_from_quintuple(S: SelfDualCrystal) -> BilinearForm:
    return BilinearForm(S)


def duality_identity_holds(S: SelfDualCrystal) -> bool:
    """G^{-1}·(c·(A^{-1})^t)·σ(G) = A"""
    D, precision = S.dual_frobenius()
    return (unit_inverse(S.G) @ D @ S.G.frobenius()).agrees_with(S.A, precision)


# --- generator --------------------------------------------------------

def _antidiagonal(params: RingParams, h: int) -> MatrixW:
    return MatrixW.from_rows(params, [[1 if i + j == h - 1 else 0 for j in range(h)] for i in range(h)])


def standard_form(params: RingParams, n: int, kind: str = "symplectic") -> MatrixW:
    """Antidiagonal form: [[0, w], [-w, 0]] for symplectic, [[0, w], [w, 0]] for orthogonal"""
    if kind == "symplectic" and n % 2:
        raise InputError("symplectic forms need even rank")
    sign = -1 if kind == "symplectic" else 1
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][n - 1 - i] = sign if (kind == "symplectic" and i >= n // 2) else 1
    return MatrixW.from_rows(params, rows, ncols=n)


def _block(params: RingParams, tl: MatrixW, tr: MatrixW, bl: MatrixW, br: MatrixW) -> MatrixW:
    rows = [list(a) + list(b) for a, b in zip(tl.entries, tr.entries)]
    rows += [list(a) + list(b) for a, b in zip(bl.entries, br.entries)]
    return MatrixW.from_rows(params, rows)


def _random_symmetric(params: RingParams, h: int, rng: random.Random, antisymmetric: bool) -> MatrixW:
    rows = [[params.zero] * h for _ in range(h)]
    for i in range(h):
        for j in range(i, h):
            if i == j and antisymmetric:
                continue
            t = random_scalar(params, rng)
            rows[i][j] = t
            rows[j][i] = -t if antisymmetric else t
    return MatrixW.from_rows(params, rows, ncols=h)


def random_group_element(params: RingParams, n: int, kind: str, rng: random.Random,
                         steps: Optional[int] = None) -> MatrixW:
    """Random K with K^t·J·K = J from Levi and Siegel-unipotent generators"""
    steps = GENERATOR_CONFIG["generator_steps"] if steps is None else steps
    h = n // 2
    w = _antidiagonal(params, h)
    I = MatrixW.identity(params, h)
    Z = MatrixW.zeros(params, h, h)
    antisymmetric = kind == "orthogonal"
    K = MatrixW.identity(params, n)
    for _ in range(steps):
        g = random_unit_matrix(params, h, rng, GENERATOR_CONFIG["elementary_steps"])
        levi = _block(params, g, Z, Z, w @ unit_inverse(g).T @ w)
        upper = _block(params, I, w @ _random_symmetric(params, h, rng, antisymmetric), Z, I)
        lower = _block(params, I, Z, w @ _random_symmetric(params, h, rng, antisymmetric), I)
        K = K @ levi @ upper @ lower
    return K


def check_exponents(mu: Sequence[int], n: int) -> int:
    """Return m when μ is nondecreasing, nonnegative and μ_i + μ_{n+1-i} = m"""
    if len(mu) != n:
        raise InvalidExponents(f"expected {n} exponents, got {len(mu)}")
    if any(x < 0 for x in mu) or any(x > y for x, y in zip(mu, mu[1:])):
        raise InvalidExponents(f"exponents {list(mu)} must be nonnegative and nondecreasing")
    m = mu[0] + mu[-1]
    if any(mu[i] + mu[n - 1 - i] != m for i in range(n)):
        raise InvalidExponents(f"exponents {list(mu)} are not symmetric")
    return m


def generate(params: RingParams, n: int, mu: Sequence[int], seed: int,
             kind: str = "symplectic", mode: str = "cartan", unit: int = 1) -> SelfDualCrystal:
    """
    Random self-dual crystal with Hodge slopes μ and c = p^m·unit.

    cartan:    A = K1·diag(p^μ)·L·K2
    conjugate: A = U^{-1}·diag(p^μ)·L·σ(U), so Newton = Hodge
    where L = diag(I, unit·I) carries the unit part of c.
    """
    if mode not in GENERATOR_MODES:
        raise InputError(f"unknown generator mode {mode!r}")
    if kind not in FORM_KINDS:
        raise InputError(f"unknown form kind {kind!r}")
    if n % 2:
        raise InputError("the generator needs even rank")
    m = check_exponents(mu, n)
    if m >= params.N:
        raise InvalidExponents(f"ν(c) = {m} exceeds the working precision {params.N}")
    u = params.scalar(unit)
    if not u.is_unit():
        raise InputError(f"similitude unit {unit} is divisible by p")

    rng = random.Random(seed)
    h = n // 2
    core = MatrixW.diagonal(params, [params.p_power(x) * (u if i >= h else 1) for i, x in enumerate(mu)])
    if mode == "cartan":
        A = random_group_element(params, n, kind, rng) @ core @ random_group_element(params, n, kind, rng)
    else:
        U = random_group_element(params, n, kind, rng)
        A = unit_inverse(U) @ core @ U.frobenius()
    c = params.p_power(m) * u
    logger.debug("generated %s crystal n=%s mu=%s seed=%s mode=%s", kind, n, list(mu), seed, mode)
    return SelfDualCrystal(FCrystal(A), standard_form(params, n, kind), c, kind)
