"""
Matrices over W(F_{p^a}) mod p^N and lattices in the isocrystal V = M ⊗ K.

K-level objects never hold negative valuations directly: a lattice or an inverse
matrix is a pair (denominator exponent e, integral matrix B) meaning p^{-e}·B.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

from errors import InputError, NotAUnit, NotIntegral, PrecisionExhausted
from witt import AtLeastN, RingParams, WittScalar, parse_scalar, random_scalar, random_unit

logger = logging.getLogger(__name__)

Scalarish = Union[WittScalar, int]


def _dot(params: RingParams, left: Sequence[WittScalar], right: Sequence[WittScalar]) -> WittScalar:
    total = params.zero
    for x, y in zip(left, right):
        if not x.is_zero() and not y.is_zero():
            total = total + x * y
    return total


@dataclass(frozen=True, eq=False)
class MatrixW:
    """nrows × ncols grid of WittScalar entries sharing one RingParams"""
    params: RingParams
    nrows: int
    ncols: int
    entries: Tuple[Tuple[WittScalar, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.nrows or any(len(row) != self.ncols for row in self.entries):
            raise InputError(f"ragged matrix, expected {self.nrows}x{self.ncols}")

    # --- constructors -------------------------------------------------

    @classmethod
    def from_rows(cls, params: RingParams, rows: Sequence[Sequence[Scalarish]],
                  ncols: Optional[int] = None) -> "MatrixW":
        entries = tuple(
            tuple(x if isinstance(x, WittScalar) else params.scalar(x) for x in row)
            for row in rows
        )
        if ncols is None:
            ncols = len(entries[0]) if entries else 0
        return cls(params, len(entries), ncols, entries)

    @classmethod
    def from_columns(cls, params: RingParams, columns: Sequence[Sequence[Scalarish]],
                     nrows: int) -> "MatrixW":
        rows = [[col[i] for col in columns] for i in range(nrows)]
        return cls.from_rows(params, rows, ncols=len(columns))

    @classmethod
    def zeros(cls, params: RingParams, nrows: int, ncols: int) -> "MatrixW":
        zero = params.zero
        return cls(params, nrows, ncols, tuple((zero,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, params: RingParams, n: int) -> "MatrixW":
        return cls.diagonal(params, [params.one] * n)

    @classmethod
    def diagonal(cls, params: RingParams, values: Sequence[Scalarish]) -> "MatrixW":
        n = len(values)
        rows = [[values[i] if i == j else 0 for j in range(n)] for i in range(n)]
        return cls.from_rows(params, rows, ncols=n)

    @classmethod
    def p_power_diagonal(cls, params: RingParams, exponents: Sequence[int]) -> "MatrixW":
        return cls.diagonal(params, [params.p_power(e) for e in exponents])

    @classmethod
    def from_literal(cls, literal, params: RingParams) -> "MatrixW":
        """Row-major nested arrays of scalar literals"""
        if not isinstance(literal, (list, tuple)) or not all(isinstance(r, (list, tuple)) for r in literal):
            raise InputError("matrix literal must be a list of rows")
        rows = [[parse_scalar(x, params) for x in row] for row in literal]
        return cls.from_rows(params, rows)

    # --- access -------------------------------------------------------

    def __getitem__(self, index: Tuple[int, int]) -> WittScalar:
        i, j = index
        return self.entries[i][j]

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def column(self, j: int) -> Tuple[WittScalar, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> List[Tuple[WittScalar, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def select_columns(self, indices: Sequence[int]) -> "MatrixW":
        return MatrixW.from_columns(self.params, [self.column(j) for j in indices], self.nrows)

    def block(self, r0: int, r1: int, c0: int, c1: int) -> "MatrixW":
        rows = [row[c0:c1] for row in self.entries[r0:r1]]
        return MatrixW.from_rows(self.params, rows, ncols=c1 - c0)

    def hstack(self, *others: "MatrixW") -> "MatrixW":
        rows = [list(row) for row in self.entries]
        ncols = self.ncols
        for other in others:
            for i in range(self.nrows):
                rows[i].extend(other.entries[i])
            ncols += other.ncols
        return MatrixW.from_rows(self.params, rows, ncols=ncols)

    @property
    def T(self) -> "MatrixW":
        return MatrixW.from_rows(self.params, self.columns(), ncols=self.nrows)

    # --- arithmetic ---------------------------------------------------

    def _check(self, other: "MatrixW"):
        if other.params is not self.params and other.params != self.params:
            raise ValueError("matrices live over different rings")

    def __add__(self, other: "MatrixW") -> "MatrixW":
        self._check(other)
        rows = [[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        return MatrixW.from_rows(self.params, rows, ncols=self.ncols)

    def __sub__(self, other: "MatrixW") -> "MatrixW":
        self._check(other)
        rows = [[x - y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)]
        return MatrixW.from_rows(self.params, rows, ncols=self.ncols)

    def __neg__(self) -> "MatrixW":
        return MatrixW.from_rows(self.params, [[-x for x in r] for r in self.entries], ncols=self.ncols)

    def __matmul__(self, other: "MatrixW") -> "MatrixW":
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        cols = other.columns()
        rows = [[_dot(self.params, r, c) for c in cols] for r in self.entries]
        return MatrixW.from_rows(self.params, rows, ncols=other.ncols)

    def scale(self, s: Scalarish) -> "MatrixW":
        s = s if isinstance(s, WittScalar) else self.params.scalar(s)
        return MatrixW.from_rows(self.params, [[s * x for x in r] for r in self.entries], ncols=self.ncols)

    def scale_p(self, k: int) -> "MatrixW":
        """p^k · self for k >= 0"""
        return self.scale(self.params.p_power(k)) if k else self

    def shift_down(self, k: int) -> "MatrixW":
        """Exact division of every entry by p^k"""
        if k == 0:
            return self
        return MatrixW.from_rows(self.params, [[x.shift_down(k) for x in r] for r in self.entries],
                                 ncols=self.ncols)

    def __pow__(self, k: int) -> "MatrixW":
        result, base = MatrixW.identity(self.params, self.nrows), self
        while k > 0:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def frobenius(self, k: int = 1) -> "MatrixW":
        """σ^k applied entrywise"""
        return MatrixW.from_rows(self.params, [[x.frobenius(k) for x in r] for r in self.entries],
                                 ncols=self.ncols)

    def reduce_mod(self, k: int) -> "MatrixW":
        return MatrixW.from_rows(self.params, [[x.reduce_mod(k) for x in r] for r in self.entries],
                                 ncols=self.ncols)

    def with_params(self, params: RingParams) -> "MatrixW":
        return MatrixW.from_rows(params, [[x.with_params(params) for x in r] for r in self.entries],
                                 ncols=self.ncols)

    # --- comparison ---------------------------------------------------

    def min_valuation(self) -> int:
        """Smallest entry valuation; AtLeastN(N) for the zero matrix"""
        best = AtLeastN(self.params.N)
        for row in self.entries:
            for x in row:
                v = x.val()
                if v < best:
                    best = v
        return best

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def agrees_with(self, other: "MatrixW", precision: int) -> bool:
        """Entrywise equality modulo p^precision"""
        return (self - other).min_valuation() >= precision

    def __eq__(self, other):
        if not isinstance(other, MatrixW):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and all(
            x == y for r, s in zip(self.entries, other.entries) for x, y in zip(r, s)
        )

    def __hash__(self):
        return hash((self.nrows, self.ncols, tuple(x.coeffs for r in self.entries for x in r)))

    def to_literal(self) -> list:
        return [[x.to_literal() for x in row] for row in self.entries]

    def __repr__(self):
        return f"MatrixW({self.to_literal()})"


# --- Smith normal form ------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """left · A · right = diag(p^{d_1}, ..., p^{d_r}) padded with zero rows/columns"""
    divisor_exps: Tuple[int, ...]
    left: MatrixW
    right: MatrixW
    left_inv: MatrixW
    right_inv: MatrixW

    def diagonal(self) -> MatrixW:
        params = self.left.params
        rows = [[params.zero] * self.right.nrows for _ in range(self.left.nrows)]
        for i, d in enumerate(self.divisor_exps):
            if not isinstance(d, AtLeastN):
                rows[i][i] = params.p_power(d)
        return MatrixW.from_rows(params, rows, ncols=self.right.nrows)

    def rank_below(self, bound: int) -> int:
        """Number of elementary divisors with exponent < bound"""
        return sum(1 for d in self.divisor_exps if d < bound)


def _swap_columns(rows: List[List[WittScalar]], i: int, j: int):
    for row in rows:
        row[i], row[j] = row[j], row[i]


def _identity_rows(params: RingParams, n: int) -> List[List[WittScalar]]:
    return [[params.one if i == j else params.zero for j in range(n)] for i in range(n)]


def smith(A: MatrixW) -> SmithForm:
    """Smith normal form over the local ring, pivoting on minimal valuation (row-major ties)"""
    params = A.params
    N = params.N
    r, c = A.nrows, A.ncols
    S = [list(row) for row in A.entries]
    U, U_inv = _identity_rows(params, r), _identity_rows(params, r)
    V, V_inv = _identity_rows(params, c), _identity_rows(params, c)
    exps: List[int] = []

    for l in range(min(r, c)):
        best = None
        for i in range(l, r):
            for j in range(l, c):
                v = S[i][j].val()
                if best is None or v < best[0]:
                    best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        v, i, j = best
        if v >= N:
            exps.extend(AtLeastN(N) for _ in range(l, min(r, c)))
            break

        if i != l:
            S[l], S[i] = S[i], S[l]
            U[l], U[i] = U[i], U[l]
            _swap_columns(U_inv, l, i)
        if j != l:
            _swap_columns(S, l, j)
            _swap_columns(V, l, j)
            V_inv[l], V_inv[j] = V_inv[j], V_inv[l]

        # scale the pivot row so that the pivot is exactly p^v
        unit = S[l][l].shift_down(v)
        w = unit.inverse()
        S[l] = [w * x for x in S[l]]
        U[l] = [w * x for x in U[l]]
        for row in U_inv:
            row[l] = row[l] * unit
        S[l][l] = params.p_power(v)

        for i2 in range(l + 1, r):
            e = S[i2][l]
            if e.is_zero():
                continue
            x = -e.shift_down(v)
            S[i2] = [s + x * t for s, t in zip(S[i2], S[l])]
            U[i2] = [s + x * t for s, t in zip(U[i2], U[l])]
            for row in U_inv:
                row[l] = row[l] - x * row[i2]

        for j2 in range(l + 1, c):
            e = S[l][j2]
            if e.is_zero():
                continue
            y = -e.shift_down(v)
            for row in S:
                row[j2] = row[j2] + y * row[l]
            for row in V:
                row[j2] = row[j2] + y * row[l]
            V_inv[l] = [s - y * t for s, t in zip(V_inv[l], V_inv[j2])]

        exps.append(v)

    return SmithForm(
        divisor_exps=tuple(exps),
        left=MatrixW.from_rows(params, U, ncols=r),
        right=MatrixW.from_rows(params, V, ncols=c),
        left_inv=MatrixW.from_rows(params, U_inv, ncols=r),
        right_inv=MatrixW.from_rows(params, V_inv, ncols=c),
    )


# --- characteristic polynomial ----------------------------------------

def charpoly(A: MatrixW) -> List[WittScalar]:
    """Coefficients of det(xI - A), lowest degree first, by Berkowitz's division-free recursion"""
    if not A.is_square:
        raise ValueError("charpoly needs a square matrix")
    params = A.params
    n = A.nrows
    vec = [params.one]
    for k in range(n - 1, -1, -1):
        size = n - k
        a_kk = A[k, k]
        R = A.entries[k][k + 1:]
        C = [A[i, k] for i in range(k + 1, n)]
        sub = [row[k + 1:] for row in A.entries[k + 1:]]
        col = [params.one, -a_kk]
        d = C
        for step in range(size - 1):
            col.append(-_dot(params, R, d))
            if step < size - 2:
                d = [_dot(params, row, d) for row in sub]
        # Toeplitz product: new[i] = sum_j col[i-j] * vec[j]
        new = []
        for i in range(size + 1):
            total = params.zero
            for j in range(min(i, size - 1) + 1):
                total = total + col[i - j] * vec[j]
            new.append(total)
        vec = new
    return list(reversed(vec))


def det(A: MatrixW) -> WittScalar:
    coeffs = charpoly(A)
    return coeffs[0] if A.nrows % 2 == 0 else -coeffs[0]


def companion(coeffs: Sequence[WittScalar]) -> MatrixW:
    """Companion matrix of a monic polynomial given lowest degree first"""
    params = coeffs[0].params
    n = len(coeffs) - 1
    rows = [[params.zero] * n for _ in range(n)]
    for i in range(1, n):
        rows[i][i - 1] = params.one
    for i in range(n):
        rows[i][n - 1] = -coeffs[i]
    return MatrixW.from_rows(params, rows, ncols=n)


def evaluate_polynomial(coeffs: Sequence[WittScalar], T: MatrixW) -> MatrixW:
    """f(T) by Horner's rule"""
    params = T.params
    n = T.nrows
    result = MatrixW.identity(params, n).scale(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        result = result @ T + MatrixW.identity(params, n).scale(c)
    return result


# --- inverses ---------------------------------------------------------

@dataclass(frozen=True)
class ScaledMatrix:
    """p^{-denom_exp} · matrix, with matrix known modulo p^precision"""
    denom_exp: int
    matrix: MatrixW
    precision: int

    def scale(self, s: WittScalar) -> "ScaledMatrix":
        """s · self with the common power of p cancelled against the denominator"""
        scaled = self.matrix.scale(s)
        k = min(self.denom_exp, scaled.min_valuation())
        known = min(self.matrix.params.N, self.precision + int(s.val()))
        return ScaledMatrix(self.denom_exp - k, scaled.shift_down(k), known - k)

    @property
    def integral_precision(self) -> int:
        """Precision of integral(): entries lose denom_exp digits when divided out"""
        return self.precision - self.denom_exp

    def integral(self) -> MatrixW:
        """The matrix itself when it has entries in W; NotIntegral otherwise"""
        if self.denom_exp == 0:
            return self.matrix
        if self.matrix.min_valuation() < self.denom_exp:
            raise NotIntegral(f"entries have valuation below 0 (denominator p^{self.denom_exp})")
        return self.matrix.shift_down(self.denom_exp)


def inverse(A: MatrixW) -> ScaledMatrix:
    """A^{-1} = p^{-h} · V · diag(p^{h-d_i}) · U, with h the largest elementary divisor"""
    if not A.is_square:
        raise ValueError("inverse needs a square matrix")
    params = A.params
    sf = smith(A)
    if any(isinstance(d, AtLeastN) for d in sf.divisor_exps) or sum(sf.divisor_exps) >= params.N:
        raise PrecisionExhausted(
            "matrix is singular at the working precision",
            {"divisor_exps": [int(d) for d in sf.divisor_exps], "N": params.N},
        )
    h = max(sf.divisor_exps, default=0)
    middle = MatrixW.p_power_diagonal(params, [h - d for d in sf.divisor_exps])
    return ScaledMatrix(h, sf.right @ middle @ sf.left, params.N - h)


def unit_inverse(A: MatrixW) -> MatrixW:
    """Exact inverse of a matrix whose determinant is a unit"""
    sf = smith(A)
    if any(d != 0 for d in sf.divisor_exps):
        raise NotAUnit(f"matrix has elementary divisors {list(sf.divisor_exps)}")
    return sf.right @ sf.left


def solve_integral(X: MatrixW, Y: MatrixW, precision: Optional[int] = None) -> Optional[MatrixW]:
    """Z with X·Z ≡ Y mod p^precision and entries in W, or None if no integral solution exists"""
    params = X.params
    if precision is None:
        precision = params.N
    n, r = X.nrows, X.ncols
    sf = smith(X)
    if any(d >= precision for d in sf.divisor_exps):
        raise PrecisionExhausted(
            "coefficient matrix is not of full column rank at this precision",
            {"divisor_exps": [int(d) for d in sf.divisor_exps], "precision": precision},
        )
    W = sf.left @ Y
    rows = []
    for i in range(n):
        if i < r:
            d = sf.divisor_exps[i]
            if any(x.val() < d for x in W.entries[i]):
                return None
            rows.append([x.shift_down(d) for x in W.entries[i]])
        elif any(x.val() < precision for x in W.entries[i]):
            return None
    Z = MatrixW.from_rows(params, rows, ncols=Y.ncols) if rows else MatrixW.zeros(params, 0, Y.ncols)
    return sf.right @ Z


def image_basis(X: MatrixW, bound: Optional[int] = None) -> MatrixW:
    """Basis of the W-column span of X, read off the Smith form"""
    params = X.params
    bound = params.N if bound is None else bound
    sf = smith(X)
    keep = [i for i, d in enumerate(sf.divisor_exps) if d < bound]
    cols = [
        [x * params.p_power(sf.divisor_exps[i]) for x in sf.left_inv.column(i)]
        for i in keep
    ]
    return MatrixW.from_columns(params, cols, X.nrows)


# --- lattices ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Lattice:
    """Column span of p^{-denom_exp} · basis inside V"""
    basis: MatrixW
    denom_exp: int = 0
    precision: Optional[int] = None
    _smith: SmithForm = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        params = self.basis.params
        if self.denom_exp < 0:
            raise InputError("denominator exponent must be nonnegative")
        precision = params.N if self.precision is None else min(self.precision, params.N)
        object.__setattr__(self, "precision", precision)
        sf = smith(self.basis)
        if any(d >= params.N - self.denom_exp for d in sf.divisor_exps):
            raise PrecisionExhausted(
                "lattice basis is not of full column rank at this precision",
                {"divisor_exps": [int(d) for d in sf.divisor_exps], "denom_exp": self.denom_exp},
            )
        object.__setattr__(self, "_smith", sf)

    @classmethod
    def standard(cls, params: RingParams, n: int) -> "Lattice":
        return cls(MatrixW.identity(params, n))

    @property
    def params(self) -> RingParams:
        return self.basis.params

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def rank(self) -> int:
        return self.basis.ncols

    def scaled(self, k: int) -> "Lattice":
        """p^k · L for any integer k"""
        if k <= 0:
            return Lattice(self.basis, self.denom_exp - k, self.precision)
        if self.denom_exp >= k:
            return Lattice(self.basis, self.denom_exp - k, self.precision)
        return Lattice(self.basis.scale_p(k - self.denom_exp), 0, self.precision)

    def contains(self, other: "Lattice") -> bool:
        """Every generator of `other` has integral coordinates in this basis"""
        precision = min(self.precision, other.precision)
        gap = self.denom_exp - other.denom_exp
        if gap >= 0:
            X, Y = self.basis, other.basis.scale_p(gap)
        else:
            X, Y = self.basis.scale_p(-gap), other.basis
        return solve_integral(X, Y, precision) is not None

    def equals(self, other: "Lattice") -> bool:
        return self.rank == other.rank and self.contains(other) and other.contains(self)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def canonical(self) -> "Lattice":
        """Column Hermite form: pivots p^v taken from the last row upwards,
        other entries in a pivot row reduced mod p^v"""
        params = self.params
        prec = self.precision
        cols = [list(c) for c in self.basis.columns()]
        n = self.dim
        out: List[List[WittScalar]] = []
        remaining = cols
        for i in reversed(range(n)):
            if not remaining:
                break
            best = None
            for idx, col in enumerate(remaining):
                v = col[i].val()
                if v < prec and (best is None or v < best[0]):
                    best = (v, idx)
            if best is None:
                continue
            v, idx = best
            pivot = remaining.pop(idx)
            unit = pivot[i].shift_down(v)
            w = unit.inverse()
            pivot = [w * x for x in pivot]
            pivot[i] = params.p_power(v)
            for col in remaining:
                e = col[i]
                if not e.is_zero():
                    q = -e.shift_down(v)
                    for k in range(n):
                        col[k] = col[k] + q * pivot[k]
            pk = params.p ** v
            for col in out:
                e = col[i]
                q = params.scalar([-(x // pk) for x in e.coeffs])
                for k in range(n):
                    col[k] = col[k] + q * pivot[k]
            out.append(pivot)
        out.reverse()
        basis = MatrixW.from_columns(params, out, n).reduce_mod(prec)
        k = min(self.denom_exp, basis.min_valuation())
        return Lattice(basis.shift_down(k), self.denom_exp - k, prec)

    def to_dict(self) -> dict:
        canon = self.canonical()
        return {"denomExp": canon.denom_exp, "basis": canon.basis.to_literal()}

    def __repr__(self):
        return f"Lattice(denom_exp={self.denom_exp}, basis={self.basis.to_literal()})"


def column_span(A: MatrixW) -> Lattice:
    """The lattice spanned by the columns of A (F(M) when A is a Frobenius matrix)"""
    return Lattice(image_basis(A))


def lattice_invariants(N_: Lattice, M_: Lattice) -> List[int]:
    """a_1 <= ... <= a_n such that some basis of M scaled by p^{a_i} is a basis of N"""
    if N_.dim != M_.dim or N_.rank != N_.dim or M_.rank != M_.dim:
        raise InputError("lattice invariants need two full-rank lattices of the same dimension")
    inv = inverse(M_.basis)
    T = inv.matrix @ N_.basis
    precision = min(N_.precision, M_.precision, inv.precision)
    exps = smith(T).divisor_exps
    if any(d >= precision for d in exps):
        raise PrecisionExhausted(
            "change-of-basis matrix is singular at this precision",
            {"divisor_exps": [int(d) for d in exps], "precision": precision},
        )
    return [int(d) - inv.denom_exp + M_.denom_exp - N_.denom_exp for d in exps]


def perp_lattice(N_: Lattice, G: MatrixW) -> Lattice:
    """N^⊥ = {x in V : x^t G y in W for all y in N}"""
    H = (G @ N_.basis).T
    inv = inverse(H)
    precision = min(N_.precision, inv.precision)
    shift = N_.denom_exp - inv.denom_exp
    if shift >= 0:
        return Lattice(inv.matrix.scale_p(shift), 0, precision)
    return Lattice(inv.matrix, -shift, precision)


def saturate(S: Lattice, ambient: Lattice) -> Lattice:
    """Largest sublattice of `ambient` spanning the same K-subspace as S"""
    inv = inverse(ambient.basis)
    T = inv.matrix @ S.basis
    precision = min(S.precision, ambient.precision, inv.precision)
    sf = smith(T)
    r = S.rank
    exps = sf.divisor_exps[:r]
    if any(d >= precision for d in exps):
        raise PrecisionExhausted(
            "subspace identity cannot be certified at this precision",
            {"divisor_exps": [int(d) for d in exps], "precision": precision},
        )
    Y = sf.left_inv.select_columns(range(r))
    return Lattice(ambient.basis @ Y, ambient.denom_exp, precision - max(exps, default=0))


def random_unit_matrix(params: RingParams, n: int, rng, steps: int = 4) -> MatrixW:
    """Product of random elementary transvections and a random unit diagonal"""
    M = MatrixW.diagonal(params, [random_unit(params, rng) for _ in range(n)])
    for _ in range(steps * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        t = random_scalar(params, rng)
        rows = [list(row) for row in M.entries]
        rows[i] = [x + t * y for x, y in zip(rows[i], rows[j])]
        M = MatrixW.from_rows(params, rows, ncols=n)
    return M
