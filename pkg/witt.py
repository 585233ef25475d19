"""
Truncated arithmetic in W(F_{p^a}), the unramified degree-a extension of Z_p.

The ring is realised as Z_p[x]/(modulus) with a monic lift of an irreducible
polynomial over F_p, and every scalar is kept modulo p^N.
"""

import itertools
import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_gcdex, gf_irreducible_p

from config import PRECISION_CONFIG
from errors import HenselFailure, InputError, NotAUnit, NotIntegral

logger = logging.getLogger(__name__)


class AtLeastN(int):
    """Valuation of a scalar that vanishes at the working precision N"""

    def __new__(cls, bound: int):
        return super().__new__(cls, bound)

    def __repr__(self):
        return f"AtLeastN({int(self)})"

    __str__ = __repr__


def p_adic_valuation(value: int, p: int, cap: int) -> int:
    """Valuation of an integer residue, capped at `cap`"""
    if value == 0:
        return AtLeastN(cap)
    v = 0
    while value % p == 0 and v < cap:
        value //= p
        v += 1
    return AtLeastN(cap) if v >= cap else v


def default_modulus(p: int, a: int) -> Tuple[int, ...]:
    """Smallest monic irreducible of degree a over F_p, by coefficient vector (c0, ..., c_{a-1})"""
    for lower in itertools.product(range(p), repeat=a):
        dense = [1] + list(reversed(lower))
        if gf_irreducible_p(dense, p, ZZ):
            return tuple(lower) + (1,)
    raise InputError(f"no irreducible polynomial of degree {a} over F_{p}")  # unreachable


@dataclass(frozen=True)
class RingParams:
    """p, extension degree a, precision N and the defining modulus (low to high)"""
    p: int
    a: int
    N: int
    modulus: Tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.p, int) or not isprime(self.p):
            raise InputError(f"p = {self.p} is not prime")
        if self.a < 1:
            raise InputError(f"extension degree a = {self.a} must be >= 1")
        if self.N < 1:
            raise InputError(f"precision N = {self.N} must be >= 1")
        modulus = tuple(int(c) for c in self.modulus)
        if len(modulus) != self.a + 1 or modulus[-1] != 1:
            raise InputError(f"modulus {list(modulus)} must be monic of degree {self.a}")
        dense = [c % self.p for c in reversed(modulus)]
        if not gf_irreducible_p(dense, self.p, ZZ):
            raise InputError(f"modulus {list(modulus)} is reducible mod {self.p}")
        q = self.p ** self.N
        object.__setattr__(self, "modulus", tuple(c % q for c in modulus[:-1]) + (1,))

    @classmethod
    def create(cls, p: int, a: int = 1, N: Optional[int] = None,
               modulus: Optional[Sequence[int]] = None) -> "RingParams":
        """Build params, filling N from configuration and the modulus deterministically"""
        if N is None:
            N = PRECISION_CONFIG["default_precision"]
        if modulus is None:
            if not isprime(p):
                raise InputError(f"p = {p} is not prime")
            modulus = default_modulus(p, a)
        return cls(p, a, N, tuple(modulus))

    @property
    def pN(self) -> int:
        return self.p ** self.N

    def with_precision(self, N: int) -> "RingParams":
        """Same ring, different working precision"""
        return RingParams(self.p, self.a, N, self.modulus)

    def scalar(self, value: Union[int, Sequence[int]]) -> "WittScalar":
        if isinstance(value, int):
            coeffs = (value,) + (0,) * (self.a - 1)
        else:
            coeffs = tuple(value)
        q = self.pN
        return WittScalar(tuple(int(c) % q for c in coeffs), self)

    @property
    def zero(self) -> "WittScalar":
        return self.scalar(0)

    @property
    def one(self) -> "WittScalar":
        return self.scalar(1)

    def p_power(self, k: int) -> "WittScalar":
        return self.scalar(self.p ** k if k < self.N else 0)

    def generator(self) -> "WittScalar":
        """The class of x, i.e. a lift of a generator of F_{p^a} over F_p"""
        if self.a == 1:
            return self.scalar(-self.modulus[0])
        return self.scalar((0, 1) + (0,) * (self.a - 2))


def _mul_coeffs(u: Tuple[int, ...], v: Tuple[int, ...], params: RingParams) -> Tuple[int, ...]:
    a, q = params.a, params.pN
    if a == 1:
        return ((u[0] * v[0]) % q,)
    prod = [0] * (2 * a - 1)
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                prod[i + j] += ui * vj
    modulus = params.modulus
    for k in range(2 * a - 2, a - 1, -1):
        c = prod[k]
        if c:
            for i in range(a):
                prod[k - a + i] -= c * modulus[i]
    return tuple(c % q for c in prod[:a])


@dataclass(frozen=True, eq=False)
class WittScalar:
    """Element of W(F_{p^a}) mod p^N in the power basis 1, x, ..., x^{a-1}"""
    coeffs: Tuple[int, ...]
    params: RingParams

    def _coerce(self, other) -> "WittScalar":
        if isinstance(other, WittScalar):
            if other.params is not self.params and other.params != self.params:
                raise ValueError("scalars live in different rings")
            return other
        if isinstance(other, int):
            return self.params.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        q = self.params.pN
        return WittScalar(tuple((x + y) % q for x, y in zip(self.coeffs, other.coeffs)), self.params)

    __radd__ = __add__

    def __neg__(self):
        q = self.params.pN
        return WittScalar(tuple((-x) % q for x in self.coeffs), self.params)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        q = self.params.pN
        return WittScalar(tuple((x - y) % q for x, y in zip(self.coeffs, other.coeffs)), self.params)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return WittScalar(_mul_coeffs(self.coeffs, other.coeffs, self.params), self.params)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "WittScalar":
        result, base = self.params.one, self
        while k > 0:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.params))

    def __repr__(self):
        if self.params.a == 1:
            return f"W({self.coeffs[0]})"
        return f"W({list(self.coeffs)})"

    def val(self) -> int:
        """min over coordinates of the p-adic valuation; AtLeastN(N) for zero"""
        p, N = self.params.p, self.params.N
        return min(p_adic_valuation(c, p, N) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return any(c % self.params.p for c in self.coeffs)

    def inverse(self) -> "WittScalar":
        if not self.is_unit():
            raise NotAUnit(f"{self!r} has positive valuation")
        return _unit_inverse(self)

    def frobenius(self, k: int = 1) -> "WittScalar":
        """sigma^k(s); sigma^{-1} is sigma^{a-1}"""
        a = self.params.a
        k %= a
        if k == 0:
            return self
        images = _frobenius_images(self.params)
        result = self
        for _ in range(k):
            result = _apply_images(result, images)
        return result

    def shift_down(self, k: int) -> "WittScalar":
        """Exact division by p^k; the top k digits of the result are unknown (set to 0)"""
        if k == 0:
            return self
        if self.val() < k:
            raise NotIntegral(f"{self!r} is not divisible by p^{k}")
        pk = self.params.p ** k
        return WittScalar(tuple(c // pk for c in self.coeffs), self.params)

    def reduce_mod(self, k: int) -> "WittScalar":
        """Canonical residue modulo p^k, coordinate by coordinate"""
        pk = self.params.p ** min(k, self.params.N)
        return WittScalar(tuple(c % pk for c in self.coeffs), self.params)

    def with_params(self, params: RingParams) -> "WittScalar":
        return params.scalar(self.coeffs)

    def to_literal(self) -> Union[int, List[int]]:
        if self.params.a == 1:
            return self.coeffs[0]
        return list(self.coeffs)


def _apply_images(s: WittScalar, images: Tuple[WittScalar, ...]) -> WittScalar:
    result = s.params.zero
    for c, image in zip(s.coeffs, images):
        if c:
            result = result + image * c
    return result


def _evaluate_modulus(r: WittScalar) -> Tuple[WittScalar, WittScalar]:
    """f(r) and f'(r) by Horner's rule"""
    params = r.params
    value, derivative = params.zero, params.zero
    for c in reversed(params.modulus):
        derivative = derivative * r + value
        value = value * r + c
    return value, derivative


def _unit_inverse(s: WittScalar) -> WittScalar:
    params = s.params
    p, q = params.p, params.pN
    if params.a == 1:
        return WittScalar((pow(s.coeffs[0], -1, q),), params)
    dense = [c % p for c in reversed(s.coeffs)]
    while dense and dense[0] == 0:
        dense.pop(0)
    modulus_dense = [c % p for c in reversed(params.modulus)]
    inv_dense, _, _ = gf_gcdex(dense, modulus_dense, p, ZZ)
    coeffs = list(reversed(inv_dense)) + [0] * params.a
    y = params.scalar(coeffs[:params.a])
    # Newton lifting y <- y(2 - s y) doubles the number of correct digits
    for _ in range(params.N.bit_length() + 1):
        err = s * y - 1
        if err.is_zero():
            return y
        y = y * (2 - s * y)
    if (s * y - 1).is_zero():
        return y
    raise HenselFailure(f"inverse of {s!r} did not converge")


@lru_cache(maxsize=None)
def _frobenius_images(params: RingParams) -> Tuple[WittScalar, ...]:
    """sigma(x^i) for i < a, from the Hensel lift of the root congruent to x^p"""
    a = params.a
    if a == 1:
        return (params.one,)
    r = params.generator() ** params.p
    for step in range(params.N + 1):
        value, derivative = _evaluate_modulus(r)
        if value.is_zero():
            break
        if not derivative.is_unit():
            raise HenselFailure("modulus is not separable mod p")
        r = r - value * derivative.inverse()
    else:
        raise HenselFailure(f"Frobenius root did not converge within {params.N} steps")
    logger.debug("sigma(x) lifted for p=%s a=%s N=%s in %s steps", params.p, a, params.N, step)
    images = [params.one]
    for _ in range(a - 1):
        images.append(images[-1] * r)
    return tuple(images)


def parse_scalar(literal, params: RingParams) -> WittScalar:
    """Scalar literal: [c0, ..., c_{a-1}] or a bare integer, entries in (-p^N, p^N)"""
    q = params.pN
    if isinstance(literal, bool):
        raise InputError(f"invalid scalar literal {literal!r}")
    if isinstance(literal, int):
        values = [literal]
    elif isinstance(literal, (list, tuple)):
        values = list(literal)
        if len(values) != params.a:
            raise InputError(f"scalar literal {literal!r} needs {params.a} coordinates")
    else:
        raise InputError(f"invalid scalar literal {literal!r}")
    for c in values:
        if isinstance(c, bool) or not isinstance(c, int):
            raise InputError(f"invalid coordinate {c!r} in {literal!r}")
        if not -q < c < q:
            raise InputError(f"coordinate {c} out of range for p^N = {q}")
    return params.scalar(values)


def random_scalar(params: RingParams, rng: random.Random) -> WittScalar:
    q = params.pN
    return params.scalar([rng.randrange(q) for _ in range(params.a)])


def random_unit(params: RingParams, rng: random.Random) -> WittScalar:
    while True:
        s = random_scalar(params, rng)
        if s.is_unit():
            return s


@lru_cache(maxsize=None)
def subfield_embedding(small: RingParams, big: RingParams) -> Tuple[WittScalar, ...]:
    """Images in `big` of the power basis of `small`, for W(F_{p^a}) ⊂ W(F_{p^{ka}})"""
    if small.p != big.p or big.a % small.a or small.N != big.N:
        raise InputError(f"cannot embed a={small.a} into a={big.a}")
    if small.a == 1:
        return (big.one,)
    p = big.p

    def evaluate(r: WittScalar) -> Tuple[WittScalar, WittScalar]:
        value, derivative = big.zero, big.zero
        for c in reversed(small.modulus):
            derivative = derivative * r + value
            value = value * r + c
        return value, derivative

    for digits in itertools.product(range(p), repeat=big.a):
        r = big.scalar(digits)
        value, _ = evaluate(r)
        if value.is_unit():
            continue
        for _ in range(big.N + 1):
            value, derivative = evaluate(r)
            if value.is_zero():
                break
            r = r - value * derivative.inverse()
        if evaluate(r)[0].is_zero():
            images = [big.one]
            for _ in range(small.a - 1):
                images.append(images[-1] * r)
            return tuple(images)
    raise HenselFailure(f"modulus {list(small.modulus)} has no root in degree {big.a}")


def embed_scalar(s: WittScalar, big: RingParams) -> WittScalar:
    images = subfield_embedding(s.params, big)
    result = big.zero
    for c, image in zip(s.coeffs, images):
        if c:
            result = result + image * c
    return result
