"""
Newton and Hodge polygons as convex piecewise-linear graphs over [0, n]
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from errors import EndpointMismatch, PrecisionExhausted
from witt import AtLeastN

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Vertex:
    x: int
    y: Fraction


def cross(o: Vertex, a: Vertex, b: Vertex) -> Fraction:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def lower_hull(points: Sequence[Vertex]) -> List[Vertex]:
    """Lower convex hull of points sorted by x (monotone chain)"""
    lower: List[Vertex] = []
    for pt in points:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], pt) <= 0:
            lower.pop()
        lower.append(pt)
    return lower


def parse_fraction(text: Union[str, int, Fraction]) -> Fraction:
    return Fraction(text)


@dataclass(frozen=True)
class SlopePolygon:
    """Nondecreasing slopes λ_1 <= ... <= λ_n with vertices (i, λ_1 + ... + λ_i)"""
    slopes: Tuple[Fraction, ...]

    def __post_init__(self):
        slopes = tuple(Fraction(s) for s in self.slopes)
        if any(x > y for x, y in zip(slopes, slopes[1:])):
            raise ValueError(f"slopes must be nondecreasing: {[str(s) for s in slopes]}")
        object.__setattr__(self, "slopes", slopes)

    @classmethod
    def from_valuations(cls, vals: Sequence[int]) -> "SlopePolygon":
        """Lower hull of (i, vals[n-i]) for a monic polynomial whose k-th coefficient has valuation vals[k]"""
        n = len(vals) - 1
        if n < 0 or vals[n] != 0:
            raise ValueError("polynomial must be monic")
        if isinstance(vals[0], AtLeastN):
            raise PrecisionExhausted(
                "constant term vanishes at the working precision",
                {"bound": int(vals[0])},
            )
        points = [Vertex(i, Fraction(vals[n - i])) for i in range(n + 1)
                  if not isinstance(vals[n - i], AtLeastN)]
        hull = lower_hull(points)
        polygon = cls(tuple(_slopes_between(hull)))
        for i in range(n + 1):
            v = vals[n - i]
            if isinstance(v, AtLeastN) and polygon.value(i) > int(v):
                raise PrecisionExhausted(
                    f"hull point at abscissa {i} is not certified",
                    {"abscissa": i, "hull_value": str(polygon.value(i)), "bound": int(v)},
                )
        return polygon

    @classmethod
    def from_strings(cls, slopes: Sequence[str]) -> "SlopePolygon":
        return cls(tuple(parse_fraction(s) for s in slopes))

    @property
    def n(self) -> int:
        return len(self.slopes)

    def value(self, i: int) -> Fraction:
        return sum(self.slopes[:i], Fraction(0))

    @property
    def endpoint(self) -> Fraction:
        return self.value(self.n)

    def break_points(self) -> List[Tuple[int, Fraction]]:
        """Interior integer vertices where the slope strictly increases"""
        return [(i, self.value(i)) for i in range(1, self.n)
                if self.slopes[i - 1] < self.slopes[i]]

    def vertices(self) -> List[Tuple[int, Fraction]]:
        return [(0, Fraction(0))] + self.break_points() + ([(self.n, self.endpoint)] if self.n else [])

    def is_break_point(self, A: int, B: Rational) -> bool:
        if not 0 < A < self.n:
            return False
        return self.value(A) == Fraction(B) and self.slopes[A - 1] < self.slopes[A]

    def lies_on(self, A: int, B: Rational) -> bool:
        if not 0 <= A <= self.n:
            return False
        return self.value(A) == Fraction(B)

    def symmetry_defect(self, m: Rational) -> Optional[int]:
        """First index i with slopes[i] + slopes[n-1-i] != m, or None"""
        m = Fraction(m)
        for i in range(self.n):
            if self.slopes[i] + self.slopes[self.n - 1 - i] != m:
                return i
        return None

    def is_symmetric(self, m: Rational) -> bool:
        return self.symmetry_defect(m) is None

    def to_strings(self) -> List[str]:
        return [fraction_text(s) for s in self.slopes]

    def __add__(self, other: "SlopePolygon") -> "SlopePolygon":
        """Polygon of a direct sum (merged slope multiset)"""
        return SlopePolygon(tuple(sorted(self.slopes + other.slopes)))


def fraction_text(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _slopes_between(hull: Sequence[Vertex]) -> List[Fraction]:
    slopes: List[Fraction] = []
    for left, right in zip(hull, hull[1:]):
        width = right.x - left.x
        slopes.extend([(right.y - left.y) / width] * width)
    return slopes


def dominance_defect(upper: SlopePolygon, lower: SlopePolygon) -> Optional[int]:
    """First integer i with upper(i) < lower(i); EndpointMismatch if the ends differ"""
    if upper.n != lower.n:
        raise ValueError("polygons must have the same length")
    if upper.endpoint != lower.endpoint:
        raise EndpointMismatch(fraction_text(upper.endpoint), fraction_text(lower.endpoint))
    for i in range(upper.n + 1):
        if upper.value(i) < lower.value(i):
            return i
    return None


def dominates(upper: SlopePolygon, lower: SlopePolygon) -> bool:
    return dominance_defect(upper, lower) is None
