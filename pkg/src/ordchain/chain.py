"""Extended rationals, intervals, finite unions of intervals and Mobius maps.

A point of a chain model is either a `Fraction` or one of the float
infinities ``NEG_INF`` / ``POS_INF``.  Python already orders these
correctly against each other, so comparisons need no wrapper; arithmetic
is only ever done on the `Fraction` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

NEG_INF = -math.inf
POS_INF = math.inf

ExtRat = Union[Fraction, float]


class ChainError(ValueError):
    pass


class PoleEvaluation(ChainError):
    pass


class SignatureMismatch(ChainError):
    pass


def ext(x) -> ExtRat:
    """Coerce ints, strings ('1/3', '-inf', '+inf') and Fractions to ExtRat."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return x
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("-inf", "-oo", "−∞"):
            return NEG_INF
        if s in ("inf", "+inf", "oo", "+oo", "+∞", "∞"):
            return POS_INF
        return Fraction(s)
    return Fraction(x)


def is_inf(x: ExtRat) -> bool:
    return isinstance(x, float) and math.isinf(x)


def ext_cmp(x: ExtRat, y: ExtRat) -> int:
    """-1, 0 or 1 as x is less than, equal to or greater than y."""
    return (x > y) - (x < y)


def fmt(x: ExtRat) -> str:
    if x == POS_INF:
        return "+inf"
    if x == NEG_INF:
        return "-inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Intervals


@dataclass(frozen=True)
class Interval:
    """Convex subset of the extended rationals.

    ``adjoined`` must be set for a closed bound at an infinity; it models a
    chain with a formally adjoined extremum.
    """

    lo: ExtRat
    hi: ExtRat
    lo_closed: bool = False
    hi_closed: bool = False
    adjoined: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", ext(self.lo))
        object.__setattr__(self, "hi", ext(self.hi))
        if self.lo > self.hi:
            raise ChainError(f"empty interval {self.lo} > {self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ChainError("degenerate interval must be a closed singleton")
        inf_closed = (self.lo_closed and is_inf(self.lo)) or (
            self.hi_closed and is_inf(self.hi)
        )
        if inf_closed and not self.adjoined:
            raise ChainError("closed bound at infinity needs the adjoined flag")
        if self.adjoined and not inf_closed:
            object.__setattr__(self, "adjoined", False)

    # constructors
    @classmethod
    def point(cls, p) -> "Interval":
        p = ext(p)
        return cls(p, p, True, True, adjoined=is_inf(p))

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        lo, hi = ext(lo), ext(hi)
        return cls(lo, hi, True, True, adjoined=is_inf(lo) or is_inf(hi))

    @classmethod
    def make(cls, lo, hi, lo_closed, hi_closed) -> "Interval":
        lo, hi = ext(lo), ext(hi)
        adj = (lo_closed and is_inf(lo)) or (hi_closed and is_inf(hi))
        return cls(lo, hi, lo_closed, hi_closed, adjoined=adj)

    # predicates
    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def signature(self) -> tuple[bool, bool]:
        return (self.lo_closed, self.hi_closed)

    @property
    def is_line(self) -> bool:
        return is_inf(self.lo) and is_inf(self.hi)

    def has_min(self) -> bool:
        return self.lo_closed

    def has_max(self) -> bool:
        return self.hi_closed

    def __contains__(self, x) -> bool:
        x = ext(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def contains_interval(self, other: "Interval") -> bool:
        lo_ok = other.lo > self.lo or (
            other.lo == self.lo and (self.lo_closed or not other.lo_closed)
        )
        hi_ok = other.hi < self.hi or (
            other.hi == self.hi and (self.hi_closed or not other.hi_closed)
        )
        return lo_ok and hi_ok

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        if lo > hi or (lo == hi and not (lc and hc)):
            return None
        return Interval.make(lo, hi, lc, hc)

    def interior(self) -> "Interval":
        return Interval.open(self.lo, self.hi)

    def below(self, p: ExtRat, inclusive: bool) -> Optional["Interval"]:
        """Part of the interval that is < p (or <= p when inclusive)."""
        if p == NEG_INF:
            return None
        return self.intersect(Interval.make(NEG_INF, p, False, inclusive and p != POS_INF))

    def above(self, p: ExtRat, inclusive: bool) -> Optional["Interval"]:
        if p == POS_INF:
            return None
        return self.intersect(Interval.make(p, POS_INF, inclusive and p != NEG_INF, False))

    def __str__(self) -> str:
        if self.is_point:
            return "{" + fmt(self.lo) + "}"
        return (
            ("[" if self.lo_closed else "(")
            + fmt(self.lo)
            + ","
            + fmt(self.hi)
            + ("]" if self.hi_closed else ")")
        )


def interval_relate(c: Interval, d: Interval) -> str:
    """'strictly_before', 'weakly_before' or 'overlapping'."""
    if c.hi < d.lo:
        return "strictly_before"
    if c.hi == d.lo:
        if c.hi_closed and d.lo_closed:
            return "weakly_before"
        return "strictly_before"
    return "overlapping"


def abut(c: Interval, d: Interval) -> bool:
    """True when c and d share an endpoint that exactly one of them owns."""
    return c.hi == d.lo and (c.hi_closed != d.lo_closed)


# ---------------------------------------------------------------------------
# Finite unions


@dataclass(frozen=True)
class SubsetModel:
    """Finite union of pairwise disjoint intervals in increasing order."""

    parts: tuple[Interval, ...] = ()

    @classmethod
    def of(cls, intervals: Iterable[Interval]) -> "SubsetModel":
        ivs = sorted(intervals, key=lambda i: (i.lo, not i.lo_closed))
        merged: list[Interval] = []
        for iv in ivs:
            if merged:
                last = merged[-1]
                touching = last.hi > iv.lo or (
                    last.hi == iv.lo and (last.hi_closed or iv.lo_closed)
                )
                if touching:
                    if iv.hi > last.hi:
                        hi, hc = iv.hi, iv.hi_closed
                    elif iv.hi < last.hi:
                        hi, hc = last.hi, last.hi_closed
                    else:
                        hi, hc = last.hi, last.hi_closed or iv.hi_closed
                    merged[-1] = Interval.make(last.lo, hi, last.lo_closed, hc)
                    continue
            merged.append(iv)
        return cls(tuple(merged))

    @property
    def empty(self) -> bool:
        return not self.parts

    @property
    def is_convex(self) -> bool:
        return len(self.parts) <= 1

    def as_interval(self) -> Interval:
        if len(self.parts) != 1:
            raise ChainError(f"{self} is not a single interval")
        return self.parts[0]

    def __contains__(self, x) -> bool:
        return any(x in p for p in self.parts)

    def contains_interval(self, iv: Interval) -> bool:
        return any(p.contains_interval(iv) for p in self.parts)

    def issubset(self, other: "SubsetModel") -> bool:
        return all(other.contains_interval(p) for p in self.parts)

    def inf(self) -> ExtRat:
        return self.parts[0].lo

    def sup(self) -> ExtRat:
        return self.parts[-1].hi

    def min(self) -> Optional[ExtRat]:
        first = self.parts[0]
        return first.lo if first.lo_closed else None

    def max(self) -> Optional[ExtRat]:
        last = self.parts[-1]
        return last.hi if last.hi_closed else None

    def union(self, other: "SubsetModel") -> "SubsetModel":
        return SubsetModel.of(self.parts + other.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "empty"
        return " u ".join(str(p) for p in self.parts)


# ---------------------------------------------------------------------------
# Mobius maps


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class MobiusMap:
    """x -> (a*x + b) / (c*x + d), kept with coprime integer coefficients."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        coeffs = [Fraction(v) for v in (self.a, self.b, self.c, self.d)]
        if coeffs[0] * coeffs[3] - coeffs[1] * coeffs[2] == 0:
            raise ChainError("singular Mobius map (ad - bc = 0)")
        lcm = 1
        for v in coeffs:
            lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
        ints = [int(v * lcm) for v in coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        lead = next(v for v in ints if v != 0)
        if lead < 0:
            ints = [-v for v in ints]
        for name, v in zip("abcd", ints):
            object.__setattr__(self, name, Fraction(v))

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def affine(cls, slope, shift) -> "MobiusMap":
        return cls(slope, shift, 0, 1)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    @property
    def pole(self) -> Optional[Fraction]:
        if self.c == 0:
            return None
        return -self.d / self.c

    def __call__(self, x) -> ExtRat:
        return mobius_eval(self, x)

    def limit(self, x: ExtRat, from_above: bool) -> ExtRat:
        """One-sided limit; at the pole this is an infinity."""
        if not is_inf(x) and self.pole is not None and x == self.pole:
            s = _sign(self.det)
            return NEG_INF * s if from_above else POS_INF * s
        return mobius_eval(self, x)

    def then(self, other: "MobiusMap") -> "MobiusMap":
        return mobius_compose(self, other)

    def inverse(self) -> "MobiusMap":
        return mobius_invert(self)

    def __str__(self) -> str:
        return "mobius " + " ".join(fmt(v) for v in (self.a, self.b, self.c, self.d))


def mobius_eval(m: MobiusMap, x) -> ExtRat:
    x = ext(x)
    if is_inf(x):
        if m.c != 0:
            return m.a / m.c
        s = _sign(m.a) * _sign(m.d) * (1 if x > 0 else -1)
        return POS_INF if s > 0 else NEG_INF
    den = m.c * x + m.d
    if den == 0:
        raise PoleEvaluation(f"{m} has a pole at {fmt(x)}")
    return (m.a * x + m.b) / den


def mobius_compose(m1: MobiusMap, m2: MobiusMap) -> MobiusMap:
    """Apply m1, then m2."""
    return MobiusMap(
        m2.a * m1.a + m2.b * m1.c,
        m2.a * m1.b + m2.b * m1.d,
        m2.c * m1.a + m2.d * m1.c,
        m2.c * m1.b + m2.d * m1.d,
    )


def mobius_invert(m: MobiusMap) -> MobiusMap:
    return MobiusMap(m.d, -m.b, -m.c, m.a)


def mobius_monotone_on(m: MobiusMap, iv: Interval) -> str:
    """'increasing', 'decreasing' or 'pole_inside'."""
    p = m.pole
    if p is not None and (p in iv):
        return "pole_inside"
    return "increasing" if m.det > 0 else "decreasing"


def mobius_image(m: MobiusMap, iv: Interval) -> Interval:
    """Image of iv under an increasing, pole-free m."""
    lo = m.limit(iv.lo, from_above=True)
    hi = m.limit(iv.hi, from_above=False)
    return Interval.make(lo, hi, iv.lo_closed, iv.hi_closed)


def std_map(iv: Interval) -> MobiusMap:
    """Increasing Mobius map sending the interior of iv onto (0, 1)."""
    p, q = iv.lo, iv.hi
    if is_inf(p) and is_inf(q):
        raise ChainError("the whole line has no one-piece standard map")
    if not is_inf(p) and not is_inf(q):
        return MobiusMap(1, -p, 0, q - p)
    if not is_inf(p):
        return MobiusMap(1, -p, 1, 1 - p)
    return MobiusMap(0, 1, -1, q + 1)


def split_point(iv: Interval) -> Fraction:
    """Deterministic interior point used to cut an interval in two."""
    p, q = iv.lo, iv.hi
    if not is_inf(p) and not is_inf(q):
        return (p + q) / 2
    if not is_inf(p):
        return p + 1
    if not is_inf(q):
        return q - 1
    return Fraction(0)


def sample_points(iv: Interval, n: int) -> list[Fraction]:
    """n increasing interior points of iv: images of k/(n+1) under std^-1."""
    if iv.is_point:
        raise ChainError("no interior points in a singleton")
    if iv.is_line:
        half = n // 2
        return [Fraction(k - half) for k in range(n)]
    inv = std_map(iv).inverse()
    return [inv(Fraction(k, n + 1)) for k in range(1, n + 1)]
