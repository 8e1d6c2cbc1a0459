"""Brute-force transformation semigroups on the finite chain 1 < 2 < ... < n.

Maps are tuples of images, 1-based: (2, 1, 3) sends 1 -> 2, 2 -> 1, 3 -> 3.
Composition is left to right, matching the piecewise module.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .chain import ChainError, Interval
from .piecewise import Classification

FiniteMap = tuple[int, ...]
DEFAULT_CAP = 7


class CapExceeded(ChainError):
    pass


class NotSubset(ChainError):
    pass


class NotClosed(ChainError):
    pass


def cap() -> int:
    return int(os.environ.get("ORDCHAIN_FINITE_CAP", DEFAULT_CAP))


def parse_finite(text: str) -> FiniteMap:
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"expected [i,j,...], got {text!r}")
    vals = tuple(int(t) for t in body[1:-1].split(",") if t.strip())
    n = len(vals)
    if not n or any(not 1 <= v <= n for v in vals):
        raise ValueError(f"entries of {text!r} must lie in 1..{n}")
    return vals


def format_finite(f: FiniteMap) -> str:
    return "[" + ",".join(map(str, f)) + "]"


def compose(f: FiniteMap, g: FiniteMap) -> FiniteMap:
    """f then g."""
    return tuple(g[v - 1] for v in f)


def identity(n: int) -> FiniteMap:
    return tuple(range(1, n + 1))


def _increasing(vals: Sequence[int]) -> bool:
    return all(vals[i] <= vals[i + 1] for i in range(len(vals) - 1))


def fin_classify(f: FiniteMap) -> Classification:
    n = len(f)
    whole = Interval.closed(1, n)
    if _increasing(f):
        return Classification("order_preserving", whole, None, whole)
    for k in range(1, n):
        if _increasing(f[:k]) and _increasing(f[k:]) and f[-1] <= f[0]:
            overlap = f[0] if f[-1] == f[0] else None
            return Classification("orientation_proper", Interval.closed(1, k), overlap, whole)
    return Classification("neither", domain=whole)


def is_o(f: FiniteMap) -> bool:
    return _increasing(f)


def is_op(f: FiniteMap) -> bool:
    return fin_classify(f).verdict != "neither"


_PREDICATES = {"T": lambda f: True, "O": is_o, "OP": is_op}


def enumerate_family(n: int, family: str, y: Optional[Iterable[int]] = None) -> frozenset[FiniteMap]:
    """All maps of T, O or OP on n points with image inside y (default: everything)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap():
        raise CapExceeded(f"n = {n} exceeds the cap {cap()} (set ORDCHAIN_FINITE_CAP)")
    ys = sorted(set(range(1, n + 1) if y is None else y))
    if not ys or ys[0] < 1 or ys[-1] > n:
        raise ValueError(f"Y must be a nonempty subset of 1..{n}")
    pred = _PREDICATES[family]
    if family == "O":
        maps = itertools.combinations_with_replacement(ys, n)
    else:
        maps = itertools.product(ys, repeat=n)
    return frozenset(m for m in maps if pred(m))


@dataclass(frozen=True)
class ClosureResult:
    elements: frozenset[FiniteMap]
    generator_count: int
    multiplication_table_size: int


def _saturate(known: set, fresh: list, gens: Sequence[FiniteMap]) -> int:
    """Right-multiply every fresh element by every generator until nothing new appears."""
    products = 0
    while fresh:
        nxt = []
        for e in fresh:
            for g in gens:
                products += 1
                p = compose(e, g)
                if p not in known:
                    known.add(p)
                    nxt.append(p)
        fresh = nxt
    return products


def closure(gens: Iterable[FiniteMap], base: Iterable[FiniteMap] = ()) -> ClosureResult:
    """<gens>, optionally on top of an already closed set `base` generated by a subset of gens."""
    gens = sorted(set(gens))
    if len({len(g) for g in gens}) > 1:
        raise ValueError("generators act on chains of different sizes")
    known = set(base)
    products = 0
    if known:
        extra = [g for g in gens if g not in known]
        fresh = []
        for b in sorted(known):
            for x in extra:
                products += 1
                p = compose(b, x)
                if p not in known:
                    known.add(p)
                    fresh.append(p)
        fresh.extend(g for g in extra if g not in known)
        known.update(extra)
        fresh = sorted(set(fresh))
    else:
        known.update(gens)
        fresh = list(gens)
    products += _saturate(known, fresh, gens)
    return ClosureResult(frozenset(known), len(gens), products)


def is_closed(S: frozenset[FiniteMap]) -> bool:
    return all(compose(f, g) in S for f in S for g in S)


def _candidate_order(f: FiniteMap):
    # bijections and large images first: they are the likeliest generators
    return (-len(set(f)), f)


def relative_rank(S: Iterable[FiniteMap], A: Iterable[FiniteMap]) -> tuple[int, frozenset[FiniteMap]]:
    """Smallest r with some B of size r such that <A u B> = S, and such a B."""
    S = frozenset(S)
    A = frozenset(A)
    if not A <= S:
        raise NotSubset("A is not a subset of S")
    if not is_closed(S):
        raise NotClosed("S is not closed under composition")
    base = closure(A).elements if A else frozenset()
    if base == S:
        return 0, frozenset()
    candidates = sorted(S - base, key=_candidate_order)
    # one candidate per distinct <A u {x}>; x with the same closure are interchangeable
    seen: dict[frozenset, FiniteMap] = {}
    for x in candidates:
        cl = closure(A | {x}, base).elements
        if cl == S:
            return 1, frozenset({x})
        seen.setdefault(cl, x)
    reps = [seen[k] for k in sorted(seen, key=lambda k: _candidate_order(seen[k]))]
    for r in range(2, len(reps) + 1):
        for B in itertools.combinations(reps, r):
            if closure(A | set(B), base).elements == S:
                return r, frozenset(B)
    raise ChainError("S is not generated by A together with S itself")  # unreachable for closed S


def single_relative_generators(n: int, y: Optional[Iterable[int]] = None) -> frozenset[FiniteMap]:
    """All phi in OP(n,Y) \\ O(n,Y) with <O(n,Y) u {phi}> = OP(n,Y)."""
    o = enumerate_family(n, "O", y)
    op = enumerate_family(n, "OP", y)
    base = closure(o).elements
    return frozenset(
        phi for phi in sorted(op - o) if closure(o | {phi}, base).elements == op
    )
