"""Deliberately naive reference implementations, independent of the library code paths."""

import itertools

from ordchain.finite import compose


def naive_closure(gens):
    """Square the set until it stops growing."""
    S = set(gens)
    while True:
        bigger = S | {compose(f, g) for f in S for g in S}
        if bigger == S:
            return frozenset(S)
        S = bigger


def naive_rank(S):
    S = frozenset(S)
    for r in range(len(S) + 1):
        if any(naive_closure(B) == S for B in itertools.combinations(sorted(S), r)):
            return r


def naive_op(f):
    """Cut-scan written straight from the definition."""
    n = len(f)
    for k in range(n):
        x1, x2 = f[:k], f[k:]
        inc = all(a <= b for a, b in zip(x1, x1[1:])) and all(a <= b for a, b in zip(x2, x2[1:]))
        if inc and (not x1 or min(x1) >= max(x2)):
            return True
    return False
