"""Factor maps of OP(X,Y) over O(X,Y) plus one fixed generator.

Three pipelines, by the shape of X and Y:

* open chain X, convex Y with an extremum (`factor_open_chain`)
* X with an extremum, convex Y with an extremum (`factor_bounded_chain`),
  reduced to the open case on the interior of X
* X with an extremum, Y with both extrema (possibly not convex) containing
  an interval Ytilde isomorphic to X (`factor_through_copy`): exactly two factors
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .chain import ChainError, ExtRat, Interval, SignatureMismatch, SubsetModel, fmt, sample_points
from .constructions import ChainKind, blocks, dual_gamma, gamma_for, route
from .piecewise import (
    PiecewiseMap,
    as_subset,
    canonical_iso,
    classify,
    compose_all,
    constant,
    glue,
    identity,
    member_of,
    mirror,
    mirror_subset,
    pw_compose,
    pw_equal,
    pw_image,
    pw_inverse,
)

ORDER_PRESERVING = "order_preserving"
GENERATOR = "generator"


class WrongChainKind(ChainError):
    pass


class YNotEligible(ChainError):
    pass


class NotInOPminusO(ChainError):
    pass


class NoIsoSubset(ChainError):
    pass


class YLacksExtrema(ChainError):
    pass


@dataclass(frozen=True)
class Factorization:
    target: PiecewiseMap
    factors: tuple[tuple[PiecewiseMap, str], ...]
    y: SubsetModel

    def product(self) -> PiecewiseMap:
        return compose_all([f for f, _ in self.factors])


def verify_factorization(F: Factorization) -> tuple[bool, str]:
    """Recompose the factors and check every label; returns (ok, detail)."""
    if not F.factors:
        return False, "no factors"
    for i, (f, label) in enumerate(F.factors):
        if label == ORDER_PRESERVING:
            if not member_of(f, "O", F.y):
                return False, f"factor {i} is labelled {label} but is not in O(X,Y)"
        elif label == GENERATOR:
            if classify(f).verdict != "orientation_proper":
                return False, f"factor {i} is labelled {label} but is not orientation-preserving proper"
        else:
            return False, f"factor {i} has unknown label {label!r}"
    try:
        prod = F.product()
    except ChainError as exc:
        return False, f"factors do not compose: {exc}"
    if not pw_equal(prod, F.target):
        x = _disagreement(prod, F.target)
        trail = [x]
        for f, _ in F.factors:
            trail.append(f(trail[-1]))
        path = " -> ".join(fmt(v) for v in trail)
        return False, f"product differs from the target at x = {fmt(x)}: {path}, target {fmt(F.target(x))}"
    return True, f"{len(F.factors)} factors, product equals target"


def _disagreement(f: PiecewiseMap, g: PiecewiseMap) -> ExtRat:
    """Some point where two unequal maps on the same domain differ."""
    candidates = []
    for pc in f.pieces + g.pieces:
        iv = pc.domain
        if iv.lo_closed:
            candidates.append(iv.lo)
        if iv.hi_closed:
            candidates.append(iv.hi)
        if not iv.is_point:
            candidates.extend(sample_points(iv, 3))
    for x in candidates:
        if x in f.domain and f(x) != g(x):
            return x
    raise ChainError("maps differ but no sample point separates them")


def _require_op_minus_o(alpha: PiecewiseMap, Y: SubsetModel) -> None:
    if not member_of(alpha, "OP", Y):
        raise NotInOPminusO(f"map is not in OP(X,Y) for Y = {Y}")
    if member_of(alpha, "O", Y):
        raise NotInOPminusO("map is order-preserving")


def _convex_with_extremum(Y: SubsetModel, X: Interval) -> Interval:
    if Y.empty or not Y.is_convex:
        raise YNotEligible(f"Y = {Y} is not a nonempty interval")
    Yi = Y.as_interval()
    if not X.contains_interval(Yi):
        raise YNotEligible(f"Y = {Y} is not inside X = {X}")
    if not (Yi.lo_closed or Yi.hi_closed):
        raise YNotEligible(f"Y = {Y} has neither a minimum nor a maximum")
    return Yi


def _mirrored(F: Factorization, alpha: PiecewiseMap, Y: SubsetModel) -> Factorization:
    return Factorization(alpha, tuple((mirror(f), lab) for f, lab in F.factors), Y)


def split_value(alpha: PiecewiseMap) -> ExtRat:
    """A value h with X2.alpha <= h <= X1.alpha.

    The overlap point when it exists, else min of X1.alpha, else max of
    X2.alpha, else the supremum of X2.alpha (which lies below X1.alpha).
    """
    cl = classify(alpha)
    if cl.overlap is not None:
        return cl.overlap
    im1 = pw_image(alpha.restrict(cl.ideal))
    im2 = pw_image(alpha.restrict(cl.complement))
    for v in (im1.min(), im2.max()):
        if v is not None:
            return v
    return im2.sup()


def _transport(f: PiecewiseMap, iso: PiecewiseMap) -> PiecewiseMap:
    """iso^-1 * f * iso: carry a self-map of iso's codomain chain back to iso's domain."""
    back = pw_inverse(iso)
    return compose_all([iso.with_codomain(f.domain), f, back]).with_codomain(iso.domain)


def _extend(f: PiecewiseMap, X: Interval, low, high) -> PiecewiseMap:
    """Extend a self-map of a subinterval Z of X by constants below and above Z."""
    Z = f.domain
    below = X.below(Z.lo, inclusive=not Z.lo_closed)
    above = X.above(Z.hi, inclusive=not Z.hi_closed)
    return glue(X, X, [
        constant(below, low, X) if below else None,
        f.with_codomain(X),
        constant(above, high, X) if above else None,
    ])


def factor_open_chain(alpha: PiecewiseMap, y) -> Factorization:
    """X without extrema, Y an interval with a minimum or a maximum.

    X is sent into an interval Z of Y, the induced self-map delta of Z is
    written as (delta * g^-1) * g for the generator g of Z, and the factors
    are extended back to X by constants.
    """
    Y = as_subset(y)
    X = alpha.domain
    if ChainKind.of(X).tag != "open":
        raise WrongChainKind(f"X = {X} must have neither a minimum nor a maximum")
    Yi = _convex_with_extremum(Y, X)
    _require_op_minus_o(alpha, Y)
    if not Yi.hi_closed:
        return _mirrored(factor_open_chain(mirror(alpha), mirror_subset(Y)), alpha, Y)

    h = split_value(alpha)
    if Yi.lo_closed:
        Z = Yi
        mu = identity(Z)
        low_tail = Z.lo
        gen = gamma_for(ChainKind.closed(Z.lo, Z.hi))
        inner = Z.interior()
    else:
        q1, q2, _ = sample_points(Yi, 3)
        Z = Interval.make(q2, Yi.hi, False, True)
        mu = canonical_iso(Z, Yi)
        low_tail = q1
        model = ChainKind.max_only(Z.hi)
        gen = _transport(dual_gamma(model), canonical_iso(Z, model.interval()))
        inner = Interval.open(q2, Yi.hi)

    nu = canonical_iso(X, inner, X)
    mu_inv = pw_inverse(mu).with_codomain(Z)
    middle = compose_all([pw_inverse(nu), alpha, mu_inv]).with_codomain(Z)
    ends = [Interval.point(Z.hi)] + ([Interval.point(Z.lo)] if Z.lo_closed else [])
    delta = glue(Z, Z, [middle] + [constant(p, mu_inv(h), Z) for p in ends])

    g1, g2 = blocks(gen)
    if Z.lo_closed:
        # the closed generator is not onto, so delta is routed through it directly
        rho, sigma = route(gen, delta, g1, g2, (True, True, True, True))
        return Factorization(alpha, (
            (nu, ORDER_PRESERVING),
            (_extend(rho, X, Z.lo, Z.hi), ORDER_PRESERVING),
            (_extend(gen, X, gen(Z.hi), gen(Z.hi)), GENERATOR),
            (_extend(sigma, X, Z.lo, Z.hi), ORDER_PRESERVING),
        ), Y)

    # Z has no minimum: an order-preserving last factor could not be followed
    # by mu on the low tail, so delta is written as (delta * g^-1) * g.
    rest = compose_all([delta, pw_inverse(gen).with_codomain(Z)]).with_codomain(Z)
    if classify(rest).verdict == "order_preserving":
        on_z = [(rest, ORDER_PRESERVING)]
    else:
        rho, sigma = route(gen, rest, g1, g2, (True, True, True, True))
        on_z = [(rho, ORDER_PRESERVING), (gen, GENERATOR), (sigma, ORDER_PRESERVING)]

    top = gen(Z.hi)
    gen_ext = _extend(gen, X, top, top)
    factors = [(nu, ORDER_PRESERVING)]
    for f, lab in on_z:
        if lab == GENERATOR:
            factors.append((gen_ext, GENERATOR))
        else:
            factors.append((_extend(f, X, low_tail, Z.hi), ORDER_PRESERVING))
    factors.append((pw_compose(gen_ext, mu).with_codomain(X), GENERATOR))
    return Factorization(alpha, tuple(factors), Y)


def factor_bounded_chain(alpha: PiecewiseMap, y) -> Factorization:
    """X with a minimum or maximum: conjugate into the interior of X and factor there."""
    Y = as_subset(y)
    X = alpha.domain
    kind = ChainKind.of(X)
    if kind.tag == "open":
        raise WrongChainKind(f"X = {X} must have a minimum or a maximum")
    Yi = _convex_with_extremum(Y, X)
    _require_op_minus_o(alpha, Y)
    if kind.tag == "max_only":
        return _mirrored(factor_bounded_chain(mirror(alpha), mirror_subset(Y)), alpha, Y)

    if kind.tag == "min_only":
        copy = Interval.make(X.lo + 1, X.hi, True, False)
    else:
        q = (X.hi - X.lo) / 4
        copy = Interval.closed(X.lo + q, X.hi - q)
    interior = X.interior()
    mu = canonical_iso(X, copy, interior)
    mu_inv = pw_inverse(mu).with_codomain(X)
    beta_core = compose_all([mu_inv, alpha, mu]).with_codomain(interior)
    below = interior.below(copy.lo, inclusive=False)
    above = interior.above(copy.hi, inclusive=False)
    beta = glue(interior, interior, [
        constant(below, beta_core(copy.lo), interior) if below else None,
        beta_core,
        constant(above, beta_core(copy.hi), interior) if above else None,
    ])
    y_copy = pw_image(mu.restrict(Yi))
    inner = factor_open_chain(beta, y_copy)
    factors = tuple(
        (compose_all([mu, f, mu_inv]).with_codomain(X), lab) for f, lab in inner.factors
    )
    return Factorization(alpha, factors, Y)


def factor_through_copy(alpha: PiecewiseMap, y, ytilde: Interval) -> Factorization:
    """alpha = mu * mu~ with mu in OP(X, Ytilde) and mu~ in O(X, Y)."""
    Y = as_subset(y)
    X = alpha.domain
    if ChainKind.of(X).tag == "open":
        raise WrongChainKind(f"X = {X} must have a minimum or a maximum")
    y_min, y_max = Y.min(), Y.max()
    if y_min is None or y_max is None:
        raise YLacksExtrema(f"Y = {Y} needs a minimum and a maximum")
    if not Y.contains_interval(ytilde):
        raise NoIsoSubset(f"{ytilde} is not inside Y = {Y}")
    try:
        canonical_iso(X, ytilde)
    except SignatureMismatch:
        raise NoIsoSubset(f"X = {X} is not order-isomorphic to {ytilde}") from None
    if not member_of(alpha, "OP", Y):
        raise NotInOPminusO(f"map is not in OP(X,Y) for Y = {Y}")

    cl = classify(alpha)
    if ytilde.is_point:
        raise NoIsoSubset("Ytilde is a single point")
    s1, s2, s3, s4 = sample_points(ytilde, 4)
    upper = Interval.open(s3, ytilde.hi)
    if cl.verdict == "order_preserving":
        phi1 = canonical_iso(X, _copy_inside(upper, X), X)
        mu, mu_label = phi1, ORDER_PRESERVING
        parts = [(phi1, alpha)]
        m = None
    else:
        x1, x2 = cl.ideal, cl.complement
        phi1 = canonical_iso(x1, _copy_inside(upper, x1), X)
        phi2 = canonical_iso(x2, _copy_inside(Interval.open(ytilde.lo, s2), x2), X)
        mu, mu_label = glue(X, X, [phi1, phi2]), GENERATOR
        parts = [(phi2, alpha.restrict(x2)), (phi1, alpha.restrict(x1))]
        m = alpha(X.lo) if X.lo_closed else alpha(X.hi)

    pieces = []
    for phi, tail in parts:
        pieces.append(pw_compose(pw_inverse(phi), tail).with_codomain(X))
    first, last = pieces[0].domain, pieces[-1].domain
    below = X.below(first.lo, inclusive=not first.lo_closed)
    above = X.above(last.hi, inclusive=not last.hi_closed)
    fill = [constant(below, y_min, X) if below else None, pieces[0]]
    if len(pieces) == 2:
        v2, v1 = pieces[0].domain, pieces[1].domain
        gap = Interval.make(v2.hi, v1.lo, not v2.hi_closed, not v1.lo_closed)
        fill += [constant(gap, m, X), pieces[1]]
    fill.append(constant(above, y_max, X) if above else None)
    mu_tilde = glue(X, X, fill)
    return Factorization(alpha, ((mu, mu_label), (mu_tilde, ORDER_PRESERVING)), Y)


def _copy_inside(w: Interval, like: Interval) -> Interval:
    """A subinterval of the open interval w with the endpoint closures of `like`."""
    if like.is_point:
        return Interval.point(sample_points(w, 1)[0])
    s, t = sample_points(w, 2)
    lo = s if like.lo_closed else w.lo
    hi = t if like.hi_closed else w.hi
    return Interval.make(lo, hi, like.lo_closed, like.hi_closed)


def factor(theorem: int, alpha: PiecewiseMap, y, ytilde: Optional[Interval] = None) -> Factorization:
    if theorem == 1:
        return factor_open_chain(alpha, y)
    if theorem == 2:
        return factor_bounded_chain(alpha, y)
    if theorem == 3:
        if ytilde is None:
            raise NoIsoSubset("the copy pipeline needs Ytilde")
        return factor_through_copy(alpha, y, ytilde)
    raise ValueError(f"unknown pipeline {theorem}")


# ---------------------------------------------------------------------------
# Text form


def format_factorization(F: Factorization, verdict: Optional[tuple[bool, str]] = None) -> str:
    out = [f"y {F.y}", "target", str(F.target).rstrip("\n")]
    for f, lab in F.factors:
        out += [f"label {lab}", str(f).rstrip("\n")]
    if verdict is not None:
        out.append(f"verified: {'true' if verdict[0] else 'false'}  # {verdict[1]}")
    return "\n".join(out) + "\n"


def parse_factorization(text: str) -> Factorization:
    from .textio import ParseError, iter_blocks, parse_document, parse_subset

    y = None
    target = None
    factors = []
    for directives, f in iter_blocks(parse_document(text)):
        label = None
        for d in directives:
            if d.tokens[0] == "y":
                y = parse_subset(" ".join(d.tokens[1:]))
            elif d.tokens[0] == "label":
                label = d.tokens[1]
            elif d.tokens[0] == "target":
                label = "target"
        if label == "target":
            target = f
        elif label is None:
            raise ParseError("map block without a label")
        else:
            factors.append((f, label))
    if y is None or target is None:
        raise ParseError("factorization needs a 'y' line and a target block")
    return Factorization(target, tuple(factors), y)


__all__ = [
    "Factorization",
    "WrongChainKind",
    "YNotEligible",
    "NotInOPminusO",
    "NoIsoSubset",
    "YLacksExtrema",
    "factor",
    "factor_open_chain",
    "factor_bounded_chain",
    "factor_through_copy",
    "verify_factorization",
    "split_value",
    "format_factorization",
    "parse_factorization",
    "fmt",
]
