"""Relative generators of OP modulo O, single-generator tests and sandwiches."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .chain import (
    NEG_INF,
    POS_INF,
    ChainError,
    ExtRat,
    Interval,
    MobiusMap,
    SubsetModel,
    ext,
    fmt,
    is_inf,
    sample_points,
    split_point,
)
from .piecewise import (
    Gap,
    Inapplicable,
    Piece,
    PiecewiseMap,
    as_subset,
    canonical_iso,
    classify,
    constant,
    image_gaps,
    glue,
    member_of,
    mirror,
    mirror_interval,
    mirror_subset,
    pw_compose,
    pw_image,
    pw_inverse,
)


class BadParams(ChainError):
    pass


class OpenChainUnsupported(ChainError):
    pass


class NotOrientationProper(ChainError):
    pass


class NotSingleGenerator(ChainError):
    pass


@dataclass(frozen=True)
class ChainKind:
    """Shape of a chain: closed [a,b], min_only [a,+inf), max_only (-inf,b] or open."""

    tag: str
    a: Optional[Fraction] = None
    b: Optional[Fraction] = None

    @classmethod
    def closed(cls, a, b) -> "ChainKind":
        return cls("closed", ext(a), ext(b))

    @classmethod
    def min_only(cls, a) -> "ChainKind":
        return cls("min_only", a=ext(a))

    @classmethod
    def max_only(cls, b) -> "ChainKind":
        return cls("max_only", b=ext(b))

    @classmethod
    def open(cls) -> "ChainKind":
        return cls("open")

    @classmethod
    def of(cls, iv: Interval) -> "ChainKind":
        if iv.lo_closed and iv.hi_closed:
            return cls("closed", iv.lo, iv.hi)
        if iv.lo_closed:
            return cls("min_only", a=iv.lo)
        if iv.hi_closed:
            return cls("max_only", b=iv.hi)
        return cls("open")

    def interval(self) -> Interval:
        if self.tag == "closed":
            return Interval.closed(self.a, self.b)
        if self.tag == "min_only":
            return Interval.make(self.a, POS_INF, True, False)
        if self.tag == "max_only":
            return Interval.make(NEG_INF, self.b, False, True)
        return Interval.open(NEG_INF, POS_INF)

    def __str__(self) -> str:
        return f"{self.tag} {self.interval()}"


# ---------------------------------------------------------------------------
# The generators


def default_params(kind: ChainKind) -> list[Fraction]:
    """Deterministic parameters (c, d) / (c,) / (c, l) for gamma_for."""
    if kind.tag == "closed":
        a, b = kind.a, kind.b
        c = a + (b - a) / 3
        return [c, c + (b - a) / 3]
    if kind.tag == "min_only":
        return [kind.a + 1]
    if kind.tag == "max_only":
        return [kind.b - 1, kind.b - 2]
    raise OpenChainUnsupported("no generator construction for a chain without extrema")


def gamma_for(kind: ChainKind, params: Optional[Sequence] = None) -> PiecewiseMap:
    """The generator gamma of OP(X) modulo O(X) for the three bounded shapes.

    closed [a,b], params (c, d) with a < c < d < b:
        a -> d, (a,c) -> (d,b), c -> a, (c,b) -> (a,c), b -> c
    min_only [a,+inf), params (c,):
        a -> c, (a,c) -> (c,+inf), c -> a, (c,+inf) -> (a,c)  (second part is the inverse)
    max_only (-inf,b], params (c, l) with l < c < b:
        (-inf,c) -> (c,b), c -> l, (c,b) -> (l,c), b -> c
    """
    if kind.tag == "open":
        raise OpenChainUnsupported("no generator construction for a chain without extrema")
    params = [ext(p) for p in (default_params(kind) if params is None else params)]
    X = kind.interval()
    pt = Interval.point
    if kind.tag == "closed":
        if len(params) != 2:
            raise BadParams("closed chain needs (c, d)")
        a, b = kind.a, kind.b
        c, d = params
        if not (a < c < d < b):
            raise BadParams(f"need a < c < d < b, got {fmt(a)} {fmt(c)} {fmt(d)} {fmt(b)}")
        return glue(X, X, [
            Piece(pt(a), d),
            canonical_iso(Interval.open(a, c), Interval.open(d, b), X),
            Piece(pt(c), a),
            canonical_iso(Interval.open(c, b), Interval.open(a, c), X),
            Piece(pt(b), c),
        ])
    if kind.tag == "min_only":
        if len(params) != 1:
            raise BadParams("min_only chain needs (c,)")
        a, (c,) = kind.a, params
        if not (a < c < POS_INF):
            raise BadParams(f"need a < c, got {fmt(a)} {fmt(c)}")
        nu = canonical_iso(Interval.open(a, c), Interval.open(c, POS_INF), X)
        return glue(X, X, [Piece(pt(a), c), nu, Piece(pt(c), a), pw_inverse(nu).with_codomain(X)])
    if len(params) != 2:
        raise BadParams("max_only chain needs (c, l)")
    b, (c, l) = kind.b, params
    if not (NEG_INF < l < c < b):
        raise BadParams(f"need l < c < b, got {fmt(l)} {fmt(c)} {fmt(b)}")
    return glue(X, X, [
        canonical_iso(Interval.open(NEG_INF, c), Interval.open(c, b), X),
        Piece(pt(c), l),
        canonical_iso(Interval.open(c, b), Interval.open(l, c), X),
        Piece(pt(b), c),
    ])


def dual_gamma(kind: ChainKind, c=None) -> PiecewiseMap:
    """Mirror image of the min_only generator, for a chain (-inf, b].

    Unlike the max_only display above, its lower block is mapped onto a
    coinitial set, so it does generate OP((-inf,b]) together with O.
    """
    if kind.tag != "max_only":
        raise BadParams("dual_gamma is defined for max_only chains")
    c = kind.b - 1 if c is None else ext(c)
    if not c < kind.b:
        raise BadParams("need c < b")
    return mirror(gamma_for(ChainKind.min_only(-kind.b), [-c]))


def generator_for(kind: ChainKind) -> PiecewiseMap:
    """The generator used by the factorization pipelines."""
    if kind.tag == "max_only":
        return dual_gamma(kind)
    return gamma_for(kind)


# ---------------------------------------------------------------------------
# Witnesses and the single-generator criterion


@dataclass(frozen=True)
class Witness:
    interval: Interval
    mobius: MobiusMap

    def image(self) -> Interval:
        return Piece(self.interval, self.mobius).image()

    def __str__(self) -> str:
        return f"{self.interval} via {self.mobius}"


@dataclass(frozen=True)
class Witnesses:
    x1: tuple[Witness, ...]
    x2: tuple[Witness, ...]


def blocks(f: PiecewiseMap) -> tuple[Interval, Interval]:
    cl = classify(f)
    if cl.verdict != "orientation_proper":
        raise NotOrientationProper(f"map is {cl.verdict}")
    return cl.ideal, cl.complement


def iso_witnesses(f: PiecewiseMap) -> Witnesses:
    """Maximal open intervals of each block on which f is one increasing Mobius piece."""
    x1, x2 = blocks(f)
    sides: tuple[list, list] = ([], [])
    for pc in f.pieces:
        if pc.is_const or pc.domain.is_point:
            continue
        w = Witness(pc.domain.interior(), pc.action)
        sides[0 if x1.contains_interval(w.interval) else 1].append(w)
    return Witnesses(tuple(sides[0]), tuple(sides[1]))


@dataclass(frozen=True)
class GeneratorVerdict:
    ok: bool
    reason: str
    x1: Optional[Witness] = None
    x2: Optional[Witness] = None

    def __bool__(self) -> bool:
        return self.ok


def single_generator_test(f: PiecewiseMap) -> GeneratorVerdict:
    """Decide whether <O(X), f> = OP(X) within the piecewise-Mobius class."""
    kind = ChainKind.of(f.domain)
    if kind.tag == "open":
        raise OpenChainUnsupported("no single-generator criterion for a chain without extrema")
    wit = iso_witnesses(f)
    if not wit.x1:
        return GeneratorVerdict(False, "no injective open piece inside the ideal X1")
    if not wit.x2:
        return GeneratorVerdict(False, "no injective open piece inside X2")
    w1, w2 = wit.x1[0], wit.x2[0]
    if kind.tag == "min_only":
        cofinal = [w for w in wit.x1 if w.image().hi == POS_INF]
        if not cofinal:
            return GeneratorVerdict(False, "no X1 witness has an image cofinal in X", w1, w2)
        w1 = cofinal[0]
    if kind.tag == "max_only":
        coinitial = [w for w in wit.x2 if w.image().lo == NEG_INF]
        if not coinitial:
            return GeneratorVerdict(False, "no X2 witness has an image coinitial in X", w1, w2)
        w2 = coinitial[0]
    return GeneratorVerdict(True, f"witnesses X1: {w1}; X2: {w2}", w1, w2)


# ---------------------------------------------------------------------------
# Sandwich


def _sub(w: Interval, like: Interval, hug_lo: bool, hug_hi: bool) -> Interval:
    """Sub-interval of w with the endpoint closures of `like`."""
    s, t = sample_points(w, 2) if not w.is_point else (w.lo, w.lo)
    if like.is_point:
        if hug_lo and w.lo_closed:
            return Interval.point(w.lo)
        if hug_hi and w.hi_closed:
            return Interval.point(w.hi)
        return Interval.point(s)
    lo = w.lo if hug_lo and (w.lo_closed or not like.lo_closed) else s
    hi = w.hi if hug_hi and (w.hi_closed or not like.hi_closed) else t
    return Interval.make(lo, hi, like.lo_closed, like.hi_closed)


def _between(X: Interval, lo, lo_closed: bool, hi, hi_closed: bool) -> Optional[Interval]:
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return X.intersect(Interval.make(lo, hi, lo_closed, hi_closed))


def _image_hull(f: PiecewiseMap, part: Interval) -> Interval:
    """Smallest interval containing f(part); only its ends are used for fills."""
    parts = pw_image(f.restrict(part)).parts
    first, last = parts[0], parts[-1]
    return Interval.make(first.lo, last.hi, first.lo_closed, last.hi_closed)


def route(middle: PiecewiseMap, target: PiecewiseMap, w1: Interval, w2: Interval,
          hug: tuple[bool, bool, bool, bool]) -> tuple[PiecewiseMap, PiecewiseMap]:
    """Order-preserving (left, right) with left * middle * right = target.

    The blocks of `target` are embedded into w1 (inside the ideal of
    `middle`) and w2 (inside its complement); `right` undoes `middle` on the
    two resulting images and finishes with `target`, filling the rest of
    the chain with constants.
    """
    X = target.domain
    t1, t2 = blocks(target)
    u1 = _sub(w1, t1, hug[0], hug[1])
    u2 = _sub(w2, t2, hug[2], hug[3])
    left = glue(X, X, [canonical_iso(t1, u1, X), canonical_iso(t2, u2, X)])
    through = pw_compose(left, middle)
    back = []
    for blk in (t2, t1):
        part = through.restrict(blk)
        back.append(pw_compose(pw_inverse(part), target.restrict(blk)).with_codomain(X))
    v2, v1 = back[0].domain, back[1].domain
    if not (v2.hi < v1.lo or (v2.hi == v1.lo and not (v2.hi_closed and v1.lo_closed))):
        raise ChainError(f"block images {v2} and {v1} are not separated")
    im1 = _image_hull(target, t1)
    im2 = _image_hull(target, t2)

    def fill(region, choices):
        if region is None:
            return None
        for v in choices:
            if v is not None and v in X:
                return constant(region, v, X)
        raise ChainError(f"no admissible constant for {region}")

    below = _between(X, X.lo, X.lo_closed, v2.lo, not v2.lo_closed)
    gap = _between(X, v2.hi, not v2.hi_closed, v1.lo, not v1.lo_closed)
    above = _between(X, v1.hi, not v1.hi_closed, X.hi, X.hi_closed)
    low_v = [im2.lo if im2.lo_closed else None, X.lo if X.lo_closed else None]
    mid_v = [im2.hi if im2.hi_closed else None, im1.lo if im1.lo_closed else None, im2.hi]
    high_v = [im1.hi if im1.hi_closed else None, X.hi if X.hi_closed else None, im1.hi]
    right = glue(X, X, [fill(below, low_v), back[0], fill(gap, mid_v), back[1], fill(above, high_v)])
    return left, right


def sandwich(f: PiecewiseMap, c=None, d=None) -> tuple[PiecewiseMap, PiecewiseMap]:
    """(phi_hat, phi_tilde) in O(X) with phi_hat * f * phi_tilde = gamma_for(kind, params)."""
    kind = ChainKind.of(f.domain)
    verdict = single_generator_test(f)
    if not verdict:
        raise NotSingleGenerator(verdict.reason)
    if c is None:
        params = default_params(kind)
    elif kind.tag == "min_only":
        params = [c]
    else:
        if d is None:
            raise BadParams(f"{kind.tag} needs two parameters")
        params = [c, d]
    target = gamma_for(kind, params)
    return route(f, target, verdict.x1.interval, verdict.x2.interval, (False, True, True, False))


# ---------------------------------------------------------------------------
# Obstruction certificate


@dataclass(frozen=True)
class ObstructionCertificate:
    y: SubsetModel
    per_element: tuple[tuple[PiecewiseMap, tuple[Gap, ...]], ...]
    a: ExtRat
    b: ExtRat
    h: ExtRat
    side: str  # 'upper': image of alpha is {y <= h}; 'lower': {y >= h}
    alpha: PiecewiseMap

    def expected_image(self) -> SubsetModel:
        iv = self.y.as_interval()
        if self.side == "upper":
            return SubsetModel((Interval.make(iv.lo, self.h, iv.lo_closed, True),))
        return SubsetModel((Interval.make(self.h, iv.hi, True, iv.hi_closed),))


def _cut_alpha(X: Interval, Y: Interval, h: Fraction) -> PiecewiseMap:
    """A map of OP(X,Y) \\ O(X,Y) whose image is exactly {y in Y : y <= h}."""
    k = (Y.lo + h) / 2 if not is_inf(Y.lo) else h - 1
    p0, p, q = sample_points(X.interior(), 3)
    parts = []
    if X.lo_closed:
        parts.append(canonical_iso(X.below(p, True), Interval.closed(k, h), X))
    else:
        parts.append(constant(Interval.make(X.lo, p0, False, False), k, X))
        parts.append(canonical_iso(Interval.closed(p0, p), Interval.closed(k, h), X))
    if X.hi_closed:
        parts.append(canonical_iso(Interval.open(p, q), Interval.open(Y.lo, k), X))
        parts.append(constant(Interval.make(q, X.hi, True, True), k, X))
    else:
        parts.append(canonical_iso(Interval.open(p, X.hi), Interval.open(Y.lo, k), X))
    return glue(X, X, parts)


def obstruction_certificate(G: Sequence[PiecewiseMap], y, X: Optional[Interval] = None) -> ObstructionCertificate:
    """Image gaps for every element of G plus a map whose image sits above them all.

    This packages the data of the infinite-relative-rank argument; it does
    not decide non-membership of alpha in <O(X,Y) u G>.
    """
    Y = as_subset(y)
    if X is None:
        X = G[0].domain if G else Interval.open(NEG_INF, POS_INF)
    if not Y.is_convex or Y.empty:
        raise Inapplicable("Y must be a nonempty interval")
    Yi = Y.as_interval()
    if Yi.lo_closed or Yi.hi_closed:
        raise Inapplicable("Y must have neither a minimum nor a maximum")
    if not X.contains_interval(Yi):
        raise Inapplicable("Y must lie inside X")
    has_below = _between(X, X.lo, X.lo_closed, Yi.lo, True) is not None
    has_above = _between(X, Yi.hi, True, X.hi, X.hi_closed) is not None
    if not has_below and not has_above:
        raise Inapplicable("Y must be a proper subset of X")
    per = []
    for g in G:
        if g.domain != X:
            raise Inapplicable("all maps must share the chain X")
        per.append((g, image_gaps(g, Y)))
    if not has_below:
        mirrored = obstruction_certificate([mirror(g) for g in G], mirror_subset(Y), mirror_interval(X))
        return ObstructionCertificate(
            Y, tuple(per), -mirrored.b, -mirrored.a, -mirrored.h, "lower", mirror(mirrored.alpha)
        )
    uppers = [gap.value for _, gaps in per for gap in gaps if gap.side == "upper"]
    lowers = [gap.value for _, gaps in per for gap in gaps if gap.side == "lower"]
    mid = split_point(Yi)
    b = max(uppers) if uppers else mid
    a = min(lowers) if lowers else mid
    h = (b + Yi.hi) / 2 if not is_inf(Yi.hi) else b + 1
    return ObstructionCertificate(Y, tuple(per), a, b, h, "upper", _cut_alpha(X, Yi, h))


def validate_certificate(cert: ObstructionCertificate) -> list[str]:
    """Empty list when every certificate invariant holds, else the failures."""
    problems = []
    for i, (g, gaps) in enumerate(cert.per_element):
        if tuple(gaps) != image_gaps(g, cert.y):
            problems.append(f"element {i}: recorded gaps differ from recomputed ones")
        for gap in gaps:
            if gap.side == "upper" and not gap.value <= cert.b:
                problems.append(f"element {i}: upper gap {fmt(gap.value)} above b")
            if gap.side == "lower" and not gap.value >= cert.a:
                problems.append(f"element {i}: lower gap {fmt(gap.value)} below a")
            if cert.side == "upper" and gap.side == "upper" and not gap.value < cert.h:
                problems.append(f"element {i}: h is not above {fmt(gap.value)}")
            if cert.side == "lower" and gap.side == "lower" and not gap.value > cert.h:
                problems.append(f"element {i}: h is not below {fmt(gap.value)}")
    if cert.h not in cert.y:
        problems.append("h is not in Y")
    if pw_image(cert.alpha) != cert.expected_image():
        problems.append(f"alpha has image {pw_image(cert.alpha)}, expected {cert.expected_image()}")
    if not member_of(cert.alpha, "OP", cert.y) or member_of(cert.alpha, "O", cert.y):
        problems.append("alpha is not in OP(X,Y) \\ O(X,Y)")
    return problems
