"""Piecewise constant-or-Mobius transformations of a chain model.

Maps are total on their domain chain and always held in canonical form:
the domain is cut into the fewest pieces, with each boundary point given
to the left neighbour when that neighbour's formula already produces the
right value there, else to the right neighbour, else kept as a singleton.
Two maps are then pointwise equal iff their canonical forms are equal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .chain import (
    ChainError,
    ExtRat,
    Interval,
    MobiusMap,
    PoleEvaluation,
    SignatureMismatch,
    SubsetModel,
    ext,
    fmt,
    mobius_image,
    mobius_monotone_on,
    split_point,
    std_map,
)

Action = Union[MobiusMap, Fraction, float]


class InvariantViolation(ChainError):
    def __init__(self, msg: str, index: Optional[int] = None):
        super().__init__(msg if index is None else f"piece {index}: {msg}")
        self.index = index


class OutOfDomain(ChainError):
    pass


class DomainMismatch(ChainError):
    pass


class NotApplicable(ChainError):
    pass


class Inapplicable(ChainError):
    pass


class AuditFailure(AssertionError):
    pass


def _is_mobius(action) -> bool:
    return isinstance(action, MobiusMap)


def extend_value(action: Action, x: ExtRat) -> Optional[ExtRat]:
    """Value the formula would give at x, or None at a pole."""
    if not _is_mobius(action):
        return action
    try:
        return action(x)
    except PoleEvaluation:
        return None


@dataclass(frozen=True)
class Piece:
    domain: Interval
    action: Action

    def __post_init__(self):
        if not _is_mobius(self.action):
            object.__setattr__(self, "action", ext(self.action))
        elif not self.domain.is_point:
            verdict = mobius_monotone_on(self.action, self.domain)
            if verdict != "increasing":
                raise InvariantViolation(f"{self.action} is {verdict} on {self.domain}")
        elif extend_value(self.action, self.domain.lo) is None:
            raise InvariantViolation(f"{self.action} has its pole at {self.domain}")

    @property
    def is_const(self) -> bool:
        return not _is_mobius(self.action)

    def __call__(self, x: ExtRat) -> ExtRat:
        if self.is_const:
            return self.action
        return self.action(x)

    def image(self) -> Interval:
        if self.is_const:
            return Interval.point(self.action)
        if self.domain.is_point:
            return Interval.point(self.action(self.domain.lo))
        return mobius_image(self.action, self.domain)

    def __str__(self) -> str:
        act = str(self.action) if not self.is_const else "const " + fmt(self.action)
        return f"piece {self.domain} {act}"


# An atom is an isolated point or an open interval carrying one action.
@dataclass
class _Atom:
    lo: ExtRat
    hi: ExtRat
    action: Action  # constant value for point atoms

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def inf(self) -> tuple[ExtRat, bool]:
        if self.is_point or not _is_mobius(self.action):
            return self.action, True
        return self.action.limit(self.lo, from_above=True), False

    def sup(self) -> tuple[ExtRat, bool]:
        if self.is_point or not _is_mobius(self.action):
            return self.action, True
        return self.action.limit(self.hi, from_above=False), False


def _explode(pieces: Sequence[Piece]) -> list[_Atom]:
    atoms: list[_Atom] = []
    for pc in pieces:
        d = pc.domain
        if d.is_point:
            atoms.append(_Atom(d.lo, d.lo, pc(d.lo)))
            continue
        if d.lo_closed:
            atoms.append(_Atom(d.lo, d.lo, pc(d.lo)))
        atoms.append(_Atom(d.lo, d.hi, pc.action))
        if d.hi_closed:
            atoms.append(_Atom(d.hi, d.hi, pc(d.hi)))
    return atoms


def _canonical_pieces(pieces: Sequence[Piece]) -> tuple[Piece, ...]:
    atoms = _explode(pieces)
    # fuse interval/point/interval runs carrying one formula
    fused: list[_Atom] = []
    for at in atoms:
        if (
            not at.is_point
            and len(fused) >= 2
            and fused[-1].is_point
            and not fused[-2].is_point
            and fused[-2].action == at.action
            and extend_value(at.action, fused[-1].lo) == fused[-1].action
        ):
            fused.pop()
            fused[-1] = _Atom(fused[-1].lo, at.hi, at.action)
        else:
            fused.append(at)

    out: list[list] = []  # [lo, hi, lo_closed, hi_closed, action]
    pending_closed = False
    for i, at in enumerate(fused):
        if not at.is_point:
            out.append([at.lo, at.hi, pending_closed, False, at.action])
            pending_closed = False
            continue
        x, v = at.lo, at.action
        if out and not out[-1][3] and out[-1][1] == x and extend_value(out[-1][4], x) == v:
            out[-1][3] = True
        elif (
            i + 1 < len(fused)
            and not fused[i + 1].is_point
            and extend_value(fused[i + 1].action, x) == v
        ):
            pending_closed = True
        else:
            out.append([x, x, True, True, v])
    # constants on singletons are stored as constants, never as formulas
    result = []
    for lo, hi, lc, hc, act in out:
        dom = Interval.make(lo, hi, lc, hc)
        if dom.is_point and _is_mobius(act):
            act = act(lo)
        result.append(Piece(dom, act))
    return tuple(result)


@dataclass(frozen=True)
class PiecewiseMap:
    domain: Interval
    codomain: Interval
    pieces: tuple[Piece, ...] = field(default=())

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise InvariantViolation("a total map needs at least one piece")
        order = sorted(range(len(pieces)), key=lambda i: (pieces[i].domain.lo, not pieces[i].domain.lo_closed))
        pieces = tuple(pieces[i] for i in order)
        d = self.domain
        first, last = pieces[0].domain, pieces[-1].domain
        if first.lo != d.lo or first.lo_closed != d.lo_closed:
            raise InvariantViolation(f"pieces do not start at the domain start {d}", order[0])
        if last.hi != d.hi or last.hi_closed != d.hi_closed:
            raise InvariantViolation(f"pieces do not end at the domain end {d}", order[-1])
        for k in range(len(pieces) - 1):
            a, b = pieces[k].domain, pieces[k + 1].domain
            if a.hi > b.lo or (a.hi == b.lo and a.hi_closed and b.lo_closed):
                raise InvariantViolation(f"{a} overlaps {b}", order[k + 1])
            if a.hi < b.lo or not (a.hi_closed or b.lo_closed):
                raise InvariantViolation(f"gap between {a} and {b}", order[k + 1])
        for k, pc in enumerate(pieces):
            if not self.codomain.contains_interval(pc.image()):
                raise InvariantViolation(
                    f"image {pc.image()} leaves codomain {self.codomain}", order[k]
                )
        object.__setattr__(self, "pieces", _canonical_pieces(pieces))

    def __call__(self, x) -> ExtRat:
        return pw_eval(self, x)

    def then(self, other: "PiecewiseMap") -> "PiecewiseMap":
        return pw_compose(self, other)

    def restrict(self, iv: Interval) -> "PiecewiseMap":
        if not self.domain.contains_interval(iv):
            raise DomainMismatch(f"{iv} is not inside {self.domain}")
        parts = []
        for pc in self.pieces:
            dom = pc.domain.intersect(iv)
            if dom is not None:
                parts.append(Piece(dom, pc.action))
        return PiecewiseMap(iv, self.codomain, tuple(parts))

    def with_codomain(self, codomain: Interval) -> "PiecewiseMap":
        return PiecewiseMap(self.domain, codomain, self.pieces)

    def image(self) -> SubsetModel:
        return pw_image(self)

    def __str__(self) -> str:
        from .textio import format_map

        return format_map(self)


# ---------------------------------------------------------------------------
# Basic constructors


def identity(domain: Interval, codomain: Optional[Interval] = None) -> PiecewiseMap:
    return PiecewiseMap(domain, codomain or domain, (Piece(domain, MobiusMap.identity()),))


def constant(domain: Interval, value, codomain: Optional[Interval] = None) -> PiecewiseMap:
    return PiecewiseMap(domain, codomain or domain, (Piece(domain, ext(value)),))


def glue(domain: Interval, codomain: Interval, parts: Iterable) -> PiecewiseMap:
    """Join maps (or bare pieces) whose domains partition `domain`."""
    pieces: list[Piece] = []
    for p in parts:
        if p is None:
            continue
        if isinstance(p, Piece):
            pieces.append(p)
        else:
            pieces.extend(p.pieces)
    return PiecewiseMap(domain, codomain, tuple(pieces))


def canonical_iso(src: Interval, dst: Interval, codomain: Optional[Interval] = None) -> PiecewiseMap:
    """Order-isomorphism src -> dst built from at most two Mobius pieces."""
    codomain = codomain or dst
    if src.signature != dst.signature:
        raise SignatureMismatch(f"no order-isomorphism {src} -> {dst}")
    if src.is_point or dst.is_point:
        if not (src.is_point and dst.is_point):
            raise SignatureMismatch(f"no order-isomorphism {src} -> {dst}")
        return constant(src, dst.lo, codomain)
    if src.is_line and dst.is_line:
        return identity(src, codomain)
    if dst.is_line:
        return pw_inverse(canonical_iso(dst, src)).with_codomain(codomain)
    if src.is_line:
        m = split_point(dst)
        s_lo = Interval.make(src.lo, 0, src.lo_closed, False)
        s_hi = Interval.make(0, src.hi, True, src.hi_closed)
        d_lo = Interval.make(dst.lo, m, dst.lo_closed, False)
        d_hi = Interval.make(m, dst.hi, True, dst.hi_closed)
        return glue(src, codomain, [canonical_iso(s_lo, d_lo, codomain), canonical_iso(s_hi, d_hi, codomain)])
    m = std_map(src).then(std_map(dst).inverse())
    return PiecewiseMap(src, codomain, (Piece(src, m),))


# ---------------------------------------------------------------------------
# Evaluation, composition, equality, image


def pw_eval(f: PiecewiseMap, x) -> ExtRat:
    x = ext(x)
    for pc in f.pieces:
        if x in pc.domain:
            return pc(x)
    raise OutOfDomain(f"{fmt(x)} is not in {f.domain}")


def _preimage_bound(m: MobiusMap, dom: Interval, v: ExtRat) -> ExtRat:
    if v == m.limit(dom.lo, from_above=True):
        return dom.lo
    if v == m.limit(dom.hi, from_above=False):
        return dom.hi
    return m.inverse()(v)


def pw_compose(f: PiecewiseMap, g: PiecewiseMap) -> PiecewiseMap:
    """Apply f, then g."""
    # the codomain chain is only a bound; the actual image is what matters
    if not g.domain.contains_interval(f.codomain) and not pw_image(f).issubset(
        SubsetModel((g.domain,))
    ):
        raise DomainMismatch(f"image of f is not inside {g.domain}")
    out: list[Piece] = []
    for pc in f.pieces:
        if pc.is_const or pc.domain.is_point:
            out.append(Piece(pc.domain, pw_eval(g, pc(pc.domain.lo))))
            continue
        m = pc.action
        img = pc.image()
        for gp in g.pieces:
            part = img.intersect(gp.domain)
            if part is None:
                continue
            lo = _preimage_bound(m, pc.domain, part.lo)
            hi = _preimage_bound(m, pc.domain, part.hi)
            dom = Interval.make(lo, hi, part.lo_closed, part.hi_closed)
            act = gp.action if gp.is_const else m.then(gp.action)
            out.append(Piece(dom, act))
    return PiecewiseMap(f.domain, g.codomain, tuple(out))


def compose_all(maps: Sequence[PiecewiseMap]) -> PiecewiseMap:
    result = maps[0]
    for m in maps[1:]:
        result = pw_compose(result, m)
    return result


def pw_equal(f: PiecewiseMap, g: PiecewiseMap) -> bool:
    if f.domain != g.domain:
        raise DomainMismatch("maps with different domains are not comparable")
    return f.pieces == g.pieces


def pw_image(f: PiecewiseMap) -> SubsetModel:
    return SubsetModel.of(pc.image() for pc in f.pieces)


def pw_inverse(f: PiecewiseMap) -> PiecewiseMap:
    """Inverse of an injective increasing-on-pieces map, defined on its image."""
    img = pw_image(f)
    if not img.is_convex:
        raise ChainError(f"image {img} is not an interval")
    parts: list[Piece] = []
    for pc in f.pieces:
        pim = pc.image()
        if pc.is_const or pc.domain.is_point:
            if not pc.domain.is_point:
                raise ChainError("map is not injective")
            parts.append(Piece(pim, pc.domain.lo))
        else:
            parts.append(Piece(pim, pc.action.inverse()))
    try:
        return PiecewiseMap(img.as_interval(), f.domain, tuple(parts))
    except InvariantViolation as exc:
        raise ChainError(f"map is not injective: {exc}") from None


def mirror_interval(iv: Interval) -> Interval:
    return Interval.make(-iv.hi, -iv.lo, iv.hi_closed, iv.lo_closed)


def mirror_subset(y: SubsetModel) -> SubsetModel:
    return SubsetModel.of(mirror_interval(p) for p in y.parts)


def mirror(f: PiecewiseMap) -> PiecewiseMap:
    """Conjugate by x -> -x; orders reverse on both sides, so O and OP are kept."""
    parts = []
    for pc in f.pieces:
        dom = mirror_interval(pc.domain)
        if pc.is_const:
            parts.append(Piece(dom, -pc.action))
        else:
            m = pc.action
            parts.append(Piece(dom, MobiusMap(m.a, -m.b, -m.c, m.d)))
    return PiecewiseMap(mirror_interval(f.domain), mirror_interval(f.codomain), tuple(parts))


# ---------------------------------------------------------------------------
# Classification


@dataclass(frozen=True)
class Classification:
    verdict: str  # order_preserving | orientation_proper | neither
    ideal: Optional[Interval] = None
    overlap: Optional[ExtRat] = None  # None encodes the empty intersection
    domain: Optional[Interval] = None

    @property
    def complement(self) -> Optional[Interval]:
        if self.ideal is None or self.domain is None or self.verdict != "orientation_proper":
            return None
        return self.domain.above(self.ideal.hi, inclusive=not self.ideal.hi_closed)

    def __str__(self) -> str:
        if self.verdict == "neither":
            return "neither"
        ov = "empty" if self.overlap is None else "{" + fmt(self.overlap) + "}"
        return f"{self.verdict} ideal {self.ideal} overlap {ov}"


def _monotone_run(atoms: Sequence[_Atom]) -> bool:
    return all(atoms[k].sup()[0] <= atoms[k + 1].inf()[0] for k in range(len(atoms) - 1))


def valid_ideals(f: PiecewiseMap) -> list[tuple[Interval, Optional[ExtRat]]]:
    """Every proper cut (X1, overlap) satisfying the orientation-preserving conditions.

    Only cuts between atoms are tried; a cut through the inside of an
    increasing piece can never produce the required descent.
    """
    atoms = _explode(f.pieces)
    found = []
    for t in range(1, len(atoms)):
        left, right = atoms[:t], atoms[t:]
        if not (_monotone_run(left) and _monotone_run(right)):
            continue
        (rs, rs_att), (li, li_att) = right[-1].sup(), left[0].inf()
        if rs > li:
            continue
        end = left[-1]
        ideal = Interval.make(f.domain.lo, end.hi, f.domain.lo_closed, end.is_point)
        overlap = rs if (rs == li and rs_att and li_att) else None
        found.append((ideal, overlap))
    return found


def classify(f: PiecewiseMap) -> Classification:
    atoms = _explode(f.pieces)
    if _monotone_run(atoms):
        return Classification("order_preserving", f.domain, None, f.domain)
    cuts = valid_ideals(f)
    if not cuts:
        return Classification("neither", domain=f.domain)
    ideal, overlap = cuts[0]
    return Classification("orientation_proper", ideal, overlap, f.domain)


def as_subset(y) -> SubsetModel:
    if isinstance(y, SubsetModel):
        return y
    if isinstance(y, Interval):
        return SubsetModel((y,))
    if isinstance(y, str):
        from .textio import parse_subset

        return parse_subset(y)
    return SubsetModel.of(y)


def member_of(f: PiecewiseMap, family: str, y) -> bool:
    """family is 'O' or 'OP'."""
    y = as_subset(y)
    if not pw_image(f).issubset(y):
        return False
    verdict = classify(f).verdict
    if family == "O":
        return verdict == "order_preserving"
    if family == "OP":
        return verdict in ("order_preserving", "orientation_proper")
    raise ValueError(f"unknown family {family!r}")


@dataclass(frozen=True)
class AuditReport:
    side: str  # 'max_x1' or 'min_x2'
    point: ExtRat
    value: ExtRat
    image_extremum: ExtRat

    def __str__(self) -> str:
        what = "max X1" if self.side == "max_x1" else "min X2"
        ext_name = "max" if self.side == "max_x1" else "min"
        return f"{what} = {fmt(self.point)}, f = {fmt(self.value)} = {ext_name} image"


def extremum_audit(f: PiecewiseMap, y) -> AuditReport:
    """Check that the max of X1 (or min of X2) lands on the image extremum."""
    y = as_subset(y)
    cl = classify(f)
    if cl.verdict != "orientation_proper":
        raise NotApplicable(f"map is {cl.verdict}")
    img = pw_image(f)
    if cl.ideal.hi_closed:
        c = cl.ideal.hi
        v, target, side = f(c), img.max(), "max_x1"
    else:
        c = cl.ideal.hi
        v, target, side = f(c), img.min(), "min_x2"
    if target is None or v != target:
        raise AuditFailure(f"f({fmt(c)}) = {fmt(v)} is not the image extremum of {img}")
    if v not in y:
        raise AuditFailure(f"{fmt(v)} is not in Y = {y}")
    return AuditReport(side, c, v, target)


@dataclass(frozen=True)
class Gap:
    side: str  # 'upper' | 'lower'
    value: ExtRat

    def __str__(self) -> str:
        return ("UpperGap(" if self.side == "upper" else "LowerGap(") + fmt(self.value) + ")"


def image_gaps(f: PiecewiseMap, y) -> tuple[Gap, ...]:
    """Points of Y beyond which the image of f is empty (upper and/or lower)."""
    y = as_subset(y)
    if y.empty or y.min() is not None or y.max() is not None:
        raise Inapplicable("Y must have neither a minimum nor a maximum")
    if not member_of(f, "OP", y) or member_of(f, "O", y):
        raise Inapplicable("map is not in OP(X,Y) \\ O(X,Y)")
    img = pw_image(f)
    gaps = []
    top = img.max() if img.max() is not None else img.sup()
    if top in y:
        gaps.append(Gap("upper", top))
    bottom = img.min() if img.min() is not None else img.inf()
    if bottom in y:
        gaps.append(Gap("lower", bottom))
    if not gaps:
        raise AuditFailure(f"no gap found for image {img} in {y}")
    return tuple(gaps)


# name used by the acceptance contract
corollary1_bounds = image_gaps
