import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gen import LINE, fixture, random_op_map
from ordchain.chain import POS_INF, Interval, MobiusMap, SubsetModel, sample_points
from ordchain.constructions import ChainKind, gamma_for
from ordchain.piecewise import (
    AuditFailure,
    Inapplicable,
    InvariantViolation,
    NotApplicable,
    Piece,
    PiecewiseMap,
    canonical_iso,
    classify,
    compose_all,
    constant,
    image_gaps,
    extremum_audit,
    glue,
    identity,
    member_of,
    mirror,
    mirror_subset,
    pw_compose,
    pw_equal,
    pw_image,
    pw_inverse,
    valid_ideals,
)
from ordchain.textio import parse_subset

UNIT = Interval.closed(0, 1)
HALF_LINE = Interval.make(0, POS_INF, True, False)


def gamma_min(c=1):
    return gamma_for(ChainKind.min_only(0), [c])


def test_piece_rejects_decreasing_mobius():
    with pytest.raises(InvariantViolation):
        Piece(LINE, MobiusMap(-1, 0, 0, 1))


def test_piece_rejects_pole_inside():
    with pytest.raises(InvariantViolation):
        Piece(Interval.open(-1, 1), MobiusMap(0, 1, 1, 0))


def test_map_rejects_overlap_and_gap():
    with pytest.raises(InvariantViolation):
        PiecewiseMap(Interval.closed(0, 2), Interval.closed(0, 2), (
            Piece(Interval.make(0, 1, True, False), F(0)),
            Piece(Interval.closed(0, 2), F(1)),
        ))
    with pytest.raises(InvariantViolation):
        PiecewiseMap(UNIT, UNIT, (
            Piece(Interval.make(0, F(1, 2), True, False), F(0)),
            Piece(Interval.make(F(1, 2), 1, False, True), F(1)),
        ))


def test_eval_examples():
    assert identity(UNIT)(F(1, 2)) == F(1, 2)
    assert gamma_min()(0) == 1
    assert gamma_min()(2) == F(1, 2)


def test_compose_examples():
    g = gamma_min()
    assert pw_equal(pw_compose(g, identity(HALF_LINE)), g)
    assert pw_compose(g, g)(0) == 0
    nu = canonical_iso(Interval.open(0, 1), Interval.open(1, POS_INF))
    back = canonical_iso(Interval.open(1, POS_INF), Interval.open(0, 1))
    assert pw_equal(pw_compose(nu, back), identity(Interval.open(0, 1)))


def test_equal_examples():
    whole = identity(UNIT)
    split = PiecewiseMap(UNIT, UNIT, (
        Piece(Interval.make(0, F(1, 2), True, False), MobiusMap.identity()),
        Piece(Interval.closed(F(1, 2), 1), MobiusMap.identity()),
    ))
    assert pw_equal(whole, split)
    assert not pw_equal(gamma_min(1), gamma_min(2))


def test_canonical_iso_examples():
    assert pw_equal(canonical_iso(Interval.open(0, 1), Interval.open(0, 1)), identity(Interval.open(0, 1)))
    f = canonical_iso(Interval.open(0, 1), Interval.open(1, POS_INF))
    assert [str(pc) for pc in f.pieces] == ["piece (0,1) mobius 0 1 -1 1"]
    g = canonical_iso(LINE, Interval.open(-1, 1))
    for x in [F(-7), F(-1, 3), F(0), F(5, 2)]:
        expect = x / (1 - x) if x < 0 else x / (1 + x)
        assert g(x) == expect


def test_image_examples():
    assert pw_image(constant(LINE, F(1, 2))) == parse_subset("{1/2}")
    assert pw_image(gamma_for(ChainKind.closed(0, 1), [F(1, 3), F(2, 3)])) == parse_subset("[0,1/3] u [2/3,1)")
    assert pw_image(fixture("line_upper_gap")) == parse_subset("(0,1/4) u (1/4,1/2]")


def test_classify_examples():
    assert classify(identity(UNIT)).verdict == "order_preserving"
    cl = classify(gamma_for(ChainKind.closed(0, 1), [F(1, 3), F(2, 3)]))
    assert (cl.verdict, str(cl.ideal), cl.overlap) == ("orientation_proper", "[0,1/3)", None)
    f = glue(UNIT, UNIT, [
        Piece(Interval.make(0, F(1, 2), True, False), F(1, 2)),
        Piece(Interval.closed(F(1, 2), 1), MobiusMap(2, -1, 0, 2)),
    ])
    cl = classify(f)
    assert (str(cl.ideal), cl.overlap) == ("[0,1/2)", F(1, 2))


def test_classify_neither():
    f = glue(UNIT, UNIT, [
        Piece(Interval.make(0, F(1, 3), True, False), F(0)),
        Piece(Interval.make(F(1, 3), F(2, 3), True, False), F(1)),
        Piece(Interval.closed(F(2, 3), 1), F(0)),
    ])
    f2 = glue(UNIT, UNIT, [
        Piece(Interval.make(0, F(1, 3), True, False), F(1, 2)),
        Piece(Interval.make(F(1, 3), F(2, 3), True, False), F(0)),
        Piece(Interval.closed(F(2, 3), 1), F(1)),
    ])
    assert classify(f).verdict == "orientation_proper"
    assert classify(f2).verdict == "neither"


def test_membership_examples():
    star = fixture("line_upper_gap")
    assert member_of(identity(LINE), "O", parse_subset("(-inf,+inf)"))
    assert member_of(star, "OP", "(0,1)")
    assert not member_of(star, "O", "(0,1)")
    assert not member_of(star, "OP", "(0,1/4)")


def test_audit_examples():
    rep = extremum_audit(fixture("line_upper_gap"), "(0,1)")
    assert (rep.side, rep.point, rep.value) == ("max_x1", 0, F(1, 2))
    rep = extremum_audit(gamma_for(ChainKind.closed(0, 1), [F(1, 3), F(2, 3)]), "[0,1]")
    assert (rep.side, rep.point, rep.value) == ("min_x2", F(1, 3), 0)
    with pytest.raises(NotApplicable):
        extremum_audit(identity(LINE), "(-inf,+inf)")


def test_gap_examples():
    star = fixture("line_upper_gap")
    gaps = image_gaps(star, "(0,1)")
    assert [str(g) for g in gaps] == ["UpperGap(1/2)"]
    gaps = image_gaps(mirror(star), mirror_subset(parse_subset("(0,1)")))
    assert [str(g) for g in gaps] == ["LowerGap(-1/2)"]
    with pytest.raises(Inapplicable):
        image_gaps(identity(LINE), "(-inf,+inf)")


def test_pw_inverse():
    g = gamma_min(1)
    inv = pw_inverse(g)
    assert pw_equal(pw_compose(g, inv), identity(HALF_LINE))


def test_mirror_is_an_involution_and_a_homomorphism():
    star = fixture("line_upper_gap")
    assert pw_equal(mirror(mirror(star)), star)
    g = canonical_iso(LINE, Interval.open(-1, 1), LINE)
    assert pw_equal(mirror(pw_compose(star, g)), pw_compose(mirror(star), mirror(g)))


# -- properties over random maps -------------------------------------------

seeds = st.integers(0, 10**6)


def _points(f, k=6):
    pts = []
    for pc in f.pieces:
        iv = pc.domain
        pts += [p for p in (iv.lo, iv.hi) if p in iv]
        if not iv.is_point:
            pts += sample_points(iv, k)
    return pts


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_compose_matches_pointwise_evaluation(seed):
    rng = random.Random(seed)
    f, g = random_op_map(rng), random_op_map(rng, y_lo=F(-3), y_hi=F(3))
    fg = pw_compose(f, g)
    for x in _points(f) + _points(fg):
        assert fg(x) == g(f(x))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_equality_is_a_congruence(seed):
    rng = random.Random(seed)
    f, h = random_op_map(rng), random_op_map(rng)
    g = compose_all([identity(LINE), f])
    assert pw_equal(f, g)
    assert pw_equal(pw_compose(f, h), pw_compose(g, h))


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_classification_soundness(seed):
    rng = random.Random(seed)
    f = random_op_map(rng)
    cl = classify(f)
    assert cl.verdict == "orientation_proper"
    x1, x2 = cl.ideal, cl.complement
    left = [p for p in _points(f) if p in x1]
    right = [p for p in _points(f) if p in x2]
    for a in left:
        for b in right:
            assert a < b and f(a) >= f(b)
    for side in (left, right):
        vals = [f(p) for p in sorted(side)]
        assert vals == sorted(vals)


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_ideal_is_unique(seed):
    f = random_op_map(random.Random(seed))
    assert len(valid_ideals(f)) == 1


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_blocks_meet_in_at_most_the_overlap_point(seed):
    f = random_op_map(random.Random(seed))
    cl = classify(f)
    im1 = pw_image(f.restrict(cl.ideal))
    im2 = pw_image(f.restrict(cl.complement))
    common = [iv for a in im1.parts for b in im2.parts if (iv := a.intersect(b)) is not None]
    assert all(iv.is_point for iv in common) and len(common) <= 1
    if common:
        c = common[0].lo
        assert c == cl.overlap == im1.min() == im2.max()
    else:
        assert cl.overlap is None


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_op_is_closed_under_composition(seed):
    rng = random.Random(seed)
    f, g = random_op_map(rng), random_op_map(rng, y_lo=F(-2), y_hi=F(2))
    assert classify(pw_compose(f, g)).verdict != "neither"


def test_audit_failure_is_raised_for_bad_y():
    with pytest.raises(AuditFailure):
        extremum_audit(fixture("line_upper_gap"), SubsetModel.of([Interval.open(0, F(1, 2))]))
