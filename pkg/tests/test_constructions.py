import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gen import LINE, fixture, random_op_map, rational
from ordchain.chain import POS_INF, Interval
from ordchain.constructions import (
    BadParams,
    ChainKind,
    NotOrientationProper,
    NotSingleGenerator,
    OpenChainUnsupported,
    dual_gamma,
    gamma_for,
    iso_witnesses,
    obstruction_certificate,
    sandwich,
    single_generator_test,
    validate_certificate,
)
from ordchain.piecewise import (
    Inapplicable,
    canonical_iso,
    classify,
    compose_all,
    image_gaps,
    glue,
    identity,
    member_of,
    pw_equal,
    pw_image,
)
from ordchain.textio import parse_subset

CLOSED = ChainKind.closed(0, 1)
MIN_ONLY = ChainKind.min_only(0)
MAX_ONLY = ChainKind.max_only(0)


def closed_params(rng):
    c = rational(rng, F(0), F(1))
    return [c, rational(rng, c, F(1))]


def min_params(rng):
    return [rational(rng, F(0), F(16))]


def max_params(rng):
    c = rational(rng, F(-16), F(0))
    return [c, rational(rng, c - 16, c)]


PARAMS = {CLOSED: closed_params, MIN_ONLY: min_params, MAX_ONLY: max_params}


def test_closed_gamma_point_values():
    g = gamma_for(CLOSED, [F(1, 3), F(2, 3)])
    # five display rows, checked pointwise
    assert g(0) == F(2, 3)
    assert g(F(1, 6)) == F(1, 6) + F(2, 3)
    assert g(F(1, 3)) == 0
    assert g(F(2, 3)) == F(1, 3) - F(1, 6)
    assert g(1) == F(1, 3)
    assert [str(pc) for pc in g.pieces] == ["piece [0,1/3) mobius 3 2 0 3", "piece [1/3,1] mobius 3 -1 0 6"]


def test_min_only_gamma_point_values():
    g = gamma_for(MIN_ONLY, [1])
    assert g(0) == 1
    assert g(F(1, 2)) == 2  # 1/(1-x)
    assert g(1) == 0
    assert g(3) == F(2, 3)  # (x-1)/x


def test_bad_params():
    with pytest.raises(BadParams):
        gamma_for(CLOSED, [F(2, 3), F(1, 3)])
    with pytest.raises(BadParams):
        gamma_for(MIN_ONLY, [-1])
    with pytest.raises(OpenChainUnsupported):
        gamma_for(ChainKind.open())


@pytest.mark.parametrize("kind", [CLOSED, MIN_ONLY, MAX_ONLY])
@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_gamma_invariants(kind, seed):
    params = PARAMS[kind](random.Random(seed))
    g = gamma_for(kind, params)
    cl = classify(g)
    assert cl.verdict == "orientation_proper"
    assert not member_of(g, "O", kind.interval())
    if kind is CLOSED:
        c, d = params
        assert (g(0), g(c), g(1)) == (d, 0, c)
        assert cl.ideal == Interval.make(0, c, True, False)
    elif kind is MIN_ONLY:
        (c,) = params
        assert (g(0), g(c)) == (c, 0)
        assert cl.ideal == Interval.make(0, c, True, False)
    else:
        c, low = params
        assert (g(c), g(0)) == (low, c)
        assert cl.ideal.hi == c


@pytest.mark.parametrize("kind", [CLOSED, MIN_ONLY])
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_gamma_is_a_single_generator(kind, seed):
    assert single_generator_test(gamma_for(kind, PARAMS[kind](random.Random(seed))))


def test_max_only_display_fails_the_coinitial_criterion():
    # its lower block is sent onto a set bounded below, so no product with it
    # reaches the maps of OP((-inf,0]) whose image is unbounded below
    verdict = single_generator_test(gamma_for(MAX_ONLY))
    assert not verdict
    assert "coinitial" in verdict.reason
    assert single_generator_test(dual_gamma(MAX_ONLY))


def test_witness_examples():
    w = iso_witnesses(gamma_for(CLOSED, [F(1, 3), F(2, 3)]))
    assert [str(x.interval) for x in w.x1] == ["(0,1/3)"]
    assert [str(x.interval) for x in w.x2] == ["(1/3,1)"]
    w = iso_witnesses(fixture("line_upper_gap"))
    assert [str(x.interval) for x in w.x1] == ["(-inf,0)"]
    assert [str(x.interval) for x in w.x2] == ["(0,+inf)"]
    w = iso_witnesses(fixture("not_generator"))
    assert w.x2 == ()
    with pytest.raises(NotOrientationProper):
        iso_witnesses(identity(LINE))


def test_generator_test_negative_examples():
    verdict = single_generator_test(fixture("not_generator"))
    assert not verdict and "X2" in verdict.reason
    X = Interval.make(0, POS_INF, True, False)
    bounded = canonical_iso(Interval.make(0, 1, True, False), Interval.make(1, 2, True, False), X)
    f = glue(X, X, [bounded, canonical_iso(Interval.make(1, POS_INF, True, False), Interval.make(0, 1, True, False), X)])
    verdict = single_generator_test(f)
    assert not verdict and "cofinal" in verdict.reason
    with pytest.raises(OpenChainUnsupported):
        single_generator_test(fixture("line_upper_gap"))


def test_sandwich_examples():
    for kind, params in [(CLOSED, [F(1, 3), F(2, 3)]), (MIN_ONLY, [F(1)])]:
        g = gamma_for(kind, params)
        phi_hat, phi_tilde = sandwich(g, *params)
        assert classify(phi_hat).verdict == classify(phi_tilde).verdict == "order_preserving"
        assert pw_equal(compose_all([phi_hat, g, phi_tilde]), g)
    with pytest.raises(NotSingleGenerator):
        sandwich(fixture("not_generator"))


@pytest.mark.parametrize("kind", [CLOSED, MIN_ONLY])
@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_sandwich_of_a_disguised_generator(kind, seed):
    """Conjugating gamma by an order-automorphism keeps it a generator; the sandwich recovers gamma."""
    rng = random.Random(seed)
    X = kind.interval()
    source = PARAMS[kind](rng)
    target = PARAMS[kind](rng)
    p = rational(rng, F(0), F(1) if kind is CLOSED else F(8))
    q = rational(rng, F(0), F(1) if kind is CLOSED else F(8))
    shift = glue(X, X, [
        canonical_iso(Interval.make(X.lo, p, True, False), Interval.make(X.lo, q, True, False), X),
        canonical_iso(Interval.make(p, X.hi, True, X.hi_closed), Interval.make(q, X.hi, True, X.hi_closed), X),
    ])
    back = compose_all([shift, gamma_for(kind, source)])
    f = compose_all([back, shift])
    phi_hat, phi_tilde = sandwich(f, *target)
    assert member_of(phi_hat, "O", X) and member_of(phi_tilde, "O", X)
    assert pw_equal(compose_all([phi_hat, f, phi_tilde]), gamma_for(kind, target))


def test_obstruction_example():
    cert = obstruction_certificate([fixture("line_upper_gap")], parse_subset("(0,1)"))
    assert [[str(g) for g in gaps] for _, gaps in cert.per_element] == [["UpperGap(1/2)"]]
    assert cert.h == F(3, 4)
    assert pw_image(cert.alpha) == parse_subset("(0,3/4]")
    assert validate_certificate(cert) == []


def test_obstruction_with_empty_family():
    cert = obstruction_certificate([], parse_subset("(0,1)"))
    assert cert.per_element == ()
    assert validate_certificate(cert) == []


def test_obstruction_rejects_order_preserving_members_and_bad_y():
    with pytest.raises(Inapplicable):
        obstruction_certificate([identity(LINE)], parse_subset("(0,1)"))
    with pytest.raises(Inapplicable):
        obstruction_certificate([fixture("line_upper_gap")], parse_subset("(0,1]"))


def test_obstruction_mirrors_when_nothing_lies_below_y():
    X = Interval.make(0, POS_INF, False, False)
    cert = obstruction_certificate([], parse_subset("(0,1)"), X)
    assert cert.side == "lower"
    assert validate_certificate(cert) == []


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 4))
def test_obstruction_random_families(seed, size):
    rng = random.Random(seed)
    G = [random_op_map(rng) for _ in range(size)]
    cert = obstruction_certificate(G, parse_subset("(0,1)"))
    assert validate_certificate(cert) == []
    for g, gaps in cert.per_element:
        assert gaps == image_gaps(g, "(0,1)")
        assert all(gap.value < cert.h for gap in gaps if gap.side == "upper")
