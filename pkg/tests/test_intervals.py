import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from stochreach.errors import DimensionError
from stochreach.intervals import IntervalVector, contains, hull, leq, southeast_leq, width

finite = st.floats(-1e6, 1e6, allow_nan=False)


def vecs(n):
    return arrays(np.float64, n, elements=st.floats(-3, 3, allow_nan=False).map(lambda v: round(v)))


@pytest.mark.parametrize(
    "a, b, expected",
    [([0, 0], [0, 0], True), ([1, 2], [2, 1], False), ([-1, 0.5], [0, 0.5], True)],
)
def test_leq_examples(a, b, expected):
    assert leq(a, b) is expected


def test_leq_dimension_mismatch():
    with pytest.raises(DimensionError):
        leq([0, 0], [0, 0, 0])


@pytest.mark.parametrize(
    "p1, p2, expected",
    [
        (([0], [1]), ([0], [1]), True),
        (([0], [2]), ([1], [1]), True),
        (([0], [1]), ([1], [2]), False),
    ],
)
def test_southeast_examples(p1, p2, expected):
    assert southeast_leq(p1, p2) is expected


def test_southeast_dimension_mismatch():
    with pytest.raises(DimensionError):
        southeast_leq(([0], [1]), ([0, 1], [1]))


@pytest.mark.parametrize(
    "pt, expected", [([0.5, 0.5], True), ([0, 1], True), ([1.0000001, 0.5], False)]
)
def test_contains_examples(pt, expected):
    box = IntervalVector([0, 0], [1, 1])
    assert contains(box, pt) is expected


def test_contains_dimension_mismatch():
    with pytest.raises(DimensionError):
        contains(IntervalVector([0, 0], [1, 1]), [0.5])


def test_width_examples():
    assert np.array_equal(width(IntervalVector.point([3.0, -2.0])), [0.0, 0.0])
    assert np.array_equal(width(IntervalVector([0, -1], [2, 1])), [2.0, 2.0])


def test_box_rejects_inverted_and_mismatched():
    with pytest.raises(ValueError):
        IntervalVector([1.0], [0.0])
    with pytest.raises(DimensionError):
        IntervalVector([0.0, 0.0], [1.0])
    with pytest.raises(ValueError):
        IntervalVector([np.nan], [1.0])


def test_box_is_immutable():
    box = IntervalVector([0.0], [1.0])
    with pytest.raises(ValueError):
        box.lower[0] = 5.0


def test_universe_contains_everything():
    assert contains(IntervalVector.universe(3), [1e300, -1e300, 0.0])


@given(vecs(3), vecs(3), vecs(3))
def test_leq_partial_order_laws(a, b, c):
    assert leq(a, a)
    if leq(a, b) and leq(b, a):
        assert np.array_equal(a, b)
    if leq(a, b) and leq(b, c):
        assert leq(a, c)


@given(vecs(2), vecs(2), vecs(2), vecs(2), vecs(2), vecs(2))
def test_southeast_partial_order_laws(x, xh, y, yh, z, zh):
    p, q, r = (x, xh), (y, yh), (z, zh)
    assert southeast_leq(p, p)
    if southeast_leq(p, q) and southeast_leq(q, p):
        assert np.array_equal(x, y) and np.array_equal(xh, yh)
    if southeast_leq(p, q) and southeast_leq(q, r):
        assert southeast_leq(p, r)


@given(
    arrays(np.float64, 3, elements=finite),
    arrays(np.float64, 3, elements=st.floats(0, 1e3)),
    arrays(np.float64, 3, elements=finite),
)
def test_contains_equals_two_sided_leq(lo, span, p):
    box = IntervalVector(lo, lo + span)
    assert contains(box, p) == (leq(box.lower, p) and leq(p, box.upper))


@settings(max_examples=50)
@given(
    arrays(np.float64, 2, elements=finite),
    arrays(np.float64, 2, elements=st.floats(0, 1e3)),
    arrays(np.float64, 2, elements=finite),
    arrays(np.float64, 2, elements=st.floats(0, 1e3)),
)
def test_hull_width_dominates_inputs(l1, s1, l2, s2):
    a = IntervalVector(l1, l1 + s1)
    b = IntervalVector(l2, l2 + s2)
    h = hull(a, b)
    assert np.all(width(h) >= width(a)) and np.all(width(h) >= width(b))
    assert a.subset_of(h) and b.subset_of(h)
