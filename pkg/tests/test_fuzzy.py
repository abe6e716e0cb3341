import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fuzzy_effort.fuzzy import (
    FuzzyPartition,
    TNormKind,
    TrapezoidalSet,
    build_uniform_partition,
    fuzzify,
    membership,
    tnorm,
)
from oracles import trapezoid_centroid

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
kinds = st.sampled_from(list(TNormKind))

SET = TrapezoidalSet(0.0, 0.1, 0.3, 0.4, "s")


@pytest.mark.parametrize("x, expected", [(0.2, 1.0), (0.05, 0.5), (0.9, 0.0), (0.35, 0.5), (0.4, 0.0)])
def test_membership_examples(x, expected):
    assert membership(SET, x) == pytest.approx(expected, abs=1e-12)


def test_membership_clamps_outside_unit_interval():
    shoulder = TrapezoidalSet(0.0, 0.0, 0.2, 0.4)
    assert membership(shoulder, -3.0) == 1.0
    assert membership(SET, 7.0) == membership(SET, 1.0) == 0.0


def test_trapezoid_rejects_unordered_corners():
    with pytest.raises(ValueError):
        TrapezoidalSet(0.2, 0.1, 0.3, 0.4)


def test_tnorm_examples():
    assert tnorm(TNormKind.PRODUCT, 0.5, 0.5) == 0.25
    assert tnorm(TNormKind.MINIMUM, 0.3, 0.7) == 0.3
    for kind in TNormKind:
        assert tnorm(kind, 0.37, 1.0) == 0.37


def test_tnorm_domain_error():
    with pytest.raises(ValueError):
        tnorm(TNormKind.PRODUCT, 1.2, 0.5)
    with pytest.raises(ValueError):
        tnorm(TNormKind.MINIMUM, 0.5, -0.1)


def test_tnorm_parse():
    assert TNormKind.parse("Product") is TNormKind.PRODUCT
    with pytest.raises(ValueError):
        TNormKind.parse("lukasiewicz")


@settings(max_examples=200)
@given(kinds, unit, unit, unit)
def test_tnorm_axioms(kind, a, b, c):
    t = lambda x, y: tnorm(kind, x, y)  # noqa: E731
    assert t(a, b) == t(b, a)
    assert t(a, t(b, c)) == pytest.approx(t(t(a, b), c), abs=1e-15)
    assert t(a, 1.0) == a
    lo, hi = sorted((b, c))
    assert t(a, lo) <= t(a, hi)


def test_partition_n1_is_everything():
    p = build_uniform_partition(1)
    assert len(p) == 1
    assert all(membership(p.sets[0], x) == 1.0 for x in np.linspace(0, 1, 101))


def test_partition_n2():
    p = build_uniform_partition(2)
    assert tuple(fuzzify(p, 0.0)) == (1.0, 0.0)
    assert tuple(fuzzify(p, 1.0)) == (0.0, 1.0)
    np.testing.assert_allclose(fuzzify(p, 0.5), [0.5, 0.5], atol=1e-12)


def test_partition_zero_sets_rejected():
    with pytest.raises(ValueError):
        build_uniform_partition(0)


@pytest.mark.parametrize("n", [1, 2, 3, 7, 9, 11, 16])
def test_partition_shape(n):
    p = build_uniform_partition(n)
    assert len(p) == n
    first, last = p.sets[0], p.sets[-1]
    assert first.a == first.b == 0.0
    assert last.c == last.d == 1.0
    mids = [(s.b + s.c) / 2 for s in p]
    assert all(x < y for x, y in zip(mids, mids[1:]))
    widths = [s.c - s.b for s in p]
    np.testing.assert_allclose(widths, widths[0], atol=1e-12)
    for left, right in zip(p.sets, p.sets[1:]):
        cross = (left.c + left.d) / 2
        assert membership(left, cross) == pytest.approx(0.5)
        assert membership(right, cross) == pytest.approx(0.5)


def test_partition_seven_grid_sum():
    p = build_uniform_partition(7)
    sums = [fuzzify(p, x).sum() for x in np.linspace(0, 1, 1000)]
    np.testing.assert_allclose(sums, 1.0, atol=1e-9)


@settings(max_examples=300)
@given(st.integers(1, 20), unit)
def test_ruspini_property(n, x):
    assert abs(fuzzify(build_uniform_partition(n), x).sum() - 1.0) <= 1e-9


@given(st.integers(1, 16), unit, unit)
def test_monotone_edges(n, x, y):
    lo, hi = sorted((x, y))
    for s in build_uniform_partition(n):
        if s.a <= lo and hi <= s.b:
            assert membership(s, lo) <= membership(s, hi)
        if s.c <= lo and hi <= s.d:
            assert membership(s, lo) >= membership(s, hi)


def test_fuzzify_elementwise():
    p = build_uniform_partition(7)
    vec = fuzzify(p, 0.31)
    assert list(vec) == [membership(s, 0.31) for s in p]
    assert vec.sum() == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 5, 11, 16])
def test_centroids_match_quadrature(n):
    for s in build_uniform_partition(n):
        assert s.centroid == pytest.approx(trapezoid_centroid(s.a, s.b, s.c, s.d), abs=1e-6)


def test_partition_validation():
    with pytest.raises(ValueError):
        FuzzyPartition((TrapezoidalSet(0.1, 0.1, 0.5, 1.0),))
    with pytest.raises(ValueError):
        FuzzyPartition(())


def test_partition_dump_format():
    text = build_uniform_partition(2).dumps()
    assert text.splitlines() == [
        "F0,0.000000000,0.000000000,0.333333333,0.666666667",
        "F1,0.333333333,0.666666667,1.000000000,1.000000000",
    ]
