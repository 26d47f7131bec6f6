from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from strategies import bit_sets, bits
from fweight.core import (
    CylinderSet,
    DomainDepthError,
    FWeightError,
    WeightFunction,
    all_strings,
    comparable,
    covers,
    cylinder_measure,
    intersection,
    is_prefix,
    is_prefix_free,
    meets,
    minimal_elements,
    parse_bits,
    parse_rational,
    prefixes,
    render_bits,
    render_rational,
)


@pytest.mark.parametrize("A, expected", [
    ({"0", "00", "01", "1"}, {"0", "1"}),
    (set(), set()),
    ({"010", "01", "0110"}, {"01"}),
])
def test_minimal_elements_examples(A, expected):
    assert minimal_elements(A) == expected


@pytest.mark.parametrize("A, B, expected", [
    ({"00"}, {"0"}, True),
    ({"0"}, {"00", "01"}, True),
    ({"0"}, {"00"}, False),
    (set(), set(), True),
    ({""}, {"0", "1"}, True),
    ({""}, {"0", "10"}, False),
])
def test_covers_examples(A, B, expected):
    assert covers(A, B) is expected


@pytest.mark.parametrize("A, expected", [
    ({"0", "1"}, Fraction(1)),
    ({"00", "0"}, Fraction(1, 2)),
    (set(), Fraction(0)),
])
def test_measure_examples(A, expected):
    assert cylinder_measure(A) == expected


def test_minimal_elements_exhaustive_depth_3():
    nodes = list(all_strings(3))
    for mask in range(2 ** len(nodes)):
        A = {s for j, s in enumerate(nodes) if mask >> j & 1}
        M = minimal_elements(A)
        assert M == oracles.minimal(A)
        assert is_prefix_free(M)
        assert covers(A, M) and covers(M, A)


@given(bit_sets(), bit_sets())
def test_covers_matches_point_expansion(A, B):
    assert covers(A, B) == oracles.covers(A, B)


@given(bit_sets(), bit_sets())
def test_measure_monotone_under_covers(A, B):
    assert cylinder_measure(A) == oracles.measure(A)
    if covers(A, B):
        assert cylinder_measure(A) <= cylinder_measure(B)


@given(bit_sets(), bit_sets())
def test_meets_and_intersection(A, B):
    d = max([len(s) for s in A | B], default=0)
    common = oracles.points(A, d) & oracles.points(B, d)
    assert meets(A, B) == bool(common)
    assert oracles.points(intersection(A, B), d) == common


@given(bit_sets())
def test_prefix_free_matches_definition(A):
    assert is_prefix_free(A) == oracles.prefix_free(A)


@given(bits(), bits())
def test_prefix_relation_antisymmetric(a, b):
    if is_prefix(a, b) and is_prefix(b, a):
        assert a == b
    assert comparable(a, b) == (is_prefix(a, b) or is_prefix(b, a))


def test_prefixes_shortest_first():
    assert prefixes("01") == ["", "0", "01"]
    assert prefixes("") == [""]


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_round_trip(n, d):
    q = Fraction(n, d)
    text = render_rational(q)
    assert "/" in text and parse_rational(text) == q


def test_rational_rendering_is_lowest_terms():
    assert render_rational(Fraction(2, 4)) == "1/2"
    assert render_rational(3) == "3/1"


@pytest.mark.parametrize("bad", ["1/0", "x", "1/2/3", ""])
def test_bad_rationals(bad):
    with pytest.raises(FWeightError):
        parse_rational(bad)


def test_bits_rendering():
    assert parse_bits("e") == "" and render_bits("") == "e"
    assert parse_bits("0101") == "0101"
    with pytest.raises(FWeightError):
        parse_bits("012")
    with pytest.raises(FWeightError):
        CylinderSet(["0a"])


def test_cylinder_set_algebra_keeps_type():
    A = CylinderSet(["0"]) | {"1"}
    assert isinstance(A, CylinderSet) and A.depth == 1
    assert A.sorted() == ["0", "1"]
    assert repr(CylinderSet([""])) == "CylinderSet({e})"


def test_weight_domain_depth_is_enforced():
    w = WeightFunction.uniform(3)
    assert w("000") == Fraction(1, 8)
    with pytest.raises(DomainDepthError):
        w("0000")
    t = WeightFunction.from_table({"": 1, "0": Fraction(1, 2), "1": Fraction(1, 3)})
    assert t.depth == 1 and not t.is_integer_exponent
    with pytest.raises(FWeightError):
        t.exponent("0")


def test_weight_modes():
    f = WeightFunction.from_exponents({"": 0, "0": 2, "1": -1})
    assert f("0") == Fraction(1, 4) and f("1") == 2 and f.exponent("0") == 2
    s = WeightFunction.length_scaled(Fraction(1, 2), 10)
    # exponent ceil(|σ|/2)
    assert [s.exponent("0" * n) for n in range(5)] == [0, 1, 1, 2, 2]
    with pytest.raises(FWeightError):
        WeightFunction.length_scaled(Fraction(3, 2))
    with pytest.raises(FWeightError):
        WeightFunction.from_table({"": 0})
