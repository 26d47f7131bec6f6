from fractions import Fraction

import pytest
from hypothesis import given

from strategies import bit_sets, exponent_tables, rational_tables
from fweight.core import BUILTIN, INTEGER_EXPONENT, WeightFunction, all_strings
from fweight.families import TestFamily
from fweight.formats import (
    ParseError,
    read_caps,
    read_class,
    read_family,
    read_functional,
    read_oracle_table,
    read_requests,
    read_set,
    read_stream,
    read_trees,
    read_weights,
    write_family,
    write_set,
    write_weights,
)

F = Fraction


def test_read_set_with_comments_and_empty_string():
    A = read_set("# a set\ne\n01   # trailing\n\n1\n")
    assert A == {"", "01", "1"}
    assert write_set(A) == "e\n1\n01\n"


def test_stream_keeps_order_and_duplicates():
    assert read_stream("1\n0\n1\n") == ["1", "0", "1"]


@pytest.mark.parametrize("text", ["012\n", "0 1\n", "x\n"])
def test_bad_set_lines(text):
    with pytest.raises(ParseError) as exc:
        read_set(text)
    assert exc.value.lineno == 1


@given(bit_sets(4))
def test_set_round_trip(A):
    assert read_set(write_set(A)) == A


def test_read_weights_modes():
    w = read_weights("mode: integer-exponent\ndepth: 1\ne e0\n0 e1\n1 e2\n")
    assert w.mode == INTEGER_EXPONENT and w("1") == F(1, 4)
    w = read_weights("mode: rational-table\ne 1/3\n0 1/6\n1 e2\n")
    assert w("") == F(1, 3) and w("1") == F(1, 4)
    w = read_weights("mode: length-scaled s=1/2\ndepth: 4\n")
    assert w.mode == BUILTIN and w.depth == 4
    assert read_weights("mode: length-scaled s=1\n").depth == 64


@pytest.mark.parametrize("text, line", [
    ("e 1/2\n", 1),
    ("mode: bogus\n", 1),
    ("mode: rational-table\ne 1/0\n", 2),
    ("mode: rational-table\ne -1/2\n", 2),
    ("mode: rational-table\ne 1/2\ne 1/4\n", 3),
    ("mode: rational-table\ne\n", 2),
    ("mode: integer-exponent\ne 1/2\n", 1),
    ("mode: length-scaled s=2\n", 1),
    ("", 1),
])
def test_bad_weight_files(text, line):
    with pytest.raises(ParseError) as exc:
        read_weights(text)
    assert exc.value.lineno == line


@given(rational_tables(3))
def test_rational_weights_round_trip(w):
    back = read_weights(write_weights(w))
    assert all(back(s) == w(s) for s in all_strings(3))


@given(exponent_tables(3))
def test_exponent_weights_round_trip(w):
    back = read_weights(write_weights(w))
    assert back.mode == INTEGER_EXPONENT
    assert all(back.exponent(s) == w.exponent(s) for s in all_strings(3))


def test_builtin_weights_round_trip():
    w = WeightFunction.length_scaled(F(1, 2), 6)
    back = read_weights(write_weights(w))
    assert back.depth == 6 and all(back(s) == w(s) for s in all_strings(6))


def test_family_files():
    fam = read_family("[test i=1]\n00\n[test i=2]\n0000\n[test i=3]\n")
    assert fam[1] == {"00"} and fam[3] == set()
    assert read_family(write_family(fam)) == fam
    fam2 = TestFamily({0: {"", "1"}})
    assert read_family(write_family(fam2))[0] == {"", "1"}
    with pytest.raises(ParseError):
        read_family("00\n")
    with pytest.raises(ParseError):
        read_family("[test i=1]\n[test i=1]\n")
    with pytest.raises(ParseError):
        read_family("[tset i=1]\n")


def test_tree_files():
    T = read_trees("[tree 1]\ne\n0\n[tree 2]\ne\n1\n10\n[tree 3]\ne\n")
    assert len(T) == 3
    assert [T.level(s) for s in ["0", "10", "100", "011"]] == [1, 2, 3, 3]
    with pytest.raises(ParseError):
        read_trees("[tree 2]\ne\n")
    with pytest.raises(ParseError):
        read_trees("[tree 1]\n0\n")


def test_line_tables():
    assert [(r.label, r.length) for r in read_requests("a 1\nb 2\n")] == [("a", 1), ("b", 2)]
    with pytest.raises(ParseError):
        read_requests("a -1\n")
    phi = read_functional("e -> e\n0 -> 1\n01 -> 10\n")
    assert phi("01") == "10" and phi("1") is None
    with pytest.raises(ParseError):
        read_functional("0 1\n")
    with pytest.raises(ParseError):
        read_functional("0 -> 1\n0 -> 0\n")
    assert read_caps("e 1/2\n0 1\n") == {"": F(1, 2), "0": 1}
    with pytest.raises(ParseError):
        read_caps("e 0\n")


def test_class_and_oracle_table():
    Q = read_class("01\n00\n")
    assert Q.leaves == ("00", "01")
    with pytest.raises(ParseError):
        read_class("0\n00\n")
    T = read_oracle_table("0 00 5\n0 01 undef\n1 00 2\n", 2)
    assert T(0, "00") == 5 and T(0, "01") is None and T(1, "00") == 2
    with pytest.raises(ParseError) as exc:
        read_oracle_table("0 00 1\n2 00 1\n", 2)
    assert exc.value.lineno == 2
