"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from fweight import WeightFunction
from fweight.core import all_strings


def bits(max_len=4, min_len=0):
    return st.text(alphabet="01", min_size=min_len, max_size=max_len)


def bit_sets(max_len=4, max_size=6):
    return st.frozensets(bits(max_len), max_size=max_size)


def rationals(max_den=12):
    return st.integers(1, max_den).flatmap(
        lambda d: st.integers(1, d).map(lambda n: Fraction(n, d)))


@st.composite
def rational_tables(draw, depth):
    return WeightFunction.from_table({s: draw(rationals()) for s in all_strings(depth)}, depth)


@st.composite
def exponent_tables(draw, depth, lo=0, hi=6):
    return WeightFunction.from_exponents(
        {s: draw(st.integers(lo, hi)) for s in all_strings(depth)}, depth)


FACTORS = [Fraction(k, 8) for k in range(2, 9)]


@st.composite
def convex_tables(draw, depth):
    table = {"": draw(st.sampled_from(FACTORS))}
    for s in all_strings(depth - 1):
        a = draw(st.sampled_from(FACTORS))
        b = draw(st.sampled_from([x for x in FACTORS if a + x >= 1]))
        table[s + "0"] = table[s] * a
        table[s + "1"] = table[s] * b
    return WeightFunction.from_table(table, depth)
