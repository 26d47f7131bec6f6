"""Seeded random instances for property suites and the acceptance run."""

from __future__ import annotations

import random
from fractions import Fraction

from .core import BitString, CylinderSet, WeightFunction, all_strings, strings_of_length
from .levin import MonotoneFunctionalTable
from .weights import dwt

# child/parent ratios for convex weights; all dyadic so denominators stay small
_FACTORS = (Fraction(1, 4), Fraction(3, 8), Fraction(1, 2), Fraction(5, 8), Fraction(3, 4), Fraction(1))


def random_bits(rng: random.Random, max_len: int, min_len: int = 0) -> BitString:
    n = rng.randint(min_len, max_len)
    return "".join(rng.choice("01") for _ in range(n))


def random_set(rng: random.Random, depth: int, max_size: int = 6) -> CylinderSet:
    return CylinderSet(random_bits(rng, depth) for _ in range(rng.randint(0, max_size)))


def random_nonempty_set(rng: random.Random, depth: int, max_size: int = 6) -> CylinderSet:
    A = CylinderSet()
    while not A:
        A = random_set(rng, depth, max_size)
    return A


def random_rational(rng: random.Random, max_den: int = 12) -> Fraction:
    """A rational in ``(0, 1]``."""
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(1, den), den)


def random_rational_table(rng: random.Random, depth: int, max_den: int = 12) -> WeightFunction:
    return WeightFunction.from_table(
        {s: random_rational(rng, max_den) for s in all_strings(depth)}, depth)


def random_convex_weight(rng: random.Random, depth: int) -> WeightFunction:
    """Top-down: each pair of children gets parent ratios ``a, b`` with ``a + b >= 1``."""
    table = {"": rng.choice(_FACTORS)}
    for s in all_strings(depth - 1):
        a = rng.choice(_FACTORS)
        b = rng.choice([x for x in _FACTORS if a + x >= 1])
        table[s + "0"] = table[s] * a
        table[s + "1"] = table[s] * b
    return WeightFunction.from_table(table, depth)


def random_exponent_weight(rng: random.Random, depth: int, lo: int = 0, hi: int = 6) -> WeightFunction:
    return WeightFunction.from_exponents({s: rng.randint(lo, hi) for s in all_strings(depth)}, depth)


def random_stream(rng: random.Random, depth: int, max_len: int = 12) -> list[BitString]:
    return [random_bits(rng, depth) for _ in range(rng.randint(0, max_len))]


def random_functional(rng: random.Random, dY: int, dX: int, p_undef: float = 0.15
                      ) -> MonotoneFunctionalTable:
    """Grow outputs along input branches by 0-1 bits per step, capped at ``dX``."""
    table: dict[BitString, BitString] = {}
    for n in range(dY + 1):
        for rho in strings_of_length(n):
            parent = table.get(rho[:-1]) if rho else ""
            if rho and parent is None or rng.random() < p_undef:
                continue
            out = parent
            if len(out) < dX and rng.random() < 0.6:
                out += rng.choice("01")
            table[rho] = out
    return MonotoneFunctionalTable(table, dX)


def random_caps(rng: random.Random, dX: int) -> dict[BitString, Fraction]:
    return {s: random_rational(rng, 8) for s in all_strings(dX)}


def random_request_lengths(rng: random.Random, max_count: int = 8, max_len: int = 5) -> list[int]:
    return [rng.randint(0, max_len) for _ in range(rng.randint(0, max_count))]


def random_audited_family(rng: random.Random, w: WeightFunction, levels: int, depth: int,
                          tries: int = 8) -> dict[int, CylinderSet]:
    """Levels ``1..levels`` with ``dwt(A_i) <= 2^-i``, grown greedily from random strings."""
    fam = {}
    for i in range(1, levels + 1):
        members: set[BitString] = set()
        for _ in range(tries):
            tau = random_bits(rng, depth)
            if dwt(members | {tau}, w) <= Fraction(1, 2**i):
                members.add(tau)
        fam[i] = CylinderSet(members)
    return fam
