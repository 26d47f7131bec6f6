"""Rewriting exponents and test sets without changing what they test.

* :func:`integer_normalize` clamps an exponent to ``[0, 2|σ|]`` and rounds it
  to an integer strictly inside the band ``(f0, f0 + 2)``.
* :func:`increasing_pushforward` moves every string of a set to its shortest
  prefix of no smaller exponent, landing inside the increasing set of ``f``.
* :func:`fg_bound_check` certifies ``dwt_g(A) <= 2^c pwt_f(A)`` for
  ``g = f + h∘f`` by slicing ``A`` into level sets of ``f``.
* :func:`sigma02_weight_build` turns a family of trees into an exponent.
* :func:`convex_rationalize` replaces a convex weight known only through
  interval queries by a convex rational table slightly below it.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence, Union

from .core import (
    BitString,
    CylinderSet,
    FWeightError,
    InvariantError,
    PreconditionError,
    WeightFunction,
    all_strings,
    as_cylinder_set,
    canonical_key,
    covers,
    is_prefix_free,
    render_bits,
)
from .weights import dwt, is_convex, pwt

Bounds = tuple[Fraction, Fraction]
ExponentValue = Union[int, Fraction, float, Bounds]


# --------------------------------------------------------------------------
# integer normalization

def _clamp(x, length: int):
    return min(max(x, 0), 2 * length)


def normalize_exponent(value: ExponentValue, length: int) -> int:
    """``⌊f0⌋ + 1`` where ``f0 = min(max(value, 0), 2·length)``.

    ``value`` is an exact rational (``±math.inf`` allowed) or a pair of
    rational bounds ``(lo, hi)``; bounds must pin ``f0`` down well enough
    that the chosen integer is certified to lie in ``(f0, f0 + 2)``.
    """
    if isinstance(value, tuple):
        lo, hi = value
        if lo > hi:
            raise FWeightError("lower bound exceeds upper bound")
        f0_lo, f0_hi = _clamp(Fraction(lo), length), _clamp(Fraction(hi), length)
        n = math.floor(f0_lo) + 1
        if not (f0_hi < n < f0_lo + 2):
            raise PreconditionError(
                f"bounds [{lo}, {hi}] too loose to certify an integer in the band")
        return n
    if isinstance(value, float):
        if not math.isinf(value):
            raise FWeightError("pass exact rationals, not floats")
        f0 = _clamp(value, length)
        return int(f0) + 1
    f0 = _clamp(Fraction(value), length)
    return math.floor(f0) + 1


def integer_normalize(f: Mapping[BitString, ExponentValue] | Callable[[BitString], ExponentValue],
                      sigma: BitString) -> int:
    value = f[sigma] if isinstance(f, Mapping) else f(sigma)
    return normalize_exponent(value, len(sigma))


# --------------------------------------------------------------------------
# increasing set and pushforward

def in_increasing_set(sigma: BitString, w: WeightFunction) -> bool:
    """Every proper prefix has a strictly smaller exponent (strictly larger weight)."""
    ws = w(sigma)
    return all(w(sigma[:n]) > ws for n in range(len(sigma)))


def pushforward_string(sigma: BitString, w: WeightFunction) -> BitString:
    """Shortest prefix ``ρ ⊆ σ`` with ``f(ρ) >= f(σ)``, i.e. ``w(ρ) <= w(σ)``."""
    ws = w(sigma)
    for n in range(len(sigma) + 1):
        if w(sigma[:n]) <= ws:
            return sigma[:n]
    raise InvariantError("sigma itself always qualifies")


def increasing_pushforward(A: Iterable[BitString], w: WeightFunction) -> CylinderSet:
    A = as_cylinder_set(A)
    bar = CylinderSet(pushforward_string(s, w) for s in A)
    if not all(in_increasing_set(s, w) for s in bar):
        raise InvariantError("pushforward left the increasing set")
    if not covers(A, bar):
        raise InvariantError("pushforward does not cover the input")
    if dwt(bar, w) > dwt(A, w):
        raise InvariantError("pushforward increased the direct weight")
    if pwt(bar, w).value > pwt(A, w).value:
        raise InvariantError("pushforward increased the prefix-free weight")
    return bar


# --------------------------------------------------------------------------
# weight inflation g = f + h(f)

def log2_inflation(eps: Fraction | int | str) -> Callable[[int], int]:
    """``h(x) = ⌈(1+ε)·log₂ x⌉`` computed exactly for rational ``ε > 0``.

    ``h(0)`` is pinned to 0 so the family stays nondecreasing on the naturals.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise FWeightError("epsilon must be positive")
    p, q = (1 + eps).numerator, (1 + eps).denominator

    def h(x: int) -> int:
        if x < 0:
            raise FWeightError("h is defined on the naturals")
        if x <= 1:
            return 0
        # least k with 2^(k q) >= x^p
        target = x**p
        k = max(0, (target.bit_length() - 1) // q)
        while 2 ** (k * q) < target:
            k += 1
        while k > 0 and 2 ** ((k - 1) * q) >= target:
            k -= 1
        return k

    h.__name__ = f"log2_inflation({eps})"
    return h


def smallest_c(h: Mapping[int, int] | Callable[[int], int], ns: Iterable[int]) -> int:
    """Least natural ``c`` with ``Σ_{n in ns} 2^(-h(n)) <= 2^c``."""
    h = _as_h(h)
    total = sum((Fraction(2) ** -h(n) for n in set(ns)), Fraction(0))
    c = 0
    while total > 2**c:
        c += 1
    return c


@dataclass(frozen=True)
class FgReport:
    slices: dict[int, CylinderSet]
    slice_weights: dict[int, Fraction]
    dwt_g: Fraction
    pwt_f: Fraction
    bound: Fraction

    @property
    def passed(self) -> bool:
        return self.dwt_g <= self.bound


def _as_h(h) -> Callable[[int], int]:
    if isinstance(h, Mapping):
        table = dict(h)

        def lookup(n):
            try:
                return table[n]
            except KeyError:
                raise PreconditionError(f"h is undefined at {n}") from None
        return lookup
    return h


def fg_bound_check(A: Iterable[BitString], w_f: WeightFunction,
                   h: Mapping[int, int] | Callable[[int], int], c: int) -> FgReport:
    """Certify ``dwt_g(A) = Σ_n 2^(-h(n)) dwt_f(P_n) <= 2^c pwt_f(A)``.

    ``P_n`` is the slice of ``A`` where the exponent equals ``n``.  Requires
    an integer-exponent ``w_f`` and ``A`` inside the increasing set (apply
    :func:`increasing_pushforward` first otherwise).
    """
    A = as_cylinder_set(A)
    h = _as_h(h)
    if not w_f.is_integer_exponent:
        raise PreconditionError("fg_bound_check needs an integer-exponent weight")
    outside = [s for s in A.sorted() if not in_increasing_set(s, w_f)]
    if outside:
        raise PreconditionError(f"{render_bits(outside[0])} is not in the increasing set")
    levels: dict[int, set[BitString]] = {}
    for s in A:
        levels.setdefault(w_f.exponent(s), set()).add(s)
    ns = sorted(levels)
    if ns:
        hs = [h(n) for n in ns]
        if any(a > b for a, b in zip(hs, hs[1:])):
            raise PreconditionError("h is not nondecreasing on the occurring exponents")
        mass = sum((Fraction(2) ** -h(n) for n in ns), Fraction(0))
        if mass > Fraction(2) ** c:
            raise PreconditionError(f"sum of 2^-h(n) is {mass}, above 2^{c}")

    slices = {n: CylinderSet(levels[n]) for n in ns}
    for n, P in slices.items():
        if not is_prefix_free(P):
            raise InvariantError(f"slice at exponent {n} is not prefix-free")
    slice_weights = {n: dwt(P, w_f) for n, P in slices.items()}
    dwt_g = sum((Fraction(2) ** -h(n) * slice_weights[n] for n in ns), Fraction(0))
    p = pwt(A, w_f).value
    for n in ns:
        if slice_weights[n] > p:
            raise InvariantError("a slice outweighs the prefix-free weight")
    return FgReport(slices, slice_weights, dwt_g, p, Fraction(2) ** c * p)


def inflated_weight(w_f: WeightFunction, h: Callable[[int], int]) -> WeightFunction:
    """The integer-exponent weight with exponent ``g = f + h∘f``."""
    h = _as_h(h)
    return WeightFunction.from_exponents(lambda s: w_f.exponent(s) + h(w_f.exponent(s)),
                                         w_f.depth, name="inflated")


# --------------------------------------------------------------------------
# tree families

class TreeFamily:
    """Finite trees ``T_1, T_2, …`` (1-based), each prefix-closed and containing ``e``."""

    def __init__(self, trees: Sequence[Iterable[BitString]]):
        self.trees = tuple(as_cylinder_set(t) for t in trees)
        for i, t in enumerate(self.trees, start=1):
            if "" not in t:
                raise FWeightError(f"tree {i} does not contain the empty string")
            for s in t:
                if s and s[:-1] not in t:
                    raise FWeightError(f"tree {i} is not prefix-closed at {render_bits(s)}")

    def __len__(self) -> int:
        return len(self.trees)

    def tree(self, i: int) -> CylinderSet:
        return self.trees[i - 1]

    def level(self, tau: BitString) -> int:
        """Least ``i >= 1`` with ``i = |τ|`` or ``τ ∈ T_i``."""
        i = 1
        while True:
            if i == len(tau):
                return i
            if i > len(self.trees):
                raise PreconditionError(
                    f"tree family too short to evaluate {render_bits(tau)}")
            if tau in self.trees[i - 1]:
                return i
            i += 1


def sigma02_weight_build(T: TreeFamily, sigma: BitString) -> int:
    """Exponent 1 where the tree level is unchanged from the parent, else ``2|σ|``.

    The empty string has no parent; its exponent is fixed at 1.
    """
    if not sigma:
        return 1
    return 1 if T.level(sigma[:-1]) == T.level(sigma) else 2 * len(sigma)


def sigma02_weight(T: TreeFamily, depth: int) -> WeightFunction:
    return WeightFunction.from_exponents(lambda s: sigma02_weight_build(T, s), depth,
                                         name="sigma02")


# --------------------------------------------------------------------------
# rational bounds on powers of two

@functools.lru_cache(maxsize=None)
def _ln2_bounds(bits: int) -> Bounds:
    """``ln 2 = Σ 1/(k·2^k)``; the tail past ``n`` is below ``1/((n+1)·2^n)``."""
    n = bits + 4
    s = sum((Fraction(1, k * 2**k) for k in range(1, n + 1)), Fraction(0))
    return s, s + Fraction(1, (n + 1) * 2**n)


def _exp_partial(y: Fraction, terms: int) -> Fraction:
    total, term = Fraction(1), Fraction(1)
    for k in range(1, terms + 1):
        term = term * y / k
        total += term
    return total


def pow2_bounds(x: Fraction, bits: int) -> Bounds:
    """Rationals ``lo <= 2^x <= hi`` with ``hi - lo <= 2^(floor(x) - bits)``.

    The fractional part goes through ``2^f = 2·e^y`` with ``y = (f-1)·ln 2``
    in ``(-1, 0)``, where partial sums of the exponential series alternate
    around the limit: odd cut-offs undershoot, even ones overshoot.
    """
    x = Fraction(x)
    whole = math.floor(x)
    f = x - whole
    scale = Fraction(2) ** whole
    if f == 0:
        return scale, scale
    l_lo, l_hi = _ln2_bounds(bits)
    y_lo, y_hi = (f - 1) * l_hi, (f - 1) * l_lo
    # snap y outward to dyadics to keep the series denominators small
    m = bits + 6
    y_lo = Fraction(math.floor(y_lo * 2**m), 2**m)
    y_hi = Fraction(math.ceil(y_hi * 2**m), 2**m)
    n = 1
    while math.factorial(n + 1) < 2 ** (bits + 4):
        n += 1
    odd, even = (n, n + 1) if n % 2 else (n + 1, n)
    lo = 2 * _exp_partial(y_lo, odd)
    hi = 2 * _exp_partial(y_hi, even)
    lo = Fraction(math.floor(lo * 2**m), 2**m)
    hi = Fraction(math.ceil(hi * 2**m), 2**m)
    return lo * scale, hi * scale


def length_scaled_oracle(s: Fraction | int | str) -> Callable[[BitString, Fraction], Bounds]:
    """Interval oracle for the exact weight ``2^(-s·|σ|)``."""
    s = Fraction(s)

    def oracle(sigma: BitString, precision: Fraction) -> Bounds:
        bits = 1
        while True:
            lo, hi = pow2_bounds(-s * len(sigma), bits)
            if hi - lo <= precision:
                return lo, hi
            bits *= 2

    return oracle


def exact_oracle(w: WeightFunction) -> Callable[[BitString, Fraction], Bounds]:
    return lambda sigma, precision: (w(sigma), w(sigma))


def smallest_dyadic_between(a: Fraction, b: Fraction) -> Fraction:
    """The dyadic rational of least denominator strictly inside ``(a, b)``."""
    if not a < b:
        raise FWeightError("empty interval")
    m = 0
    while True:
        k = math.floor(a * 2**m) + 1
        if Fraction(k, 2**m) < b:
            return Fraction(k, 2**m)
        m += 1


class RationalizationError(FWeightError):
    pass


def convex_rationalize(oracle: Callable[[BitString, Fraction], Bounds], eps: Fraction | int | str,
                       depth: int, start_bits: int = 8, max_bits: int = 256) -> WeightFunction:
    """A convex rational table ``w̄`` with ``w·2^(-ε) < w̄ < w`` up to ``depth``.

    Strings of length ``n`` get the sub-band ``w̄/w ∈ (2^(-ε/2^n), 2^(-ε/2^(n+1)))``.
    The bands increase with ``n`` and do not overlap, so children always sit
    proportionally higher than their parent and convexity of ``w`` carries
    over.  Each value is the smallest-denominator dyadic inside the band as
    certified by the oracle; precision doubles from ``2^-start_bits`` until the
    band separates, failing past ``2^-max_bits``.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise FWeightError("epsilon must be positive")
    table: dict[BitString, Fraction] = {}
    for sigma in all_strings(depth):
        n = len(sigma)
        bits = start_bits
        while True:
            if bits > max_bits:
                raise RationalizationError(
                    f"band at {render_bits(sigma)} not separated at 2^-{max_bits} precision")
            precision = Fraction(1, 2**bits)
            w_lo, w_hi = oracle(sigma, precision)
            # upper bound on the lower factor, lower bound on the upper factor
            _, low_factor = pow2_bounds(-eps / 2**n, bits)
            high_factor, _ = pow2_bounds(-eps / 2 ** (n + 1), bits)
            a, b = w_hi * low_factor, w_lo * high_factor
            if w_lo > 0 and a < b:
                table[sigma] = smallest_dyadic_between(a, b)
                break
            bits *= 2
    w_bar = WeightFunction.from_table(table, depth, name=f"rationalized eps={eps}")
    ok, bad = is_convex(w_bar, depth)
    if not ok:
        raise InvariantError(f"rationalized table not convex at {render_bits(bad)}")
    return w_bar


def rational_log2_lower(x: Fraction) -> Fraction:
    """A positive rational strictly below ``log₂ x`` for ``x > 1``."""
    x = Fraction(x)
    if x <= 1:
        raise FWeightError("need x > 1")
    m = 64
    while True:
        xm = x**m
        # largest a with 2^a < x^m, so a/m < log2 x
        a = xm.numerator.bit_length() - xm.denominator.bit_length() + 1
        while Fraction(2) ** a >= xm:
            a -= 1
        if a >= 1:
            return Fraction(a, m)
        m *= 4


def sorted_members(A: Iterable[BitString]) -> list[BitString]:
    return sorted(A, key=canonical_key)
