"""Computable upper bounds standing in for prefix-free complexity.

Every estimator maps strings of length ``<= L`` to naturals.  An estimator is
*admissible* up to a length when its Kraft sum over all strings of at most
that length is ``<= 1``, the only property of genuine prefix complexity the
universal tests rely on.

The built-in :class:`CodeFamilyEstimator` takes the shortest of three
self-delimiting descriptions, each prefixed with a 2-bit tag:

``literal``   length header, then the string verbatim
``runlength`` run count, first bit, then every run length
``periodic``  period length, one period, total length

All integers use :func:`header_code`: ``k`` in unary, then the value in
``k = ⌈log₂(n+1)⌉`` bits.  Each sub-code has Kraft sum at most 3/4, so the
tagged union stays below 1 at every length.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .core import BitString, FWeightError, all_strings, render_bits

TAGS = {"literal": "00", "runlength": "01", "periodic": "10"}
# among equally short descriptions, prefer the more structural one
PREFERENCE = ("periodic", "runlength", "literal")


def header_bits(n: int) -> int:
    """``⌈log₂(n+1)⌉``: bits needed to write any of ``0..n``."""
    return n.bit_length()  # == ceil(log2(n+1))


def header_code(n: int) -> BitString:
    if n < 0:
        raise FWeightError("header_code encodes naturals")
    k = header_bits(n)
    return "1" * k + "0" + (format(n, "b").zfill(k) if k else "")


def header_length(n: int) -> int:
    return 2 * header_bits(n) + 1


def runs(tau: BitString) -> list[int]:
    out: list[int] = []
    for i, bit in enumerate(tau):
        if i and bit == tau[i - 1]:
            out[-1] += 1
        else:
            out.append(1)
    return out


def smallest_period(tau: BitString) -> int:
    """Least ``q >= 1`` with ``tau[j] == tau[j-q]`` throughout (prefix function)."""
    n = len(tau)
    if n == 0:
        raise FWeightError("the empty string has no period")
    pi = [0] * n
    for j in range(1, n):
        k = pi[j - 1]
        while k and tau[j] != tau[k]:
            k = pi[k - 1]
        if tau[j] == tau[k]:
            k += 1
        pi[j] = k
    return n - pi[-1]


def literal_code(tau: BitString) -> BitString:
    return header_code(len(tau)) + tau


def runlength_code(tau: BitString) -> BitString:
    rs = runs(tau)
    head = header_code(len(rs))
    if not rs:
        return head
    return head + tau[0] + "".join(header_code(r - 1) for r in rs)


def periodic_code(tau: BitString) -> BitString | None:
    if not tau:
        return None
    q = smallest_period(tau)
    return header_code(q - 1) + tau[:q] + header_code(len(tau))


ENCODERS: dict[str, Callable[[BitString], BitString | None]] = {
    "literal": literal_code,
    "runlength": runlength_code,
    "periodic": periodic_code,
}


def literal_length(tau: BitString) -> int:
    return header_length(len(tau)) + len(tau)


def runlength_length(tau: BitString) -> int:
    rs = runs(tau)
    return header_length(len(rs)) + (1 if rs else 0) + sum(header_length(r - 1) for r in rs)


def periodic_length(tau: BitString) -> int | None:
    if not tau:
        return None
    q = smallest_period(tau)
    return header_length(q - 1) + q + header_length(len(tau))


LENGTHS: dict[str, Callable[[BitString], int | None]] = {
    "literal": literal_length,
    "runlength": runlength_length,
    "periodic": periodic_length,
}


class ComplexityEstimator:
    """Base class; subclasses implement :meth:`estimate`."""

    kind = "abstract"

    def __init__(self, L: int):
        self.L = L
        self._cache: dict[BitString, int] = {}
        self._audits: dict[int, Fraction] = {}

    def estimate(self, tau: BitString) -> int:
        raise NotImplementedError

    def __call__(self, tau: BitString) -> int:
        try:
            return self._cache[tau]
        except KeyError:
            pass
        if len(tau) > self.L:
            raise FWeightError(f"{render_bits(tau)} is beyond the estimator domain {self.L}")
        k = self.estimate(tau)
        if k < 0:
            raise FWeightError("estimates must be natural numbers")
        self._cache[tau] = k
        return k

    def kraft_sum(self, depth: int | None = None) -> Fraction:
        """Exact ``Σ_{|τ| <= depth} 2^(-K̂(τ))``."""
        depth = self.L if depth is None else depth
        if depth > self.L:
            raise FWeightError("audit depth exceeds the estimator domain")
        if depth not in self._audits:
            # accumulate as an integer over 2^max to keep the sum fast
            ks = [self(t) for t in all_strings(depth)]
            top = max(ks, default=0)
            self._audits[depth] = Fraction(sum(1 << (top - k) for k in ks), 1 << top)
        return self._audits[depth]

    def admissible(self, depth: int | None = None) -> bool:
        return self.kraft_sum(depth) <= 1


class TableEstimator(ComplexityEstimator):
    kind = "table"

    def __init__(self, table: Mapping[BitString, int], L: int | None = None,
                 default: Callable[[BitString], int] | None = None):
        self.table = dict(table)
        self.default = default
        if L is None:
            L = max((len(t) for t in self.table), default=0)
        super().__init__(L)

    def estimate(self, tau: BitString) -> int:
        if tau in self.table:
            return self.table[tau]
        if self.default is None:
            raise FWeightError(f"no estimate for {render_bits(tau)}")
        return self.default(tau)


class CodeFamilyEstimator(ComplexityEstimator):
    kind = "code-family"

    def __init__(self, L: int, codes: Iterable[str] = ("literal", "runlength", "periodic")):
        self.codes = tuple(c for c in PREFERENCE if c in set(codes))
        unknown = set(codes) - set(TAGS)
        if unknown or not self.codes:
            raise FWeightError(f"unknown sub-codes: {sorted(unknown)}")
        super().__init__(L)

    def explain(self, tau: BitString) -> tuple[int, str]:
        """The estimate and the sub-code achieving it."""
        best = None
        for name in self.codes:
            n = LENGTHS[name](tau)
            if n is not None and (best is None or n + 2 < best[0]):
                best = (n + 2, name)
        if best is None:
            raise FWeightError(f"no sub-code describes {render_bits(tau)}")
        return best

    def estimate(self, tau: BitString) -> int:
        return self.explain(tau)[0]

    def encode(self, tau: BitString) -> BitString:
        _, name = self.explain(tau)
        return TAGS[name] + ENCODERS[name](tau)
