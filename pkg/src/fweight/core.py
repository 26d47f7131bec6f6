"""Binary strings, finite cylinder sets, exact rationals and weight functions.

Bit strings are plain ``str`` objects over ``"0"``/``"1"``; the empty string
is ``""`` internally and ``e`` in every file format and report.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Mapping, Union

BitString = str
Number = Union[int, Fraction]


class FWeightError(ValueError):
    """Base class for errors raised by this package."""


class DomainDepthError(FWeightError):
    pass


class ConvexityError(FWeightError):
    def __init__(self, sigma: BitString, message: str | None = None):
        self.sigma = sigma
        super().__init__(message or f"convexity violated at {render_bits(sigma)}")


class PreconditionError(FWeightError):
    pass


class InvariantError(AssertionError):
    """An internal invariant that the mathematics guarantees has failed."""


# --------------------------------------------------------------------------
# bit strings

def check_bits(sigma: str) -> BitString:
    if not isinstance(sigma, str) or sigma.strip("01"):
        raise FWeightError(f"not a bit string: {sigma!r}")
    return sigma


def parse_bits(token: str) -> BitString:
    token = token.strip()
    if token == "e":
        return ""
    return check_bits(token)


def render_bits(sigma: BitString) -> str:
    return sigma if sigma else "e"


def is_prefix(rho: BitString, sigma: BitString) -> bool:
    """``rho ⊆ sigma`` (not necessarily proper)."""
    return sigma.startswith(rho)


def comparable(a: BitString, b: BitString) -> bool:
    return a.startswith(b) or b.startswith(a)


def prefixes(sigma: BitString) -> list[BitString]:
    """All prefixes of ``sigma``, shortest first, including ``e`` and ``sigma``."""
    return [sigma[:n] for n in range(len(sigma) + 1)]


def strings_of_length(n: int) -> Iterator[BitString]:
    for bits in product("01", repeat=n):
        yield "".join(bits)


def all_strings(max_len: int) -> Iterator[BitString]:
    """Every bit string of length ``<= max_len`` in canonical order."""
    for n in range(max_len + 1):
        yield from strings_of_length(n)


def canonical_key(sigma: BitString) -> tuple[int, str]:
    return (len(sigma), sigma)


# --------------------------------------------------------------------------
# rationals

def parse_rational(text: str) -> Fraction:
    text = text.strip()
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise FWeightError(f"malformed rational: {text!r}") from exc


def render_rational(q: Number) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# cylinder sets

class CylinderSet(frozenset):
    """A finite set of bit strings, standing for the open set ``⟦A⟧``."""

    def __new__(cls, members: Iterable[str] = ()):
        return super().__new__(cls, (check_bits(m) for m in members))

    @property
    def depth(self) -> int:
        return max((len(m) for m in self), default=0)

    def sorted(self) -> list[BitString]:
        return sorted(self, key=canonical_key)

    def prefix_closure(self) -> frozenset[BitString]:
        """Every prefix of every member (the nodes of the backing trie)."""
        nodes = set()
        for m in self:
            for n in range(len(m), -1, -1):
                p = m[:n]
                if p in nodes:
                    break
                nodes.add(p)
        return frozenset(nodes)

    def __or__(self, other):
        return CylinderSet(frozenset.__or__(self, other))

    def __and__(self, other):
        return CylinderSet(frozenset.__and__(self, other))

    def __sub__(self, other):
        return CylinderSet(frozenset.__sub__(self, other))

    def __repr__(self) -> str:
        return "CylinderSet({" + ", ".join(render_bits(s) for s in self.sorted()) + "})"


def as_cylinder_set(members: Iterable[str]) -> CylinderSet:
    return members if isinstance(members, CylinderSet) else CylinderSet(members)


def minimal_elements(A: Iterable[str]) -> CylinderSet:
    """``Â``: members of ``A`` with no proper prefix in ``A``."""
    A = as_cylinder_set(A)
    return CylinderSet(s for s in A if not any(s[:n] in A for n in range(len(s))))


def is_prefix_free(A: Iterable[str]) -> bool:
    A = as_cylinder_set(A)
    return all(not any(s[:n] in A for n in range(len(s))) for s in A)


def covered_by(sigma: BitString, B: CylinderSet, nodes: frozenset | None = None) -> bool:
    """Decide ``⟦sigma⟧ ⊆ ⟦B⟧`` by descending the trie of ``B``."""
    if nodes is None:
        nodes = B.prefix_closure()
    if any(sigma[:n] in B for n in range(len(sigma) + 1)):
        return True
    if sigma not in nodes:
        # nothing in B extends sigma, so its cylinder has uncovered points
        return False
    return covered_by(sigma + "0", B, nodes) and covered_by(sigma + "1", B, nodes)


def covers(A: Iterable[str], B: Iterable[str]) -> bool:
    """True iff ``⟦A⟧ ⊆ ⟦B⟧``."""
    A, B = as_cylinder_set(A), as_cylinder_set(B)
    nodes = B.prefix_closure()
    return all(covered_by(s, B, nodes) for s in minimal_elements(A))


def same_open_set(A: Iterable[str], B: Iterable[str]) -> bool:
    return covers(A, B) and covers(B, A)


def cylinder_measure(A: Iterable[str]) -> Fraction:
    """Fair-coin measure of ``⟦A⟧``."""
    return sum((Fraction(1, 2 ** len(s)) for s in minimal_elements(A)), Fraction(0))


def meets(A: Iterable[str], B: Iterable[str]) -> bool:
    """True iff ``⟦A⟧ ∩ ⟦B⟧`` is nonempty."""
    A, B = as_cylinder_set(A), as_cylinder_set(B)
    return any(comparable(a, b) for a in A for b in B)


def intersection(A: Iterable[str], B: Iterable[str]) -> CylinderSet:
    """A cylinder set denoting ``⟦A⟧ ∩ ⟦B⟧``."""
    out = set()
    for a in minimal_elements(A):
        for b in minimal_elements(B):
            if a.startswith(b):
                out.add(a)
            elif b.startswith(a):
                out.add(b)
    return minimal_elements(out)


# --------------------------------------------------------------------------
# weight functions

INTEGER_EXPONENT = "integer-exponent"
RATIONAL_TABLE = "rational-table"
BUILTIN = "builtin-family"


def ceil_fraction(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


class WeightFunction:
    """A positive rational weight ``w(σ) = 2^(-f(σ))`` on strings of length ``<= depth``.

    Use the constructors :meth:`from_exponents`, :meth:`from_table` and
    :meth:`length_scaled` rather than calling ``__init__`` directly.
    """

    def __init__(
        self,
        mode: str,
        depth: int,
        weight: Callable[[BitString], Fraction],
        exponent: Callable[[BitString], int] | None = None,
        name: str = "",
        s: Fraction | None = None,
        table: Mapping[BitString, Fraction] | None = None,
    ):
        if mode not in (INTEGER_EXPONENT, RATIONAL_TABLE, BUILTIN):
            raise FWeightError(f"unknown weight mode {mode!r}")
        self.mode = mode
        self.depth = depth
        self.name = name or mode
        self.s = s
        self.table = table
        self._weight = weight
        self._exponent = exponent
        self._cache: dict[BitString, Fraction] = {}
        self._scaled: tuple[dict[BitString, int], int] | None = None

    # -- constructors

    @classmethod
    def from_exponents(cls, f: Mapping[BitString, int] | Callable[[BitString], int],
                       depth: int | None = None, name: str = "") -> "WeightFunction":
        if isinstance(f, Mapping):
            table = {check_bits(k): int(v) for k, v in f.items()}
            if depth is None:
                depth = max((len(k) for k in table), default=0)

            def exponent(sigma):
                try:
                    return table[sigma]
                except KeyError:
                    raise DomainDepthError(f"no exponent for {render_bits(sigma)}") from None
        else:
            if depth is None:
                raise FWeightError("depth is required for a callable exponent")
            exponent = f
            table = None

        def weight(sigma):
            k = exponent(sigma)
            return Fraction(1, 2**k) if k >= 0 else Fraction(2 ** (-k))

        w = cls(INTEGER_EXPONENT, depth, weight, exponent, name=name)
        if table is not None:
            w.table = {k: weight(k) for k in table}
        return w

    @classmethod
    def from_table(cls, table: Mapping[BitString, Number] | Callable[[BitString], Number],
                   depth: int | None = None, name: str = "") -> "WeightFunction":
        if isinstance(table, Mapping):
            tab = {check_bits(k): Fraction(v) for k, v in table.items()}
            for k, v in tab.items():
                if v <= 0:
                    raise FWeightError(f"weight of {render_bits(k)} is not positive")
            if depth is None:
                depth = max((len(k) for k in tab), default=0)

            def weight(sigma):
                try:
                    return tab[sigma]
                except KeyError:
                    raise DomainDepthError(f"no weight for {render_bits(sigma)}") from None

            return cls(RATIONAL_TABLE, depth, weight, name=name, table=tab)
        if depth is None:
            raise FWeightError("depth is required for a callable table")
        return cls(RATIONAL_TABLE, depth, lambda sigma: Fraction(table(sigma)), name=name)

    @classmethod
    def length_scaled(cls, s: Number = 1, depth: int = 64) -> "WeightFunction":
        """Built-in ``2^(-⌈s·|σ|⌉)``; ceiling rounding keeps exponents integral."""
        s = Fraction(s)
        if not 0 < s <= 1:
            raise FWeightError("length-scaled needs 0 < s <= 1")

        def exponent(sigma):
            return ceil_fraction(s * len(sigma))

        return cls(BUILTIN, depth, lambda sigma: Fraction(1, 2 ** exponent(sigma)),
                   exponent, name=f"length-scaled s={render_rational(s)}", s=s)

    @classmethod
    def uniform(cls, depth: int = 64) -> "WeightFunction":
        """The fair-coin weight ``2^(-|σ|)``."""
        return cls.length_scaled(1, depth)

    # -- access

    @property
    def is_integer_exponent(self) -> bool:
        return self._exponent is not None

    def _check(self, sigma: BitString) -> None:
        if len(sigma) > self.depth:
            raise DomainDepthError(
                f"{render_bits(sigma)} is beyond the weight domain depth {self.depth}")

    def __call__(self, sigma: BitString) -> Fraction:
        try:
            return self._cache[sigma]
        except KeyError:
            pass
        self._check(sigma)
        v = self._weight(sigma)
        if v <= 0:
            raise FWeightError(f"weight of {render_bits(sigma)} is not positive")
        self._cache[sigma] = v
        return v

    def exponent(self, sigma: BitString) -> int:
        if self._exponent is None:
            raise FWeightError(f"{self.name} has no integer exponent view")
        self._check(sigma)
        return self._exponent(sigma)

    def __repr__(self) -> str:
        return f"WeightFunction({self.name}, depth={self.depth})"


def integer_weights(w: WeightFunction, nodes: Iterable[BitString]) -> tuple[dict[BitString, int], int]:
    """Scale ``w`` on ``nodes`` to integers over a common denominator.

    Returns ``(scaled, denom)`` with ``w(σ) == scaled[σ] / denom`` for every
    node; ``scaled`` may hold further strings.  Dynamic programs run on the
    integers and divide once at the end.
    """
    nodes = nodes if isinstance(nodes, (set, frozenset)) else set(nodes)
    if w.table is not None and len(w.table) <= _SCALE_CACHE_LIMIT:
        # small finite tables: scale the whole table once and reuse it
        if w._scaled is None:
            w._scaled = _scale({s: v for s, v in w.table.items() if len(s) <= w.depth})
        scaled, denom = w._scaled
        if nodes <= scaled.keys():
            return scaled, denom
    return _scale({s: w(s) for s in nodes})


_SCALE_CACHE_LIMIT = 1 << 12


def _scale(vals: Mapping[BitString, Fraction]) -> tuple[dict[BitString, int], int]:
    denom = math.lcm(*(v.denominator for v in vals.values())) if vals else 1
    return {s: v.numerator * (denom // v.denominator) for s, v in vals.items()}, denom
