"""Test families, universal tests from estimators, and the semimeasures they induce."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .core import (
    BitString,
    CylinderSet,
    FWeightError,
    InvariantError,
    PreconditionError,
    WeightFunction,
    all_strings,
    as_cylinder_set,
    render_bits,
)
from .estimators import ComplexityEstimator
from .kraft import CodeRequest, kraft_sum
from .weights import dwt, pwt


class TestFamily(Mapping[int, CylinderSet]):
    """Finitely many levels ``i -> A_i``."""

    __test__ = False  # not a pytest class

    def __init__(self, levels: Mapping[int, Iterable[BitString]] | Iterable[Iterable[BitString]]):
        if isinstance(levels, Mapping):
            items = levels.items()
        else:
            items = enumerate(levels)
        self._levels = {int(i): as_cylinder_set(A) for i, A in items}
        if any(i < 0 for i in self._levels):
            raise FWeightError("test levels are natural numbers")

    def __getitem__(self, i: int) -> CylinderSet:
        return self._levels[i]

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._levels))

    def __len__(self) -> int:
        return len(self._levels)

    @property
    def depth(self) -> int:
        return max((A.depth for A in self._levels.values()), default=0)

    def __repr__(self) -> str:
        return f"TestFamily({ {i: self[i] for i in self} })"


# --------------------------------------------------------------------------
# audits

@dataclass(frozen=True)
class AuditRow:
    index: int
    value: Fraction
    bound: Fraction

    @property
    def ok(self) -> bool:
        return self.value <= self.bound


@dataclass(frozen=True)
class AuditReport:
    strong: bool
    rows: tuple[AuditRow, ...]
    bc_sum: Fraction

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.rows)

    @property
    def first_failure(self) -> int | None:
        return next((r.index for r in self.rows if not r.ok), None)


def test_family_audit(fam: TestFamily, w: WeightFunction, strong: bool) -> AuditReport:
    """Check ``dwt(A_i) <= 2^-i`` (or ``pwt`` when ``strong``) at every level.

    ``bc_sum`` is ``Σ_i pwt(A_i)``, the partial sum behind the
    summability condition.
    """
    rows = []
    bc = Fraction(0)
    for i in fam:
        p = pwt(fam[i], w).value
        bc += p
        value = p if strong else dwt(fam[i], w)
        rows.append(AuditRow(i, value, Fraction(1, 2**i)))
    return AuditReport(strong, tuple(rows), bc)


test_family_audit.__test__ = False


# --------------------------------------------------------------------------
# Kraft requests from a test family

def family_request_mass(fam: TestFamily, w: WeightFunction) -> Fraction:
    """``Σ_{i >= 1} 2^i dwt(A_2i)`` over the even levels present."""
    return sum((Fraction(2**i) * dwt(fam[2 * i], w) for i in range(1, fam_max(fam) // 2 + 1)
                if 2 * i in fam), Fraction(0))


def fam_max(fam: TestFamily) -> int:
    return max(fam, default=0)


def requests_from_family(fam: TestFamily, w: WeightFunction
                         ) -> tuple[list[CodeRequest], int]:
    """Requests ``(τ, f(τ) - i + c)`` for ``τ ∈ A_2i``, ``i >= 1``, with the least workable ``c``.

    ``c`` is the smallest integer keeping every length natural and the Kraft
    sum at most 1.
    """
    raw: list[tuple[tuple[int, BitString], int]] = []
    for i in range(1, fam_max(fam) // 2 + 1):
        if 2 * i not in fam:
            continue
        for tau in fam[2 * i].sorted():
            raw.append(((2 * i, tau), w.exponent(tau) - i))
    if not raw:
        return [], 0
    c = max(-n for _, n in raw)
    while kraft_sum(n + c for _, n in raw) > 1:
        c += 1
    return [CodeRequest(label, n + c) for label, n in raw], c


# --------------------------------------------------------------------------
# universal tests from an estimator

def _require_exponent(w: WeightFunction) -> None:
    if not w.is_integer_exponent:
        raise PreconditionError("universal tests need an integer-exponent weight")


def in_universal_test(est: ComplexityEstimator, w: WeightFunction, i: int, tau: BitString) -> bool:
    """``K̂(τ) < f(τ) - i``."""
    return est(tau) < w.exponent(tau) - i


@dataclass(frozen=True)
class GeneratedTest:
    members: CylinderSet
    level: int
    length: int
    admissible: bool
    weight: Fraction


def universal_test_generate(est: ComplexityEstimator, w: WeightFunction, i: int, L: int
                            ) -> GeneratedTest:
    """``S_i = {τ : |τ| <= L, K̂(τ) < f(τ) - i}``.

    When the estimator's Kraft sum up to ``L`` is at most 1, the direct
    weight of ``S_i`` must be at most ``2^-i``; this is asserted.
    """
    _require_exponent(w)
    if L > est.L or L > w.depth:
        raise PreconditionError(f"length {L} exceeds the estimator or weight domain")
    members = CylinderSet(t for t in all_strings(L) if in_universal_test(est, w, i, t))
    admissible = est.admissible(L)
    weight = dwt(members, w)
    if admissible and weight > Fraction(1, 2**i):
        raise InvariantError(f"admissible estimator produced dwt {weight} > 2^-{i}")
    return GeneratedTest(members, i, L, admissible, weight)


@dataclass(frozen=True)
class DeficiencyProfile:
    deficiencies: tuple[int, ...]
    max_level: int | None

    @property
    def peak(self) -> int | None:
        return max(self.deficiencies, default=None)


def deficiency_profile(bits: BitString, w: WeightFunction, est: ComplexityEstimator
                       ) -> DeficiencyProfile:
    """``d(n) = f(X↾n) - K̂(X↾n)`` for ``n = 1..N``.

    ``max_level`` is the largest ``i`` such that some prefix lies in ``S_i``
    (``None`` when no prefix lies in ``S_0``).
    """
    _require_exponent(w)
    if len(bits) > min(est.L, w.depth):
        raise PreconditionError("string is longer than the estimator or weight domain")
    d = tuple(w.exponent(bits[:n]) - est(bits[:n]) for n in range(1, len(bits) + 1))
    top = max(d, default=None)
    level = top - 1 if top is not None and top >= 1 else None
    return DeficiencyProfile(d, level)


# --------------------------------------------------------------------------
# semimeasures

def restriction(A: Iterable[BitString], sigma: BitString) -> CylinderSet:
    """Members of ``A`` extending ``σ``."""
    return CylinderSet(t for t in A if t.startswith(sigma))


@dataclass(frozen=True)
class SemimeasureValue:
    sigma: BitString
    levels: dict[int, Fraction]
    mixture: Fraction


def level_semimeasure(A: Iterable[BitString], w: WeightFunction, sigma: BitString) -> Fraction:
    return pwt(restriction(A, sigma), w).value


def mixture_value(fam: TestFamily, w: WeightFunction, sigma: BitString) -> Fraction:
    """``Σ_{i >= 1} 2^i m_2i(σ)`` over the even levels present."""
    return sum((Fraction(2**i) * level_semimeasure(fam[2 * i], w, sigma)
                for i in range(1, fam_max(fam) // 2 + 1) if 2 * i in fam), Fraction(0))


def semimeasure_from_family(fam: TestFamily, w: WeightFunction, sigma: BitString
                            ) -> SemimeasureValue:
    """``m_i(σ) = pwt({τ ∈ A_i : τ ⊇ σ})`` at every level, and their mixture.

    Asserts superadditivity at ``σ`` for every level, and, when the family
    passes the strong audit, that the mixture has total mass at most 1.
    """
    levels = {}
    for i in fam:
        m = level_semimeasure(fam[i], w, sigma)
        m0 = level_semimeasure(fam[i], w, sigma + "0")
        m1 = level_semimeasure(fam[i], w, sigma + "1")
        if m < m0 + m1:
            raise InvariantError(f"m_{i} is not superadditive at {render_bits(sigma)}")
        levels[i] = m
    mix = mixture_value(fam, w, sigma)
    if all(pwt(fam[i], w).value <= Fraction(1, 2**i) for i in fam):
        root = mix if sigma == "" else mixture_value(fam, w, "")
        if root > 1:
            raise InvariantError(f"mixture has mass {root} > 1")
    return SemimeasureValue(sigma, levels, mix)
