"""Finite Levin systems: preimage families of a monotone functional.

A system assigns to every ``σ`` with ``|σ| <= dX`` an open set ``V_σ``
(a :class:`CylinderSet`) such that children are contained in their parent
and siblings are disjoint.  Cylinders carry timestamps giving the order in
which an enumeration would have produced them; truncation respects it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .core import (
    BitString,
    CylinderSet,
    FWeightError,
    InvariantError,
    PreconditionError,
    WeightFunction,
    all_strings,
    canonical_key,
    comparable,
    covers,
    cylinder_measure,
    minimal_elements,
    meets,
    prefixes,
    render_bits,
    same_open_set,
)
from .weights import pwt


class MonotonicityError(FWeightError):
    pass


class MonotoneFunctionalTable:
    """A finite monotone functional ``ρ ↦ Φ(ρ)`` on inputs of length ``<= dY``."""

    def __init__(self, table: Mapping[BitString, BitString], dX: int | None = None):
        self.table = dict(table)
        self.dY = max((len(r) for r in self.table), default=0)
        self.dX = max((len(x) for x in self.table.values()), default=0) if dX is None else dX
        for rho, out in self.table.items():
            for p in prefixes(rho)[:-1]:
                if p in self.table and not out.startswith(self.table[p]):
                    raise MonotonicityError(
                        f"Φ({render_bits(p)})={render_bits(self.table[p])} is not a prefix of "
                        f"Φ({render_bits(rho)})={render_bits(out)}")

    def __call__(self, rho: BitString) -> BitString | None:
        return self.table.get(rho)

    def inputs(self) -> list[BitString]:
        return sorted(self.table, key=canonical_key)

    @classmethod
    def from_function(cls, fn, dY: int, dX: int | None = None) -> "MonotoneFunctionalTable":
        return cls({r: fn(r) for r in all_strings(dY) if fn(r) is not None}, dX)


@dataclass(frozen=True)
class FiniteLevinSystem:
    dX: int
    sets: dict[BitString, CylinderSet]
    timestamps: dict[BitString, int] = field(default_factory=dict)

    def __getitem__(self, sigma: BitString) -> CylinderSet:
        return self.sets[sigma]

    def measure(self, sigma: BitString) -> Fraction:
        return cylinder_measure(self.sets[sigma])

    def cylinders(self) -> list[BitString]:
        """Every cylinder of every ``V_σ``, in enumeration order."""
        seen = set()
        for V in self.sets.values():
            seen.update(V)
        big = len(self.timestamps) + 1
        return sorted(seen, key=lambda r: (self.timestamps.get(r, big), canonical_key(r)))

    @classmethod
    def from_sets(cls, sets: Mapping[BitString, Iterable[BitString]], dX: int | None = None,
                  order: Iterable[BitString] = ()) -> "FiniteLevinSystem":
        """A hand-built system; ``order`` lists cylinders in enumeration order."""
        sets = {s: minimal_elements(V) for s, V in sets.items()}
        if dX is None:
            dX = max((len(s) for s in sets), default=0)
        for s in all_strings(dX):
            sets.setdefault(s, CylinderSet())
        return cls(dX, sets, {r: t for t, r in enumerate(order)})


def levin_from_functional(phi: MonotoneFunctionalTable) -> FiniteLevinSystem:
    """``V_σ = ⟦{ρ : Φ(ρ) ⊇ σ}⟧`` for every ``|σ| <= dX``."""
    inputs = phi.inputs()
    stamps = {r: t for t, r in enumerate(inputs)}
    sets = {
        sigma: minimal_elements(r for r in inputs if phi(r).startswith(sigma))
        for sigma in all_strings(phi.dX)
    }
    V = FiniteLevinSystem(phi.dX, sets, stamps)
    report = levin_validate(V)
    if not report.passed:
        raise InvariantError(f"functional produced an invalid system: {report.violations[0]}")
    return V


@dataclass(frozen=True)
class LevinReport:
    violations: tuple[tuple[str, BitString, BitString | None], ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def levin_validate(V: FiniteLevinSystem) -> LevinReport:
    """Check nesting and disjointness (parent/child, sibling, ancestor, incomparable)."""
    bad = []
    nodes = list(all_strings(V.dX))
    for s in nodes:
        if len(s) < V.dX:
            V0, V1 = V[s + "0"], V[s + "1"]
            if not covers(V0 | V1, V[s]):
                bad.append(("children-in-parent", s, None))
            if meets(V0, V1):
                bad.append(("siblings-disjoint", s, None))
    for s in nodes:
        for p in prefixes(s)[:-1]:
            if not covers(V[s], V[p]):
                bad.append(("nested-along-prefixes", p, s))
    for a_i, a in enumerate(nodes):
        for b in nodes[a_i + 1:]:
            if not comparable(a, b) and meets(V[a], V[b]):
                bad.append(("incomparable-disjoint", a, b))
    return LevinReport(tuple(bad))


def levin_truncate(V: FiniteLevinSystem, caps: Mapping[BitString, Fraction]) -> FiniteLevinSystem:
    """Shrink ``V`` so that ``μ(Ṽ_σ) <= r_σ`` without touching slack branches.

    Cylinders are admitted in timestamp order.  A cylinder whose deepest
    index is ``τ`` joins ``Ṽ_ρ`` for every ``ρ`` along ``τ`` down to the first
    ancestor whose cap it would break; from there on it is dropped.
    """
    if not levin_validate(V).passed:
        raise PreconditionError("truncation needs a valid Levin system")
    for s in all_strings(V.dX):
        if s not in caps:
            raise PreconditionError(f"no cap for {render_bits(s)}")
    nodes = list(all_strings(V.dX))
    kept: dict[BitString, set[BitString]] = {s: set() for s in nodes}
    for rho in V.cylinders():
        chain = [s for s in nodes if covers([rho], V[s])]
        tau = max(chain, key=len)
        for s in prefixes(tau):
            if cylinder_measure(kept[s] | {rho}) > caps[s]:
                break
            kept[s].add(rho)
    return FiniteLevinSystem(
        V.dX, {s: minimal_elements(kept[s]) for s in nodes}, dict(V.timestamps))


def levin_measure_test(V: FiniteLevinSystem, w: WeightFunction, i: int) -> CylinderSet:
    """``{σ : μ(V_σ) > 2^i w(σ)}``; its prefix-free weight is asserted ``<= 2^-i``."""
    A = CylinderSet(s for s in all_strings(V.dX) if V.measure(s) > 2**i * w(s))
    p = pwt(A, w).value
    if p > Fraction(1, 2**i):
        raise InvariantError(f"measure test at level {i} has pwt {p}")
    return A


@dataclass(frozen=True)
class PushforwardReport:
    measure: Fraction
    disjoint_sum: Fraction
    pwt: Fraction
    bound: Fraction

    @property
    def passed(self) -> bool:
        return self.measure == self.disjoint_sum and self.measure <= self.bound


def levin_pushforward_bound(V: FiniteLevinSystem, A: Iterable[BitString], w: WeightFunction,
                            c: int) -> PushforwardReport:
    """``μ(⋃_{σ∈Â} V_σ) = Σ_{σ∈Â} μ(V_σ) <= 2^c pwt(A)``, given ``μ(V_σ) <= 2^c w(σ)``."""
    for s in all_strings(V.dX):
        if V.measure(s) > 2**c * w(s):
            raise PreconditionError(
                f"μ(V_{render_bits(s)}) = {V.measure(s)} exceeds 2^{c}·w")
    hat = minimal_elements(A)
    if hat.depth > V.dX:
        raise PreconditionError("set is deeper than the Levin system")
    union = set()
    for s in hat:
        union.update(V[s])
    mu = cylinder_measure(union)
    total = sum((V.measure(s) for s in hat), Fraction(0))
    p = pwt(A, w).value
    return PushforwardReport(mu, total, p, 2**c * p)


def systems_equal(V: FiniteLevinSystem, W: FiniteLevinSystem, sigma: BitString) -> bool:
    return same_open_set(V[sigma], W[sigma])
