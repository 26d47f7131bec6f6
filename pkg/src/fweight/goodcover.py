"""Incremental good covers for convex weight functions.

A good cover of ``A`` is a set ``B`` with ``⟦A⟧ ⊆ ⟦B⟧`` and
``pwt(B) <= vwt(A)``.  :func:`build_cover` grows one string by string: an
uncovered ``σ`` contributes the prefix ``τ ⊆ σ`` that makes the minimal
elements of ``B ∪ {τ}`` lightest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    BitString,
    ConvexityError,
    CylinderSet,
    InvariantError,
    WeightFunction,
    as_cylinder_set,
    covers,
    minimal_elements,
    prefixes,
)
from .weights import dwt, is_convex, pwt, vwt_bruteforce, vwt_convex


FULL_CONVEXITY_SWEEP = 12


@dataclass(frozen=True)
class CoverState:
    w: WeightFunction
    accepted: CylinderSet = field(default_factory=CylinderSet)
    processed: tuple[BitString, ...] = ()


def _candidate_order(sigma: BitString) -> list[BitString]:
    # shortest first: the first minimiser found wins ties
    return prefixes(sigma)


def extend_cover(state: CoverState, sigma: BitString) -> CoverState:
    w = state.w
    processed = state.processed + (sigma,)
    if covers([sigma], state.accepted):
        return CoverState(w, state.accepted, processed)
    for rho in prefixes(sigma)[:-1]:
        if len(rho) < w.depth and w(rho) > w(rho + "0") + w(rho + "1"):
            raise ConvexityError(rho)

    best_tau, best_cost = None, None
    for tau in _candidate_order(sigma):
        cost = dwt(minimal_elements(state.accepted | {tau}), w)
        if best_cost is None or cost < best_cost:
            best_tau, best_cost = tau, cost
    return CoverState(w, state.accepted | {best_tau}, processed)


def build_cover(stream: Iterable[BitString], w: WeightFunction) -> CylinderSet:
    stream = list(stream)
    depth = max((len(s) for s in stream), default=0)
    # full sweep only where it is cheap; extend_cover re-checks each path
    ok, bad = is_convex(w, min(depth, w.depth, FULL_CONVEXITY_SWEEP))
    if not ok:
        raise ConvexityError(bad)
    state = CoverState(w)
    for sigma in stream:
        state = extend_cover(state, sigma)
    return state.accepted


def cover_trace(stream: Sequence[BitString], w: WeightFunction) -> list[CoverState]:
    """Every intermediate state of :func:`build_cover`, starting with the empty one."""
    states = [CoverState(w)]
    for sigma in stream:
        states.append(extend_cover(states[-1], sigma))
    return states


@dataclass(frozen=True)
class GoodCoverReport:
    contained: bool
    pwt_cover: Fraction
    vwt_set: Fraction
    vwt_cover: Fraction | None
    dwt_cover_minimal: Fraction | None
    method: str

    @property
    def passed(self) -> bool:
        return self.contained and self.pwt_cover <= self.vwt_set


def verify_good_cover(A: Iterable[BitString], B: Iterable[BitString], w: WeightFunction,
                      brute_bound: int | None = None) -> GoodCoverReport:
    """Check that ``B`` is a good cover of ``A``, recomputing ``vwt`` from scratch.

    The vehement weights come from the convex cover DP, or from the
    exhaustive search with bound ``brute_bound`` when one is given.  When the
    cover is good the four values ``vwt(A), vwt(B), dwt(B̂), pwt(B)`` must
    coincide; a mismatch there raises ``InvariantError``.
    """
    A, B = as_cylinder_set(A), as_cylinder_set(B)
    if brute_bound is None:
        vwt = lambda X: vwt_convex(X, w).value  # noqa: E731
        method = "convex-cover-dp"
    else:
        vwt = lambda X: vwt_bruteforce(X, w, brute_bound).value  # noqa: E731
        method = "brute-force"
    contained = covers(A, B)
    p = pwt(B, w).value
    va = vwt(A)
    report = GoodCoverReport(contained, p, va, None, None, method)
    if not report.passed:
        return report
    vb = vwt(B)
    d = dwt(minimal_elements(B), w)
    if not va == vb == d == p:
        raise InvariantError(f"good cover value chain broken: {va}, {vb}, {d}, {p}")
    return GoodCoverReport(contained, p, va, vb, d, method)
