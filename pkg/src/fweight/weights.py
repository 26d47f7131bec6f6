"""Direct, prefix-free and vehement weights of finite sets of strings.

``dwt`` sums weights, ``pwt`` is a maximum-weight antichain and ``vwt`` a
minimum-weight cover.  The antichain and cover values are computed by
dynamic programs over the trie of the input set; weights are first scaled to
integers over a common denominator so the inner loops avoid ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .core import (
    BitString,
    ConvexityError,
    CylinderSet,
    DomainDepthError,
    FWeightError,
    WeightFunction,
    all_strings,
    as_cylinder_set,
    canonical_key,
    integer_weights,
    minimal_elements,
    strings_of_length,
)


class InstanceTooLarge(FWeightError):
    pass


@dataclass(frozen=True)
class WeightReport:
    value: Fraction
    witness: CylinderSet
    method: str
    depth_bound: int | None = None


def dwt(A: Iterable[str], w: WeightFunction) -> Fraction:
    """Direct weight: the plain sum of ``w`` over ``A``."""
    A = as_cylinder_set(A)
    if not A:
        return Fraction(0)
    wt, denom = integer_weights(w, A)
    return Fraction(sum(wt[s] for s in A), denom)


def pwt(A: Iterable[str], w: WeightFunction) -> WeightReport:
    """Prefix-free weight: the heaviest antichain inside ``A``.

    Trie recursion ``M(v) = max(w(v) if v in A, M(v0) + M(v1))``; on ties the
    node itself is kept, so witnesses favour shorter strings.
    """
    A = as_cylinder_set(A)
    if not A:
        return WeightReport(Fraction(0), CylinderSet(), "antichain-dp")
    nodes = A.prefix_closure()
    wt, denom = integer_weights(w, A)
    best: dict[BitString, int] = {}
    take: set[BitString] = set()
    for v in sorted(nodes, key=len, reverse=True):
        split = best.get(v + "0", 0) + best.get(v + "1", 0)
        if v in A and wt[v] >= split:
            best[v] = wt[v]
            take.add(v)
        else:
            best[v] = split

    witness = []
    stack = [""]
    while stack:
        v = stack.pop()
        if v in take:
            witness.append(v)
        else:
            stack.extend(c for c in (v + "0", v + "1") if c in nodes)
    return WeightReport(Fraction(best[""], denom), CylinderSet(witness), "antichain-dp")


def _check_local_convexity(w: WeightFunction, v: BitString) -> None:
    if len(v) < w.depth and w(v) > w(v + "0") + w(v + "1"):
        raise ConvexityError(v)


def _cover_dp(A: CylinderSet, w: WeightFunction, max_len: int | None, check_convex: bool):
    """Minimum-weight cover of ``⟦A⟧``.

    With ``max_len=None`` a required node (one extending a member of ``Â``)
    is charged its own weight; otherwise the recursion keeps splitting it
    down to strings of length ``max_len``.
    """
    required = minimal_elements(A)
    nodes = required.prefix_closure()
    if max_len is None:
        extra = set()
        if check_convex:
            for v in nodes:
                if len(v) < w.depth:
                    extra.update((v + "0", v + "1"))
        wt, denom = integer_weights(w, nodes | extra)
    else:
        full = set(nodes)
        for a in required:
            frontier = [a]
            while frontier:
                v = frontier.pop()
                full.add(v)
                if len(v) < max_len:
                    frontier.extend((v + "0", v + "1"))
        wt, denom = integer_weights(w, full)

    cost: dict[BitString, int] = {}
    here: set[BitString] = set()

    def solve_full(v: BitString) -> int:
        # cover the whole cylinder of v using strings of length <= max_len
        own = wt[v]
        if len(v) < max_len:
            split = solve_full(v + "0") + solve_full(v + "1")
            if split < own:
                cost[v] = split
                return split
        here.add(v)
        cost[v] = own
        return own

    for v in sorted(nodes, key=len, reverse=True):
        if v in required:
            if max_len is None:
                if check_convex:
                    _check_local_convexity(w, v)
                here.add(v)
                cost[v] = wt[v]
            else:
                solve_full(v)
            continue
        if check_convex and max_len is None and len(v) < w.depth \
                and wt[v] > wt[v + "0"] + wt[v + "1"]:
            raise ConvexityError(v)
        split = cost.get(v + "0", 0) + cost.get(v + "1", 0)
        if wt[v] <= split:
            here.add(v)
            cost[v] = wt[v]
        else:
            cost[v] = split

    if not required:
        return Fraction(0), CylinderSet()
    witness = []
    stack = [""]
    while stack:
        v = stack.pop()
        if v in here:
            witness.append(v)
        else:
            stack.extend(c for c in (v + "0", v + "1") if c in cost)
    return Fraction(cost[""], denom), CylinderSet(witness)


def vwt_convex(A: Iterable[str], w: WeightFunction) -> WeightReport:
    """Vehement weight for a convex ``w``: exact, since splitting never pays.

    Convexity is checked at every node the recursion touches (and one level
    below each required node when the domain allows); a violation raises
    :class:`ConvexityError`.
    """
    A = as_cylinder_set(A)
    value, witness = _cover_dp(A, w, None, check_convex=True)
    return WeightReport(value, witness, "convex-cover-dp")


def vwt_depth_bounded(A: Iterable[str], w: WeightFunction, k: int) -> WeightReport:
    """Cheapest cover using strings of length ``<= depth(A) + k``.

    An upper bound on the vehement weight for any ``w``; nonincreasing in ``k``.
    """
    if k < 0:
        raise FWeightError("k must be a natural number")
    A = as_cylinder_set(A)
    bound = A.depth + k
    value, witness = _cover_dp(A, w, bound, check_convex=False)
    return WeightReport(value, witness, "depth-bounded", bound)


def vwt_bruteforce(A: Iterable[str], w: WeightFunction, b: int,
                   max_nodes: int = 2_000_000) -> WeightReport:
    """Exhaustive search over covers by strings of length ``<= depth(A) + b``.

    Independent of the dynamic programs: ``⟦A⟧`` is expanded to its points,
    the strings of the bounding length, in sorted order.  The search covers
    the least uncovered point by each of its prefixes in turn, pruning only
    on accumulated cost.  The points below a prefix are a contiguous run, so
    the uncovered points are always a suffix of the list; suffixes are
    solved from the shortest up.
    """
    A = as_cylinder_set(A)
    bound = A.depth + b
    hat = minimal_elements(A)
    if sum(2 ** (bound - len(a)) for a in hat) > 4096:
        raise InstanceTooLarge("too many points at the bounding length")
    points = sorted(
        a + tail
        for a in hat
        for tail in strings_of_length(bound - len(a))
    )
    n_points = len(points)
    # end[i][n]: first index after the run of points extending points[i][:n]
    end = []
    for i, x in enumerate(points):
        row = []
        for n in range(len(x) + 1):
            j = i
            while j < n_points and points[j].startswith(x[:n]):
                j += 1
            row.append(j)
        end.append(row)

    # best[i]: cheapest cover of points[i:], with the choices made; filled from the end
    best: list[tuple[Fraction, tuple[str, ...]] | None] = [None] * n_points
    best.append((Fraction(0), ()))
    visited = 0
    for i in range(n_points - 1, -1, -1):
        x = points[i]
        for n in range(len(x) + 1):
            visited += 1
            if visited > max_nodes:
                raise InstanceTooLarge(f"search exceeded {max_nodes} nodes")
            u = x[:n]
            cost = w(u)
            if best[i] is not None and cost >= best[i][0]:
                continue
            rest_cost, rest = best[end[i][n]]
            if best[i] is None or cost + rest_cost < best[i][0]:
                best[i] = (cost + rest_cost, (u,) + rest)

    value, chosen = best[0]
    return WeightReport(value, CylinderSet(chosen), "brute-force", bound)


def is_convex(w: WeightFunction, depth: int) -> tuple[bool, BitString | None]:
    """Check ``w(σ) <= w(σ0) + w(σ1)`` for all ``|σ| < depth``.

    Returns ``(True, None)`` or ``(False, first violating σ)`` in canonical order.
    """
    if depth > w.depth:
        raise DomainDepthError(f"convexity check to depth {depth} exceeds domain {w.depth}")
    for sigma in all_strings(depth - 1):
        if w(sigma) > w(sigma + "0") + w(sigma + "1"):
            return False, sigma
    return True, None


def sorted_witness(report: WeightReport) -> list[BitString]:
    return sorted(report.witness, key=canonical_key)
