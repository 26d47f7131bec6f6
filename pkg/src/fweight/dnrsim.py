"""Finite model of diagonal propagation through a nonempty closed class.

``Q`` is a finite set of leaves standing for a Π⁰₁ class; an
:class:`OracleTable` gives the (possibly undefined) diagonal values
``{n}^Z(n)`` for each leaf ``Z``.  A run builds ``g`` one value at a time,
keeping the leaves that ``g`` still avoids nonempty, and ends with a leaf
relative to which ``g`` is diagonally noncomputable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from .core import BitString, FWeightError, InvariantError, PreconditionError, render_bits


@dataclass(frozen=True)
class FinitePiClass:
    depth: int
    leaves: tuple[BitString, ...]

    def __init__(self, leaves: Iterable[BitString], depth: int | None = None):
        leaves = tuple(sorted(set(leaves)))
        if not leaves:
            raise FWeightError("a class must have at least one leaf")
        lengths = {len(z) for z in leaves}
        if len(lengths) != 1:
            raise FWeightError("all leaves must have the same length")
        d = lengths.pop()
        if depth is not None and depth != d:
            raise FWeightError(f"leaves have length {d}, not {depth}")
        object.__setattr__(self, "leaves", leaves)
        object.__setattr__(self, "depth", d)


@dataclass(frozen=True)
class OracleTable:
    """Partial map ``(n, leaf) -> value`` for ``n < N``; missing means divergent."""

    N: int
    values: Mapping[tuple[int, BitString], int]

    def __call__(self, n: int, leaf: BitString) -> int | None:
        return self.values.get((n, leaf))


def restrict_class(Q: FinitePiClass, T: OracleTable, sigma: Sequence[int]) -> frozenset[BitString]:
    """Leaves ``Z`` with ``σ(n) ≠ {n}^Z(n)`` for all ``n < |σ|`` (divergence counts as ≠)."""
    if len(sigma) > T.N:
        raise PreconditionError(f"history of length {len(sigma)} exceeds N={T.N}")
    return frozenset(z for z in Q.leaves
                     if all(T(n, z) != v for n, v in enumerate(sigma)))


def derived_diagonal(Q: FinitePiClass, T: OracleTable, n: int, sigma: Sequence[int]) -> int | None:
    """The common value of ``{n}^Z(n)`` over ``Z ∈ Q_σ``, or ``None`` if there is none."""
    alive = restrict_class(Q, T, sigma)
    if not alive:
        raise PreconditionError("derived diagonal is unspecified on an empty class")
    vals = {T(n, z) for z in alive}
    if len(vals) == 1:
        return vals.pop()
    return None


def avoid(m: int | None) -> int:
    return 0 if m is None else m + 1


@dataclass(frozen=True)
class PropagationRun:
    g: tuple[int, ...]
    chain: tuple[frozenset[BitString], ...]
    witness: BitString


def run_propagation(Q: FinitePiClass, T: OracleTable) -> PropagationRun:
    """Build ``g`` by avoiding the derived diagonal, recording ``Q_{g↾n}``.

    Restriction is incremental: ``Q_{σv}`` is ``Q_σ`` minus the leaves whose
    value at index ``|σ|`` equals ``v``.
    """
    get = T.values.get
    alive = Q.leaves
    chain = [frozenset(alive)]
    g: list[int] = []
    for n in range(T.N):
        vals = {get((n, z)) for z in alive}
        v = avoid(vals.pop() if len(vals) == 1 else None)
        g.append(v)
        alive = tuple(z for z in alive if get((n, z)) != v)
        if not alive:
            raise InvariantError(f"class emptied at step {n} with g={g}")
        chain.append(frozenset(alive))
    return PropagationRun(tuple(g), tuple(chain), alive[0])


@dataclass(frozen=True)
class WitnessReport:
    nested: bool
    member_everywhere: bool
    avoids: bool

    @property
    def passed(self) -> bool:
        return self.nested and self.member_everywhere and self.avoids


def verify_witness(run: PropagationRun, Q: FinitePiClass, T: OracleTable) -> WitnessReport:
    chain, g, z = run.chain, run.g, run.witness
    nested = (len(chain) == len(g) + 1
              and chain[0] <= set(Q.leaves)
              and all(b <= a for a, b in zip(chain, chain[1:])))
    member = z in Q.leaves and all(z in c for c in chain)
    get = T.values.get
    avoids = len(g) == T.N and all(get((n, z)) != v for n, v in enumerate(g))
    return WitnessReport(nested, member, avoids)


# --------------------------------------------------------------------------
# exhaustive sweep

@dataclass(frozen=True)
class SweepReport:
    instances: int
    runs: int
    failures: tuple[tuple[FinitePiClass, OracleTable], ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _read_classes(Q: FinitePiClass, N: int, values: Sequence[int | None]
                  ) -> Iterator[tuple[dict, int, list[BitString]]]:
    """Tables over ``Q`` grouped by the entries a run can read.

    Once a leaf leaves the chain it never returns, so later entries at that
    leaf are unread; the representative leaves them undefined and the
    multiplicity counts the tables that differ only there.  The walk tracks
    the chain itself so it can tell which entries are read.
    """
    k = len(Q.leaves)
    width = len(values)
    columns = {r: list(product(values, repeat=r)) for r in range(k + 1)}

    def rec(n, entries, alive, mult):
        if n == N:
            yield dict(entries), mult, alive
            return
        step = mult * width ** (k - len(alive))
        for col in columns[len(alive)]:
            first = col[0]
            v = first + 1 if first is not None and col.count(first) == len(col) else 0
            new = entries + [((n, z), x) for z, x in zip(alive, col) if x is not None]
            yield from rec(n + 1, new, [z for z, x in zip(alive, col) if x != v], step)

    yield from rec(0, [], list(Q.leaves), 1)


def all_classes(depth: int) -> Iterator[FinitePiClass]:
    leaves = ["".join(b) for b in product("01", repeat=depth)]
    for mask in range(1, 2 ** len(leaves)):
        yield FinitePiClass([z for j, z in enumerate(leaves) if mask >> j & 1], depth)


def exhaustive_sweep(max_depth: int, max_N: int, values: Sequence[int] = (0, 1, 2)) -> SweepReport:
    """Run and verify every class of depth ``<= max_depth`` against every table with ``N <= max_N``.

    Tables range over ``values`` plus undefined at every (index, leaf) of the
    class.  ``instances`` counts the full product space; ``runs`` the
    propagation runs actually executed after grouping unread entries.
    """
    vals: tuple[int | None, ...] = tuple(values) + (None,)
    instances = runs = 0
    failures = []
    for d in range(max_depth + 1):
        for Q in all_classes(d):
            for N in range(max_N + 1):
                for table, mult, alive in _read_classes(Q, N, vals):
                    T = OracleTable(N, table)
                    runs += 1
                    instances += mult
                    try:
                        run = run_propagation(Q, T)
                        # the grouping is only sound if the run read what the walk assumed
                        ok = (run.chain[-1] == frozenset(alive)
                              and verify_witness(run, Q, T).passed)
                    except InvariantError:
                        ok = False
                    if not ok:
                        failures.append((Q, T))
    return SweepReport(instances, runs, tuple(failures))


def product_space_size(max_depth: int, max_N: int, n_values: int) -> int:
    """Number of (class, table) pairs the sweep must account for."""
    width = n_values + 1
    return sum(comb(2**d, k) * width ** (k * N)
               for d in range(max_depth + 1)
               for k in range(1, 2**d + 1)
               for N in range(max_N + 1))


def describe_leafset(leaves: Iterable[BitString]) -> str:
    return " ".join(render_bits(z) for z in sorted(leaves))
