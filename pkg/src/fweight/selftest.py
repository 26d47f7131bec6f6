"""Bundled invariant suites, runnable from the CLI as ``fweight selftest``.

Each suite takes a seeded RNG and a scale and returns the number of cases
it checked; a failing case raises ``AssertionError`` naming it.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import randgen
from .core import (
    CylinderSet,
    FWeightError,
    WeightFunction,
    all_strings,
    covers,
    cylinder_measure,
    is_prefix_free,
    minimal_elements,
    parse_rational,
    render_rational,
    strings_of_length,
)
from .dnrsim import FinitePiClass, OracleTable, exhaustive_sweep, product_space_size, run_propagation, verify_witness
from .estimators import CodeFamilyEstimator
from .families import TestFamily, requests_from_family, semimeasure_from_family, universal_test_generate
from .goodcover import build_cover, cover_trace, verify_good_cover
from .kraft import KraftError, kraft_chaitin_assign, kraft_sum
from .levin import levin_from_functional, levin_measure_test, levin_truncate, levin_validate
from .transforms import fg_bound_check, increasing_pushforward, in_increasing_set, normalize_exponent
from .weights import dwt, pwt, vwt_bruteforce, vwt_convex, vwt_depth_bounded

SCALES = ("small", "full")


def _n(scale: str, small: int, full: int) -> int:
    return small if scale == "small" else full


# --------------------------------------------------------------------------
# brute-force references shared by the suites

def _points(A, depth):
    """Strings of length ``depth`` lying in ``⟦A⟧``."""
    return {x for x in strings_of_length(depth) if any(x.startswith(a) for a in A)}


def suite_core(rng: random.Random, scale: str) -> int:
    d = _n(scale, 2, 3)
    nodes = list(all_strings(d))
    count = 0
    for mask in range(2 ** len(nodes)):
        A = CylinderSet(s for j, s in enumerate(nodes) if mask >> j & 1)
        M = minimal_elements(A)
        ref = {a for a in A if not any(b != a and a.startswith(b) for b in A)}
        assert M == ref, f"minimal elements of {A}"
        assert is_prefix_free(M) and covers(A, M) and covers(M, A), f"cover round trip of {A}"
        assert cylinder_measure(A) == Fraction(len(_points(A, d)), 2**d), f"measure of {A}"
        count += 1
    for _ in range(_n(scale, 200, 2000)):
        A, B = randgen.random_set(rng, 4), randgen.random_set(rng, 4)
        assert covers(A, B) == (_points(A, 4) <= _points(B, 4)), f"covers({A}, {B})"
        if covers(A, B):
            assert cylinder_measure(A) <= cylinder_measure(B)
        q = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        assert parse_rational(render_rational(q)) == q
        count += 1
    return count


def suite_weights(rng: random.Random, scale: str) -> int:
    count = 0
    for _ in range(_n(scale, 150, 1000)):
        depth = rng.randint(0, 3 if scale == "small" else 4)
        A = randgen.random_set(rng, depth)
        w = randgen.random_rational_table(rng, depth + 2)
        rep = pwt(A, w)
        v = vwt_bruteforce(A, w, 2).value
        assert v <= dwt(minimal_elements(A), w) <= rep.value <= dwt(A, w), f"weight chain on {A}"
        assert is_prefix_free(rep.witness) and rep.witness <= A and dwt(rep.witness, w) == rep.value
        count += 1
    for _ in range(_n(scale, 100, 1000)):
        depth = rng.randint(0, 3 if scale == "small" else 4)
        A = randgen.random_set(rng, depth)
        w = randgen.random_convex_weight(rng, depth + 3)
        c = vwt_convex(A, w)
        assert covers(A, c.witness) and dwt(c.witness, w) == c.value
        assert c.value == vwt_bruteforce(A, w, 2).value, f"convex vs brute on {A}"
        for k in range(4):
            assert vwt_depth_bounded(A, w, k).value == c.value, f"bounded k={k} on {A}"
        count += 1
    return count


def suite_transforms(rng: random.Random, scale: str) -> int:
    count = 0
    lim = _n(scale, 3, 10)
    for length in range(_n(scale, 3, 6)):
        for num in range(-lim * 4, lim * 4 + 1):
            f = Fraction(num, 4)
            f0 = min(max(f, 0), 2 * length)
            n = normalize_exponent(f, length)
            assert f0 < n < f0 + 2, f"normalize {f} at length {length}"
            count += 1
    for _ in range(_n(scale, 150, 1000)):
        depth = rng.randint(0, 4)
        w = randgen.random_exponent_weight(rng, depth)
        A = randgen.random_set(rng, depth)
        bar = increasing_pushforward(A, w)
        assert all(in_increasing_set(s, w) for s in bar) and covers(A, bar)
        assert dwt(bar, w) <= dwt(A, w) and pwt(bar, w).value <= pwt(A, w).value
        h = lambda n: n  # noqa: E731
        rep = fg_bound_check(bar, w, h, 1)
        direct = sum((Fraction(1, 2 ** (w.exponent(s) + h(w.exponent(s)))) for s in bar), Fraction(0))
        assert rep.dwt_g == direct and rep.passed, f"fg bound on {bar}"
        count += 1
    return count


# golden traces: (stream, weight, accepted set after each step)
GOLDEN_COVERS = (
    (["00", "01"], "uniform", [set(), {"00"}, {"00", "0"}]),
    (["0", "1"], "uniform", [set(), {"0"}, {"0", ""}]),
    (["1", "0"], "uniform", [set(), {"1"}, {"1", ""}]),
    (["0"], "uniform", [set(), {"0"}]),
    (["010", "011", "00", "1"], "uniform",
     [set(), {"010"}, {"010", "01"}, {"010", "01", "0"}, {"010", "01", "0", ""}]),
)


def suite_goodcover(rng: random.Random, scale: str) -> int:
    count = 0
    for stream, _, states in GOLDEN_COVERS:
        got = [set(s.accepted) for s in cover_trace(stream, WeightFunction.uniform(8))]
        assert got == states, f"cover trace for {stream}: {got}"
        count += 1
    for _ in range(_n(scale, 60, 500)):
        depth = rng.randint(1, 5)
        w = randgen.random_convex_weight(rng, depth + 1)
        stream = randgen.random_stream(rng, depth)
        for st in cover_trace(stream, w)[1:]:
            rep = verify_good_cover(st.processed, st.accepted, w)
            assert rep.passed, f"good cover after {list(st.processed)}"
            if depth <= 3:
                assert verify_good_cover(st.processed, st.accepted, w, brute_bound=1).passed
        B1, B2 = build_cover(stream, w), build_cover(list(reversed(stream)), w)
        assert pwt(B1, w).value == pwt(B2, w).value, "cover value depends on stream order"
        count += 1
    return count


def suite_codes(rng: random.Random, scale: str) -> int:
    count = 0
    for _ in range(_n(scale, 200, 1000)):
        lengths = randgen.random_request_lengths(rng)
        running, first_bad = Fraction(0), None
        for j, n in enumerate(lengths):
            running += Fraction(1, 2**n)
            if running > 1 and first_bad is None:
                first_bad = j
        try:
            out = kraft_chaitin_assign(list(enumerate(lengths)))
        except KraftError as exc:
            assert exc.index == first_bad, f"Kraft failure index on {lengths}"
        else:
            assert first_bad is None, f"served an over-full list {lengths}"
            words = [c for _, c in out]
            assert [len(c) for c in words] == lengths and is_prefix_free(words)
            assert len(set(words)) == len(words)
        count += 1
    u = WeightFunction.uniform(8)
    for _ in range(_n(scale, 30, 200)):
        fam = TestFamily(randgen.random_audited_family(rng, u, 6, 6))
        reqs, c = requests_from_family(fam, u)
        assert c <= 0 and kraft_sum(r.length for r in reqs) <= 1
        kraft_chaitin_assign(reqs)
        for sigma in all_strings(_n(scale, 2, 4)):
            semimeasure_from_family(fam, u, sigma)
        count += 1
    L = _n(scale, 8, 12)
    est = CodeFamilyEstimator(L)
    assert est.admissible(L)
    prev = None
    for i in range(6):
        S = universal_test_generate(est, WeightFunction.uniform(L), i, L).members
        assert prev is None or S <= prev, f"S_{i} not inside S_{i - 1}"
        prev = S
        count += 1
    return count


def suite_levin(rng: random.Random, scale: str) -> int:
    count = 0
    u = WeightFunction.uniform(8)
    for _ in range(_n(scale, 50, 500)):
        dY, dX = rng.randint(0, 5), rng.randint(0, 3)
        V = levin_from_functional(randgen.random_functional(rng, dY, dX))
        caps = randgen.random_caps(rng, dX)
        Vt = levin_truncate(V, caps)
        assert levin_validate(Vt).passed
        for s in all_strings(dX):
            assert covers(Vt[s], V[s]) and Vt.measure(s) <= caps[s]
            if all(V.measure(s[:n]) < caps[s[:n]] for n in range(len(s) + 1)):
                assert Vt[s] == V[s], f"slack branch {s} was truncated"
        for i in range(3):
            levin_measure_test(V, u, i)
        count += 1
    return count


def suite_dnrsim(rng: random.Random, scale: str) -> int:
    count = 0
    for _ in range(_n(scale, 300, 1000)):
        d, N = rng.randint(0, 3), rng.randint(0, 4)
        leaves = [z for z in strings_of_length(d) if rng.random() < 0.6] or ["0" * d]
        Q = FinitePiClass(leaves, d)
        T = OracleTable(N, {(n, z): rng.randint(0, 2) for n in range(N) for z in leaves
                            if rng.random() < 0.8})
        assert verify_witness(run_propagation(Q, T), Q, T).passed
        count += 1
    if scale == "full":
        rep = exhaustive_sweep(2, 3)
        assert rep.passed and rep.instances == product_space_size(2, 3, 3)
        count += rep.instances
    else:
        rep = exhaustive_sweep(1, 3)
        assert rep.passed and rep.instances == product_space_size(1, 3, 3)
        count += rep.instances
    return count


SUITES: dict[str, Callable[[random.Random, str], int]] = {
    "core": suite_core,
    "dnrsim": suite_dnrsim,
    "goodcover": suite_goodcover,
    "codes": suite_codes,
    "levin": suite_levin,
    "transforms": suite_transforms,
    "weights": suite_weights,
}


@dataclass(frozen=True)
class SuiteResult:
    name: str
    cases: int
    passed: bool
    message: str
    seconds: float


def run_selftest(scale: str = "small", seed: int = 0, only: list[str] | None = None
                 ) -> list[SuiteResult]:
    if scale not in SCALES:
        raise ValueError(f"scale must be one of {SCALES}")
    out = []
    for name in sorted(only or SUITES):
        rng = random.Random(f"{seed}:{name}")
        t0 = time.perf_counter()
        try:
            cases, ok, msg = SUITES[name](rng, scale), True, ""
        except (AssertionError, FWeightError) as exc:
            cases, ok, msg = 0, False, f"{type(exc).__name__}: {exc}"
        out.append(SuiteResult(name, cases, ok, msg, time.perf_counter() - t0))
    return out
