"""Acceptance criteria 1-10, each at its stated scale and time budget.

Every test prints one ``acceptance <n> PASS|FAIL`` line (visible even under
output capture) with its elapsed time.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from fweight import randgen
from fweight.core import CylinderSet, all_strings, covers, is_prefix_free, minimal_elements, strings_of_length
from fweight.dnrsim import exhaustive_sweep, product_space_size
from fweight.estimators import CodeFamilyEstimator
from fweight.families import (
    TestFamily,
    deficiency_profile,
    family_request_mass,
    in_universal_test,
    requests_from_family,
    semimeasure_from_family,
    test_family_audit as audit,
    universal_test_generate,
)
from fweight.goodcover import cover_trace
from fweight.kraft import KraftError, kraft_chaitin_assign, kraft_sum
from fweight.core import WeightFunction
from fweight.levin import (
    levin_from_functional,
    levin_measure_test,
    levin_pushforward_bound,
    levin_truncate,
    levin_validate,
)
from fweight.transforms import (
    fg_bound_check,
    in_increasing_set,
    increasing_pushforward,
    log2_inflation,
    normalize_exponent,
    smallest_c,
)
from fweight.weights import dwt, pwt, vwt_bruteforce, vwt_convex, vwt_depth_bounded

F = Fraction


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(n, budget):
        t0 = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - t0
            within = elapsed < budget
            with capsys.disabled():
                verdict = "PASS" if ok and within else "FAIL"
                print(f"\nacceptance {n} {verdict} ({elapsed:.1f}s, budget {budget}s)")
        assert within, f"criterion {n} took {elapsed:.1f}s, budget {budget}s"
    return run


def _sets_upto(depth):
    nodes = list(all_strings(depth))
    for mask in range(2 ** len(nodes)):
        yield mask, CylinderSet(s for j, s in enumerate(nodes) if mask >> j & 1)


def _points(A, depth):
    return {x for x in strings_of_length(depth) if any(x.startswith(a) for a in A)}


def test_1_weight_chain(criterion):
    with criterion(1, 10):
        rng = random.Random(1)
        tables = [randgen.random_rational_table(rng, 5) for _ in range(200)]
        count = 0
        for mask, A in _sets_upto(3):
            w = tables[mask % 200]
            v = vwt_depth_bounded(A, w, 2).value
            d = dwt(minimal_elements(A), w)
            p = pwt(A, w).value
            assert v <= d <= p <= dwt(A, w), (A, w.name)
            if mask % 64 == 0:
                # same cover class, independent search
                assert vwt_bruteforce(A, w, 2).value == v
            count += 1
        assert count == 2**15


def test_2_convex_exactness(criterion):
    with criterion(2, 60):
        rng = random.Random(2)
        for _ in range(1000):
            depth = rng.randint(0, 4)
            A = randgen.random_set(rng, depth)
            w = randgen.random_convex_weight(rng, depth + 3)
            c = vwt_convex(A, w).value
            assert vwt_bruteforce(A, w, 2).value == c, A
            for k in range(4):
                assert vwt_depth_bounded(A, w, k).value == c, (A, k)


def test_3_good_cover_induction(criterion):
    with criterion(3, 120):
        rng = random.Random(3)
        for _ in range(500):
            depth = rng.randint(0, 5)
            w = randgen.random_convex_weight(rng, depth + 1)
            stream = randgen.random_stream(rng, depth, 12)
            for state in cover_trace(stream, w)[1:]:
                A, B = set(state.processed), state.accepted
                assert covers(A, B)
                p = pwt(B, w).value
                assert p == vwt_convex(A, w).value, (stream, B)
                if depth <= 3:
                    assert p == vwt_bruteforce(A, w, 1).value


def test_4_kraft_chaitin(criterion):
    with criterion(4, 10):
        rng = random.Random(4)
        for _ in range(1000):
            lengths = [rng.randint(0, 6) for _ in range(rng.randint(0, 10))]
            running, first_bad = F(0), None
            for j, n in enumerate(lengths):
                running += F(1, 2**n)
                if running > 1 and first_bad is None:
                    first_bad = j
            try:
                words = [c for _, c in kraft_chaitin_assign(list(enumerate(lengths)))]
            except KraftError as exc:
                assert exc.index == first_bad
            else:
                assert first_bad is None
                assert [len(c) for c in words] == lengths and is_prefix_free(words)
                assert len(set(words)) == len(words)
        # levels A_2i of direct weight exactly 2^-2i; the request mass is 1 - 2^-n
        u = WeightFunction.uniform(24)
        for n in range(1, 11):
            fam = {}
            for i in range(1, n + 1):
                extra = rng.randint(0, 2)
                stem = "".join(rng.choice("01") for _ in range(2 * i))
                fam[2 * i] = {stem + x for x in strings_of_length(extra)}
                assert dwt(fam[2 * i], u) == F(1, 4**i)
            fam = TestFamily(fam)
            mass = family_request_mass(fam, u)
            assert mass == sum(F(2**i, 4**i) for i in range(1, n + 1)) == 1 - F(1, 2**n)
            reqs, c = requests_from_family(fam, u)
            assert kraft_sum(r.length - c for r in reqs) == mass
            assert len(kraft_chaitin_assign(reqs)) == len(reqs)


def test_5_weight_inflation(criterion):
    with criterion(5, 10):
        rng = random.Random(5)
        for k in range(200):
            depth = rng.randint(0, 5)
            w = randgen.random_exponent_weight(rng, depth, 0, 8)
            A = increasing_pushforward(randgen.random_set(rng, depth), w)
            h = (lambda n: n) if k % 2 else log2_inflation(F(1, 2))
            c = smallest_c(h, {w.exponent(s) for s in A})
            r = fg_bound_check(A, w, h, c)
            direct = sum((F(1, 2 ** (w.exponent(s) + h(w.exponent(s)))) for s in A), F(0))
            assert r.dwt_g == direct
            assert r.dwt_g <= 2**c * pwt(A, w).value and r.passed


def test_6_levin_suite(criterion):
    with criterion(6, 60):
        rng = random.Random(6)
        u = WeightFunction.uniform(8)
        slack_checked = 0
        for _ in range(500):
            dY, dX = rng.randint(0, 6), rng.randint(0, 3)
            V = levin_from_functional(randgen.random_functional(rng, dY, dX))
            assert levin_validate(V).passed
            caps = randgen.random_caps(rng, dX)
            Vt = levin_truncate(V, caps)
            assert levin_validate(Vt).passed
            for s in all_strings(dX):
                assert covers(Vt[s], V[s]) and Vt.measure(s) <= caps[s]
                if all(V.measure(s[:n]) < caps[s[:n]] for n in range(len(s) + 1)):
                    assert Vt[s] == V[s]
                    slack_checked += 1
            for i in range(4):
                A = levin_measure_test(V, u, i)
                assert pwt(A, u).value <= F(1, 2**i)
                assert audit(TestFamily({i: A}), u, strong=True).passed
            c = rng.randint(0, 2)
            capped = levin_truncate(V, {s: 2**c * u(s) for s in all_strings(dX)})
            A = {s for s in all_strings(dX) if rng.random() < 0.4}
            r = levin_pushforward_bound(capped, A, u, c)
            assert r.measure == r.disjoint_sum and r.measure <= 2**c * pwt(A, u).value
        assert slack_checked > 0


def test_7_semimeasures(criterion):
    with criterion(7, 10):
        u = WeightFunction.uniform(8)
        # every single-level family on sets of depth <= 2, at every σ of depth <= 4
        for _, A in _sets_upto(2):
            fam = TestFamily({0: A})
            for sigma in all_strings(4):
                semimeasure_from_family(fam, u, sigma)
        rng = random.Random(7)
        audited = 0
        for _ in range(100):
            fam = TestFamily(randgen.random_audited_family(rng, u, 6, 4))
            m = {sigma: semimeasure_from_family(fam, u, sigma).levels for sigma in all_strings(4)}
            for sigma in all_strings(3):
                for i in fam:
                    assert m[sigma][i] >= m[sigma + "0"][i] + m[sigma + "1"][i]
            if audit(fam, u, strong=True).passed:
                assert semimeasure_from_family(fam, u, "").mixture <= 1
                audited += 1
        assert audited > 0


def test_8_dnr_sweep(criterion):
    with criterion(8, 120):
        rep = exhaustive_sweep(2, 3, (0, 1, 2))
        assert rep.instances == product_space_size(2, 3, 3)
        assert rep.passed, rep.failures[:3]


def test_9_estimator_and_tests(criterion):
    with criterion(9, 30):
        est = CodeFamilyEstimator(14)
        for L in range(15):
            assert est.admissible(L)
        w = WeightFunction.uniform(14)
        prev = None
        for i in range(12):
            g = universal_test_generate(est, w, i, 14)
            assert g.admissible and g.weight <= F(1, 2**i)
            assert prev is None or g.members <= prev
            prev = g.members
        zeros = "0" * 64
        periodic = CodeFamilyEstimator(64, codes=["periodic"])
        u64 = WeightFunction.uniform(64)
        for i in range(11):
            assert in_universal_test(periodic, u64, i, zeros)
        assert deficiency_profile(zeros, u64, periodic).max_level >= 10


def test_10_transform_posts(criterion):
    with criterion(10, 10):
        for length in range(6):
            for den in range(1, 13):
                for num in range(-10 * den, 10 * den + 1):
                    f = F(num, den)
                    f0 = min(max(f, 0), 2 * length)
                    n = normalize_exponent(f, length)
                    assert f0 < n < f0 + 2 and n == int(n)
        rng = random.Random(10)
        for _ in range(1000):
            depth = rng.randint(0, 5)
            w = randgen.random_exponent_weight(rng, depth)
            A = randgen.random_set(rng, depth)
            bar = increasing_pushforward(A, w)
            assert all(in_increasing_set(s, w) for s in bar)
            assert _points(A, depth) <= _points(bar, depth)
            assert dwt(bar, w) <= dwt(A, w)
            assert pwt(bar, w).value <= pwt(A, w).value
