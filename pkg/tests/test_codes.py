import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from strategies import bit_sets, bits
from fweight.core import PreconditionError, WeightFunction, all_strings, is_prefix_free
from fweight.estimators import CodeFamilyEstimator, TableEstimator, header_code, runs, smallest_period
from fweight.families import (
    TestFamily,
    deficiency_profile,
    family_request_mass,
    requests_from_family,
    semimeasure_from_family,
    test_family_audit as audit,
    universal_test_generate,
)
from fweight.kraft import CodeRequest, KraftError, free_after, kraft_chaitin_assign, kraft_sum
from fweight.randgen import random_audited_family

F = Fraction
U = WeightFunction.uniform(16)


# --------------------------------------------------------------------------
# Kraft-Chaitin

@pytest.mark.parametrize("lengths, words", [
    ([1, 2, 2], ["0", "10", "11"]),
    ([3], ["000"]),
    ([0], [""]),
    ([2, 1, 2], ["00", "1", "01"]),
    ([], []),
])
def test_kraft_examples(lengths, words):
    assert [c for _, c in kraft_chaitin_assign(list(enumerate(lengths)))] == words


def test_kraft_overfull_reports_index_and_sum():
    with pytest.raises(KraftError) as exc:
        kraft_chaitin_assign([("a", 1), ("b", 1), ("c", 1)])
    assert exc.value.index == 2 and exc.value.running_sum == F(3, 2)


def test_negative_length_rejected():
    with pytest.raises(Exception):
        CodeRequest("x", -1)


@settings(max_examples=300)
@given(st.lists(st.integers(0, 7), max_size=12))
def test_kraft_succeeds_exactly_when_running_sum_fits(lengths):
    running = [sum(F(1, 2**n) for n in lengths[:k + 1]) for k in range(len(lengths))]
    first_bad = next((k for k, s in enumerate(running) if s > 1), None)
    if first_bad is None:
        words = [c for _, c in kraft_chaitin_assign(list(enumerate(lengths)))]
        assert [len(c) for c in words] == lengths
        assert is_prefix_free(words) and len(set(words)) == len(words)
    else:
        with pytest.raises(KraftError) as exc:
            kraft_chaitin_assign(list(enumerate(lengths)))
        assert exc.value.index == first_bad


def test_free_after_partitions_the_space():
    words = ["0", "10"]
    free = free_after(words)
    assert free == ["11"]
    assert kraft_sum(len(s) for s in words + free) == 1


# --------------------------------------------------------------------------
# built-in estimator

def _read_header(code, pos):
    k = 0
    while code[pos] == "1":
        k, pos = k + 1, pos + 1
    pos += 1
    return (int(code[pos:pos + k], 2) if k else 0), pos + k


def decode(code):
    """Parse one tagged codeword; returns the string and the bits consumed."""
    tag, pos = code[:2], 2
    if tag == "00":
        n, pos = _read_header(code, pos)
        return code[pos:pos + n], pos + n
    if tag == "01":
        r, pos = _read_header(code, pos)
        if r == 0:
            return "", pos
        bit, pos, out = code[pos], pos + 1, ""
        for _ in range(r):
            m, pos = _read_header(code, pos)
            out += bit * (m + 1)
            bit = "1" if bit == "0" else "0"
        return out, pos
    assert tag == "10"
    q1, pos = _read_header(code, pos)
    period, pos = code[pos:pos + q1 + 1], pos + q1 + 1
    n, pos = _read_header(code, pos)
    return (period * n)[:n], pos


def test_header_code_examples():
    assert [header_code(n) for n in range(4)] == ["0", "101", "11010", "11011"]


def test_runs_and_period():
    assert runs("0011101") == [2, 3, 1, 1]
    assert runs("") == []
    assert [smallest_period(t) for t in ["0", "0101", "010", "0110"]] == [1, 2, 2, 3]


def test_codewords_decode_and_are_prefix_free():
    est = CodeFamilyEstimator(10)
    words = []
    for tau in all_strings(10):
        code = est.encode(tau)
        assert len(code) == est(tau)
        assert decode(code) == (tau, len(code))
        words.append(code)
    words.sort()
    assert not any(b.startswith(a) for a, b in zip(words, words[1:]))


def test_estimator_audit_up_to_14():
    est = CodeFamilyEstimator(14)
    assert est.admissible(14)
    assert 0 < est.kraft_sum(14) <= 1


def test_zeros_use_the_periodic_code():
    est = CodeFamilyEstimator(64)
    assert est.explain("0" * 64) == (19, "periodic")
    assert est.explain("01" * 8)[1] == "periodic"


def test_literal_only_estimator_bounds():
    est = CodeFamilyEstimator(8, codes=["literal"])
    for tau in all_strings(8):
        assert est(tau) >= len(tau) + 3


# --------------------------------------------------------------------------
# universal tests and deficiency

def test_universal_test_table_example():
    est = TableEstimator({"00": 1}, L=3, default=lambda t: len(t) + 3)
    g = universal_test_generate(est, U, 0, 3)
    # Kraft sum 1/2 + 1/2 - 1/32
    assert est.kraft_sum() == F(31, 32)
    assert g.members == {"00"} and g.admissible and g.weight == F(1, 4)
    assert universal_test_generate(est, U, 5, 3).members == set()


def test_universal_test_needs_exponent_weight():
    est = CodeFamilyEstimator(4)
    with pytest.raises(PreconditionError):
        universal_test_generate(est, WeightFunction.from_table({"": F(1, 3)}, 0), 0, 0)
    with pytest.raises(PreconditionError):
        universal_test_generate(est, U, 0, 5)


def test_universal_tests_are_nested_and_light():
    est = CodeFamilyEstimator(12)
    w = WeightFunction.uniform(12)
    prev = None
    for i in range(8):
        g = universal_test_generate(est, w, i, 12)
        assert g.admissible and g.weight == oracles.dwt(g.members, w) <= F(1, 2**i)
        assert all(est(t) < len(t) - i for t in g.members)
        assert prev is None or g.members <= prev
        prev = g.members


def test_universal_test_rejects_inadmissible_overweight():
    est = TableEstimator({t: 0 for t in all_strings(2)}, L=2)
    g = universal_test_generate(est, U, 0, 2)
    assert not g.admissible and g.weight > 1


def test_deficiency_examples():
    est = TableEstimator({"0" * n: 2 for n in range(5)}, L=4)
    p = deficiency_profile("0000", U, est)
    assert p.deficiencies == (-1, 0, 1, 2) and p.max_level == 1
    assert deficiency_profile("", U, est).deficiencies == ()
    lit = CodeFamilyEstimator(8, codes=["literal"])
    q = deficiency_profile("01101001", U, lit)
    assert all(d <= 0 for d in q.deficiencies) and q.max_level is None


def test_all_zeros_enters_every_low_level():
    est = CodeFamilyEstimator(64, codes=["periodic"])
    w = WeightFunction.uniform(64)
    p = deficiency_profile("0" * 64, w, est)
    assert p.max_level >= 10


# --------------------------------------------------------------------------
# audits, requests, semimeasures

def test_audit_examples():
    fam = TestFamily({i: {"0" * (2 * i)} for i in range(1, 6)})
    r = audit(fam, U, strong=False)
    assert r.passed and r.bc_sum == sum(F(1, 4**i) for i in range(1, 6)) == F(341, 1024)
    bad = TestFamily({i: {""} for i in range(1, 4)})
    assert audit(bad, U, strong=True).first_failure == 1
    three = TestFamily({0: {"", "0", "1"}})
    assert not audit(three, U, strong=False).passed
    assert audit(three, U, strong=True).passed


def test_request_mass_identity():
    for n in range(1, 8):
        fam = TestFamily({2 * i: {"0" * (2 * i)} for i in range(1, n + 1)})
        assert family_request_mass(fam, U) == 1 - F(1, 2**n)
        reqs, c = requests_from_family(fam, U)
        assert kraft_sum(r.length - c for r in reqs) == 1 - F(1, 2**n)
        # a single request of length 1 still fits after shortening to length 0
        assert c == (-1 if n == 1 else 0)
        kraft_chaitin_assign(reqs)


def test_requests_from_random_audited_families():
    rng = random.Random(3)
    for _ in range(50):
        fam = TestFamily(random_audited_family(rng, U, 8, 6))
        assert audit(fam, U, strong=False).passed
        reqs, c = requests_from_family(fam, U)
        assert c <= 0 and kraft_sum(r.length for r in reqs) <= 1
        assert len(kraft_chaitin_assign(reqs)) == len(reqs)


def test_semimeasure_example():
    fam = TestFamily({0: {"00", "01"}})
    vals = {s: semimeasure_from_family(fam, U, s).levels[0] for s in ["", "0", "00", "1"]}
    assert vals == {"": F(1, 2), "0": F(1, 2), "00": F(1, 4), "1": 0}
    assert semimeasure_from_family(TestFamily({}), U, "0").mixture == 0


def _m(A, w, sigma):
    return oracles.pwt([t for t in A if t.startswith(sigma)], w)


@settings(max_examples=60, deadline=None)
@given(st.lists(bit_sets(4, max_size=5), min_size=1, max_size=4))
def test_semimeasure_superadditive_everywhere(levels):
    fam = TestFamily(levels)
    for sigma in all_strings(3):
        v = semimeasure_from_family(fam, U, sigma)
        for i in fam:
            assert v.levels[i] == _m(fam[i], U, sigma)
            assert v.levels[i] >= _m(fam[i], U, sigma + "0") + _m(fam[i], U, sigma + "1")


def test_mixture_mass_bounded_for_audited_families():
    rng = random.Random(11)
    for _ in range(60):
        fam = TestFamily(random_audited_family(rng, U, 8, 5))
        if audit(fam, U, strong=True).passed:
            assert semimeasure_from_family(fam, U, "").mixture <= 1


def test_mixture_overflow_is_reported():
    # pwt(A_2) = 1 > 1/4, so the mixture bound is not asserted; mass 2 is allowed
    fam = TestFamily({2: {""}})
    assert semimeasure_from_family(fam, U, "").mixture == 2


@given(bits(4))
def test_restriction_of_empty_family_is_zero(sigma):
    assert semimeasure_from_family(TestFamily({1: set()}), U, sigma).levels == {1: 0}

