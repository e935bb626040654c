import itertools
import math
from collections import Counter
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpf

from conftest import brute_signed
from growthlab.convexfn import CUBE, EXP, LN, SQUARE, logshift
from growthlab.errors import DegenerateSplit, TooSmall
from growthlab.rng import arithmetic_progression, geometric_progression, random_set
from growthlab.setcore import DEFAULT_BUDGET, make_set
from growthlab.squeeze import (
    CONCAVE,
    CONVEX,
    RefinedBucket,
    _two_fold_difference,
    build_Ed,
    ceil_log2,
    claim1_witnesses,
    claim2_witnesses,
    claim3_bound,
    decompose,
    doubling_level,
    dyadic_regularize,
    full_pipeline,
    make_algebra,
    pigeonhole_holds,
    refine_bucket,
    replay,
)

P = 160


def exp_vector(plus, minus):
    """Coefficients of ``sum e^x - sum e^y`` keyed by exponent (integer inputs)."""
    c = Counter()
    for x in plus:
        c[x] += 1
    for y in minus:
        c[y] -= 1
    return frozenset((k, v) for k, v in c.items() if v)


def ln_ratio(plus, minus):
    r = Fraction(1)
    for x in plus:
        r *= x
    for y in minus:
        r /= y
    return r


def real_value(f, plus, minus):
    with mpmath.workprec(P):
        g = mpmath.log if f is LN else mpmath.exp
        return mpmath.fsum(g(mpf(int(x))) for x in plus) - mpmath.fsum(g(mpf(int(y))) for y in minus)


# decompose


def test_decompose_example():
    D, buckets = decompose(make_set([1, 2, 3, 5, 7, 10]))
    assert D == (1, 2, 3)
    assert buckets == {1: (1, 2), 2: (3, 5), 3: (7,)}


def test_decompose_ap_and_gp():
    D, buckets = decompose(arithmetic_progression(10, 0, 1))
    assert D == (1,) and buckets[1] == tuple(range(9))
    D, buckets = decompose(make_set([1, 2, 4, 8, 16]))
    assert D == (1, 2, 4, 8) and all(len(b) == 1 for b in buckets.values())


def test_decompose_too_small():
    with pytest.raises(TooSmall):
        decompose(make_set([3]))


@given(st.lists(st.integers(-200, 200), min_size=2, max_size=30, unique=True))
def test_decompose_invariants(values):
    A = make_set(values)
    D, buckets = decompose(A)
    assert sum(len(b) for b in buckets.values()) == len(A) - 1
    elems = A.elements
    for d, bucket in buckets.items():
        assert d > 0
        for a in bucket:
            assert elems[elems.index(a) + 1] - a == d


def test_decompose_real_mode_merges_equal_gaps():
    with mpmath.workprec(128):
        vals = [mpf(k) / 3 for k in range(6)]
    D, buckets = decompose(make_set(vals, prec=128))
    assert len(D) == 1 and len(buckets[D[0]]) == 5


# dyadic regularization


def test_dyadic_sizes_221():
    K, Dp, trimmed = dyadic_regularize({1: (0, 5), 2: (1, 8), 3: (9,)})
    assert K == 2 and Dp == (1, 2)
    assert trimmed == {1: (0, 5), 2: (1, 8)}


def test_dyadic_ap_and_gp():
    _, buckets = decompose(arithmetic_progression(10, 0, 1))
    K, Dp, trimmed = dyadic_regularize(buckets)
    assert K == 8 and Dp == (1,) and trimmed[1] == tuple(range(8))
    D, buckets = decompose(geometric_progression(10, 1, 2))
    K, Dp, _ = dyadic_regularize(buckets)
    assert K == 1 and Dp == D


@given(st.lists(st.integers(0, 400), min_size=8, max_size=60, unique=True))
def test_dyadic_pigeonhole(values):
    A = make_set(values)
    _, buckets = decompose(A)
    K, Dp, trimmed = dyadic_regularize(buckets)
    n = len(A)
    assert len(Dp) * K * 4 * ceil_log2(n) >= n - 1
    # the selected level beats every other dyadic level
    for j in range(0, n.bit_length()):
        cls = [d for d, b in buckets.items() if 2**j <= len(b) < 2 ** (j + 1)]
        assert len(cls) * 2**j <= len(Dp) * K
    assert all(len(t) == K for t in trimmed.values())


# claim1


def test_claim1_example():
    A = make_set([1, 2, 3, 5, 7, 10])
    _, buckets = decompose(A)
    K, Dp, trimmed = dyadic_regularize(buckets)
    assert K == 2 and Dp == (1, 2)
    W, count, reps = claim1_witnesses(A, Dp, trimmed)
    assert W.elements == (4, 6) and count == 2
    for w, (a, u, v) in reps:
        assert a + u - v == w


def test_claim1_ap_degenerate():
    A = arithmetic_progression(12, 0, 1)
    _, buckets = decompose(A)
    K, Dp, trimmed = dyadic_regularize(buckets)
    with pytest.raises(DegenerateSplit):
        claim1_witnesses(A, Dp, trimmed)


def test_claim1_interleaved_aps():
    values = sorted({4 * k for k in range(9)} | {4 * k + 1 for k in range(8)})
    A = make_set(values)
    D, buckets = decompose(A)
    assert D == (1, 3)
    K, Dp, trimmed = dyadic_regularize(buckets)
    W, count, _ = claim1_witnesses(A, Dp, trimmed)
    triple = brute_signed(values, 2, 1)
    elems = A.elements
    assert count == len(W) > 0
    for w in W:
        assert w in triple and w not in A
        # strictly inside a gap of A
        assert any(a < w < b for a, b in zip(elems, elems[1:]))


@given(st.lists(st.integers(0, 60), min_size=8, max_size=14, unique=True))
def test_claim1_membership(values):
    A = make_set(values)
    _, buckets = decompose(A)
    K, Dp, trimmed = dyadic_regularize(buckets)
    if len(Dp) < 2:
        return
    W, count, reps = claim1_witnesses(A, Dp, trimmed)
    triple = brute_signed(values, 2, 1)
    assert count == len(W)
    assert all(w in triple for w in W)
    assert all(a in A and u in A and v in A and a + u - v == w for w, (a, u, v) in reps)


# bucket refinement


def test_refine_exp():
    A = make_set(range(9))
    alg = make_algebra(A, EXP)
    rb = refine_bucket(alg, 1, (0, 1, 2, 3))
    assert rb.half == (0, 1) and rb.quarter == (0,)
    with mpmath.workprec(P):
        assert abs(alg.to_mpf(rb.t_d, P) - (mpmath.e**2 - mpmath.e)) < mpf(2) ** -120


def test_refine_ln_reversed():
    A = make_set(range(1, 10))
    alg = make_algebra(A, LN)
    rb = refine_bucket(alg, 1, (1, 2, 3, 4))
    assert rb.ordered == (4, 3, 2, 1)
    assert rb.half == (4, 3) and rb.t_d == Fraction(4, 3)
    assert rb.quarter == (4,)
    assert rb.upper == (2, 1)


@pytest.mark.parametrize("f", [EXP, LN, CUBE, SQUARE, logshift(1)])
def test_refine_quarter_in_half_interval(f):
    A = make_set(range(1, 30))
    alg = make_algebra(A, f)
    bucket = tuple(range(1, 17))
    rb = refine_bucket(alg, 1, bucket)
    assert len(rb.half) == 8 and len(rb.quarter) == 4
    half_t = [alg.cmp(alg.add(alg.fd(1, a), alg.fd(1, a)), rb.t_d) <= 0 for a in rb.quarter]
    assert all(half_t) or not any(half_t)
    assert all(alg.cmp(alg.fd(1, a), rb.t_d) <= 0 for a in rb.half)
    assert all(alg.cmp(alg.fd(1, a), rb.t_d) > 0 for a in rb.upper)


def test_refine_k4_gives_single_quarter():
    alg = make_algebra(make_set(range(10)), CUBE)
    assert len(refine_bucket(alg, 1, (0, 1, 2, 3)).quarter) == 1


# doubling level and E_d


@pytest.mark.parametrize("q", [1, 2, 3, 4, 6])
def test_two_fold_difference_of_ap_image(q):
    # the square gap function is linear, so the image of an AP is an AP
    alg = make_algebra(make_set(range(20)), SQUARE)
    tokens = [(alg.fd(1, a), a) for a in range(q)]
    assert len(_two_fold_difference(alg, tokens, DEFAULT_BUDGET)) == 4 * q - 3


def _bucket(quarter):
    return RefinedBucket(None, tuple(quarter), tuple(quarter), None, tuple(quarter), (), True)


def test_doubling_level_ap_image():
    alg = make_algebra(make_set(range(20)), SQUARE)
    L, Dpp, s, _ = doubling_level(alg, {1: _bucket((0, 1, 2, 3))})
    assert s[1] == 13 and L == 2 and Dpp == (1,)
    L, _, s, _ = doubling_level(alg, {1: _bucket((5,))})
    assert s[1] == 1 and L == 1


@pytest.mark.parametrize("quarter", [(2, 3), (2, 3, 5), (2, 3, 5, 7), (4, 9, 11, 13)])
def test_doubling_level_generic_log_image(quarter):
    # log gap images (a+1)/a; the brute-force count works on the ratios directly
    alg = make_algebra(make_set(range(1, 20)), LN)
    _, _, s, diff = doubling_level(alg, {1: _bucket(quarter)})
    img = [Fraction(a + 1, a) for a in quarter]
    brute = {x1 * x2 / (x3 * x4) for x1, x2, x3, x4 in itertools.product(img, repeat=4)}
    assert s[1] == len(brute)
    assert {tok for tok, _ in diff[1]} == brute


def test_build_Ed_log_tokens():
    alg = make_algebra(make_set(range(1, 5)), LN)
    diff = _two_fold_difference(alg, [(Fraction(2), 1), (Fraction(3, 2), 2)], DEFAULT_BUDGET)
    E = build_Ed(alg, diff)
    assert sorted(tok for tok, _ in E) == [1, Fraction(4, 3), Fraction(16, 9)]
    single = _two_fold_difference(alg, [(Fraction(2), 1)], DEFAULT_BUDGET)
    assert [tok for tok, _ in build_Ed(alg, single)] == [1]


def test_build_Ed_ap_image():
    alg = make_algebra(make_set(range(20)), SQUARE)
    tokens = [(alg.fd(1, a), a) for a in (0, 1, 2)]
    E = build_Ed(alg, _two_fold_difference(alg, tokens, DEFAULT_BUDGET))
    # step h = 2 for the square gap function with d = 1
    assert [tok for tok, _ in E] == [0, 2, 4, 6, 8]


# claim2


def _pipeline_state(A, f):
    alg = make_algebra(A, f)
    _, buckets = decompose(A)
    K, Dp, trimmed = dyadic_regularize(buckets)
    refined = {d: refine_bucket(alg, d, trimmed[d]) for d in Dp}
    L, Dpp, s, diff = doubling_level(alg, refined, DEFAULT_BUDGET)
    return alg, K, refined, Dpp, diff


def test_claim2_exp_k8_count():
    A = arithmetic_progression(9, 0, 1)
    alg, K, refined, Dpp, diff = _pipeline_state(A, EXP)
    assert K == 8 and Dpp == (1,)
    rb = refined[1]
    assert len(rb.quarter) == 2
    E = build_Ed(alg, diff[1], rb.t_d)
    assert len(E) == 3
    W = claim2_witnesses(alg, A, 1, rb, E)
    assert len(W) == 3 * 4
    vectors = {exp_vector(w.plus, w.minus) for w in W}
    assert len(vectors) == len(W)


def test_claim2_exp_bruteforce_membership():
    A = arithmetic_progression(9, 0, 1)
    alg, _, refined, _, diff = _pipeline_state(A, EXP)
    rb = refined[1]
    W = claim2_witnesses(alg, A, 1, rb, build_Ed(alg, diff[1], rb.t_d))
    elems = list(A.elements)
    five = {exp_vector(c, ()) for c in itertools.combinations_with_replacement(elems, 5)}
    four = [Counter(c) for c in itertools.combinations_with_replacement(elems, 4)]
    for w in W:
        target = Counter(dict(exp_vector(w.plus, w.minus)))
        # w + (four terms) must be a sum of five terms
        assert any(_plus(target, m) in five for m in four)
        # and the witness sits in the gap after its base element
        v = real_value(EXP, w.plus, w.minus)
        with mpmath.workprec(P):
            assert mpmath.exp(w.base) <= v < mpmath.exp(w.base + 1)


def _plus(target, m):
    c = Counter(target)
    for k, v in m.items():
        c[k] += v
    return frozenset((k, v) for k, v in c.items() if v)


def test_claim2_degenerate_E_is_zero():
    A = arithmetic_progression(8, 1, 1)
    alg, K, refined, Dpp, diff = _pipeline_state(A, LN)
    assert K == 4
    rb = refined[Dpp[0]]
    E = build_Ed(alg, diff[Dpp[0]], rb.t_d)
    assert [tok for tok, _ in E] == [1]
    W = claim2_witnesses(alg, A, Dpp[0], rb, E)
    assert len(W) == len(Dpp) * K // 2
    assert {w.value for w in W} == set(rb.upper)


@pytest.mark.parametrize("seed", range(4))
def test_claim2_ln_random_replay(seed):
    A = random_set(16, 1, 60, seed)
    report = full_pipeline(A, LN)
    alg = report.algebra
    values = set()
    elems = A.elements
    for w in report.claim2:
        assert len(w.plus) == 5 and len(w.minus) == 4
        assert all(x in A for x in w.plus + w.minus)
        assert ln_ratio(w.plus, w.minus) == w.value == replay(alg, w)
        nxt = elems[elems.index(w.base) + 1]
        assert w.base <= w.value < nxt
        values.add(w.value)
    assert len(values) == report.claim2_count


def test_claim2_count_formula():
    A = random_set(24, 1, 200, 5)
    report = full_pipeline(A, LN)
    st_ = report.state
    expect = sum(len(st_.Ed[d]) * len(st_.refined[d].upper) for d in st_.Ddoubleprime)
    assert report.claim2_count == expect


# claim3


def test_claim3_ln_keeps_everything():
    A = make_set(range(1, 30))
    alg = make_algebra(A, LN)
    triple, size, cert = claim3_bound(LN, alg, 1, (4, 5, 6, 7))
    assert cert.zero_count == 0
    assert triple.elements == (4, 5, 6, 7)
    assert size == 15 * 3 + 1


def test_claim3_singleton():
    A = make_set(range(1, 30))
    _, size, _ = claim3_bound(LN, make_algebra(A, LN), 1, (5,))
    assert size == 1


@pytest.mark.parametrize("q", [2, 5, 8])
def test_claim3_ap_identity(q):
    A = make_set(range(1, 40))
    _, size, _ = claim3_bound(EXP, make_algebra(A, EXP), 1, tuple(range(1, q + 1)))
    assert size == 15 * (q - 1) + 1


def test_claim3_logshift_restricts():
    f = logshift(1)
    A = make_set([Fraction(k, 4) for k in range(1, 40)])
    alg = make_algebra(A, f)
    quarter = tuple(Fraction(k, 4) for k in range(1, 17))
    triple, size, cert = claim3_bound(f, alg, Fraction(1, 4), quarter)
    assert set(triple.elements) <= set(quarter)
    m = cert.zero_count
    assert len(triple) >= math.ceil((len(quarter) - m) / (m + 1))
    assert size >= len(triple)


# full pipeline


def test_pipeline_too_small():
    with pytest.raises(TooSmall):
        full_pipeline(make_set(range(1, 8)), LN)


def test_pipeline_gp_ln():
    report = full_pipeline(geometric_progression(16, 1, 2), LN)
    assert report.K == 1 and report.n == 16
    assert "small_K_degenerate_mode" in report.degenerate_flags
    assert report.orientation == CONCAVE
    assert report.m == 0
    assert report.claim1_count > 0
    assert all(pigeonhole_holds(report))


def test_pipeline_ap_ln():
    report = full_pipeline(arithmetic_progression(16, 1, 1), LN)
    assert "claim1_degenerate_split" in report.degenerate_flags
    assert report.K == 8 and report.Dprime_size == 1 and report.claim1_count == 0
    assert report.claim3_size == 15 * (len(report.state.A_d_tripleprime[1]) - 1) + 1


def test_pipeline_exp_orientation_and_json():
    report = full_pipeline(arithmetic_progression(16, 0, 1), EXP)
    assert report.orientation == CONVEX
    assert full_pipeline(arithmetic_progression(16, 0, 1), EXP).to_json() == report.to_json()
    d = report.to_dict()
    assert d["log_base"] == 2 and set(d["ratios"]) == {"claim1", "claim2", "claim3", "product", "max"}


def test_pipeline_real_mode():
    A = make_set([Fraction(k * k, 7) + 1 for k in range(1, 13)]).to_real(128)
    report = full_pipeline(A, logshift(1))
    alg = report.algebra
    assert not alg.exact
    for w in report.claim2:
        assert alg.cmp(replay(alg, w), w.value) == 0


def test_pipeline_lower_bounds_hold():
    A = random_set(10, 1, 40, 11)
    report = full_pipeline(A, LN)
    values = list(A.elements)
    eight = brute_signed(values, 2, 1)  # A+A-A is inside 8A-7A
    assert report.n + report.claim1_count <= len(set(values) | eight)
    assert report.lower_bound_8A7A >= report.n


@given(st.lists(st.integers(1, 300), min_size=8, max_size=24, unique=True), st.sampled_from([LN, EXP]))
def test_pipeline_properties(values, f):
    report = full_pipeline(make_set(values), f)
    alg = report.algebra
    assert all(pigeonhole_holds(report))
    assert report.claim2_count == len(alg.distinct([(w.value, None) for w in report.claim2]))
    assert report.claim3_size >= 1
    for w in report.claim2[:40]:
        assert replay(alg, w) == w.value
