"""The nine acceptance criteria, one test each; every test records a pass/fail line."""
import itertools
import math
import subprocess
import sys
import time
from collections import Counter
from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from conftest import ACCEPTANCE_LINES
from growthlab.convexfn import EXP, LN, SQUARE, Interval, certify, gap_inverse, gap_inverse_deriv, gap_range, logshift
from growthlab.rng import arithmetic_progression, geometric_progression, make_rng, random_set
from growthlab.setcore import iterated_sumset, signed_combination
from growthlab.squeeze import ceil_log2, full_pipeline
from growthlab.verify import (
    PROVEN,
    check_main,
    check_sum_product,
    curated_corpus,
    exhaustive_oracle,
    reduction_chain,
)

P = 128


def record(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


# ---------------------------------------------------------------------------
# shared corpus of 200 seeded random sets
# ---------------------------------------------------------------------------


def witness_corpus():
    rng = make_rng(2024, 0xACC2)
    sizes = rng.integers(8, 33, size=200)
    return [(random_set(int(n), 1, 10**4, 1000 + i), LN if i % 2 == 0 else EXP) for i, n in enumerate(sizes)]


@pytest.fixture(scope="module")
def pipeline_runs():
    t = time.perf_counter()
    runs = [(A, f, full_pipeline(A, f)) for A, f in witness_corpus()]
    return runs, time.perf_counter() - t


def _a_plus_a_minus_a(values):
    two = {x + y for x, y in itertools.combinations_with_replacement(values, 2)}
    return {s - z for s in two for z in values}


def _ln_member(w: Fraction, five: set, four: list) -> bool:
    # w in A^(5)/A^(4)  iff  w*y in A^(5) for some y in A^(4)
    p, q = w.numerator, w.denominator
    return any(y % q == 0 and (y // q) * p in five for y in four)


def _exp_member(token, q, A) -> bool:
    # e^(a) for distinct rationals a are linearly independent over Q, so
    # sum c_a e^a lies in 5f(A)-4f(A) iff sum c = 1 and the positive part is at most 5
    coeffs = Counter()
    for n, c in token:
        coeffs[Fraction(n, q)] += c
    if any(a not in A for a, c in coeffs.items() if c):
        return False
    pos = sum(c for c in coeffs.values() if c > 0)
    return sum(coeffs.values()) == 1 and pos <= 5


def _replay_128(plus, minus, g):
    """Value and absolute error scale of ``sum g(plus) - sum g(minus)`` at 128 bits."""
    with mpmath.workprec(P):
        terms = [g(mpf(int(x))) for x in plus] + [-g(mpf(int(y))) for y in minus]
        return mpmath.fsum(terms), mpmath.fsum(abs(t) for t in terms)


def _exp_sign(coeffs: Counter) -> int:
    """Sign of ``sum c_a e^a`` (integer exponents), by evaluation at rising precision."""
    coeffs = {a: c for a, c in coeffs.items() if c}
    if not coeffs:
        return 0
    prec = P
    while True:
        with mpmath.workprec(prec):
            terms = [c * mpmath.exp(mpf(int(a))) for a, c in coeffs.items()]
            v = mpmath.fsum(terms)
            if abs(v) > mpmath.fsum(abs(t) for t in terms) * mpf(2) ** (8 - prec):
                return 1 if v > 0 else -1
        prec *= 2


def _check_run(A, f, report):
    """Violations of the witness soundness conditions for one pipeline run."""
    bad = []
    values = [int(a) for a in A]
    elems = A.elements
    # claim1
    triple = _a_plus_a_minus_a(values)
    w1 = [w for w, _ in report.claim1]
    if len(set(w1)) != len(w1) or report.claim1_count != len(w1):
        bad.append("claim1 count")
    bad += [f"claim1 {w}" for w in w1 if w not in triple]
    # claim2: counts
    st = report.state
    blocks = sum(len(st.Ed[d]) * len(st.refined[d].upper) for d in st.Ddoubleprime)
    if report.claim2_count != blocks or len(report.claim2) != blocks:
        bad.append("claim2 block sum")
    if len(report.algebra.distinct([(w.value, None) for w in report.claim2])) != blocks:
        bad.append("claim2 distinct")
    # claim2: membership, representation and inclusion
    g = mpmath.log if f is LN else mpmath.exp
    if f is LN:
        five = {math.prod(c) for c in itertools.combinations_with_replacement(values, 5)}
        four = sorted({math.prod(c) for c in itertools.combinations_with_replacement(values, 4)})
    for w in report.claim2:
        nxt = elems[elems.index(w.base) + 1]
        if f is LN:
            r = Fraction(w.value)
            member = _ln_member(r, five, four)
            exact = r == math.prod(map(Fraction, w.plus)) / math.prod(map(Fraction, w.minus))
            inside = w.base <= r < nxt
        else:
            q = report.algebra.q
            member = _exp_member(w.value, q, A)
            token = Counter({Fraction(n, q): c for n, c in w.value})
            rep = Counter(w.plus)
            rep.subtract(Counter(w.minus))
            exact = +token == +rep and -token == -rep
            low, high = Counter(token), Counter(token)
            low[w.base] -= 1
            high[nxt] -= 1
            inside = _exp_sign(low) >= 0 and _exp_sign(high) < 0
        if not member:
            bad.append(f"claim2 membership {w}")
        if not exact:
            bad.append(f"claim2 representation {w}")
        if not inside:
            bad.append(f"inclusion {w}")
        v, scale = _replay_128(w.plus, w.minus, g)
        with mpmath.workprec(P):
            if abs(v - report.algebra.to_mpf(w.value, P)) > scale * mpf(2) ** -120:
                bad.append(f"claim2 replay {w}")
    return bad


def test_criterion_1_exhaustive_oracle():
    t = time.perf_counter()
    rep = exhaustive_oracle(6, 3, 3)
    dt = time.perf_counter() - t
    record(1, not rep.violations and dt < 60, f"{rep.checks} checks, {len(rep.violations)} violations, {dt:.1f}s")


def test_criterion_2_witness_soundness(pipeline_runs):
    runs, pipeline_time = pipeline_runs
    t = time.perf_counter()
    bad, n1, n2 = [], 0, 0
    for A, f, report in runs:
        n1 += report.claim1_count
        n2 += report.claim2_count
        bad += _check_run(A, f, report)
    dt = pipeline_time + time.perf_counter() - t
    record(
        2,
        not bad and dt < 600,
        f"{len(runs)} sets, {n1} claim1 + {n2} claim2 witnesses, {len(bad)} violations, {dt:.1f}s",
    )


def test_criterion_3_pigeonhole(pipeline_runs):
    runs, _ = pipeline_runs
    bad = 0
    for A, _, r in runs:
        n = r.n
        first = r.Dprime_size * r.K * 4 * ceil_log2(n) >= n - 1
        second = r.Ddoubleprime_size * ceil_log2(n**4) >= r.Dprime_size
        bad += not (first and second)
    record(3, bad == 0, f"{len(runs)} runs, {bad} failures")


def _fd_check(f, d, samples=100):
    """Worst relative error of central differences against the closed forms, orders 1..3."""
    J = gap_range(f, d, P)
    worst = mpf(0)
    h = mpf(2) ** -40
    with mpmath.workprec(P):
        hi = mpf(J.hi.numerator) / J.hi.denominator if J.hi is not None else mpf(6)
        for i in range(samples):
            y = hi * (mpf(i) + mpf(1) / 3) / (samples + 1)
            y += mpf(2) ** -20 if J.hi is None else 0
            for j in (1, 2, 3):
                if j == 1:
                    a, b = gap_inverse(f, d, y - h, P), gap_inverse(f, d, y + h, P)
                else:
                    a, b = gap_inverse_deriv(f, d, j - 1, y - h, P), gap_inverse_deriv(f, d, j - 1, y + h, P)
                exact = gap_inverse_deriv(f, d, j, y, P)
                worst = max(worst, abs((b - a) / (2 * h) - exact) / abs(exact))
    return worst


def test_criterion_4_closed_form_derivatives():
    worst_ln = _fd_check(LN, Fraction(1))
    worst_ls = max(_fd_check(logshift(1), Fraction(1)), _fd_check(logshift(Fraction(5, 2)), Fraction(1, 2)))
    with mpmath.workprec(P):
        anchor = gap_inverse_deriv(LN, 1, 1, mpmath.log(2), P)
        tol = mpf(2) ** -32
    ok = worst_ln <= tol and worst_ls <= tol and anchor == -2
    record(
        4,
        ok,
        f"max rel err ln {mpmath.nstr(worst_ln, 3)}, logshift {mpmath.nstr(worst_ls, 3)}, anchor {mpmath.nstr(anchor, 5)}",
    )


def test_criterion_5_structured_sets():
    ap = {r.name: r for r in check_sum_product(arithmetic_progression(8, 1, 1))}
    gp = {r.name: r for r in check_sum_product(geometric_progression(8, 1, 2))}
    s16, p16 = ap["sum_side"], gp["product_side"]
    with mpmath.workprec(P):
        target = mpf(8) ** (mpf(3) / 2 + mpf(1) / 162)
        ratios = [s16.ratio, p16.ratio]
        ok = (
            s16.lhs == 113
            and p16.lhs == 113
            and all(r.holds for r in (s16, p16, ap["sum_product_max"], gp["sum_product_max"]))
            and all(abs(x - 113 / target) < mpf(2) ** -100 and abs(x - mpf("4.93")) <= mpf("0.01") for x in ratios)
        )
    record(5, ok, f"|16A|={s16.lhs}, |A^(16)|={p16.lhs}, target {mpmath.nstr(target, 4)}, ratio {mpmath.nstr(ratios[0], 6)}")


def test_criterion_6_reduction_chain():
    total, full, bad = 0, 0, 0
    for _, A in curated_corpus():
        for f in (LN, EXP):
            for r in reduction_chain(A, f):
                total += 1
                full += not r.parameters["reduced"]
                bad += not r.holds
    record(6, total > 0 and bad == 0, f"{total} reductions ({full} at the 8-fold family), {bad} violations")


def test_criterion_7_certification():
    try:
        certify(SQUARE, 1, Interval.open(2, 10), 5)
        square_fails = False
    except Exception as exc:  # noqa: BLE001
        square_fails = type(exc).__name__ == "CertificationFailure"
    m_ln = certify(LN, 1, Interval.open(Fraction(1, 10), 5), 5).zero_count
    m_ls = certify(logshift(1), 1, Interval.open(Fraction(1, 20), Fraction(19, 20)), 5, grid=32).zero_count
    record(7, square_fails and m_ln == 0 and m_ls <= 5, f"square fails={square_fails}, ln m={m_ln}, logshift m={m_ls}")


def test_criterion_8_performance():
    A = arithmetic_progression(10**4, 1, 1)
    t = time.perf_counter()
    size = len(iterated_sumset(A, 8))
    t1 = time.perf_counter() - t
    B = random_set(8, 1, 10**4, 8)
    t = time.perf_counter()
    size2 = len(signed_combination(B, 5, 4))
    t2 = time.perf_counter() - t
    ok = size == 8 * (10**4 - 1) + 1 and t1 < 1 and t2 < 5
    record(8, ok, f"|8A|={size} in {t1:.3f}s, |5B-4B|={size2} in {t2:.3f}s")


COMMANDS = [
    ["compute", "--set", "random:n=12,universe=1..1000,seed=5", "--op", "sum:k=4", "--op", "ratio:k=2,l=2"],
    ["pipeline", "--set", "random:n=20,universe=1..10000,seed=3", "--fn", "exp"],
    ["pipeline", "--set", "gp:n=16,start=1,ratio=2", "--fn", "logshift:lambda=1"],
    ["verify", "--check", "main", "--set", "random:n=10,universe=1..500,seed=9", "--fn", "ln"],
    ["verify", "--suite", "exhaustive", "--universe", "4", "--max-size", "2"],
]


def test_criterion_9_determinism(tmp_path):
    def run(argv):
        return subprocess.run([sys.executable, "-m", "growthlab", *argv], capture_output=True, check=True).stdout

    same = [run(cmd) == run(cmd) for cmd in COMMANDS]
    cfg = tmp_path / "sc.toml"
    cfg.write_text("[search]\nn = 5\nrounds = 4\nmoves_per_round = 6\nseed = 7\n[universe]\nhi = 40\n")
    outputs = []
    for _ in range(2):
        run(["search", "--config", str(cfg)])
        outputs.append(((tmp_path / "sc.trace.csv").read_bytes(), (tmp_path / "sc.best.txt").read_bytes()))
    same.append(outputs[0] == outputs[1])
    record(9, all(same), f"{sum(same)}/{len(same)} commands byte-identical")


def test_check_main_proven_parts_on_corpus():
    # companion to criterion 6: the same triangle checks inside check_main
    bad = [r for _, A in curated_corpus()[:5] for r in check_main(A, LN) if r.name in PROVEN and not r.holds]
    assert bad == []
