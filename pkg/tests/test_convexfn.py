from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mpf

from growthlab.convexfn import (
    CUBE,
    EXP,
    LN,
    SQUARE,
    Interval,
    Kind,
    certify,
    certify_k_convex,
    deriv,
    evaluate,
    gap_deriv,
    gap_eval,
    gap_inverse,
    gap_inverse_deriv,
    gap_range,
    inverse_derivatives,
    logshift,
    parse_function,
)
from growthlab.errors import (
    CertificationFailure,
    DomainViolation,
    ParseError,
    PreconditionError,
    RangeViolation,
    Unsupported,
)

P = 128
positive = st.fractions(min_value=Fraction(1, 50), max_value=20, max_denominator=100)
shifts = st.fractions(min_value=Fraction(1, 10), max_value=5, max_denominator=20)


def naive_gap(f, d, x, prec=400):
    with mpmath.workprec(prec):
        xr, dr = mpf(x.numerator) / x.denominator, mpf(d.numerator) / d.denominator
        return evaluate(f, xr + dr, prec) - evaluate(f, xr, prec)


def rel(a, b):
    with mpmath.workprec(P):
        return abs(a - b) / max(abs(b), mpf(2) ** -P)


def test_parse_function():
    assert parse_function("ln") == LN
    assert parse_function("log") == LN
    assert parse_function("logshift:λ=1") == logshift(1)
    assert parse_function("logshift:lambda=3/2").lam == Fraction(3, 2)
    assert parse_function("exp").id == "exp"
    for bad in ("sin", "logshift", "logshift:λ=-1", "ln:λ=2"):
        with pytest.raises((ParseError, PreconditionError)):
            parse_function(bad)


def test_interval_contains():
    I = Interval.open(0, 1)
    assert I.contains(Fraction(1, 2)) and not I.contains(0) and not I.contains(1)
    assert Interval.closed(0, 1).contains(1)
    assert Interval(Fraction(0), None).contains(10**9)
    with mpmath.workprec(200):
        assert not I.contains(mpf(1) + mpf(2) ** -150)


def test_domain_violation():
    with pytest.raises(DomainViolation):
        evaluate(LN, -1)
    with pytest.raises(DomainViolation):
        gap_eval(CUBE, 1, Fraction(-1))


@pytest.mark.parametrize("f", [LN, EXP, CUBE, SQUARE, logshift(1), logshift(Fraction(1, 3))])
@given(x=positive, d=shifts)
def test_gap_eval_matches_naive(f, x, d):
    assert rel(gap_eval(f, d, x, P), naive_gap(f, d, x)) < mpf(2) ** -120


@pytest.mark.parametrize("f", [LN, EXP, CUBE, logshift(2)])
def test_derivatives_match_finite_differences(f):
    h = mpf(2) ** -40
    with mpmath.workprec(P):
        for x in (mpf("0.3"), mpf(1), mpf("2.5")):
            for j in range(4):
                fd = (deriv(f, j, x + h, P) - deriv(f, j, x - h, P)) / (2 * h)
                assert rel(fd, deriv(f, j + 1, x, P)) < mpf(2) ** -60


@pytest.mark.parametrize("f", [LN, EXP, CUBE, SQUARE, logshift(1)])
@given(x=positive, d=shifts)
def test_gap_monotone(f, x, d):
    a, b = gap_eval(f, d, x, P), gap_eval(f, d, x + Fraction(1, 7), P)
    assert (a > b) if f.kind is Kind.LOG else (a < b)


@pytest.mark.parametrize("f", [LN, EXP, CUBE, SQUARE, logshift(1), logshift(5)])
@given(x=positive, d=shifts)
def test_gap_inverse_round_trip(f, x, d):
    y = gap_eval(f, d, x, P + 32)
    back = gap_inverse(f, d, y, P)
    with mpmath.workprec(P):
        assert rel(back, mpf(x.numerator) / x.denominator) < mpf(2) ** -100


def test_range_violation():
    with pytest.raises(RangeViolation):
        gap_inverse(logshift(1), 1, 2)
    with pytest.raises(RangeViolation):
        gap_inverse(LN, 1, -1)


def test_gap_range():
    assert gap_range(logshift(1), 1).hi == 1
    J = gap_range(LN, 1)
    assert J.lo == 0 and J.hi is None
    assert gap_range(CUBE, 1).lo == 1


def test_log_inverse_derivative_anchor():
    with mpmath.workprec(P):
        assert gap_inverse_deriv(LN, 1, 1, mpmath.log(2), P) == -2


@pytest.mark.parametrize("f", [LN, logshift(1), logshift(Fraction(7, 2))])
@pytest.mark.parametrize("j", [1, 2, 3])
def test_closed_inverse_derivs_vs_fd(f, j):
    d = Fraction(1)
    J = gap_range(f, d, P)
    with mpmath.workprec(P):
        hi = J.hi if J.hi is not None else 4
        for t in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)):
            y = mpf(t.numerator) / t.denominator * (mpf(hi.numerator) / hi.denominator if isinstance(hi, Fraction) else hi)
            h = mpf(2) ** -40
            if j == 1:
                lo_v, hi_v = gap_inverse(f, d, y - h, P), gap_inverse(f, d, y + h, P)
            else:
                lo_v = gap_inverse_deriv(f, d, j - 1, y - h, P)
                hi_v = gap_inverse_deriv(f, d, j - 1, y + h, P)
            assert rel((hi_v - lo_v) / (2 * h), gap_inverse_deriv(f, d, j, y, P)) < mpf(2) ** -32


def test_closed_form_only_for_log_kinds():
    with pytest.raises(Unsupported):
        gap_inverse_deriv(EXP, 1, 1, 1)


@pytest.mark.parametrize("f", [EXP, CUBE])
def test_implicit_inverse_derivs_vs_fd(f):
    d = Fraction(1, 2)
    h = mpf(2) ** -40
    with mpmath.workprec(P):
        for x in (Fraction(1, 3), Fraction(2)):
            y = gap_eval(f, d, x, P)
            g = inverse_derivatives(f, d, y, P)
            up = inverse_derivatives(f, d, y + h, P)
            dn = inverse_derivatives(f, d, y - h, P)
            fd0 = (gap_inverse(f, d, y + h, P) - gap_inverse(f, d, y - h, P)) / (2 * h)
            assert rel(fd0, g[0]) < mpf(2) ** -32
            for j in (1, 2):
                assert rel((up[j - 1] - dn[j - 1]) / (2 * h), g[j]) < mpf(2) ** -32


def test_implicit_matches_closed_for_logshift():
    f = logshift(2)
    with mpmath.workprec(P):
        y = mpf("0.4")
        closed = inverse_derivatives(f, 1, y, P)
        x = gap_inverse(f, 1, y, P + 32)
        u1, u2, u3 = (gap_deriv(f, 1, j, x, P + 32) for j in (1, 2, 3))
        implicit = (1 / u1, -u2 / u1**3, (3 * u2**2 - u1 * u3) / u1**5)
        for a, b in zip(closed, implicit):
            assert rel(a, b) < mpf(2) ** -90


def test_certify_square_fails():
    with pytest.raises(CertificationFailure):
        certify(SQUARE, 1, Interval.open(2, 10), 5)


def test_certify_ln_closed_form():
    c = certify(LN, Fraction(1, 2), Interval.open(Fraction(1, 100), 3), 5)
    assert c.zero_count == 0 and c.method == "closed-form"


def test_certify_logshift_isolates_zero():
    c = certify(logshift(1), 1, Interval.open(Fraction(1, 10), Fraction(9, 10)), 5, grid=32)
    assert 1 <= c.zero_count <= 5
    assert any(abs(z - mpf("0.5")) < mpf(2) ** -60 for z in c.zeros)
    assert len(c.subintervals) == c.zero_count + 1


@pytest.mark.parametrize(
    "f,target",
    [
        (logshift(1), Interval.open(Fraction(1, 20), Fraction(19, 20))),
        (logshift(3), Interval.open(Fraction(1, 10), Fraction(19, 20))),
        (EXP, Interval.open(Fraction(1, 2), 50)),
        (CUBE, Interval.open(2, 40)),
    ],
)
def test_certificate_soundness(f, target):
    """Derivative signs are constant on every certified piece."""
    d = 1
    c = certify(f, d, target, 5, grid=32)
    with mpmath.workprec(P):
        for piece in c.subintervals:
            lo, hi = (mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else v for v in (piece.lo, piece.hi))
            signs = set()
            for i in range(1, 40):
                y = lo + (hi - lo) * i / 40
                signs.add(tuple(v > 0 for v in inverse_derivatives(f, d, y, P)))
            assert len(signs) == 1


def test_certify_too_many_zeros():
    with pytest.raises(CertificationFailure):
        certify(logshift(1), 1, Interval.open(Fraction(1, 20), Fraction(19, 20)), 0, grid=16)


def test_certify_k_convex():
    assert certify_k_convex(EXP, Interval(None, None), 3).zero_count == 0
    assert certify_k_convex(LN, Interval(Fraction(0), None), 3).zero_count == 0
    assert certify_k_convex(CUBE, Interval(Fraction(0), None), 2).zero_count == 0
    with pytest.raises(CertificationFailure):
        certify_k_convex(CUBE, Interval.open(-1, 1), 1)
    with pytest.raises(CertificationFailure):
        certify_k_convex(logshift(1), Interval.open(-1, 1), 2)
    with pytest.raises(DomainViolation):
        certify_k_convex(LN, Interval.open(-1, 1), 1)
