"""Convex functions, their gap functions and gap inverses, and certificates.

For a registered ``f`` and a shift ``d > 0`` the gap function is
``f_d(x) = f(x + d) - f(x)`` with range ``J``; ``f_d`` is strictly monotone,
so the gap inverse ``g = f_d^{-1}: J -> domain`` exists. The squeezing
pipeline needs the zeros of ``g', g'', g'''``, which :func:`certify` counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import mpmath
from mpmath import mpf

from growthlab.errors import (
    CertificationFailure,
    DomainViolation,
    NoConvergence,
    ParseError,
    PreconditionError,
    RangeViolation,
    Unsupported,
)
from growthlab.setcore import Scalar, default_precision, format_scalar, mpf_to_fraction, to_real, to_scalar


class Kind(str, Enum):
    LOG = "ln"
    EXP = "exp"
    CUBE = "cube"
    LOGSHIFT = "logshift"
    SQUARE = "square"


@dataclass(frozen=True)
class Interval:
    """An interval with optional infinite ends (``None``)."""

    lo: Scalar | None = None
    hi: Scalar | None = None
    lo_open: bool = True
    hi_open: bool = True

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and not _lt(self.lo, self.hi):
            raise PreconditionError(f"empty interval: lo={self.lo} must be below hi={self.hi}")

    @classmethod
    def open(cls, lo, hi) -> Interval:
        return cls(_opt(lo), _opt(hi), True, True)

    @classmethod
    def closed(cls, lo, hi) -> Interval:
        return cls(_opt(lo), _opt(hi), False, False)

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    def contains(self, x) -> bool:
        x = to_scalar(x)
        if self.lo is not None:
            if _lt(x, self.lo) or (self.lo_open and _eq(x, self.lo)):
                return False
        if self.hi is not None:
            if _lt(self.hi, x) or (self.hi_open and _eq(x, self.hi)):
                return False
        return True

    def covers(self, other: Interval) -> bool:
        """``other`` is a subset of this interval."""
        if self.lo is not None:
            if other.lo is None or _lt(other.lo, self.lo):
                return False
            if _eq(other.lo, self.lo) and self.lo_open and not other.lo_open:
                return False
        if self.hi is not None:
            if other.hi is None or _lt(self.hi, other.hi):
                return False
            if _eq(other.hi, self.hi) and self.hi_open and not other.hi_open:
                return False
        return True

    def __str__(self):
        left = "(" if self.lo_open or self.lo is None else "["
        right = ")" if self.hi_open or self.hi is None else "]"
        lo = "-inf" if self.lo is None else format_scalar(self.lo)
        hi = "+inf" if self.hi is None else format_scalar(self.hi)
        return f"{left}{lo}, {hi}{right}"


def _opt(x):
    return None if x is None else to_scalar(x)


def _pair(a, b):
    # mixed comparisons go through the exact binary rational of the mpf
    if isinstance(a, mpf) and isinstance(b, Fraction):
        return mpf_to_fraction(a), b
    if isinstance(b, mpf) and isinstance(a, Fraction):
        return a, mpf_to_fraction(b)
    return a, b


def _lt(a, b) -> bool:
    a, b = _pair(a, b)
    return a < b


def _eq(a, b) -> bool:
    a, b = _pair(a, b)
    return a == b


_DEFAULT_LO = {
    Kind.LOG: Fraction(0),
    Kind.EXP: None,
    Kind.CUBE: Fraction(0),
    Kind.LOGSHIFT: None,
    Kind.SQUARE: Fraction(0),
}


@dataclass(frozen=True)
class ConvexFunctionSpec:
    """A registered strictly convex or concave function on ``(lo, +inf)``."""

    kind: Kind
    lam: Fraction | None = None
    domain: Interval = field(default=None)

    def __post_init__(self):
        if self.kind is Kind.LOGSHIFT:
            if self.lam is None or self.lam <= 0:
                raise PreconditionError("logshift needs a strictly positive lambda")
        elif self.lam is not None:
            raise PreconditionError(f"{self.kind.value} takes no lambda")
        default_lo = _DEFAULT_LO[self.kind]
        if self.domain is None:
            object.__setattr__(self, "domain", Interval(default_lo, None))
        else:
            if self.domain.hi is not None:
                raise PreconditionError("domains are half-lines (lo, +inf)")
            if default_lo is not None and (self.domain.lo is None or _lt(self.domain.lo, default_lo)):
                raise PreconditionError(f"{self.kind.value} is not convex/concave below {default_lo}")

    @property
    def id(self) -> str:
        if self.kind is Kind.LOGSHIFT:
            return f"logshift:λ={format_scalar(self.lam)}"
        return self.kind.value

    @property
    def convex(self) -> bool:
        return self.kind is not Kind.LOG

    @property
    def increasing(self) -> bool:
        return True

    def __str__(self):
        return self.id


def parse_function(text: str) -> ConvexFunctionSpec:
    """``ln``, ``exp``, ``cube``, ``square`` or ``logshift:λ=<rational>``."""
    text = text.strip()
    name, _, arg = text.partition(":")
    name = name.lower()
    if name in ("ln", "log"):
        kind = Kind.LOG
    elif name in ("exp", "cube", "square", "logshift"):
        kind = Kind(name)
    else:
        raise ParseError(f"unknown function {text!r}")
    if kind is not Kind.LOGSHIFT:
        if arg:
            raise ParseError(f"{name} takes no parameters")
        return ConvexFunctionSpec(kind)
    key, _, value = arg.partition("=")
    if key.strip() not in ("λ", "lambda", "lam") or not value:
        raise ParseError("logshift needs a parameter, e.g. logshift:λ=1")
    try:
        lam = Fraction(value.strip())
    except ValueError as exc:
        raise ParseError(f"bad lambda {value!r}") from exc
    if lam <= 0:
        raise ParseError("lambda must be strictly positive")
    return ConvexFunctionSpec(kind, lam)


LN = ConvexFunctionSpec(Kind.LOG)
EXP = ConvexFunctionSpec(Kind.EXP)
CUBE = ConvexFunctionSpec(Kind.CUBE)
SQUARE = ConvexFunctionSpec(Kind.SQUARE)


def logshift(lam=1) -> ConvexFunctionSpec:
    return ConvexFunctionSpec(Kind.LOGSHIFT, Fraction(lam))


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _prec(prec):
    return prec or default_precision()


def _check_domain(f: ConvexFunctionSpec, x):
    if not f.domain.contains(x):
        raise DomainViolation(f"{format_scalar(x) if not isinstance(x, mpf) else mpmath.nstr(x, 15)} "
                              f"is outside the domain {f.domain} of {f.id}")


def deriv(f: ConvexFunctionSpec, j: int, x, prec: int | None = None) -> mpf:
    """``f^(j)(x)`` for ``0 <= j <= 4`` from closed forms."""
    if not 0 <= j <= 4:
        raise Unsupported("derivatives are registered up to order 4")
    x = to_scalar(x)
    _check_domain(f, x)
    p = _prec(prec)
    with mpmath.workprec(p + 16):
        xr = to_real(x, p + 16)
        k = f.kind
        if k is Kind.LOG:
            r = mpmath.log(xr) if j == 0 else (-1) ** (j - 1) * math.factorial(j - 1) / xr**j
        elif k is Kind.EXP:
            r = mpmath.exp(xr)
        elif k is Kind.CUBE:
            r = (xr**3, 3 * xr**2, 6 * xr, mpf(6), mpf(0))[j]
        elif k is Kind.SQUARE:
            r = (xr**2, 2 * xr, mpf(2), mpf(0), mpf(0))[j]
        else:
            lam = to_real(f.lam, p + 16)
            u = mpmath.exp(xr)
            s = u + lam
            r = (
                mpmath.log(s),
                u / s,
                lam * u / s**2,
                lam * u * (lam - u) / s**3,
                lam * u * (lam**2 - 4 * lam * u + u**2) / s**4,
            )[j]
    with mpmath.workprec(p):
        return +r


def evaluate(f: ConvexFunctionSpec, x, prec: int | None = None) -> mpf:
    return deriv(f, 0, x, prec)


def _check_shift(d):
    d = to_scalar(d)
    if not d > 0:
        raise PreconditionError("the shift d must be strictly positive")
    return d


def gap_eval(f: ConvexFunctionSpec, d, x, prec: int | None = None) -> mpf:
    """``f_d(x) = f(x + d) - f(x)``, in cancellation-free form."""
    d = _check_shift(d)
    x = to_scalar(x)
    _check_domain(f, x)
    p = _prec(prec)
    with mpmath.workprec(p + 32):
        xr, dr = to_real(x, p + 32), to_real(d, p + 32)
        k = f.kind
        if k is Kind.LOG:
            r = mpmath.log1p(dr / xr)
        elif k is Kind.EXP:
            r = mpmath.exp(xr) * mpmath.expm1(dr)
        elif k is Kind.CUBE:
            r = dr * (3 * xr**2 + 3 * xr * dr + dr**2)
        elif k is Kind.SQUARE:
            r = dr * (2 * xr + dr)
        else:
            lam = to_real(f.lam, p + 32)
            u = mpmath.exp(xr)
            r = mpmath.log1p(u * mpmath.expm1(dr) / (u + lam))
    with mpmath.workprec(p):
        return +r


def gap_deriv(f: ConvexFunctionSpec, d, j: int, x, prec: int | None = None) -> mpf:
    """``f_d^(j)(x) = f^(j)(x + d) - f^(j)(x)``."""
    if j == 0:
        return gap_eval(f, d, x, prec)
    p = _prec(prec)
    x = to_scalar(x)
    d = _check_shift(d)
    with mpmath.workprec(p + 32):
        xd = to_real(x, p + 32) + to_real(d, p + 32)
        r = deriv(f, j, xd, p + 32) - deriv(f, j, x, p + 32)
    with mpmath.workprec(p):
        return +r


def gap_range(f: ConvexFunctionSpec, d, prec: int | None = None) -> Interval:
    """The open range ``J`` of ``f_d`` over the domain of ``f``."""
    d = _check_shift(d)
    lo = f.domain.lo
    k = f.kind
    at_lo = None
    if lo is not None and not (k is Kind.LOG and lo == 0):
        at_lo = gap_eval(f, d, lo, prec) if f.domain.contains(lo) else _gap_at_boundary(f, d, lo, prec)
    if k is Kind.LOG:
        return Interval(Fraction(0), at_lo)
    if k is Kind.EXP:
        return Interval(at_lo if at_lo is not None else Fraction(0), None)
    if k in (Kind.CUBE, Kind.SQUARE):
        return Interval(at_lo, None)
    return Interval(at_lo if at_lo is not None else Fraction(0), d)


def _gap_at_boundary(f, d, lo, prec):
    # f is continuous at the (open) lower end for every registered kind.
    p = _prec(prec)
    k = f.kind
    with mpmath.workprec(p + 32):
        lr, dr = to_real(lo, p + 32), to_real(d, p + 32)
        if k is Kind.EXP:
            r = mpmath.exp(lr) * mpmath.expm1(dr)
        elif k is Kind.CUBE:
            r = dr * (3 * lr**2 + 3 * lr * dr + dr**2)
        elif k is Kind.SQUARE:
            r = dr * (2 * lr + dr)
        elif k is Kind.LOG:
            r = mpmath.log1p(dr / lr)
        else:
            lam = to_real(f.lam, p + 32)
            u = mpmath.exp(lr)
            r = mpmath.log1p(u * mpmath.expm1(dr) / (u + lam))
    with mpmath.workprec(p):
        return +r


def _check_range(f, d, y, prec):
    J = gap_range(f, d, prec)
    if not J.contains(y):
        raise RangeViolation(f"{mpmath.nstr(to_real(y, 64), 15)} is outside the range {J} of {f.id}_d")
    return J


def gap_inverse(f: ConvexFunctionSpec, d, y, prec: int | None = None, max_steps: int | None = None) -> mpf:
    """The unique ``x`` with ``f_d(x) = y``.

    Closed form for ``ln`` and ``logshift``; bracketed Newton otherwise.
    """
    d = _check_shift(d)
    y = to_scalar(y)
    p = _prec(prec)
    _check_range(f, d, y, p)
    with mpmath.workprec(p + 32):
        yr, dr = to_real(y, p + 32), to_real(d, p + 32)
        if f.kind is Kind.LOG:
            r = dr / mpmath.expm1(yr)
        elif f.kind is Kind.LOGSHIFT:
            lam = to_real(f.lam, p + 32)
            r = mpmath.log(lam * mpmath.expm1(yr) / (mpmath.exp(dr) - mpmath.exp(yr)))
        else:
            r = _bisect_inverse(f, d, yr, p + 32, max_steps)
    with mpmath.workprec(p):
        return +r


def _bisect_inverse(f, d, y, p, max_steps):
    increasing = f.convex

    def below(x):
        # True when x lies on the low side of the solution.
        v = gap_eval(f, d, x, p)
        return v < y if increasing else v > y

    lo_end = f.domain.lo
    if lo_end is not None:
        lo = to_real(lo_end, p)
        step = mpf(1)
        hi = lo + step
        while below(hi):
            lo = hi
            step *= 2
            hi = lo + step
    else:
        hi = mpf(1)
        while below(hi):
            hi *= 2
        lo = mpf(-1)
        while not below(lo):
            lo *= 2
    # safeguarded Newton: bisect whenever the Newton step leaves the bracket
    # or fails to halve the previous step
    steps = max_steps if max_steps is not None else 4 * p + 400
    x = (lo + hi) / 2
    dx_old = hi - lo
    for _ in range(steps):
        if hi - lo <= max(mpf(1), abs(x)) * mpf(2) ** (-p + 2):
            return x
        v = gap_eval(f, d, x, p) - y
        if v == 0:
            return x
        if (v < 0) == increasing:
            lo = x
        else:
            hi = x
        slope = gap_deriv(f, d, 1, x, p)
        if slope != 0 and abs(2 * v) < abs(dx_old * slope):
            step = x - v / slope
            if lo < step < hi:
                dx_old = step - x
                if abs(dx_old) <= max(mpf(1), abs(x)) * mpf(2) ** (-p + 4):
                    return step
                x = step
                continue
        mid = (lo + hi) / 2
        dx_old = mid - x
        x = mid
    raise NoConvergence(f"root search for {f.id}_d^-1({mpmath.nstr(y, 10)}) did not converge in {steps} steps")


def _closed_inverse_derivs(f, d, y, p):
    with mpmath.workprec(p):
        yr, dr = to_real(y, p), to_real(d, p)
        u = mpmath.exp(yr)
        um1 = mpmath.expm1(yr)
        if f.kind is Kind.LOG:
            return (
                -dr * u / um1**2,
                dr * u * (u + 1) / um1**3,
                -dr * u * (u**2 + 4 * u + 1) / um1**4,
            )
        e = mpmath.exp(dr)
        em1 = mpmath.expm1(dr)
        gap = e - u
        return (
            em1 * u / (um1 * gap),
            em1 * u * (u**2 - e) / (um1**2 * gap**2),
            em1 * u * (u**4 + (e + 1) * u**3 - 6 * e * u**2 + (e**2 + e) * u + e**2) / (um1**3 * gap**3),
        )


def gap_inverse_deriv(f: ConvexFunctionSpec, d, j: int, y, prec: int | None = None) -> mpf:
    """``(f_d^{-1})^(j)(y)`` for ``j`` in 1..3 (closed forms: ``ln``, ``logshift``)."""
    if j not in (1, 2, 3):
        raise Unsupported("gap inverse derivatives are registered for orders 1, 2, 3")
    if f.kind not in (Kind.LOG, Kind.LOGSHIFT):
        raise Unsupported(f"no closed-form gap inverse derivatives for {f.id}")
    d = _check_shift(d)
    p = _prec(prec)
    _check_range(f, d, to_scalar(y), p)
    r = _closed_inverse_derivs(f, d, to_scalar(y), p + 32)[j - 1]
    with mpmath.workprec(p):
        return +r


def inverse_derivatives(f: ConvexFunctionSpec, d, y, prec: int | None = None) -> tuple:
    """``(g', g'', g''')`` at ``y`` for the gap inverse ``g`` of any registered ``f``.

    Closed forms where registered, else implicit differentiation of
    ``f_d(g(y)) = y`` at the bisected point ``x = g(y)``.
    """
    p = _prec(prec)
    if f.kind in (Kind.LOG, Kind.LOGSHIFT):
        vals = _closed_inverse_derivs(f, d, to_scalar(y), p + 32)
    else:
        x = gap_inverse(f, d, y, p + 32)
        with mpmath.workprec(p + 32):
            u1 = gap_deriv(f, d, 1, x, p + 32)
            u2 = gap_deriv(f, d, 2, x, p + 32)
            u3 = gap_deriv(f, d, 3, x, p + 32)
            vals = (1 / u1, -u2 / u1**3, (3 * u2**2 - u1 * u3) / u1**5)
    with mpmath.workprec(p):
        return tuple(+v for v in vals)


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

IDENTICALLY_ZERO = "identically-zero"


def _derivative_zeros(f: ConvexFunctionSpec, j: int):
    """Zeros of ``f^(j)`` on the real line, or IDENTICALLY_ZERO."""
    k = f.kind
    if k in (Kind.LOG, Kind.EXP):
        return []
    if k is Kind.CUBE:
        return [Fraction(0)] if j in (1, 2) else ([] if j == 3 else IDENTICALLY_ZERO)
    if k is Kind.SQUARE:
        return [Fraction(0)] if j == 1 else ([] if j == 2 else IDENTICALLY_ZERO)
    lam = to_real(f.lam, default_precision() + 64)
    with mpmath.workprec(default_precision() + 64):
        if j in (1, 2):
            return []
        if j == 3:
            return [mpmath.log(lam)]
        root3 = mpmath.sqrt(3)
        return [mpmath.log(lam * (2 - root3)), mpmath.log(lam * (2 + root3))]


@dataclass(frozen=True)
class ConvexityCertificate:
    function_id: str
    interval: Interval
    order: int
    method: str
    zero_count: int
    subintervals: tuple
    zeros: tuple = ()
    budget: int = 0
    shift: Scalar | None = None

    def piece_of(self, y) -> int | None:
        for i, piece in enumerate(self.subintervals):
            if piece.contains(y):
                return i
        return None


def certify_k_convex(f: ConvexFunctionSpec, I: Interval, k: int) -> ConvexityCertificate:
    """Certify that ``f^(1), ..., f^(k+1)`` do not vanish on ``I``."""
    if not 0 <= k <= 3:
        raise PreconditionError("k-convexity is certified for k <= 3")
    # only ln is undefined somewhere; the others are checked on all of R
    natural = Interval(Fraction(0), None) if f.kind is Kind.LOG else Interval(None, None)
    if not natural.covers(I):
        raise DomainViolation(f"{I} is not inside the domain {natural} of {f.id}")
    for j in range(1, k + 2):
        zeros = _derivative_zeros(f, j)
        if zeros == IDENTICALLY_ZERO:
            raise CertificationFailure(f"{f.id}: derivative {j} vanishes identically")
        for z in zeros:
            if I.contains(z):
                raise CertificationFailure(f"{f.id}: derivative {j} vanishes at {format_scalar(z)} in {I}")
    return ConvexityCertificate(f.id, I, k, "closed-form", 0, (I,))


def certify(
    f: ConvexFunctionSpec,
    d,
    target: Interval,
    max_zeros: int,
    prec: int | None = None,
    grid: int = 256,
) -> ConvexityCertificate:
    """Count the zeros of ``g', g'', g'''`` for ``g = f_d^{-1}`` on ``target``.

    ``ln`` is certified in closed form (no zeros anywhere on ``J``). Other
    functions are sampled on a grid over a bounded target: every sign change
    is isolated by bisection, and a cell without one is searched for a hidden
    pair of zeros around the extremum located by the next derivative. A
    derivative that is exactly zero at every sample is identically zero,
    which counts as unboundedly many zeros.
    """
    d = _check_shift(d)
    p = _prec(prec)
    J = gap_range(f, d, p)
    if not J.covers(target):
        raise RangeViolation(f"target {target} is not inside the range {J} of {f.id}_d")
    if f.kind is Kind.LOG:
        return ConvexityCertificate(f.id, target, 3, "closed-form", 0, (target,), shift=d)
    if not target.bounded:
        raise CertificationFailure("subdivision needs a bounded target interval")

    with mpmath.workprec(p):
        lo, hi = to_real(target.lo, p), to_real(target.hi, p)
        width = hi - lo
        inset = width * mpf(2) ** (-(p // 2))
        a, b = lo + inset, hi - inset
        geometric = a > 0 and b / a > 16
        if geometric:
            ratio = (b / a) ** (mpf(1) / grid)
            nodes = [a * ratio**i for i in range(grid)] + [b]
        else:
            nodes = [a + (b - a) * i / grid for i in range(grid)] + [b]

    cache = {}

    def h(y):
        key = y
        if key not in cache:
            cache[key] = inverse_derivatives(f, d, y, p)
        return cache[key]

    zeros: list[tuple[int, mpf]] = []
    for j in range(3):
        samples = [h(y)[j] for y in nodes]
        if all(v == 0 for v in samples):
            raise CertificationFailure(f"{f.id}_d^-1: derivative {j + 1} vanishes identically (d={format_scalar(d)})")
        for y, v in zip(nodes, samples):
            if v == 0:
                zeros.append((j, y))
        for y0, y1 in zip(nodes, nodes[1:]):
            zeros.extend((j, z) for z in _scan_cell(h, j, y0, y1, p))

    with mpmath.workprec(p):
        zeros.sort(key=lambda item: item[1])
        m = len(zeros)
        if m > max_zeros:
            raise CertificationFailure(
                f"{f.id}_d^-1 derivatives have {m} zeros on {target}, more than the allowed {max_zeros}"
            )
        cuts = []
        for _, z in zeros:
            if not cuts or z - cuts[-1] > width * mpf(2) ** (-(p // 2)):
                cuts.append(z)
        edges = [target.lo] + cuts + [target.hi]
        pieces = []
        for i, (u, v) in enumerate(zip(edges, edges[1:])):
            pieces.append(
                Interval(
                    u,
                    v,
                    lo_open=target.lo_open if i == 0 else True,
                    hi_open=target.hi_open if i == len(edges) - 2 else True,
                )
            )
    return ConvexityCertificate(
        f.id, target, 3, "interval-subdivision", m, tuple(pieces), tuple(z for _, z in zeros), grid, d
    )


def _sign(v):
    return (v > 0) - (v < 0)


def _scan_cell(h, j, y0, y1, p):
    """Zeros of derivative ``j`` strictly inside ``(y0, y1)``.

    Without a sign change at the ends, a pair of zeros needs an extremum
    inside, i.e. a sign change of derivative ``j + 1``; for the third
    derivative no such check is available and the grid is trusted.
    """
    s0, s1 = _sign(h(y0)[j]), _sign(h(y1)[j])
    if s0 == 0 or s1 == 0:
        return []
    if s0 != s1:
        return [_bisect_zero(h, j, y0, y1, s0, p)]
    if j == 2:
        return []
    t0, t1 = _sign(h(y0)[j + 1]), _sign(h(y1)[j + 1])
    if t0 == t1 or t0 == 0 or t1 == 0:
        return []
    z = _bisect_zero(h, j + 1, y0, y1, t0, p)
    sz = _sign(h(z)[j])
    if sz == 0:
        return [z]
    if sz == s0:
        return []
    return [_bisect_zero(h, j, y0, z, s0, p), _bisect_zero(h, j, z, y1, sz, p)]


def _bisect_zero(h, j, lo, hi, s_lo, p):
    with mpmath.workprec(p):
        tol = (hi - lo) * mpf(2) ** (-(p // 2))
        while hi - lo > tol:
            mid = (lo + hi) / 2
            s = _sign(h(mid)[j])
            if s == 0:
                return mid
            if s == s_lo:
                lo = mid
            else:
                hi = mid
        return (lo + hi) / 2
