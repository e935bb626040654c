"""Set files and JSON encoding of scalars.

Set file format: UTF-8, one scalar per line (``-3``, ``1.25``, ``7/3``),
``#`` comments, blank lines ignored. Real sets are written with a
``# growthlab: mode=real prec=<bits>`` directive and each binary value as
an exact rational, so they re-read to an identical set.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath import mpf

from growthlab.errors import ParseError
from growthlab.setcore import FiniteSet, default_precision, format_scalar, make_set, mpf_to_fraction, parse_scalar

_DIRECTIVE = re.compile(r"#\s*growthlab:\s*mode=real\s+prec=(\d+)")


def parse_set_text(text: str) -> FiniteSet:
    values = []
    prec = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _DIRECTIVE.match(line)
            if m:
                prec = int(m.group(1))
            continue
        try:
            values.append(parse_scalar(line))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    if prec is None:
        return make_set(values)
    with mpmath.workprec(prec):
        reals = [mpf(v.numerator) / v.denominator for v in values]
    return make_set(reals, prec=prec)


def read_set_file(path) -> FiniteSet:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read set file {path}: {exc}") from exc
    return parse_set_text(text)


def format_set(A: FiniteSet) -> str:
    lines = []
    if A.is_exact:
        lines.extend(format_scalar(e) for e in A.elements)
    else:
        lines.append(f"# growthlab: mode=real prec={A.prec}")
        lines.extend(format_scalar(mpf_to_fraction(v)) for v in A.elements)
    return "\n".join(lines) + "\n"


def write_set_file(path, A: FiniteSet):
    Path(path).write_text(format_set(A), encoding="utf-8")


def encode_scalar(x, prec: int | None = None):
    """JSON form: ints stay ints, rationals become ``"p/q"``, reals
    ``"<decimal>@p<bits>"``."""
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return format_scalar(x)
    if isinstance(x, mpf):
        prec = prec or default_precision()
        digits = max(15, min(40, int(prec * 0.30103)))
        return f"{mpmath.nstr(x, digits)}@p{prec}"
    if isinstance(x, float):
        return repr(x)
    return x


def dumps(obj) -> str:
    return json.dumps(obj, ensure_ascii=False)
