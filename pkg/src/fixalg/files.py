"""Algebra definition files.

An algebra file names the functor it is for, lists the carrier atoms, and
then gives the structure map one assignment per line::

    # parity of numerals
    functor: F
    carrier: {even, odd}
    L(*) -> even
    R(even) -> odd
    R(odd) -> even

Left-hand sides range over the functor applied to the carrier, written in the
canonical element syntax; right-hand sides are carrier elements.
"""
from __future__ import annotations

import re

from .errors import AlgebraMalformed, ParseError
from .finset import ATOM_NAME, Atom, FinFn, FinSet, elem
from .functor import Algebra, FunctorDef, apply_obj, show

_HEADER = re.compile(r"(functor|carrier)\s*:\s*(.*)\Z")


def _carrier(text: str, lineno: int) -> FinSet:
    m = re.fullmatch(r"\{(.*)\}", text.strip())
    if not m:
        raise AlgebraMalformed(f"line {lineno}: carrier must be written {{a, b, ...}}")
    names = [n.strip() for n in m.group(1).split(",") if n.strip()]
    bad = [n for n in names if not ATOM_NAME.match(n)]
    if bad:
        raise AlgebraMalformed(f"line {lineno}: carrier elements must be atoms, got {', '.join(bad)}")
    return FinSet(Atom(n) for n in names)


def parse_algebra_file(text: str, fdef: FunctorDef) -> Algebra:
    functor_name = None
    carrier = None
    assignments: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _HEADER.match(line)
        if header:
            key, value = header.groups()
            if key == "functor":
                functor_name = value.strip()
            else:
                carrier = _carrier(value, lineno)
            continue
        if "->" not in line:
            raise AlgebraMalformed(f"line {lineno}: expected 'element -> element', got {line!r}")
        lhs, rhs = (part.strip() for part in line.split("->", 1))
        try:
            x, y = elem(lhs), elem(rhs)
        except ParseError as exc:
            raise AlgebraMalformed(f"line {lineno}: {exc.message}") from None
        if x in assignments and assignments[x] != y:
            raise AlgebraMalformed(f"line {lineno}: {x} is assigned twice ({assignments[x]} and {y})")
        assignments[x] = y
    if functor_name is None:
        raise AlgebraMalformed("missing 'functor:' header")
    if functor_name != fdef.name:
        raise AlgebraMalformed(
            f"algebra is for functor {functor_name!r} but the functor file defines {fdef.name!r}"
        )
    if carrier is None:
        raise AlgebraMalformed("missing 'carrier:' header")
    domain = apply_obj(fdef.expr, carrier)
    expected = ", ".join(map(str, domain)) or "(none)"
    stray = [x for x in assignments if x not in domain]
    if stray:
        raise AlgebraMalformed(
            f"{', '.join(map(str, stray))} not in {show(fdef.expr)} applied to the carrier; "
            f"expected domain elements: {expected}"
        )
    missing = [x for x in domain if x not in assignments]
    if missing:
        raise AlgebraMalformed(
            f"structure map is not total, missing: {', '.join(map(str, missing))}; "
            f"expected domain elements: {expected}"
        )
    outside = sorted({str(y) for y in assignments.values() if y not in carrier})
    if outside:
        raise AlgebraMalformed(f"values outside the carrier {carrier}: {', '.join(outside)}")
    return Algebra(fdef.expr, carrier, FinFn(domain, carrier, assignments))


def format_algebra_file(algebra: Algebra, functor_name: str) -> str:
    lines = [f"functor: {functor_name}", f"carrier: {algebra.carrier}"]
    lines += algebra.structure.lines()
    return "\n".join(lines) + "\n"
