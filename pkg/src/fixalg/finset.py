"""Finite sets of canonical elements and total functions between them.

Elements are small immutable term trees with a canonical text form::

    *        the unit element
    a        an atom
    L(t)     left injection
    R(t)     right injection
    (t,u)    pair
    in(t)    term-algebra wrap

Equality, hashing and ordering all go through the text form, so two elements
are equal exactly when they serialize identically.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from operator import attrgetter
from typing import Callable, Iterable, Iterator, Mapping

from .errors import (
    DomainMismatch,
    EnumerationTooLarge,
    NotAnIso,
    NotTotal,
    OutOfCodomain,
    ParseError,
)

ATOM_NAME = re.compile(r"[A-Za-z0-9_]+\Z")


class Elem:
    __slots__ = ("_text", "_hash")

    def _seal(self, text: str) -> None:
        object.__setattr__(self, "_text", text)
        object.__setattr__(self, "_hash", hash(text))

    @property
    def text(self) -> str:
        return self._text

    def __str__(self) -> str:
        return self._text

    def __repr__(self) -> str:
        return f"elem({self._text!r})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Elem):
            return NotImplemented
        return self._text == other._text

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: Elem) -> bool:
        return self._text < other._text


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Unit(Elem):
    def __post_init__(self):
        self._seal("*")


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Atom(Elem):
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not ATOM_NAME.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")
        self._seal(self.name)


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Inl(Elem):
    child: Elem

    def __post_init__(self):
        self._seal(f"L({self.child._text})")


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Inr(Elem):
    child: Elem

    def __post_init__(self):
        self._seal(f"R({self.child._text})")


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class Pair(Elem):
    left: Elem
    right: Elem

    def __post_init__(self):
        self._seal(f"({self.left._text},{self.right._text})")


@dataclass(frozen=True, slots=True, eq=False, repr=False)
class In(Elem):
    child: Elem

    def __post_init__(self):
        self._seal(f"in({self.child._text})")


UNIT = Unit()

_ELEM_TOKEN = re.compile(r"\s*(?:(?P<word>[A-Za-z0-9_]+)|(?P<punct>[*(),]))")


def elem(text: str) -> Elem:
    """Parse the canonical text form of an element."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _ELEM_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r} in element {text!r}", 1, pos + 1)
        tokens.append((m.group("word") or m.group("punct"), m.start(m.lastindex)))
        pos = m.end()
    tokens.append((None, len(text)))
    i = 0

    def expect(tok):
        nonlocal i
        got, at = tokens[i]
        if got != tok:
            raise ParseError(f"expected {tok!r} in element {text!r}", 1, at + 1)
        i += 1

    def parse() -> Elem:
        nonlocal i
        tok, at = tokens[i]
        if tok is None:
            raise ParseError(f"unexpected end of element {text!r}", 1, at + 1)
        if tok == "*":
            i += 1
            return UNIT
        if tok == "(":
            i += 1
            left = parse()
            expect(",")
            right = parse()
            expect(")")
            return Pair(left, right)
        if tok in (")", ","):
            raise ParseError(f"unexpected {tok!r} in element {text!r}", 1, at + 1)
        i += 1
        if tokens[i][0] == "(" and tok in ("L", "R", "in"):
            i += 1
            child = parse()
            expect(")")
            return {"L": Inl, "R": Inr, "in": In}[tok](child)
        return Atom(tok)

    result = parse()
    if tokens[i][0] is not None:
        raise ParseError(f"trailing input in element {text!r}", 1, tokens[i][1] + 1)
    return result


def atoms(*names: str) -> FinSet:
    return FinSet(Atom(n) for n in names)


class FinSet:
    """An immutable finite set of elements in canonical order."""

    __slots__ = ("elements", "_members")

    def __init__(self, elements: Iterable[Elem] = ()):
        members = frozenset(elements)
        for e in members:
            if not isinstance(e, Elem):
                raise TypeError(f"FinSet members must be Elem, got {e!r}")
        self.elements: tuple[Elem, ...] = tuple(sorted(members, key=attrgetter("_text")))
        self._members = members

    def __iter__(self) -> Iterator[Elem]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._members

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinSet):
            return NotImplemented
        return self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def __le__(self, other: FinSet) -> bool:
        return self._members <= other._members

    def __str__(self) -> str:
        return "{" + ", ".join(e.text for e in self.elements) + "}"

    def __repr__(self) -> str:
        return f"FinSet({self})"


EMPTY = FinSet()


class FinFn:
    """A total function between finite sets, stored extensionally."""

    __slots__ = ("domain", "codomain", "_map")

    def __init__(self, domain: FinSet, codomain: FinSet, mapping: Mapping[Elem, Elem]):
        missing = [x for x in domain if x not in mapping]
        if missing:
            raise NotTotal(
                "function is not total; unassigned: " + ", ".join(map(str, missing))
            )
        extra = [x for x in mapping if x not in domain]
        if extra:
            raise DomainMismatch(
                "function assigns elements outside its domain: "
                + ", ".join(sorted(map(str, extra)))
            )
        outside = sorted({str(y) for y in mapping.values() if y not in codomain})
        if outside:
            raise OutOfCodomain("values outside the codomain: " + ", ".join(outside))
        self.domain = domain
        self.codomain = codomain
        self._map = dict(mapping)

    @classmethod
    def from_callable(cls, domain: FinSet, codomain: FinSet, fn: Callable[[Elem], Elem]) -> FinFn:
        return cls(domain, codomain, {x: fn(x) for x in domain})

    def __call__(self, x: Elem) -> Elem:
        try:
            return self._map[x]
        except KeyError:
            raise DomainMismatch(f"{x} is not in the domain {self.domain}") from None

    def items(self) -> list[tuple[Elem, Elem]]:
        return [(x, self._map[x]) for x in self.domain]

    def image(self) -> FinSet:
        return FinSet(self._map.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinFn):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self._map == other._map
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, frozenset(self._map.items())))

    def lines(self) -> list[str]:
        return [f"{x} -> {y}" for x, y in self.items()]

    def __repr__(self) -> str:
        body = ", ".join(self.lines())
        return f"FinFn({self.domain} -> {self.codomain}: {body})"


def identity_fn(X: FinSet) -> FinFn:
    return FinFn(X, X, {x: x for x in X})


def empty_fn(Y: FinSet) -> FinFn:
    """The unique map out of the empty set."""
    return FinFn(EMPTY, Y, {})


def compose(g: FinFn, f: FinFn) -> FinFn:
    """``g . f``; the codomain of ``f`` must equal the domain of ``g``."""
    if f.codomain != g.domain:
        raise DomainMismatch(f"cannot compose: {f.codomain} is not {g.domain}")
    return FinFn(f.domain, g.codomain, {x: g._map[y] for x, y in f._map.items()})


def is_injective(f: FinFn) -> bool:
    return len(set(f._map.values())) == len(f.domain)


def is_surjective(f: FinFn) -> bool:
    return set(f._map.values()) == set(f.codomain)


def is_bijection(f: FinFn) -> bool:
    return len(f.domain) == len(f.codomain) and is_injective(f)


def inverse(f: FinFn) -> FinFn:
    if not is_bijection(f):
        raise NotAnIso(f"not a bijection: {f!r}")
    return FinFn(f.codomain, f.domain, {y: x for x, y in f._map.items()})


@dataclass(frozen=True)
class Iso:
    """A pair of mutually inverse functions, checked on construction."""

    forward: FinFn
    backward: FinFn = field(default=None)

    def __post_init__(self):
        if self.backward is None:
            object.__setattr__(self, "backward", inverse(self.forward))
        f, b = self.forward, self.backward
        if f.domain != b.codomain or f.codomain != b.domain:
            raise NotAnIso("forward and backward maps do not have matching ends")
        if compose(b, f) != identity_fn(f.domain) or compose(f, b) != identity_fn(f.codomain):
            raise NotAnIso("forward and backward maps are not mutually inverse")


def function_count(X: FinSet, Y: FinSet) -> int:
    return len(Y) ** len(X)


def all_functions(X: FinSet, Y: FinSet, cap: int = 100_000) -> Iterator[FinFn]:
    """Every total function X -> Y, in a fixed order."""
    n = function_count(X, Y)
    if n > cap:
        raise EnumerationTooLarge(f"{len(Y)}^{len(X)} = {n} functions exceeds cap {cap}")
    dom = X.elements
    for values in itertools.product(Y.elements, repeat=len(dom)):
        yield FinFn(X, Y, dict(zip(dom, values)))
