"""Polynomial endofunctors on finite sets.

A functor expression is built from ``0``, ``1``, named constant sets, the
identity ``X``, binary sums and binary products.  Sums are always tagged with
``L``/``R`` and products build ``(t,u)`` pairs, so every element of
``apply_obj(F, X)`` records exactly where its ``X`` components sit.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import DomainMismatch, MalformedTerm, ParseError
from .finset import (
    UNIT,
    Atom,
    Elem,
    FinFn,
    FinSet,
    Inl,
    Inr,
    Pair,
    Unit,
    all_functions,
    atoms,
    compose,
    identity_fn,
)


class FunctorExpr:
    __slots__ = ()

    def __add__(self, other: FunctorExpr) -> Sum:
        return Sum(self, other)

    def __mul__(self, other: FunctorExpr) -> Prod:
        return Prod(self, other)

    def __str__(self) -> str:
        return show(self)


@dataclass(frozen=True, slots=True)
class Zero(FunctorExpr):
    pass


@dataclass(frozen=True, slots=True)
class One(FunctorExpr):
    pass


@dataclass(frozen=True, slots=True)
class Const(FunctorExpr):
    name: str
    values: FinSet

    def __post_init__(self):
        for v in self.values:
            if not isinstance(v, Atom):
                raise TypeError(f"constant set {self.name} must contain atoms, got {v}")


@dataclass(frozen=True, slots=True)
class Id(FunctorExpr):
    pass


@dataclass(frozen=True, slots=True)
class Sum(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr


@dataclass(frozen=True, slots=True)
class Prod(FunctorExpr):
    left: FunctorExpr
    right: FunctorExpr


ZERO, ONE, X = Zero(), One(), Id()


def const(name: str, *names: str) -> Const:
    return Const(name, atoms(*names))


def show(F: FunctorExpr) -> str:
    match F:
        case Zero():
            return "0"
        case One():
            return "1"
        case Const(name, _):
            return name
        case Id():
            return "X"
        case Sum(l, r):
            rs = show(r)
            return f"{show(l)} + " + (f"({rs})" if isinstance(r, Sum) else rs)
        case Prod(l, r):
            ls, rs = show(l), show(r)
            if isinstance(l, Sum):
                ls = f"({ls})"
            if isinstance(r, (Sum, Prod)):
                rs = f"({rs})"
            return f"{ls} * {rs}"
    raise TypeError(f"not a functor expression: {F!r}")


def constants_of(F: FunctorExpr) -> dict[str, FinSet]:
    """Named constant sets occurring in ``F``."""
    found: dict[str, FinSet] = {}

    def walk(G):
        match G:
            case Const(name, values):
                found[name] = values
            case Sum(l, r) | Prod(l, r):
                walk(l)
                walk(r)

    walk(F)
    return found


def cardinality(F: FunctorExpr, n: int) -> int:
    """``|apply_obj(F, X)|`` for any ``X`` with ``|X| = n``."""
    match F:
        case Zero():
            return 0
        case One():
            return 1
        case Const(_, values):
            return len(values)
        case Id():
            return n
        case Sum(l, r):
            return cardinality(l, n) + cardinality(r, n)
        case Prod(l, r):
            return cardinality(l, n) * cardinality(r, n)
    raise TypeError(f"not a functor expression: {F!r}")


def _elements(F: FunctorExpr, X: FinSet) -> list[Elem]:
    match F:
        case Zero():
            return []
        case One():
            return [UNIT]
        case Const(_, values):
            return list(values)
        case Id():
            return list(X)
        case Sum(l, r):
            return [Inl(a) for a in _elements(l, X)] + [Inr(b) for b in _elements(r, X)]
        case Prod(l, r):
            rs = _elements(r, X)
            return [Pair(a, b) for a in _elements(l, X) for b in rs]
    raise TypeError(f"not a functor expression: {F!r}")


def apply_obj(F: FunctorExpr, X: FinSet) -> FinSet:
    return FinSet(_elements(F, X))


def lift(F: FunctorExpr, g: Callable[[Elem], Elem], e: Elem) -> Elem:
    """Apply ``g`` at every ``X`` position of the ``F``-shaped element ``e``.

    Raises MalformedTerm when ``e`` does not have the shape ``F`` prescribes.
    """
    match F, e:
        case One(), Unit():
            return e
        case Const(name, values), Atom():
            if e not in values:
                raise MalformedTerm(f"{e} is not in constant set {name}")
            return e
        case Id(), _:
            return g(e)
        case Sum(l, _), Inl(child):
            return Inl(lift(l, g, child))
        case Sum(_, r), Inr(child):
            return Inr(lift(r, g, child))
        case Prod(l, r), Pair(a, b):
            return Pair(lift(l, g, a), lift(r, g, b))
    raise MalformedTerm(f"{e} does not have the shape {show(F)}")


def positions(F: FunctorExpr, e: Elem) -> list[Elem]:
    """The components of ``e`` sitting at ``X`` positions, left to right."""
    found: list[Elem] = []

    def grab(x):
        found.append(x)
        return x

    lift(F, grab, e)
    return found


def apply_mor(F: FunctorExpr, f: FinFn) -> FinFn:
    dom = apply_obj(F, f.domain)
    cod = apply_obj(F, f.codomain)
    return FinFn(dom, cod, {e: lift(F, f, e) for e in dom})


@dataclass(frozen=True)
class Algebra:
    """A carrier with a structure map ``apply_obj(functor, carrier) -> carrier``."""

    functor: FunctorExpr
    carrier: FinSet
    structure: FinFn

    def __post_init__(self):
        if self.structure.domain != apply_obj(self.functor, self.carrier):
            raise DomainMismatch(
                f"structure map domain {self.structure.domain} is not "
                f"{show(self.functor)} applied to {self.carrier}"
            )
        if self.structure.codomain != self.carrier:
            raise DomainMismatch(
                f"structure map codomain {self.structure.codomain} is not the carrier {self.carrier}"
            )


def is_homomorphism(h: FinFn, source: Algebra, target: Algebra) -> bool:
    """Whether ``h . alpha == beta . F(h)``."""
    if h.domain != source.carrier or h.codomain != target.carrier:
        return False
    F = source.functor
    return compose(h, source.structure) == compose(target.structure, apply_mor(F, h))


def all_algebras(F: FunctorExpr, Y: FinSet, cap: int = 100_000) -> Iterable[Algebra]:
    """Every algebra on carrier ``Y``: one per structure map."""
    for beta in all_functions(apply_obj(F, Y), Y, cap):
        yield Algebra(F, Y, beta)


@dataclass
class LawReport:
    functor: FunctorExpr
    identities_checked: int = 0
    compositions_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_functor_laws(
    F: FunctorExpr,
    samples: Sequence[tuple[FinFn, FinFn]],
    objects: Iterable[FinSet] = (),
) -> LawReport:
    """Check ``F(id) = id`` and ``F(g . f) = F(g) . F(f)`` on the given samples.

    Identities are checked on every set that appears as an end of a sample, and
    on any extra ``objects``.
    """
    report = LawReport(F)
    seen: dict[FinSet, None] = dict.fromkeys(objects)
    for g, f in samples:
        if f.codomain != g.domain:
            raise DomainMismatch(f"sample pair is not composable: {f.codomain} vs {g.domain}")
        seen.update(dict.fromkeys((f.domain, f.codomain, g.codomain)))
    for obj in seen:
        report.identities_checked += 1
        if apply_mor(F, identity_fn(obj)) != identity_fn(apply_obj(F, obj)):
            report.violations.append(f"F(id) != id on {obj}")
    for g, f in samples:
        report.compositions_checked += 1
        lhs = apply_mor(F, compose(g, f))
        rhs = compose(apply_mor(F, g), apply_mor(F, f))
        if lhs != rhs:
            report.violations.append(f"F(g.f) != F(g).F(f) for f={f!r}, g={g!r}")
    return report


def sample_sets(max_size: int, prefix: str = "x") -> list[FinSet]:
    return [atoms(*(f"{prefix}{i}" for i in range(n))) for n in range(max_size + 1)]


def exhaustive_samples(max_size: int) -> list[tuple[FinFn, FinFn]]:
    """Every composable pair ``(g, f)`` between sets of size at most ``max_size``."""
    sets = sample_sets(max_size)
    fns = {(a, b): list(all_functions(sets[a], sets[b])) for a in range(max_size + 1)
           for b in range(max_size + 1)}
    pairs = []
    for a, b, c in itertools.product(range(max_size + 1), repeat=3):
        for f in fns[a, b]:
            for g in fns[b, c]:
                pairs.append((g, f))
    return pairs


# --- functor definition files ---------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>[\n;])"
    r"|(?P<word>[A-Za-z0-9_]+)|(?P<punct>[={},+*()])"
)


@dataclass(frozen=True)
class FunctorDef:
    name: str
    expr: FunctorExpr
    constants: dict[str, FinSet]


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            tokens.append(("sep", m.group(), line, col))
            if m.group() == "\n":
                line, line_start = line + 1, m.end()
        elif kind in ("word", "punct"):
            tokens.append((kind, m.group(), line, col))
        pos = m.end()
    tokens.append(("sep", "", line, pos - line_start + 1))
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


class _FunctorParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value=None, kind=None):
        tok = self.tokens[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[1] else "end of input"
            raise ParseError(f"expected {want}, got {got}", tok[2], tok[3])
        self.i += 1
        return tok

    def skip_separators(self):
        while self.peek()[0] == "sep":
            self.i += 1

    def parse(self) -> FunctorDef:
        sets: dict[str, FinSet] = {}
        definitions: list[tuple[str, object, int, int]] = []
        self.skip_separators()
        while self.peek()[0] != "eof":
            _, name, line, col = self.take(kind="word")
            if not re.match(r"[A-Za-z_]", name):
                raise ParseError(f"definition name {name!r} must be an identifier", line, col)
            if name == "X":
                raise ParseError("'X' is reserved for the identity functor", line, col)
            if name in sets or any(d[0] == name for d in definitions):
                raise ParseError(f"{name!r} is defined twice", line, col)
            self.take("=")
            if self.peek()[1] == "{":
                sets[name] = self.parse_set()
            else:
                definitions.append((name, self.parse_sum(), line, col))
            self.take(kind="sep")
            self.skip_separators()
        if len(definitions) != 1:
            # point at the second definition, or at end of input when there is none
            line, col = definitions[1][2:] if definitions else self.peek()[2:]
            raise ParseError(
                f"expected exactly one functor definition, found {len(definitions)}", line, col
            )
        name, raw, _, _ = definitions[0]
        return FunctorDef(name, self.resolve(raw, sets), sets)

    def parse_set(self) -> FinSet:
        self.take("{")
        names = []
        if self.peek()[1] != "}":
            names.append(self.take(kind="word")[1])
            while self.peek()[1] == ",":
                self.take(",")
                names.append(self.take(kind="word")[1])
        self.take("}")
        return atoms(*names)

    def parse_sum(self):
        node = self.parse_prod()
        while self.peek()[1] == "+":
            self.take("+")
            node = ("+", node, self.parse_prod())
        return node

    def parse_prod(self):
        node = self.parse_prim()
        while self.peek()[1] == "*":
            self.take("*")
            node = ("*", node, self.parse_prim())
        return node

    def parse_prim(self):
        kind, value, line, col = self.peek()
        if value == "(":
            self.take("(")
            node = self.parse_sum()
            self.take(")")
            return node
        if kind != "word":
            got = repr(value) if value else "end of input"
            raise ParseError(f"expected a functor term, got {got}", line, col)
        self.i += 1
        if value.isdigit() and value not in ("0", "1"):
            raise ParseError(f"only 0 and 1 are numeric functors, got {value}", line, col)
        return ("ref", value, line, col)

    def resolve(self, node, sets) -> FunctorExpr:
        if node[0] == "ref":
            _, value, line, col = node
            if value == "0":
                return ZERO
            if value == "1":
                return ONE
            if value == "X":
                return X
            if value not in sets:
                raise ParseError(f"undeclared constant set {value!r}", line, col)
            return Const(value, sets[value])
        op, l, r = node
        cls = Sum if op == "+" else Prod
        return cls(self.resolve(l, sets), self.resolve(r, sets))


def parse_functor_file(text: str) -> FunctorDef:
    """Parse constant-set declarations and a single functor definition.

    >>> parse_functor_file("A = {a, b}; F = 1 + A * X").expr
    Sum(left=One(), right=Prod(left=Const(name='A', values=FinSet({a, b})), right=Id()))
    """
    return _FunctorParser(text).parse()


def parse_functor(text: str, **constants: FinSet) -> FunctorExpr:
    """Parse a bare functor expression with constant sets passed by keyword."""
    decls = "".join(f"{k} = {{{', '.join(map(str, v))}}}\n" for k, v in constants.items())
    return parse_functor_file(decls + "F = " + text).expr

