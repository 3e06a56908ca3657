"""Positive Datalog evaluated as the least fixed point of its consequence operator.

Surface syntax::

    % transitive closure
    edge(1,2).  edge(2,3).
    path(X,Y) :- edge(X,Y).
    path(X,Z) :- path(X,Y), edge(Y,Z).

Constants start with a lowercase letter or a digit, variables with an
uppercase letter or ``_``.  There is no negation.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import ArityMismatch, DatalogSyntaxError, StageExplosion, UnsafeRule
from .lattice import (
    EXHAUSTIVE_CAP,
    KleeneResult,
    LeastReport,
    MonotoneOp,
    MonotoneReport,
    PowersetLattice,
    check_least,
    check_monotone,
    kleene_lfp,
)

DEFAULT_CAP = 100_000


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return self.name

    def sort_key(self):
        return (0, int(self.name), "") if self.name.isdigit() else (1, 0, self.name)


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Constant, Variable]
Substitution = Mapping[Variable, Constant]


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def variables(self) -> set[Variable]:
        return {a for a in self.args if isinstance(a, Variable)}

    def is_ground(self) -> bool:
        return all(isinstance(a, Constant) for a in self.args)

    def substitute(self, theta: Substitution) -> Atom:
        return Atom(self.predicate, tuple(theta.get(a, a) if isinstance(a, Variable) else a
                                          for a in self.args))

    def sort_key(self):
        return (self.predicate, len(self.args), tuple(
            a.sort_key() if isinstance(a, Constant) else (2, 0, a.name) for a in self.args
        ))

    def __str__(self) -> str:
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(map(str, self.args))})"


def atom(predicate: str, *args: str) -> Atom:
    """Build an atom from strings, reading case the way the parser does."""
    return Atom(predicate, tuple(_term(a) for a in args))


def _term(text: str) -> Term:
    return Variable(text) if text[0].isupper() or text[0] == "_" else Constant(text)


@dataclass(frozen=True)
class Rule:
    head: Atom
    body: tuple[Atom, ...] = ()

    def variables(self) -> set[Variable]:
        found = self.head.variables()
        for b in self.body:
            found |= b.variables()
        return found

    def is_fact(self) -> bool:
        return not self.body and self.head.is_ground()

    def __str__(self) -> str:
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {', '.join(map(str, self.body))}."


@dataclass(frozen=True)
class Program:
    rules: tuple[Rule, ...]
    constants: frozenset[str]

    @classmethod
    def from_rules(cls, rules: Iterable[Rule]) -> Program:
        """Validate and normalize: drop duplicate rules and duplicate body atoms."""
        unique: dict[Rule, None] = {}
        for r in rules:
            unique[Rule(r.head, tuple(dict.fromkeys(r.body)))] = None
        arities: dict[str, tuple[int, Atom]] = {}
        constants: set[str] = set()
        for r in unique:
            for a in (r.head, *r.body):
                seen = arities.setdefault(a.predicate, (a.arity, a))
                if seen[0] != a.arity:
                    raise ArityMismatch(
                        f"predicate {a.predicate} used with arity {seen[0]} in {seen[1]} "
                        f"and arity {a.arity} in {a}"
                    )
                constants.update(t.name for t in a.args if isinstance(t, Constant))
            body_vars = set().union(*(b.variables() for b in r.body))
            unbound = sorted(v.name for v in r.head.variables() - body_vars)
            if unbound:
                raise UnsafeRule(
                    f"rule '{r}' is unsafe: head variable {', '.join(unbound)} "
                    "does not occur in the body"
                )
        return cls(tuple(unique), frozenset(constants))

    def predicates(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rules:
            for a in (r.head, *r.body):
                out[a.predicate] = a.arity
        return dict(sorted(out.items()))

    def facts(self) -> frozenset[Atom]:
        return frozenset(r.head for r in self.rules if not r.body)

    def sorted_constants(self) -> list[Constant]:
        return sorted((Constant(c) for c in self.constants), key=Constant.sort_key)

    def __str__(self) -> str:
        return "\n".join(map(str, self.rules))


def sort_atoms(atoms: Iterable[Atom]) -> list[Atom]:
    return sorted(atoms, key=Atom.sort_key)


# --- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>%[^\n]*)|(?P<implies>:-)"
    r"|(?P<name>[A-Za-z0-9_]+)|(?P<punct>[(),.])"
)


def _tokens(text: str) -> list[tuple[str, str, int, int]]:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DatalogSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            out.append((kind, m.group(), line, pos - line_start + 1))
        for nl in re.finditer("\n", m.group()):
            line, line_start = line + 1, pos + nl.end()
        pos = m.end()
    out.append(("eof", "", line, pos - line_start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def expect(self, value: str):
        kind, got, line, col = self.toks[self.i]
        if got != value:
            shown = repr(got) if got else "end of input"
            raise DatalogSyntaxError(f"expected {value!r}, got {shown}", line, col)
        self.i += 1

    def program(self) -> list[Rule]:
        rules = []
        while self.peek()[0] != "eof":
            rules.append(self.rule())
        return rules

    def rule(self) -> Rule:
        head = self.atom()
        body: list[Atom] = []
        if self.peek()[1] == ":-":
            self.i += 1
            body.append(self.atom())
            while self.peek()[1] == ",":
                self.i += 1
                body.append(self.atom())
        self.expect(".")
        return Rule(head, tuple(body))

    def atom(self) -> Atom:
        kind, name, line, col = self.peek()
        if kind != "name" or not name[0].islower():
            shown = repr(name) if name else "end of input"
            raise DatalogSyntaxError(
                f"expected a predicate name (lowercase identifier), got {shown}", line, col
            )
        self.i += 1
        args: list[Term] = []
        if self.peek()[1] == "(":
            self.i += 1
            args.append(self.term())
            while self.peek()[1] == ",":
                self.i += 1
                args.append(self.term())
            self.expect(")")
        return Atom(name, tuple(args))

    def term(self) -> Term:
        kind, name, line, col = self.peek()
        if kind != "name":
            shown = repr(name) if name else "end of input"
            raise DatalogSyntaxError(f"expected a constant or variable, got {shown}", line, col)
        self.i += 1
        return _term(name)


def parse_program(text: str) -> Program:
    return Program.from_rules(_Parser(text).program())


# --- grounding and the consequence operator -------------------------------

def herbrand_size(program: Program) -> int:
    n = len(program.constants)
    return sum(n ** arity for arity in program.predicates().values())


def herbrand_base(program: Program, cap: int = DEFAULT_CAP) -> frozenset[Atom]:
    size = herbrand_size(program)
    if size > cap:
        raise StageExplosion(f"Herbrand base has {size} atoms, over the cap of {cap}")
    consts = program.sorted_constants()
    return frozenset(
        Atom(pred, args)
        for pred, arity in program.predicates().items()
        for args in itertools.product(consts, repeat=arity)
    )


Index = dict[tuple[str, int], list[Atom]]


def _index(facts: Iterable[Atom]) -> Index:
    idx: Index = {}
    for f in facts:
        idx.setdefault((f.predicate, f.arity), []).append(f)
    return idx


def _unify(pattern: Atom, fact: Atom, theta: dict) -> Optional[dict]:
    out = theta
    for p, c in zip(pattern.args, fact.args):
        if isinstance(p, Constant):
            if p != c:
                return None
        else:
            bound = out.get(p)
            if bound is None:
                if out is theta:
                    out = dict(theta)
                out[p] = c
            elif bound != c:
                return None
    return out


def _matches(goals: list[tuple[Atom, Index]], theta: dict) -> Iterator[dict]:
    if not goals:
        yield theta
        return
    (pattern, idx), rest = goals[0], goals[1:]
    for fact in idx.get((pattern.predicate, pattern.arity), ()):
        nxt = _unify(pattern, fact, theta)
        if nxt is not None:
            yield from _matches(rest, nxt)


def tp_step(program: Program, interpretation: Iterable[Atom]) -> frozenset[Atom]:
    """Heads of every rule instance whose body lies in ``interpretation``.

    Pure: the input is not carried over unless some rule re-derives it.
    """
    idx = _index(interpretation)
    out = set()
    for r in program.rules:
        for theta in _matches([(b, idx) for b in r.body], {}):
            out.add(r.head.substitute(theta))
    return frozenset(out)


def groundings(rule: Rule, constants: Iterable[Constant]) -> Iterator[Rule]:
    """Every ground instance of ``rule`` over ``constants``, by plain enumeration."""
    vs = sorted(rule.variables(), key=lambda v: v.name)
    consts = list(constants)
    for values in itertools.product(consts, repeat=len(vs)):
        theta = dict(zip(vs, values))
        yield Rule(rule.head.substitute(theta), tuple(b.substitute(theta) for b in rule.body))


def tp_step_by_grounding(program: Program, interpretation: Iterable[Atom]) -> frozenset[Atom]:
    """The consequence operator computed from the full grounding of ``program``."""
    facts = frozenset(interpretation)
    consts = program.sorted_constants()
    return frozenset(
        g.head
        for r in program.rules
        for g in groundings(r, consts)
        if all(b in facts for b in g.body)
    )


def unsatisfied_instances(program: Program, model: Iterable[Atom]) -> list[Rule]:
    """Ground rule instances whose body holds in ``model`` but whose head does not."""
    m = frozenset(model)
    consts = program.sorted_constants()
    return [
        g for r in program.rules for g in groundings(r, consts)
        if all(b in m for b in g.body) and g.head not in m
    ]


def tp_operator(program: Program, cap: int = DEFAULT_CAP) -> MonotoneOp:
    lattice = PowersetLattice(herbrand_base(program, cap))
    return MonotoneOp(lattice, lambda facts: tp_step(program, facts))


@dataclass
class ModelResult:
    model: frozenset[Atom]
    iterations: int
    trace: list[frozenset[Atom]] = field(default_factory=list)
    kleene: Optional[KleeneResult] = None

    def deltas(self) -> list[list[Atom]]:
        return [sort_atoms(d) for d in self.kleene.deltas()] if self.kleene else []


def least_model(program: Program, cap: int = DEFAULT_CAP) -> ModelResult:
    """Kleene iteration of the consequence operator from the empty interpretation."""
    result = kleene_lfp(tp_operator(program, cap))
    return ModelResult(result.fixed_point, result.iterations, result.trace, result)


def check_least_model(
    program: Program,
    model: Iterable[Atom],
    cap: int = DEFAULT_CAP,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
) -> LeastReport:
    return check_least(tp_operator(program, cap), model, exhaustive_cap)


def check_tp_monotone(program: Program, exhaustive_cap: int = EXHAUSTIVE_CAP) -> MonotoneReport:
    return check_monotone(tp_operator(program), exhaustive_cap)


def semi_naive(program: Program, cap: int = DEFAULT_CAP) -> frozenset[Atom]:
    """Delta-driven evaluation: each round needs one body atom from the last delta."""
    size = herbrand_size(program)
    if size > cap:
        raise StageExplosion(f"Herbrand base has {size} atoms, over the cap of {cap}")
    rules = [r for r in program.rules if r.body]
    total = set(program.facts())
    delta = set(total)
    while delta:
        all_idx, delta_idx = _index(total), _index(delta)
        derived = set()
        for r in rules:
            for i, pivot in enumerate(r.body):
                goals = [(pivot, delta_idx)] + [(b, all_idx) for j, b in enumerate(r.body) if j != i]
                for theta in _matches(goals, {}):
                    derived.add(r.head.substitute(theta))
        delta = derived - total
        total |= delta
    return frozenset(total)
