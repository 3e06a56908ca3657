"""Well-founded terms of a functor, folds over them, and Lambek checks.

A term is ``in(t)`` where ``t`` is an element of ``F`` applied to a set of
terms.  The terms of depth at most ``n`` are in bijection with stage ``n`` of
the initial chain, which is how chains that never converge (numerals, lists)
still get a concrete, finite handle.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .chain import DEFAULT_CAP, Chain, build_chain, fold_from_initial
from .errors import DepthOverflow, FunctorMismatch, MalformedTerm, StageExplosion
from .finset import (
    EMPTY,
    UNIT,
    Atom,
    Elem,
    FinFn,
    FinSet,
    In,
    Inl,
    Inr,
    Pair,
    compose,
    empty_fn,
    identity_fn,
    inverse,
    is_bijection,
)
from .functor import (
    ONE,
    Algebra,
    One,
    Const,
    FunctorExpr,
    Id,
    Prod,
    Sum,
    apply_mor,
    apply_obj,
    cardinality,
    is_homomorphism,
    lift,
    show,
)

NAT = Sum(ONE, Id())


def term_depth(e: Elem) -> int:
    """Number of nested ``in`` layers along the deepest path."""
    match e:
        case In(child):
            return 1 + term_depth(child)
        case Inl(child) | Inr(child):
            return term_depth(child)
        case Pair(left, right):
            return max(term_depth(left), term_depth(right))
    return 0


def check_term(F: FunctorExpr, t: Elem) -> None:
    if not isinstance(t, In):
        raise MalformedTerm(f"{t} is not a term: terms have the form in(...)")
    lift(F, lambda s: (check_term(F, s), s)[1], t.child)


def is_term(F: FunctorExpr, t: Elem) -> bool:
    try:
        check_term(F, t)
    except MalformedTerm:
        return False
    return True


@dataclass(frozen=True)
class TermUniverse:
    functor: FunctorExpr
    depth_bound: int
    layers: tuple[FinSet, ...]

    @property
    def terms(self) -> FinSet:
        return self.layers[-1]

    def in_map_at(self, d: int) -> FinFn:
        """Wrapping ``F(terms of depth <= d-1) -> terms of depth <= d``."""
        if d < 1:
            raise DepthOverflow("nothing wraps to a term of depth 0")
        if d > self.depth_bound:
            raise DepthOverflow(f"depth {d} is beyond the universe bound {self.depth_bound}")
        dom = apply_obj(self.functor, self.layers[d - 1])
        return FinFn(dom, self.layers[d], {x: In(x) for x in dom})

    def wrap(self, x: Elem) -> Elem:
        lift(self.functor, self._member, x)
        if 1 + term_depth(x) > self.depth_bound:
            raise DepthOverflow(f"in({x}) would have depth above {self.depth_bound}")
        return In(x)

    def unwrap(self, t: Elem) -> Elem:
        if t not in self.terms:
            if is_term(self.functor, t):
                raise DepthOverflow(f"{t} is deeper than the universe bound {self.depth_bound}")
            raise MalformedTerm(f"{t} is not a term of {show(self.functor)}")
        return t.child

    def _member(self, s: Elem) -> Elem:
        check_term(self.functor, s)
        return s


def enumerate_terms(F: FunctorExpr, depth: int, cap: int = DEFAULT_CAP) -> TermUniverse:
    """All terms of depth at most ``depth``, layer by layer."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    layers = [EMPTY]
    for d in range(1, depth + 1):
        size = cardinality(F, len(layers[-1]))
        if size > cap:
            raise StageExplosion(
                f"terms of depth <= {d} for {show(F)} number {size}, over the cap of {cap}"
            )
        layers.append(FinSet(In(x) for x in apply_obj(F, layers[-1])))
    return TermUniverse(F, depth, tuple(layers))


def _check_universe(F: FunctorExpr, universe: TermUniverse) -> None:
    if universe.functor != F:
        raise FunctorMismatch(
            f"universe is for {show(universe.functor)}, not {show(F)}"
        )


def in_map(F: FunctorExpr, universe: TermUniverse) -> FinFn:
    _check_universe(F, universe)
    return universe.in_map_at(universe.depth_bound)


def out_map(F: FunctorExpr, universe: TermUniverse) -> FinFn:
    _check_universe(F, universe)
    return inverse(universe.in_map_at(universe.depth_bound))


def cata(F: FunctorExpr, target: Algebra, t: Elem, memo: Optional[dict] = None) -> Elem:
    """Fold a term into ``target`` by structural recursion."""
    if target.functor != F:
        raise FunctorMismatch(f"target algebra is for {show(target.functor)}, not {show(F)}")
    if memo is None:
        memo = {}
    beta = target.structure

    def go(s: Elem) -> Elem:
        hit = memo.get(s)
        if hit is None:
            if not isinstance(s, In):
                raise MalformedTerm(f"{s} is not a term: terms have the form in(...)")
            hit = memo[s] = beta(lift(F, go, s.child))
        return hit

    return go(t)


def cata_fn(target: Algebra, universe: TermUniverse) -> FinFn:
    memo: dict = {}
    F = universe.functor
    return FinFn.from_callable(universe.terms, target.carrier, lambda t: cata(F, target, t, memo))


def square_violations(target: Algebra, universe: TermUniverse) -> list[str]:
    """Check ``cata(in(x)) == beta(F(cata)(x))`` for every ``x`` that wraps inside the bound."""
    F = universe.functor
    if universe.depth_bound == 0:
        return []
    memo: dict = {}
    h = lambda t: cata(F, target, t, memo)  # noqa: E731
    bad = []
    for x in universe.in_map_at(universe.depth_bound).domain:
        lhs, rhs = h(In(x)), target.structure(lift(F, h, x))
        if lhs != rhs:
            bad.append(f"cata(in({x})) = {lhs} but beta(F(cata)({x})) = {rhs}")
    return bad


def stage_term_bijections(chain: Chain, universe: TermUniverse) -> list[FinFn]:
    """Explicit maps from chain stage ``n`` onto terms of depth ``<= n``.

    ``b_0`` is the empty map and ``b_n = in . F(b_{n-1})``.
    """
    F = chain.functor
    _check_universe(F, universe)
    maps = [empty_fn(EMPTY)]
    for n in range(1, universe.depth_bound + 1):
        b = compose(universe.in_map_at(n), apply_mor(F, maps[-1]))
        if b.domain != chain.stage(n):
            raise ValueError(f"stage {n} of the chain differs from F applied to stage {n - 1}")
        maps.append(b)
    return maps


def check_stage_term_correspondence(F: FunctorExpr, n: int, cap: int = DEFAULT_CAP) -> bool:
    chain = build_chain(F, max(n, 1), cap)
    universe = enumerate_terms(F, n, cap)
    maps = stage_term_bijections(chain, universe)
    return all(
        len(universe.layers[k]) == len(chain.stage(k)) and is_bijection(b)
        for k, b in enumerate(maps)
    )


# --- numerals and lists ----------------------------------------------------

def numeral(n: int) -> Elem:
    t = In(Inl(UNIT))
    for _ in range(n):
        t = In(Inr(t))
    return t


def list_term(items) -> Elem:
    t = In(Inl(UNIT))
    for a in reversed(list(items)):
        t = In(Inr(Pair(Atom(a) if isinstance(a, str) else a, t)))
    return t


def is_list_functor(F: FunctorExpr) -> bool:
    match F:
        case Sum(One(), Prod(Const(), Id())):
            return True
    return False


def pretty(F: FunctorExpr, t: Elem) -> str:
    """``#n`` for numerals, ``[a,b]`` for lists, canonical text otherwise."""
    if F == NAT:
        n, s = 0, t
        while isinstance(s, In) and isinstance(s.child, Inr):
            s = s.child.child
            n += 1
        if s == In(Inl(UNIT)):
            return f"#{n}"
    elif is_list_functor(F):
        items = []
        s = t
        while isinstance(s, In) and isinstance(s.child, Inr) and isinstance(s.child.child, Pair):
            items.append(str(s.child.child.left))
            s = s.child.child.right
        if s == In(Inl(UNIT)):
            return "[" + ",".join(items) + "]"
    return str(t)


def recursion_violations(target: Algebra, n_max: int) -> list[str]:
    """Check ``h(0) = x0`` and ``h(n+1) = s(h(n))`` for a ``1 + X`` algebra."""
    if target.functor != NAT:
        raise FunctorMismatch(f"recursion equations need 1 + X, got {show(target.functor)}")
    beta = target.structure
    memo: dict = {}
    bad = []
    h = [cata(NAT, target, numeral(n), memo) for n in range(n_max + 1)]
    if h[0] != beta(Inl(UNIT)):
        bad.append(f"h(0) = {h[0]}, expected {beta(Inl(UNIT))}")
    for n in range(n_max):
        if h[n + 1] != beta(Inr(h[n])):
            bad.append(f"h({n + 1}) = {h[n + 1]}, expected s(h({n})) = {beta(Inr(h[n]))}")
    return bad


# --- Lambek ----------------------------------------------------------------

@dataclass
class LambekReport:
    iota: FinFn
    h: FinFn
    iota_after_h: bool
    h_after_iota: bool
    iota_is_homomorphism: bool

    @property
    def passed(self) -> bool:
        return self.iota_after_h and self.h_after_iota

    def to_dict(self) -> dict:
        return {
            "iota": self.iota.lines(),
            "h": self.h.lines(),
            "iota_after_h_is_id": self.iota_after_h,
            "h_after_iota_is_id": self.h_after_iota,
            "iota_is_homomorphism": self.iota_is_homomorphism,
            "passed": self.passed,
        }


def lambek_verify(initial: Algebra, chain: Optional[Chain] = None) -> LambekReport:
    """Invert the structure map of an initial algebra by folding.

    ``h`` is the fold from ``(mu, iota)`` into ``(F(mu), F(iota))``; both
    ``iota . h`` and ``h . iota`` are then compared with identities.
    """
    F = initial.functor
    iota = initial.structure
    shifted = Algebra(F, apply_obj(F, initial.carrier), apply_mor(F, iota))
    h = fold_from_initial(initial, shifted, chain)
    return LambekReport(
        iota=iota,
        h=h,
        iota_after_h=compose(iota, h) == identity_fn(initial.carrier),
        h_after_iota=compose(h, iota) == identity_fn(shifted.carrier),
        iota_is_homomorphism=is_homomorphism(iota, shifted, initial),
    )
