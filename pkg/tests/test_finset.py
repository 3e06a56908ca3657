import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixalg.errors import DomainMismatch, EnumerationTooLarge, NotAnIso, NotTotal, OutOfCodomain, ParseError
from fixalg.finset import (
    EMPTY,
    UNIT,
    Atom,
    FinFn,
    FinSet,
    In,
    Inl,
    Inr,
    Iso,
    Pair,
    all_functions,
    atoms,
    compose,
    elem,
    empty_fn,
    identity_fn,
    inverse,
    is_bijection,
)

a, b, c = Atom("a"), Atom("b"), Atom("c")


def fn(dom, cod, pairs):
    return FinFn(dom, cod, {Atom(x): Atom(y) for x, y in pairs})


# --- elements ------------------------------------------------------------

elems = st.recursive(
    st.one_of(st.just(UNIT), st.sampled_from(["a", "b", "L", "R", "in", "x1", "0"]).map(Atom)),
    lambda kids: st.one_of(
        kids.map(Inl), kids.map(Inr), kids.map(In), st.tuples(kids, kids).map(lambda p: Pair(*p))
    ),
    max_leaves=12,
)


@pytest.mark.parametrize(
    "value, text",
    [
        (UNIT, "*"),
        (a, "a"),
        (Inl(UNIT), "L(*)"),
        (Inr(Pair(a, In(Inl(UNIT)))), "R((a,in(L(*))))"),
        (In(Inr(In(Inl(UNIT)))), "in(R(in(L(*))))"),
    ],
)
def test_serialization(value, text):
    assert str(value) == text
    assert elem(text) == value


@given(elems)
def test_serialization_round_trips(e):
    assert elem(str(e)) == e
    assert hash(elem(str(e))) == hash(e)


@given(elems, elems)
def test_equality_is_structural(e1, e2):
    assert (e1 == e2) == (str(e1) == str(e2))


def test_atoms_named_like_constructors_stay_atoms():
    assert elem("L") == Atom("L")
    assert elem("(in,R)") == Pair(Atom("in"), Atom("R"))
    assert elem("L(in)") == Inl(Atom("in"))


@pytest.mark.parametrize("bad", ["", "L(", "(a)", "a b", "L(a))", "$", "(a,b"])
def test_bad_element_text(bad):
    with pytest.raises(ParseError):
        elem(bad)


def test_invalid_atom_name():
    with pytest.raises(ValueError):
        Atom("a b")


# --- sets ----------------------------------------------------------------

def test_finset_dedups_and_orders():
    s = FinSet([b, a, b, Inl(UNIT)])
    assert len(s) == 3
    assert [str(x) for x in s] == ["L(*)", "a", "b"]
    assert s == FinSet([Inl(UNIT), a, b])
    assert s != atoms("a", "b")


@given(st.lists(elems, max_size=8))
def test_finset_order_is_canonical(xs):
    s = FinSet(xs)
    assert list(s) == sorted(set(xs), key=str)
    assert FinSet(reversed(xs)).elements == s.elements


# --- functions -----------------------------------------------------------

@pytest.mark.parametrize("X", [EMPTY, FinSet([UNIT]), atoms("a", "b")])
def test_identity(X):
    ident = identity_fn(X)
    assert ident.domain == ident.codomain == X
    assert all(ident(x) == x for x in X)


def test_identity_on_empty_is_empty_function():
    assert identity_fn(EMPTY) == empty_fn(EMPTY)
    assert identity_fn(EMPTY).items() == []


def test_compose_pointwise():
    f = fn(atoms("a"), atoms("b"), [("a", "b")])
    g = fn(atoms("b"), atoms("c"), [("b", "c")])
    assert compose(g, f) == fn(atoms("a"), atoms("c"), [("a", "c")])


def test_compose_requires_matching_middle():
    f = fn(atoms("a"), atoms("b"), [("a", "b")])
    with pytest.raises(DomainMismatch):
        compose(f, f)


def test_totality_and_closure_enforced():
    with pytest.raises(NotTotal, match="b"):
        fn(atoms("a", "b"), atoms("a"), [("a", "a")])
    with pytest.raises(OutOfCodomain, match="c"):
        fn(atoms("a"), atoms("a"), [("a", "c")])
    with pytest.raises(DomainMismatch):
        fn(atoms("a"), atoms("a"), [("a", "a"), ("z", "a")])


def test_is_bijection_examples():
    X = atoms("a", "b")
    assert is_bijection(identity_fn(X))
    assert not is_bijection(empty_fn(FinSet([UNIT])))
    swap = fn(X, X, [("a", "b"), ("b", "a")])
    # independent check: every codomain element has exactly one preimage
    assert all(sum(swap(x) == y for x in X) == 1 for y in X)
    assert is_bijection(swap)
    assert Iso(swap).backward == swap


def test_inverse_of_non_bijection():
    with pytest.raises(NotAnIso):
        inverse(fn(atoms("a", "b"), atoms("a", "b"), [("a", "a"), ("b", "a")]))


def test_iso_rejects_mismatched_pair():
    X = atoms("a", "b")
    swap = fn(X, X, [("a", "b"), ("b", "a")])
    with pytest.raises(NotAnIso):
        Iso(swap, identity_fn(X))


def test_all_functions_counts_and_cap():
    X, Y = atoms("a", "b", "c"), atoms("u", "v")
    fns = list(all_functions(X, Y))
    assert len(fns) == 8 == len(set(fns))
    assert len(list(all_functions(EMPTY, EMPTY))) == 1
    assert list(all_functions(X, EMPTY)) == []
    with pytest.raises(EnumerationTooLarge):
        list(all_functions(X, Y, cap=7))


# --- category laws over every function between small sets -----------------

SETS = [atoms(*names) for names in ([], ["a"], ["a", "b"], ["a", "b", "c"])]


@st.composite
def functions(draw, dom=None):
    X = dom if dom is not None else draw(st.sampled_from(SETS))
    Y = draw(st.sampled_from([s for s in SETS if len(s) or not len(X)]))
    values = draw(st.lists(st.sampled_from(Y.elements), min_size=len(X), max_size=len(X))) if len(Y) else []
    return FinFn(X, Y, dict(zip(X.elements, values)))


@st.composite
def composable_triples(draw):
    f = draw(functions())
    g = draw(functions(f.codomain))
    h = draw(functions(g.codomain))
    return f, g, h


@given(composable_triples())
def test_associativity(fgh):
    f, g, h = fgh
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)


@given(functions())
def test_identity_neutrality(f):
    assert compose(identity_fn(f.codomain), f) == f == compose(f, identity_fn(f.domain))


def test_bijections_invert_exhaustively():
    for X, Y in itertools.product(SETS, repeat=2):
        for f in all_functions(X, Y):
            if is_bijection(f):
                g = inverse(f)
                assert compose(g, f) == identity_fn(X)
                assert compose(f, g) == identity_fn(Y)
            else:
                injective = len({f(x) for x in X}) == len(X)
                surjective = {f(x) for x in X} == set(Y)
                assert not (injective and surjective)
