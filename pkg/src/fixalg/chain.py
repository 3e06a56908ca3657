"""The initial chain ``0 -> F(0) -> F(F(0)) -> ...`` and what it yields.

Stage ``n+1`` is ``F`` applied to stage ``n``; the first link is the empty map
and every later link is ``F`` applied to the previous one.  With tagged sums
and pairs every link is an inclusion, so the chain converges exactly when a
link is a bijection, and then the limit is the stage it starts from.

Only the finite prefix is ever built: a chain that keeps growing is reported
as not converging within the stage budget.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import (
    EnumerationTooLarge,
    FunctorMismatch,
    NotAnIso,
    NotConverged,
    NotInitial,
    StageExplosion,
)
from .finset import (
    EMPTY,
    FinFn,
    FinSet,
    Iso,
    all_functions,
    compose,
    empty_fn,
    function_count,
    identity_fn,
    inverse,
    is_bijection,
)
from .functor import Algebra, FunctorExpr, apply_mor, apply_obj, cardinality, is_homomorphism, show

DEFAULT_MAX_STAGE = 64
DEFAULT_CAP = 100_000


@dataclass(frozen=True)
class Chain:
    functor: FunctorExpr
    stages: tuple[FinSet, ...]
    links: tuple[FinFn, ...]
    max_stage: int

    def sizes(self) -> list[int]:
        return [len(s) for s in self.stages]

    def converged(self) -> bool:
        return bool(self.links) and is_bijection(self.links[-1])

    def stage(self, n: int) -> FinSet:
        """Stage ``n``, also past the computed prefix once the chain has converged."""
        if n < len(self.stages):
            return self.stages[n]
        if self.converged():
            return self.stages[-1]
        raise IndexError(f"stage {n} was not computed (prefix has {len(self.stages)} stages)")


def build_chain(F: FunctorExpr, max_stage: int = DEFAULT_MAX_STAGE, cap: int = DEFAULT_CAP) -> Chain:
    """Build stages ``0..max_stage``, stopping early at the first bijective link.

    On early stop the chain holds stages ``0..n+1`` and links ``0..n`` where
    link ``n`` is the bijection.
    """
    if max_stage < 1:
        raise ValueError("max_stage must be at least 1")
    stages = [EMPTY]
    links: list[FinFn] = []
    for n in range(max_stage):
        size = cardinality(F, len(stages[-1]))
        if size > cap:
            raise StageExplosion(
                f"stage {n + 1} of {show(F)} would have {size} elements, over the cap of {cap}"
            )
        nxt = apply_obj(F, stages[-1])
        link = empty_fn(nxt) if n == 0 else apply_mor(F, links[-1])
        stages.append(nxt)
        links.append(link)
        if is_bijection(link):
            break
    return Chain(F, tuple(stages), tuple(links), max_stage)


def detect_convergence(chain: Chain) -> Optional[int]:
    for n, link in enumerate(chain.links):
        if is_bijection(link):
            return n
    return None


def connecting_map(chain: Chain, n: int, m: int) -> FinFn:
    """The composite of links ``n .. m-1``, a map from stage ``n`` to stage ``m``."""
    if not 0 <= n <= m < len(chain.stages):
        raise IndexError(f"no connecting map {n} -> {m} in a chain of {len(chain.stages)} stages")
    result = identity_fn(chain.stages[n])
    for k in range(n, m):
        result = compose(chain.links[k], result)
    return result


def _require_converged(chain: Chain, stage: int) -> None:
    if not 0 <= stage < len(chain.links) or not is_bijection(chain.links[stage]):
        raise NotConverged(f"the chain of {show(chain.functor)} has no bijective link at stage {stage}")


def extract_initial_algebra(chain: Chain, stage: int) -> Algebra:
    """The algebra on stage ``stage`` whose structure map inverts the link there."""
    _require_converged(chain, stage)
    return Algebra(chain.functor, chain.stages[stage], inverse(chain.links[stage]))


def fold_stages(chain: Chain, stage: int, target: Algebra) -> list[FinFn]:
    """The maps ``f_0 .. f_stage`` with ``f_0`` empty and ``f_{n+1} = beta . F(f_n)``."""
    if target.functor != chain.functor:
        raise FunctorMismatch(
            f"target algebra is for {show(target.functor)}, chain is for {show(chain.functor)}"
        )
    _require_converged(chain, stage)
    F = chain.functor
    maps = [empty_fn(target.carrier)]
    for _ in range(stage):
        maps.append(compose(target.structure, apply_mor(F, maps[-1])))
    return maps


def fold_via_chain(chain: Chain, stage: int, target: Algebra) -> FinFn:
    """The unique homomorphism from the chain's initial algebra into ``target``.

    The link at ``stage`` is an inclusion that happens to be onto, so the last
    stage map already has the initial carrier as its domain.
    """
    return fold_stages(chain, stage, target)[-1]


@dataclass
class ChainResult:
    chain: Chain
    converged_at: Optional[int]
    algebra: Optional[Algebra] = None
    lambek_iso: Optional[Iso] = None

    def to_dict(self) -> dict:
        out = {
            "functor": show(self.chain.functor),
            "max_stage": self.chain.max_stage,
            "stage_sizes": self.chain.sizes(),
            "converged_at": self.converged_at,
        }
        if self.algebra is not None:
            out["carrier"] = [str(e) for e in self.algebra.carrier]
            out["structure"] = [[str(x), str(y)] for x, y in self.algebra.structure.items()]
        return out


def analyze(F: FunctorExpr, max_stage: int = DEFAULT_MAX_STAGE, cap: int = DEFAULT_CAP) -> ChainResult:
    chain = build_chain(F, max_stage, cap)
    stage = detect_convergence(chain)
    if stage is None:
        return ChainResult(chain, None)
    algebra = extract_initial_algebra(chain, stage)
    return ChainResult(chain, stage, algebra, Iso(chain.links[stage], algebra.structure))


@dataclass
class HomCheck:
    count: int
    homomorphisms: list[FinFn] = field(default_factory=list)
    candidates: int = 0

    @property
    def unique(self) -> Optional[FinFn]:
        return self.homomorphisms[0] if self.count == 1 else None


def unique_hom_check(initial: Algebra, target: Algebra, cap: int = DEFAULT_CAP) -> HomCheck:
    """Enumerate every function between the carriers and keep the homomorphisms."""
    if initial.functor != target.functor:
        raise FunctorMismatch(
            f"algebras are for different functors: {show(initial.functor)} and {show(target.functor)}"
        )
    n = function_count(initial.carrier, target.carrier)
    if n > cap:
        raise EnumerationTooLarge(f"{n} candidate functions exceeds the cap of {cap}")
    homs = [
        h for h in all_functions(initial.carrier, target.carrier, cap)
        if is_homomorphism(h, initial, target)
    ]
    return HomCheck(len(homs), homs, n)


def fold_from_initial(
    initial: Algebra,
    target: Algebra,
    chain: Optional[Chain] = None,
    max_stage: int = DEFAULT_MAX_STAGE,
    cap: int = DEFAULT_CAP,
) -> FinFn:
    """Fold out of any initial algebra, not only the one read off the chain.

    The chain's own algebra maps into ``initial`` by a fold; that map must be an
    isomorphism, and the fold into ``target`` is transported along its inverse.
    """
    if initial.functor != target.functor:
        raise FunctorMismatch(
            f"algebras are for different functors: {show(initial.functor)} and {show(target.functor)}"
        )
    if chain is None:
        chain = build_chain(initial.functor, max_stage, cap)
    elif chain.functor != initial.functor:
        raise FunctorMismatch("chain and algebra are for different functors")
    stage = detect_convergence(chain)
    if stage is None:
        raise NotConverged(
            f"the chain of {show(chain.functor)} does not converge within {chain.max_stage} stages"
        )
    fold = fold_via_chain(chain, stage, target)
    if initial == extract_initial_algebra(chain, stage):
        return fold
    u = fold_via_chain(chain, stage, initial)
    if not is_bijection(u):
        raise NotInitial(f"the algebra on {initial.carrier} is not initial")
    return compose(fold, inverse(u))


def morphism_to_fixed_point(
    initial: Algebra,
    X: FinSet,
    theta: Union[Iso, FinFn],
    chain: Optional[Chain] = None,
) -> FinFn:
    """The unique map from the initial algebra into a fixed point ``X ~ F(X)``."""
    F = initial.functor
    if isinstance(theta, FinFn):
        try:
            theta = Iso(theta)
        except NotAnIso:
            raise NotAnIso(f"{theta!r} is not invertible") from None
    fwd = theta.forward
    if fwd.domain != X or fwd.codomain != apply_obj(F, X):
        raise NotAnIso(f"theta must map {X} onto {show(F)} applied to it")
    return fold_from_initial(initial, Algebra(F, X, theta.backward), chain)
