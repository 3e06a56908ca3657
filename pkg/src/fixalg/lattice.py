"""Least fixed points of monotone operators on finite powerset lattices.

Iterating from the empty set is the initial chain again, read in the poset of
subsets ordered by inclusion: stage ``n+1`` is ``step`` of stage ``n`` and the
link between consecutive stages is the inclusion.  In a finite lattice the
chain stops growing after finitely many steps, and the union of all stages
(the limit stage) is simply the last one.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional

from .errors import EnumerationTooLarge, FixalgError, NotAscending

EXHAUSTIVE_CAP = 12


def _sort_key(x):
    return getattr(x, "sort_key", lambda: str(x))()


def sorted_points(points: Iterable[Hashable]) -> list:
    return sorted(points, key=_sort_key)


class PowersetLattice:
    """Subsets of a finite universe, ordered by inclusion."""

    __slots__ = ("universe",)

    def __init__(self, universe: Iterable[Hashable]):
        self.universe = frozenset(universe)

    @property
    def bottom(self) -> frozenset:
        return frozenset()

    @property
    def top(self) -> frozenset:
        return self.universe

    def __repr__(self) -> str:
        return f"PowersetLattice({len(self.universe)} elements)"

    def subsets(self) -> Iterable[frozenset]:
        """Every subset of the universe, smallest first."""
        elems = sorted_points(self.universe)
        return (
            frozenset(c)
            for r in range(len(elems) + 1)
            for c in itertools.combinations(elems, r)
        )


@dataclass(frozen=True)
class MonotoneOp:
    lattice: PowersetLattice
    step: Callable[[frozenset], frozenset]

    def __call__(self, point: frozenset) -> frozenset:
        out = frozenset(self.step(frozenset(point)))
        if not out <= self.lattice.universe:
            stray = sorted_points(out - self.lattice.universe)
            raise FixalgError(f"operator leaves the universe: {', '.join(map(str, stray))}")
        return out


@dataclass
class KleeneResult:
    fixed_point: frozenset
    iterations: int
    trace: list[frozenset]

    def deltas(self) -> list[frozenset]:
        """Elements added by each productive step."""
        return [b - a for a, b in zip(self.trace, self.trace[1:])][: self.iterations]

    def report_lines(self) -> list[str]:
        lines = []
        for n, delta in enumerate(self.deltas(), start=1):
            lines.append(f"I_{n} = I_{n - 1} + {{{', '.join(map(str, sorted_points(delta)))}}}")
        lines.append(
            f"I_{self.iterations + 1} = I_{self.iterations}: stable; "
            f"the union of the chain I_0 <= I_1 <= ... is I_{self.iterations}"
        )
        lines.append(
            f"fixed point ({len(self.fixed_point)} elements): "
            + "{" + ", ".join(map(str, sorted_points(self.fixed_point))) + "}"
        )
        return lines


def kleene_lfp(op: MonotoneOp) -> KleeneResult:
    """Iterate ``I_{n+1} = op(I_n)`` from the empty set until it repeats.

    The trace ends with the repeated point.  A step that drops an element
    aborts with NotAscending: the operator cannot be monotone.
    """
    current = op.lattice.bottom
    trace = [current]
    while True:
        nxt = op(current)
        trace.append(nxt)
        if not current <= nxt:
            lost = sorted_points(current - nxt)
            raise NotAscending(
                f"step {len(trace) - 1} drops {', '.join(map(str, lost))}", current, nxt
            )
        if nxt == current:
            return KleeneResult(current, len(trace) - 2, trace)
        current = nxt


def check_fixed(op: MonotoneOp, point: Iterable[Hashable]) -> bool:
    point = frozenset(point)
    return op(point) == point


@dataclass
class MonotoneReport:
    exhaustive: bool
    pairs_checked: int
    violations: list[tuple[frozenset, frozenset]] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        return not self.violations


def check_monotone(
    op: MonotoneOp,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
    samples: int = 2000,
    seed: int = 0,
    max_violations: int = 20,
) -> MonotoneReport:
    """Look for ``I <= J`` with ``op(I) not <= op(J)``.

    Every comparable pair is tried when the universe has at most
    ``exhaustive_cap`` elements; otherwise ``samples`` random pairs are drawn
    from a seeded generator.
    """
    universe = sorted_points(op.lattice.universe)
    violations: list[tuple[frozenset, frozenset]] = []
    if len(universe) <= exhaustive_cap:
        subsets = list(op.lattice.subsets())
        image = {s: op(s) for s in subsets}
        checked = 0
        for big in subsets:
            members = sorted_points(big)
            for r in range(len(members) + 1):
                for small in itertools.combinations(members, r):
                    small = frozenset(small)
                    checked += 1
                    if not image[small] <= image[big]:
                        if len(violations) < max_violations:
                            violations.append((small, big))
        return MonotoneReport(True, checked, violations)
    rng = random.Random(seed)
    for _ in range(samples):
        big = frozenset(x for x in universe if rng.random() < 0.5)
        small = frozenset(x for x in big if rng.random() < 0.5)
        if not op(small) <= op(big) and len(violations) < max_violations:
            violations.append((small, big))
    return MonotoneReport(False, samples, violations)


@dataclass
class LeastReport:
    candidate: frozenset
    candidate_is_fixed: bool
    fixed_points: list[frozenset]
    not_below: list[frozenset]

    @property
    def least(self) -> bool:
        return self.candidate_is_fixed and not self.not_below


def check_least(
    op: MonotoneOp,
    candidate: Iterable[Hashable],
    exhaustive_cap: int = EXHAUSTIVE_CAP,
) -> LeastReport:
    """Enumerate all fixed points and compare ``candidate`` against each."""
    candidate = frozenset(candidate)
    n = len(op.lattice.universe)
    if n > exhaustive_cap:
        raise EnumerationTooLarge(
            f"universe of {n} elements is over the exhaustive cap of {exhaustive_cap}"
        )
    fixed = [s for s in op.lattice.subsets() if op(s) == s]
    return LeastReport(
        candidate,
        candidate in fixed,
        fixed,
        [s for s in fixed if not candidate <= s],
    )


def least_fixed_point_by_enumeration(op: MonotoneOp, exhaustive_cap: int = EXHAUSTIVE_CAP) -> Optional[frozenset]:
    """The inclusion-least fixed point found by brute force, if there is one."""
    report = check_least(op, frozenset(), exhaustive_cap)
    for s in report.fixed_points:
        if all(s <= t for t in report.fixed_points):
            return s
    return None


def complement_op(lattice: PowersetLattice) -> MonotoneOp:
    """``I -> universe - I``: the stock example of an operator that is not monotone."""
    return MonotoneOp(lattice, lambda s: lattice.universe - s)
