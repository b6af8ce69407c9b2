"""Greedy computation of one abductive or one contrastive explanation.

Both procedures scan the features once, keeping three disjoint sets
(candidates, dropped, picked) that always partition the feature set, and a
pair of points v_low <= v_up bracketing the box reasoned about. Each scanned
feature costs exactly two oracle calls, so a full run costs at most 2N+2
calls including the two that establish the starting invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .classifiers import ClassifierOracle
from .domain import Explanation, ExplanationKind, FeatureSpace, Point


class SeedBreaksInvariant(RuntimeError):
    """The caller-supplied seed already violates the working invariant.

    For an AXp seed this means freeing the seed changes the corner
    predictions; for a CXp seed, fixing it makes them agree. Either way the
    oracle is not monotone or the caller passed a bad seed.
    """


class NoCxpExists(RuntimeError):
    """The classifier is constant over the whole box, so no CXp exists."""


@dataclass
class ExplainerState:
    """Working state of one explanation run; the three sets partition 1..N."""

    space: FeatureSpace
    candidates: set[int]
    dropped: set[int]
    picked: set[int]
    v_low: list
    v_up: list

    def check_partition(self) -> None:
        n = self.space.arity
        assert len(self.candidates) + len(self.dropped) + len(self.picked) == n
        assert self.candidates.isdisjoint(self.dropped)
        assert self.candidates.isdisjoint(self.picked)
        assert self.dropped.isdisjoint(self.picked)

    def low_point(self) -> Point:
        return Point(tuple(self.v_low))

    def up_point(self) -> Point:
        return Point(tuple(self.v_up))


def free_attr(i: int, v: Point, state: ExplainerState, from_set: set[int], to_set: set[int]) -> ExplainerState:
    """Let feature i range over its whole domain, moving it between sets."""
    assert i in from_set, f"feature {i} not in the source set"
    from_set.discard(i)
    to_set.add(i)
    state.v_low[i - 1] = state.space.domain(i).lower
    state.v_up[i - 1] = state.space.domain(i).upper
    return state


def fix_attr(i: int, v: Point, state: ExplainerState, from_set: set[int], to_set: set[int]) -> ExplainerState:
    """Pin feature i to its value in v, moving it between sets."""
    assert i in from_set, f"feature {i} not in the source set"
    from_set.discard(i)
    to_set.add(i)
    state.v_low[i - 1] = v.coordinate(i)
    state.v_up[i - 1] = v.coordinate(i)
    return state


def _prepare(v: Point, oracle: ClassifierOracle, seed: Iterable[int], order: Optional[Sequence[int]]):
    space = oracle.space
    space.validate_point(v)
    seed_set = space.validate_features(seed)
    if order is None:
        order_seq: Sequence[int] = tuple(space.features)
    else:
        order_seq = tuple(order)
        if sorted(order_seq) != list(space.features):
            raise ValueError(f"order must be a permutation of 1..{space.arity}")
    return space, seed_set, order_seq


def find_axp(
    v: Point,
    oracle: ClassifierOracle,
    seed: Iterable[int] = frozenset(),
    order: Optional[Sequence[int]] = None,
) -> Explanation:
    """Compute one subset-minimal abductive explanation for v's prediction.

    Starts from the box pinned to v, frees the seed features, then greedily
    tries to free each remaining candidate in `order`; a feature is kept
    (picked) only when freeing it lets the two corner predictions diverge.
    The result is disjoint from the seed. Raises SeedBreaksInvariant if the
    corner predictions already diverge after freeing the seed alone.
    """
    space, seed_set, order_seq = _prepare(v, oracle, seed, order)
    state = ExplainerState(
        space=space,
        candidates=set(space.features),
        dropped=set(),
        picked=set(),
        v_low=list(v.values),
        v_up=list(v.values),
    )
    for i in sorted(seed_set):
        free_attr(i, v, state, state.candidates, state.dropped)
    if oracle.classify(state.low_point()) != oracle.classify(state.up_point()):
        raise SeedBreaksInvariant(f"freeing seed {sorted(seed_set)} already changes the prediction")
    for i in order_seq:
        if i not in state.candidates:
            continue
        free_attr(i, v, state, state.candidates, state.dropped)
        if oracle.classify(state.low_point()) != oracle.classify(state.up_point()):
            fix_attr(i, v, state, state.dropped, state.picked)
        state.check_partition()
    return Explanation(ExplanationKind.AXP, frozenset(state.picked))


def find_cxp(
    v: Point,
    oracle: ClassifierOracle,
    seed: Iterable[int] = frozenset(),
    order: Optional[Sequence[int]] = None,
) -> Explanation:
    """Compute one subset-minimal contrastive explanation for v's prediction.

    Starts from the whole domain box, fixes the seed features to v, then
    greedily tries to fix each remaining candidate; a feature is kept
    (picked, i.e. left free) only when fixing it makes the two corner
    predictions agree. The result is disjoint from the seed. Raises
    NoCxpExists when the classifier is constant over the box (empty seed),
    and SeedBreaksInvariant when fixing a nonempty seed already equalizes
    the corners.
    """
    space, seed_set, order_seq = _prepare(v, oracle, seed, order)
    state = ExplainerState(
        space=space,
        candidates=set(space.features),
        dropped=set(),
        picked=set(),
        v_low=[d.lower for d in space.domains],
        v_up=[d.upper for d in space.domains],
    )
    for i in sorted(seed_set):
        fix_attr(i, v, state, state.candidates, state.dropped)
    if oracle.classify(state.low_point()) == oracle.classify(state.up_point()):
        if not seed_set:
            raise NoCxpExists("the classifier is constant over the feature space box")
        raise SeedBreaksInvariant(f"fixing seed {sorted(seed_set)} already forces the prediction")
    for i in order_seq:
        if i not in state.candidates:
            continue
        fix_attr(i, v, state, state.candidates, state.dropped)
        if oracle.classify(state.low_point()) == oracle.classify(state.up_point()):
            free_attr(i, v, state, state.dropped, state.picked)
        state.check_partition()
    return Explanation(ExplanationKind.CXP, frozenset(state.picked))
