"""SAT-guided complete enumeration of all explanations, plus the duality
checker and the exhaustive reference enumerator used to validate it.

The loop keeps a CNF over one selector variable per feature (1 = free,
0 = fixed). Each model picks a feature split; a two-call corner check decides
whether the fixed side forces the prediction (then the split extends to an
abductive explanation) or the free side admits a change (then it extends to
a contrastive one). Each reported explanation adds one blocking clause:
positive over an AXp's features, negative over a CXp's. One extra
satisfiability call proves completion, so a finished run makes exactly
len(axps) + len(cxps) + 1 solver calls.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from .classifiers import ClassifierOracle, CountingOracle
from .domain import Explanation, ExplanationKind, Point, corner_points
from .explainer import SeedBreaksInvariant, find_axp, find_cxp
from .satcore import Clause, CnfFormula, solve


class InternalConsistencyError(RuntimeError):
    """A solver model led to a seed the explainer rejected.

    The enumeration loop constructs seeds that are valid by construction for
    monotone oracles, so this indicates a non-monotone oracle.
    """


@dataclass
class EnumerationReport:
    """Everything one enumeration run produced."""

    axps: list[Explanation] = field(default_factory=list)
    cxps: list[Explanation] = field(default_factory=list)
    sat_calls: int = 0
    oracle_calls: int = 0
    elapsed: float = 0.0
    classify_seconds: float = 0.0
    complete: bool = False
    formula: Optional[CnfFormula] = None

    def axp_sets(self) -> set[frozenset[int]]:
        return {e.features for e in self.axps}

    def cxp_sets(self) -> set[frozenset[int]]:
        return {e.features for e in self.cxps}


def enumerate_explanations(
    v: Point,
    oracle: ClassifierOracle,
    limit: Optional[int] = None,
    budget: Optional[float] = None,
    order: Optional[Sequence[int]] = None,
    default_polarity: int = 1,
    cache: bool = False,
    callback: Optional[Callable[[Explanation], None]] = None,
) -> EnumerationReport:
    """Enumerate every AXp and CXp of v's prediction.

    Explanations are handed to `callback` as they are found. A completed run
    reports the full families with no repetitions; `limit` (max explanations)
    or `budget` (wall-clock seconds) cut the run short, yielding a prefix of
    a complete enumeration flagged complete=False.
    """
    counting = CountingOracle(oracle, cache=cache)
    space = counting.space
    space.validate_point(v)
    n = space.arity
    all_features = frozenset(space.features)
    formula = CnfFormula(n)
    report = EnumerationReport(formula=formula)
    start = time.perf_counter()
    while True:
        if limit is not None and len(report.axps) + len(report.cxps) >= limit:
            break
        if budget is not None and time.perf_counter() - start > budget:
            break
        model = solve(formula, default_polarity=default_polarity)
        report.sat_calls += 1
        if model is None:
            report.complete = True
            break
        fixed = frozenset(i for i in space.features if model[i - 1] == 0)
        low, up = corner_points(space, v, fixed)
        try:
            if counting.classify(low) == counting.classify(up):
                # the fixed side forces the prediction: some AXp inside it
                expl = find_axp(v, counting, seed=all_features - fixed, order=order)
                report.axps.append(expl)
                formula.add_clause(Clause(tuple(expl.sorted_features())))
            else:
                # the free side admits a change: some CXp inside it
                expl = find_cxp(v, counting, seed=fixed, order=order)
                report.cxps.append(expl)
                formula.add_clause(Clause(tuple(-i for i in expl.sorted_features())))
        except SeedBreaksInvariant as exc:
            raise InternalConsistencyError(
                f"model {model} produced an invalid seed; the oracle is not monotone"
            ) from exc
        if callback is not None:
            callback(expl)
    report.oracle_calls = counting.call_count
    report.classify_seconds = counting.classify_seconds
    report.elapsed = time.perf_counter() - start
    return report


@dataclass(frozen=True)
class DualityCounterexample:
    """Witness that one family member is not a minimal hitting set of the other."""

    kind: ExplanationKind
    features: frozenset[int]
    reason: str


def _as_sets(family: Iterable) -> list[frozenset[int]]:
    out = []
    for member in family:
        if isinstance(member, Explanation):
            out.append(member.features)
        else:
            out.append(frozenset(member))
    return out


def _mhs_failure(candidate: frozenset[int], family: Sequence[frozenset[int]]) -> Optional[str]:
    missed = [t for t in family if not candidate & t]
    if missed:
        return f"misses {sorted(missed[0])}"
    for x in sorted(candidate):
        smaller = candidate - {x}
        if all(smaller & t for t in family):
            return f"not minimal: dropping {x} still hits every set"
    return None


def check_duality(axps: Iterable, cxps: Iterable) -> tuple[bool, Optional[DualityCounterexample]]:
    """Check the hitting-set duality between the two explanation families.

    True iff every AXp is a minimal hitting set of the CXp family and every
    CXp one of the AXp family; on failure, reports the first offender.
    """
    axp_sets = _as_sets(axps)
    cxp_sets = _as_sets(cxps)
    for s in axp_sets:
        reason = _mhs_failure(s, cxp_sets)
        if reason is not None:
            return False, DualityCounterexample(ExplanationKind.AXP, s, reason)
    for s in cxp_sets:
        reason = _mhs_failure(s, axp_sets)
        if reason is not None:
            return False, DualityCounterexample(ExplanationKind.CXP, s, reason)
    return True, None


def brute_force_explanations(
    v: Point,
    oracle: ClassifierOracle,
    max_features: int = 16,
) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """Reference enumeration scanning all 2^N feature subsets.

    Decides each subset with the same two-call corner check the fast path
    relies on, then keeps the subset-minimal sufficient sets (AXps) and the
    subset-minimal freeing sets that admit a change (CXps).
    """
    space = oracle.space
    space.validate_point(v)
    n = space.arity
    if n > max_features:
        raise ValueError(f"{n} features exceed the brute-force cap of {max_features}")
    features = list(space.features)
    sufficient: dict[frozenset[int], bool] = {}
    for size in range(n + 1):
        for combo in combinations(features, size):
            fixed = frozenset(combo)
            low, up = corner_points(space, v, fixed)
            sufficient[fixed] = oracle.classify(low) == oracle.classify(up)
    axps = [
        s
        for s, ok in sufficient.items()
        if ok and all(not sufficient[s - {i}] for i in s)
    ]
    all_features = frozenset(features)
    changeable = {s: not sufficient[all_features - s] for s in sufficient}
    cxps = [
        s
        for s, ok in changeable.items()
        if ok and all(not changeable[s - {i}] for i in s)
    ]
    key = lambda s: (len(s), sorted(s))
    return sorted(axps, key=key), sorted(cxps, key=key)
