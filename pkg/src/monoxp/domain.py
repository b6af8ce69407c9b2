"""Feature spaces, points, class orders, and the semantic explanation checks.

Features are indexed 1..N everywhere (API, file formats, wire protocol).
All types here are immutable values and safe to share across threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Number = float | int


class ExplanationKind(str, enum.Enum):
    AXP = "axp"
    CXP = "cxp"


@dataclass(frozen=True)
class FeatureDomain:
    """One ordinal, bounded feature domain: boolean, integer or real."""

    kind: str
    lower: Number
    upper: Number

    KINDS = ("boolean", "integer", "real")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown domain kind {self.kind!r}")
        lo, up = float(self.lower), float(self.upper)
        if not (lo <= up):
            raise ValueError(f"domain bounds out of order: [{self.lower}, {self.upper}]")
        if self.kind == "boolean" and (lo, up) != (0.0, 1.0):
            raise ValueError("boolean domains must have bounds [0, 1]")
        if self.kind == "integer" and not (lo.is_integer() and up.is_integer()):
            raise ValueError(f"integer domain needs integral bounds, got [{self.lower}, {self.upper}]")
        if self.kind == "real" and not (math.isfinite(lo) and math.isfinite(up)):
            raise ValueError("real domains must declare finite bounds")

    @property
    def discrete(self) -> bool:
        return self.kind in ("boolean", "integer")

    def contains(self, value: Number) -> bool:
        if not (self.lower <= value <= self.upper):
            return False
        return not (self.discrete and not float(value).is_integer())

    def sample(self, rng, lower: Optional[Number] = None) -> Number:
        """Draw a domain value uniformly from [lower or self.lower, self.upper]."""
        lo = self.lower if lower is None else lower
        if self.discrete:
            return rng.randint(int(lo), int(self.upper))
        return rng.uniform(float(lo), float(self.upper))


@dataclass(frozen=True)
class FeatureSpace:
    """An ordered product of per-feature domains, optionally named."""

    domains: tuple[FeatureDomain, ...]
    feature_names: Optional[tuple[str, ...]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "domains", tuple(self.domains))
        if len(self.domains) < 1:
            raise ValueError("a feature space needs at least one feature")
        if self.feature_names is not None:
            names = tuple(self.feature_names)
            object.__setattr__(self, "feature_names", names)
            if len(names) != len(self.domains):
                raise ValueError("feature_names length differs from the number of domains")

    @property
    def arity(self) -> int:
        return len(self.domains)

    @property
    def features(self) -> range:
        return range(1, self.arity + 1)

    def domain(self, i: int) -> FeatureDomain:
        """Domain of feature i (1-based)."""
        return self.domains[i - 1]

    def name(self, i: int) -> str:
        if self.feature_names is not None:
            return self.feature_names[i - 1]
        return f"f{i}"

    def lower_point(self) -> "Point":
        return Point(tuple(d.lower for d in self.domains))

    def upper_point(self) -> "Point":
        return Point(tuple(d.upper for d in self.domains))

    def validate_point(self, point: "Point") -> None:
        if len(point.values) != self.arity:
            raise ValueError(f"point arity {len(point.values)} differs from space arity {self.arity}")
        for i, (value, dom) in enumerate(zip(point.values, self.domains), start=1):
            if not dom.contains(value):
                raise ValueError(f"coordinate {i} value {value!r} outside {dom.kind} domain [{dom.lower}, {dom.upper}]")

    def validate_features(self, features: Iterable[int]) -> frozenset[int]:
        out = frozenset(features)
        bad = [i for i in out if not (1 <= i <= self.arity)]
        if bad:
            raise ValueError(f"feature indices out of range 1..{self.arity}: {sorted(bad)}")
        return out


@dataclass(frozen=True)
class Point:
    """A concrete assignment of one value per feature."""

    values: tuple[Number, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError("a point needs at least one coordinate")

    def coordinate(self, i: int) -> Number:
        """Value of feature i (1-based)."""
        return self.values[i - 1]

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ClassOrder:
    """Totally ordered class labels; rank increases with list position."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError("a class order needs at least one label")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("class labels must be distinct")

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def rank(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown class label {label!r}") from None

    def leq(self, a: str, b: str) -> bool:
        return self.rank(a) <= self.rank(b)


@dataclass(frozen=True)
class Explanation:
    """An abductive (AXp) or contrastive (CXp) explanation: a set of feature indices."""

    kind: ExplanationKind
    features: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "features", frozenset(self.features))
        if any(not isinstance(i, int) or i < 1 for i in self.features):
            raise ValueError("explanation features must be positive integers")
        if self.kind is ExplanationKind.CXP and not self.features:
            raise ValueError("a contrastive explanation cannot be empty")

    def sorted_features(self) -> list[int]:
        return sorted(self.features)


def point_leq(a: Point, b: Point) -> bool:
    """Componentwise order on points; partial, not total."""
    if len(a.values) != len(b.values):
        raise ValueError(f"points of different arity: {len(a.values)} vs {len(b.values)}")
    return all(x <= y for x, y in zip(a.values, b.values))


def corner_points(space: FeatureSpace, v: Point, fixed: Iterable[int]) -> tuple[Point, Point]:
    """Lower/upper corner of the box where `fixed` features keep v's values.

    Free features range over their whole domain, so the lower corner takes
    the domain minima and the upper corner the maxima.
    """
    space.validate_point(v)
    fixed_set = space.validate_features(fixed)
    low = list(v.values)
    up = list(v.values)
    for i in space.features:
        if i not in fixed_set:
            low[i - 1] = space.domain(i).lower
            up[i - 1] = space.domain(i).upper
    return Point(tuple(low)), Point(tuple(up))


def verify_axp(features: Iterable[int], v: Point, oracle) -> bool:
    """Does fixing `features` to v's values force the prediction?

    For a monotonic oracle this is decided with two calls, at the corners of
    the box spanned by the free features. Minimality is not checked.
    """
    low, up = corner_points(oracle.space, v, features)
    return oracle.classify(low) == oracle.classify(up)


def verify_cxp(features: Iterable[int], v: Point, oracle) -> bool:
    """Does freeing `features` (rest pinned to v) admit a different prediction?

    Two oracle calls, at the corners of the box spanned by the freed
    features. Minimality is not checked.
    """
    freed = oracle.space.validate_features(features)
    fixed = frozenset(oracle.space.features) - freed
    low, up = corner_points(oracle.space, v, fixed)
    return oracle.classify(low) != oracle.classify(up)


def make_point(values: Sequence[Number]) -> Point:
    return Point(tuple(values))
