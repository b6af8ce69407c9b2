"""Shared fixtures and independent reference checks.

The semantic checks here decide explanation properties by exhaustive grid
enumeration, straight from the definitions, so they stay independent of the
two-call corner shortcut used by the library.
"""

from __future__ import annotations

import itertools

import pytest

from monoxp import (
    ClassOrder,
    FeatureDomain,
    FeatureSpace,
    GradeClassifier,
    LinearThresholdClassifier,
    MonotoneDnfClassifier,
    Point,
    verify_axp,
    verify_cxp,
)


@pytest.fixture
def grade():
    return GradeClassifier()


@pytest.fixture
def majority():
    # 3-input majority vote as a positive DNF: any two inputs at 1
    return MonotoneDnfClassifier(3, [[1, 2], [1, 3], [2, 3]])


@pytest.fixture
def constant():
    space = FeatureSpace(tuple(FeatureDomain("boolean", 0, 1) for _ in range(2)))
    return LinearThresholdClassifier(space, [1, 1], [], ClassOrder(("only",)))


def boolean_space(n):
    return FeatureSpace(tuple(FeatureDomain("boolean", 0, 1) for _ in range(n)))


def grid_points(space):
    """Every point of a discrete (boolean/integer) feature space."""
    axes = []
    for dom in space.domains:
        assert dom.discrete, "grid enumeration needs discrete domains"
        axes.append(range(int(dom.lower), int(dom.upper) + 1))
    for values in itertools.product(*axes):
        yield Point(values)


def semantic_axp(features, v, oracle):
    """Definition-level sufficiency: every completion off `features` agrees."""
    features = set(features)
    target = oracle.classify(v)
    axes = []
    for i in oracle.space.features:
        if i in features:
            axes.append((v.coordinate(i),))
        else:
            dom = oracle.space.domain(i)
            axes.append(tuple(range(int(dom.lower), int(dom.upper) + 1)))
    return all(oracle.classify(Point(values)) == target for values in itertools.product(*axes))


def semantic_cxp(features, v, oracle):
    """Definition-level changeability: some completion over `features` disagrees."""
    fixed = set(oracle.space.features) - set(features)
    return not semantic_axp(fixed, v, oracle)


def truth_table_sat(num_vars, clauses):
    """Exhaustive satisfiability of a clause list over 1..num_vars."""
    for bits in itertools.product((0, 1), repeat=num_vars):
        if all(any((l > 0) == (bits[abs(l) - 1] == 1) for l in clause) for clause in clauses):
            return True
    return False


def assert_subset_minimal(expl, v, oracle):
    """Drop-one audit: the set passes its check, every one-smaller set fails."""
    check = verify_axp if expl.kind.value == "axp" else verify_cxp
    assert check(expl.features, v, oracle), f"{expl} does not hold"
    for i in sorted(expl.features):
        assert not check(expl.features - {i}, v, oracle), f"{expl} not minimal: {i} removable"
