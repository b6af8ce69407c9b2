import random
import time

import pytest

from conftest import assert_subset_minimal

from monoxp import (
    ClassOrder,
    CountingOracle,
    ExplanationKind,
    FeatureDomain,
    FeatureSpace,
    GradeClassifier,
    InternalConsistencyError,
    Point,
    brute_force_explanations,
    check_duality,
    enumerate_explanations,
    random_monotone_dnf,
)


def family_sets(explanations):
    return {e.features for e in explanations}


class TestGradeEnumeration:
    def test_exact_families_and_call_counts(self, grade):
        report = enumerate_explanations(Point((10, 10, 5, 0)), grade)
        assert report.complete
        assert report.axp_sets() == {frozenset({1, 2})}
        assert report.cxp_sets() == {frozenset({1}), frozenset({2})}
        assert report.sat_calls == 4

    def test_streaming_callback_sees_every_explanation(self, grade):
        seen = []
        report = enumerate_explanations(Point((10, 10, 5, 0)), grade, callback=seen.append)
        assert len(seen) == len(report.axps) + len(report.cxps) == 3

    def test_uniqueness(self, grade):
        report = enumerate_explanations(Point((10, 10, 5, 0)), grade)
        assert len(report.axps) == len(report.axp_sets())
        assert len(report.cxps) == len(report.cxp_sets())


class TestCornerCases:
    def test_constant_classifier(self, constant):
        report = enumerate_explanations(Point((0, 0)), constant)
        assert report.complete
        assert [e.features for e in report.axps] == [frozenset()]
        assert report.cxps == []
        assert report.sat_calls == 2

    def test_majority(self, majority):
        report = enumerate_explanations(Point((1, 1, 1)), majority)
        two_subsets = {frozenset(s) for s in ({1, 2}, {1, 3}, {2, 3})}
        assert report.axp_sets() == two_subsets
        assert report.cxp_sets() == two_subsets
        assert report.sat_calls == 7

    def test_limit_yields_incomplete_prefix(self, grade):
        report = enumerate_explanations(Point((10, 10, 5, 0)), grade, limit=1)
        assert not report.complete
        assert len(report.axps) + len(report.cxps) == 1
        assert report.sat_calls == 1

    def test_budget_yields_incomplete_prefix(self, grade):
        class Slow(GradeClassifier):
            def classify(self, point):
                time.sleep(0.02)
                return super().classify(point)

        report = enumerate_explanations(Point((10, 10, 5, 0)), Slow(), budget=0.01)
        assert not report.complete

    def test_nondeterministic_oracle_is_reported(self):
        # equal corner labels pick the abductive branch, then the answers
        # change under the explainer's feet
        class Flaky:
            def __init__(self):
                self.space = FeatureSpace(tuple(FeatureDomain("boolean", 0, 1) for _ in range(2)))
                self.classes = ClassOrder(("a", "b"))
                self.script = iter(("a", "a", "b", "a"))

            def classify(self, point):
                return next(self.script, "a")

        with pytest.raises(InternalConsistencyError):
            enumerate_explanations(Point((1, 1)), Flaky())


class TestAgainstBruteForce:
    @pytest.mark.parametrize("seed", range(12))
    def test_families_match(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 7)
        clf = random_monotone_dnf(n, rng.randint(1, n), rng)
        v = Point(tuple(rng.randint(0, 1) for _ in range(n)))
        report = enumerate_explanations(v, clf)
        axps, cxps = brute_force_explanations(v, clf)
        assert report.complete
        assert report.axp_sets() == set(axps)
        assert report.cxp_sets() == set(cxps)
        assert report.sat_calls == len(report.axps) + len(report.cxps) + 1
        ok, counterexample = check_duality(report.axps, report.cxps)
        assert ok, counterexample
        for expl in report.axps + report.cxps:
            assert_subset_minimal(expl, v, clf)

    def test_grade_brute_force(self, grade):
        axps, cxps = brute_force_explanations(Point((10, 10, 5, 0)), grade)
        assert axps == [frozenset({1, 2})]
        assert set(cxps) == {frozenset({1}), frozenset({2})}

    def test_constant_brute_force(self, constant):
        axps, cxps = brute_force_explanations(Point((0, 0)), constant)
        assert axps == [frozenset()]
        assert cxps == []

    def test_cap_refused(self):
        rng = random.Random(0)
        clf = random_monotone_dnf(5, 3, rng)
        v = Point((1, 1, 1, 1, 1))
        with pytest.raises(ValueError):
            brute_force_explanations(v, clf, max_features=4)


class TestSatisfiabilityCertificate:
    def test_satisfiable_source_exceeds_half(self):
        from monoxp import AppendixCnfClassifier

        clf = AppendixCnfClassifier(2, [[1, 2], [-1, -2]])  # satisfiable source CNF
        report = enumerate_explanations(Point((1, 1, 1, 1)), clf)
        assert len(report.axps) == 4 > clf.space.arity / 2
        zeros = enumerate_explanations(Point((0, 0, 0, 0)), clf)
        assert len(zeros.cxps) == 4 > clf.space.arity / 2

    def test_unsatisfiable_source_stays_at_half(self):
        from monoxp import AppendixCnfClassifier

        clf = AppendixCnfClassifier(1, [[1], [-1]])  # unsatisfiable source CNF
        report = enumerate_explanations(Point((1, 1)), clf)
        assert report.axp_sets() == {frozenset({1, 2})}
        assert len(report.axps) == 1 <= clf.space.arity / 2


class TestDualityChecker:
    def test_running_example_families(self):
        ok, counterexample = check_duality([{1, 2}], [{1}, {2}])
        assert ok and counterexample is None

    def test_missing_hit_detected(self):
        ok, counterexample = check_duality([{1}], [{2}])
        assert not ok
        assert counterexample.kind is ExplanationKind.AXP
        assert "misses" in counterexample.reason

    def test_non_minimal_detected(self):
        ok, counterexample = check_duality([{1, 2}], [{1}])
        assert not ok
        assert "not minimal" in counterexample.reason

    def test_majority_families(self):
        two_subsets = [{1, 2}, {1, 3}, {2, 3}]
        ok, _ = check_duality(two_subsets, two_subsets)
        assert ok

    def test_empty_axp_against_empty_family(self):
        ok, _ = check_duality([frozenset()], [])
        assert ok


class TestCounters:
    def test_memo_cache_changes_counts_not_families(self, grade):
        plain = enumerate_explanations(Point((10, 10, 5, 0)), grade)
        cached = enumerate_explanations(Point((10, 10, 5, 0)), grade, cache=True)
        assert cached.axp_sets() == plain.axp_sets()
        assert cached.cxp_sets() == plain.cxp_sets()
        assert cached.oracle_calls <= plain.oracle_calls

    def test_reported_oracle_calls_match_wrapper(self, grade):
        counting = CountingOracle(grade)
        report = enumerate_explanations(Point((10, 10, 5, 0)), counting)
        assert counting.call_count == report.oracle_calls
