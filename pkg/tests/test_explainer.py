import itertools
import random

import pytest

from conftest import assert_subset_minimal

from monoxp import (
    CountingOracle,
    ExplainerState,
    ExplanationKind,
    NoCxpExists,
    Point,
    SeedBreaksInvariant,
    brute_force_explanations,
    corner_points,
    find_axp,
    find_cxp,
    fix_attr,
    free_attr,
    random_monotone_dnf,
    verify_axp,
    verify_cxp,
)


def fresh_state(oracle, v):
    return ExplainerState(
        space=oracle.space,
        candidates=set(oracle.space.features),
        dropped=set(),
        picked=set(),
        v_low=list(v.values),
        v_up=list(v.values),
    )


class TestStateTransitions:
    def test_free_widens_to_domain_bounds(self, grade):
        v = Point((10, 10, 5, 0))
        state = fresh_state(grade, v)
        free_attr(1, v, state, state.candidates, state.dropped)
        assert state.v_low == [0, 10, 5, 0]
        assert state.v_up == [10, 10, 5, 0]  # v's first coordinate is already the maximum
        assert state.dropped == {1}

    def test_freeing_all_reaches_the_full_box(self, grade):
        v = Point((10, 10, 5, 0))
        state = fresh_state(grade, v)
        for i in grade.space.features:
            free_attr(i, v, state, state.candidates, state.dropped)
        low, up = corner_points(grade.space, v, set())
        assert state.low_point() == low and state.up_point() == up

    def test_fix_restores_instance_value(self, grade):
        v = Point((10, 10, 5, 0))
        state = fresh_state(grade, v)
        free_attr(1, v, state, state.candidates, state.dropped)
        fix_attr(1, v, state, state.dropped, state.picked)
        assert state.v_low[0] == state.v_up[0] == 10
        assert state.picked == {1}

    def test_fix_is_idempotent_on_bounds(self, grade):
        v = Point((10, 10, 5, 0))
        state = fresh_state(grade, v)
        fix_attr(2, v, state, state.candidates, state.dropped)
        before = (list(state.v_low), list(state.v_up))
        fix_attr(2, v, state, state.dropped, state.picked)
        assert (state.v_low, state.v_up) == (list(before[0]), list(before[1]))

    def test_fixing_all_pins_the_instance(self, grade):
        v = Point((10, 10, 5, 0))
        state = fresh_state(grade, v)
        for i in grade.space.features:
            fix_attr(i, v, state, state.candidates, state.dropped)
        assert state.low_point() == v and state.up_point() == v

    def test_moving_an_absent_feature_is_a_logic_error(self, grade):
        v = Point((10, 10, 5, 0))
        state = fresh_state(grade, v)
        with pytest.raises(AssertionError):
            free_attr(1, v, state, state.dropped, state.picked)


class TestFindAxp:
    def test_grade_running_example(self, grade):
        expl = find_axp(Point((10, 10, 5, 0)), grade, order=(1, 2, 3, 4))
        assert expl.kind is ExplanationKind.AXP
        assert expl.features == {1, 2}

    def test_constant_classifier_gives_empty_axp(self, constant):
        expl = find_axp(Point((0, 0)), constant)
        assert expl.features == frozenset()

    def test_majority(self, majority):
        expl = find_axp(Point((1, 1, 1)), majority, order=(1, 2, 3))
        assert expl.features == {2, 3}
        axps, _ = brute_force_explanations(Point((1, 1, 1)), majority)
        assert expl.features in axps

    def test_seed_is_excluded_and_result_valid(self, grade):
        v = Point((10, 10, 5, 0))
        expl = find_axp(v, grade, seed={3, 4})
        assert expl.features == {1, 2}
        assert not expl.features & {3, 4}

    def test_breaking_seed_raises(self, grade):
        with pytest.raises(SeedBreaksInvariant):
            find_axp(Point((10, 10, 5, 0)), grade, seed={1, 2})

    def test_order_must_be_permutation(self, grade):
        with pytest.raises(ValueError):
            find_axp(Point((10, 10, 5, 0)), grade, order=(1, 2))
        with pytest.raises(ValueError):
            find_axp(Point((10, 10, 5, 0)), grade, order=(1, 2, 3, 3))

    def test_call_count_is_exactly_two_per_feature_plus_two(self, grade):
        counting = CountingOracle(grade)
        find_axp(Point((10, 10, 5, 0)), counting)
        assert counting.call_count == 2 * 4 + 2
        counting.reset()
        find_axp(Point((10, 10, 5, 0)), counting, seed={3, 4})
        assert counting.call_count == 2 * (4 - 2) + 2

    def test_memo_cache_changes_counts_not_results(self, grade):
        v = Point((10, 10, 5, 0))
        cached = CountingOracle(grade, cache=True)
        plain = CountingOracle(grade)
        assert find_axp(v, cached).features == find_axp(v, plain).features
        assert cached.call_count <= plain.call_count


class TestFindCxp:
    def test_grade_running_example(self, grade):
        expl = find_cxp(Point((10, 10, 5, 0)), grade, order=(1, 2, 3, 4))
        assert expl.kind is ExplanationKind.CXP
        assert expl.features == {2}

    def test_majority(self, majority):
        expl = find_cxp(Point((1, 1, 1)), majority, order=(1, 2, 3))
        assert expl.features == {2, 3}
        _, cxps = brute_force_explanations(Point((1, 1, 1)), majority)
        assert expl.features in cxps

    def test_constant_classifier_has_no_cxp(self, constant):
        with pytest.raises(NoCxpExists):
            find_cxp(Point((0, 0)), constant)

    def test_breaking_seed_raises(self, grade):
        # fixing everything forces the prediction, so no change is possible
        with pytest.raises(SeedBreaksInvariant):
            find_cxp(Point((10, 10, 5, 0)), grade, seed={1, 2, 3, 4})

    def test_seed_is_excluded(self, grade):
        expl = find_cxp(Point((10, 10, 5, 0)), grade, seed={2})
        assert expl.features == {1}

    def test_call_count_bound(self, majority):
        counting = CountingOracle(majority)
        find_cxp(Point((1, 1, 1)), counting)
        assert counting.call_count == 2 * 3 + 2


class TestEveryOrder:
    def test_majority_all_orders_land_in_the_families(self, majority):
        v = Point((1, 1, 1))
        axps, cxps = brute_force_explanations(v, majority)
        for order in itertools.permutations((1, 2, 3)):
            a = find_axp(v, majority, order=order)
            c = find_cxp(v, majority, order=order)
            assert a.features in axps
            assert c.features in cxps
            assert_subset_minimal(a, v, majority)
            assert_subset_minimal(c, v, majority)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_instances_random_orders(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 7)
        clf = random_monotone_dnf(n, rng.randint(1, n), rng)
        v = Point(tuple(rng.randint(0, 1) for _ in range(n)))
        axps, cxps = brute_force_explanations(v, clf)
        order = list(clf.space.features)
        rng.shuffle(order)
        counting = CountingOracle(clf)
        a = find_axp(v, counting, order=order)
        assert counting.call_count <= 2 * n + 2
        assert a.features in axps
        assert verify_axp(a.features, v, clf)
        assert_subset_minimal(a, v, clf)
        counting.reset()
        c = find_cxp(v, counting, order=order)
        assert counting.call_count <= 2 * n + 2
        assert c.features in cxps
        assert verify_cxp(c.features, v, clf)
        assert_subset_minimal(c, v, clf)
