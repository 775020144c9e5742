"""Tests for the benchmark suite and the metered objective wrapper."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from soobox import (
    BadDimension,
    BudgetExhausted,
    InvalidBounds,
    Objective,
    OutOfBounds,
    SUITE_NAMES,
    UnknownFunction,
    make_objective,
    shift_from_seed,
    suite_manifest,
    transformed,
)

# =============================================================================
# Suite structure
# =============================================================================


class TestSuiteStructure:
    """Names, ordering, and the 100 x index bias convention."""

    def test_suite_has_eight_functions(self):
        assert len(SUITE_NAMES) == 8

    def test_bias_is_100_times_position(self):
        for pos, name in enumerate(SUITE_NAMES, start=1):
            dim = 2 if name == "rosenbrock" else 1
            obj = make_objective(name, dim, budget=10)
            assert obj.bias == 100.0 * pos
            assert obj.optimum_value == 100.0 * pos

    def test_box_is_plus_minus_five(self):
        obj = make_objective("sphere", 3, budget=1)
        assert np.array_equal(obj.lower, [-5.0, -5.0, -5.0])
        assert np.array_equal(obj.upper, [5.0, 5.0, 5.0])

    def test_ackley_known_optimum_example(self):
        obj = make_objective("ackley", 10, budget=1)
        point, value = obj.known_optimum()
        assert value == 500.0
        assert point.shape == (10,)
        assert np.array_equal(point, obj.shift)

    def test_composite_bias_is_800(self):
        obj = make_objective("composite3", 2, budget=1)
        assert obj.optimum_value == 800.0

    def test_unknown_function_rejected(self):
        with pytest.raises(UnknownFunction):
            make_objective("banana", 2, budget=10)

    def test_rosenbrock_needs_two_dims(self):
        with pytest.raises(BadDimension):
            make_objective("rosenbrock", 1, budget=10)
        make_objective("rosenbrock", 2, budget=10)

    def test_dim_zero_rejected(self):
        with pytest.raises(BadDimension):
            make_objective("sphere", 0, budget=10)


# =============================================================================
# Optimum exactness
# =============================================================================


class TestOptimumExactness:
    """f(x*) must land on the bias to within 1e-12 relative, every function."""

    @pytest.mark.parametrize("name", SUITE_NAMES)
    @pytest.mark.parametrize("dim", [2, 10])
    def test_value_at_optimum(self, name, dim):
        obj = make_objective(name, dim, budget=1)
        value = obj.evaluate(obj.optimum_point)
        assert value == pytest.approx(obj.optimum_value, rel=1e-12, abs=0.0)

    @pytest.mark.parametrize("name", SUITE_NAMES)
    def test_value_at_optimum_is_bit_exact(self, name):
        # The construction is engineered so g(0) == 0.0 in doubles, not
        # merely close; a regression here silently degrades every ratio.
        obj = make_objective(name, 2, budget=1)
        assert obj.evaluate(obj.optimum_point) == obj.optimum_value

    def test_shifted_sphere_worked_example(self):
        obj = make_objective("sphere", 2, budget=2, shift=[0.2, 0.2])
        value = obj.evaluate([0.5, 0.5])
        assert value == pytest.approx(100.18, rel=1e-12)
        assert obj.evaluate([0.2, 0.2]) == 100.0
        assert obj.meter == 2

    def test_scalar_shift_broadcasts(self):
        obj = make_objective("rastrigin", 10, budget=1, shift=0)
        assert np.array_equal(obj.shift, np.zeros(10))
        assert obj.evaluate(np.zeros(10)) == 400.0

    @pytest.mark.parametrize("name", SUITE_NAMES)
    def test_lower_bound_random_sweep(self, name):
        """10^5 uniform samples per dim in {2, 10} never dip below f*."""
        rng = np.random.default_rng(12345)
        for dim in (2, 10):
            if name == "rosenbrock" and dim < 2:
                continue
            obj = make_objective(name, dim, budget=0)
            samples = rng.uniform(-5.0, 5.0, size=(10**5, dim))
            f_star = obj.optimum_value
            for x in samples:
                assert obj.raw(x) >= f_star


# =============================================================================
# Metering
# =============================================================================


class TestMetering:
    """The budget meter advances only on successful evaluations."""

    def test_meter_counts_up(self):
        obj = make_objective("sphere", 2, budget=3)
        assert obj.remaining == 3
        obj.evaluate([0.0, 0.0])
        obj.evaluate([1.0, 1.0])
        assert obj.meter == 2
        assert obj.remaining == 1

    def test_exhaustion_raises_and_freezes_meter(self):
        obj = make_objective("sphere", 2, budget=1)
        obj.evaluate([0.0, 0.0])
        with pytest.raises(BudgetExhausted):
            obj.evaluate([0.0, 0.0])
        assert obj.meter == 1

    def test_out_of_bounds_rejected_without_metering(self):
        obj = make_objective("sphere", 2, budget=5)
        with pytest.raises(OutOfBounds):
            obj.evaluate([5.1, 0.0])
        with pytest.raises(OutOfBounds):
            obj.evaluate([0.0, -5.0000001])
        with pytest.raises(OutOfBounds):
            obj.evaluate([math.nan, 0.0])
        assert obj.meter == 0

    def test_boundary_points_are_inside(self):
        obj = make_objective("sphere", 2, budget=2)
        obj.evaluate([5.0, -5.0])
        assert obj.meter == 1

    def test_wrong_shape_rejected(self):
        obj = make_objective("sphere", 2, budget=5)
        with pytest.raises(ValueError):
            obj.evaluate([0.0, 0.0, 0.0])

    def test_budget_zero_allows_no_evaluations(self):
        obj = make_objective("sphere", 2, budget=0)
        with pytest.raises(BudgetExhausted):
            obj.evaluate([0.0, 0.0])

    def test_values_returned_verbatim(self):
        obj = Objective(lambda x: math.nan, [0.0], [1.0], budget=2)
        assert math.isnan(obj.evaluate([0.5]))
        assert obj.meter == 1


# =============================================================================
# Custom objectives and bounds validation
# =============================================================================


class TestObjectiveValidation:
    def test_reversed_bounds_rejected(self):
        with pytest.raises(InvalidBounds):
            Objective(lambda x: 0.0, [1.0], [0.0], budget=1)

    def test_degenerate_bounds_rejected(self):
        with pytest.raises(InvalidBounds):
            Objective(lambda x: 0.0, [1.0, 0.0], [1.0, 1.0], budget=1)

    def test_non_finite_bounds_rejected(self):
        with pytest.raises(InvalidBounds):
            Objective(lambda x: 0.0, [0.0], [math.inf], budget=1)

    def test_mismatched_bounds_rejected(self):
        with pytest.raises(InvalidBounds):
            Objective(lambda x: 0.0, [0.0, 0.0], [1.0], budget=1)

    def test_shift_outside_box_rejected(self):
        with pytest.raises(ValueError):
            make_objective("sphere", 2, budget=1, shift=[6.0, 0.0])


# =============================================================================
# Deterministic shifts
# =============================================================================


class TestShiftGeneration:
    """The documented LCG recurrence, frozen for cross-platform identity."""

    def test_shift_regression_seed_zero(self):
        # Independent re-derivation of the recurrence, state by state.
        a, c, mask = 6364136223846793005, 1442695040888963407, (1 << 64) - 1
        state = 0
        expected = []
        for _ in range(3):
            state = (a * state + c) & mask
            expected.append(state / 2.0**64 * 4.0 - 2.0)
        assert shift_from_seed(0, 3).tolist() == expected

    def test_same_seed_same_shift(self):
        assert np.array_equal(shift_from_seed(42, 5), shift_from_seed(42, 5))

    def test_prefix_consistency(self):
        # A longer shift vector extends a shorter one from the same seed.
        assert shift_from_seed(7, 3).tolist() == shift_from_seed(7, 6).tolist()[:3]

    @given(seed=st.integers(min_value=0, max_value=2**64 - 1),
           dim=st.integers(min_value=1, max_value=20))
    @settings(max_examples=100, deadline=None)
    def test_components_in_range(self, seed, dim):
        shift = shift_from_seed(seed, dim)
        assert np.all(shift >= -2.0)
        assert np.all(shift < 2.0)

    def test_different_seeds_differ(self):
        assert not np.array_equal(shift_from_seed(0, 4), shift_from_seed(1, 4))


# =============================================================================
# Transforms and the manifest
# =============================================================================


class TestTransformed:
    def test_monotone_transform_keeps_argmin(self):
        base = make_objective("sphere", 2, budget=10)
        warped = transformed(base, lambda v: 2.0 * v + 7.0, "affine")
        assert np.array_equal(warped.optimum_point, base.optimum_point)
        assert warped.optimum_value == 2.0 * base.optimum_value + 7.0
        x = np.array([1.0, -1.0])
        assert warped.evaluate(x) == 2.0 * base.raw(x) + 7.0

    def test_transformed_has_fresh_meter(self):
        base = make_objective("sphere", 2, budget=3)
        base.evaluate([0.0, 0.0])
        warped = transformed(base, math.exp, "exp")
        assert warped.meter == 0
        assert warped.budget == 3


class TestManifest:
    def test_manifest_round_trips_through_json(self):
        manifest = suite_manifest(dim=2)
        again = json.loads(json.dumps(manifest))
        assert again == manifest
        assert [entry["name"] for entry in manifest] == list(SUITE_NAMES)

    def test_manifest_entries_are_complete(self):
        for entry in suite_manifest(dim=10):
            assert entry["f_star"] == 100.0 * entry["index"]
            assert len(entry["shift"]) == 10
            assert entry["lower"] == [-5.0] * 10

    def test_manifest_dim_one_drops_rosenbrock(self):
        names = [entry["name"] for entry in suite_manifest(dim=1)]
        assert "rosenbrock" not in names
        assert len(names) == 7
