"""Tests for de_ops.py module."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ..de_ops import (
    CrossoverSchedule,
    MutationSchedule,
    apply_crossover_pass,
    apply_mutation_pass,
    build_crossover_schedule,
    build_mutation_schedule,
    column_mutation_schedule,
    crossover_pair,
    full_crossover_schedule,
    mutate_component,
)
from ..errors import InvalidDimensionError, ScheduleError
from ..keys import SecretKey
from ..lfsr_rng import StreamLabel, derive_stream
from .reference_values import (
    CROSSED_SPECTRUM,
    DEMO_MUTATION_CONSTANT,
    MUTATED_SPECTRUM,
    SAMPLE_SPECTRUM,
    TEST_KEY_HEX,
)

TEST_KEY = SecretKey.parse(TEST_KEY_HEX)


def _streams(key):
    return (
        derive_stream(key, StreamLabel.CROSSOVER_ROW),
        derive_stream(key, StreamLabel.MUTATION_ROW),
        derive_stream(key, StreamLabel.MUTATION_COL),
    )


@st.composite
def spectra(draw, max_side=8):
    """Random finite complex matrices."""
    rows = draw(st.integers(1, max_side))
    cols = draw(st.integers(1, max_side))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return rng.normal(scale=1000.0, size=(rows, cols)) + 1j * rng.normal(scale=1000.0, size=(rows, cols))


@st.composite
def spectra_with_crossover(draw):
    """A spectrum paired with a random valid crossover schedule of disjoint pairs."""
    spec = draw(spectra())
    rows, cols = spec.shape
    positions = draw(st.permutations([(row, col) for row in range(rows) for col in range(cols)]))
    count = draw(st.integers(0, len(positions) // 2))
    pairs = tuple((positions[2 * i], positions[2 * i + 1]) for i in range(count))
    return spec, CrossoverSchedule((rows, cols), pairs)


@st.composite
def spectra_with_mutation(draw):
    """A spectrum paired with a random mutation schedule."""
    spec = draw(spectra())
    rows, cols = spec.shape
    targets = draw(st.lists(st.tuples(st.integers(0, rows - 1), st.integers(0, cols - 1)), max_size=60))
    return spec, MutationSchedule.from_targets((rows, cols), targets)


class TestCrossoverPair:
    """Tests for crossover_pair."""

    def test_swaps_imaginary_parts(self):
        """4344+0j and 3917+291j become 4344+291j and 3917+0j."""
        out = crossover_pair(SAMPLE_SPECTRUM, (0, 0), (0, 1))

        assert out[0, 0] == 4344 + 291j
        assert out[0, 1] == 3917 + 0j
        np.testing.assert_array_equal(out[1:], SAMPLE_SPECTRUM[1:])

    def test_second_pair_of_first_row(self):
        """3690+0j and 3917-291j become 3690-291j and 3917+0j."""
        out = crossover_pair(SAMPLE_SPECTRUM, (0, 2), (0, 3))

        assert out[0, 2] == 3690 - 291j
        assert out[0, 3] == 3917 + 0j

    def test_is_an_involution(self):
        """Crossing the same pair twice restores the matrix exactly."""
        twice = crossover_pair(crossover_pair(SAMPLE_SPECTRUM, (1, 2), (3, 0)), (1, 2), (3, 0))
        np.testing.assert_array_equal(twice, SAMPLE_SPECTRUM)

    def test_input_is_not_modified(self):
        """The operator returns a new matrix."""
        original = SAMPLE_SPECTRUM.copy()
        crossover_pair(SAMPLE_SPECTRUM, (0, 0), (0, 1))
        np.testing.assert_array_equal(SAMPLE_SPECTRUM, original)

    def test_out_of_bounds(self):
        """Positions outside the matrix are rejected."""
        with pytest.raises(ScheduleError, match="outside"):
            crossover_pair(SAMPLE_SPECTRUM, (0, 0), (4, 0))

    def test_same_position(self):
        """A pair must name two distinct positions."""
        with pytest.raises(ScheduleError, match="same position"):
            crossover_pair(SAMPLE_SPECTRUM, (1, 1), (1, 1))


class TestMutateComponent:
    """Tests for mutate_component."""

    @pytest.mark.parametrize(
        ("pos", "before", "after"),
        [((0, 0), 4344 + 291j, -4339 + 291j), ((1, 0), 110 - 3835j, -105 - 3835j)],
    )
    def test_demo_constant(self, pos, before, after):
        """Real part r becomes 5 - r, imaginary part untouched."""
        spec = np.array([[0j, 0j], [0j, 0j]])
        spec[pos] = before
        assert mutate_component(spec, pos, DEMO_MUTATION_CONSTANT)[pos] == after

    def test_twice_restores(self):
        """Mutating twice with the same constant is the identity."""
        twice = mutate_component(mutate_component(SAMPLE_SPECTRUM, (2, 3), 12345), (2, 3), 12345)
        np.testing.assert_allclose(twice, SAMPLE_SPECTRUM, rtol=0, atol=1e-9)

    def test_out_of_bounds(self):
        """Negative positions are rejected."""
        with pytest.raises(ScheduleError):
            mutate_component(SAMPLE_SPECTRUM, (-1, 0), 5)


class TestBuildCrossoverSchedule:
    """Tests for build_crossover_schedule."""

    def test_four_columns_give_two_pairs(self):
        """Columns (0,1) and (2,3) are paired."""
        stream, _, _ = _streams(TEST_KEY)
        schedule = build_crossover_schedule(4, 4, TEST_KEY, stream)

        assert len(schedule) == 2
        assert [(a[1], b[1]) for a, b in schedule.pairs] == [(0, 1), (2, 3)]
        assert all(a[0] == b[0] for a, b in schedule.pairs)

    def test_single_column_gives_empty_schedule(self):
        """No pair fits in one column."""
        stream, _, _ = _streams(TEST_KEY)
        assert len(build_crossover_schedule(5, 1, TEST_KEY, stream)) == 0

    def test_odd_trailing_column_is_skipped(self):
        """Five columns give two pairs."""
        stream, _, _ = _streams(TEST_KEY)
        schedule = build_crossover_schedule(3, 5, TEST_KEY, stream)
        assert [(a[1], b[1]) for a, b in schedule.pairs] == [(0, 1), (2, 3)]

    def test_pinned_rows(self):
        """Regression rows for the test key on a 4x6 matrix."""
        stream, _, _ = _streams(TEST_KEY)
        schedule = build_crossover_schedule(4, 6, TEST_KEY, stream)

        assert schedule.pairs == (((1, 0), (1, 1)), ((1, 2), (1, 3)), ((1, 4), (1, 5)))

    def test_first_row_comes_from_the_key(self):
        """The first pair uses key mod rows."""
        key = SecretKey(1001)
        stream, _, _ = _streams(key)
        schedule = build_crossover_schedule(7, 2, key, stream)

        assert schedule.pairs == (((1001 % 7, 0), (1001 % 7, 1)),)

    def test_deterministic(self):
        """Equal keys and dimensions give equal schedules."""
        first = build_crossover_schedule(16, 32, TEST_KEY, _streams(TEST_KEY)[0])
        second = build_crossover_schedule(16, 32, TEST_KEY, _streams(TEST_KEY)[0])
        assert first == second


class TestBuildMutationSchedule:
    """Tests for build_mutation_schedule."""

    def test_single_pixel(self):
        """A 1x1 matrix is always targeted at (0,0)."""
        _, rows, cols = _streams(TEST_KEY)
        schedule = build_mutation_schedule(1, 1, TEST_KEY, rows, cols, repeat_factor=3)

        assert schedule.targets == [(0, 0)] * 3

    def test_length(self):
        """The schedule holds M*N*repeat_factor targets."""
        _, rows, cols = _streams(TEST_KEY)
        assert len(build_mutation_schedule(4, 4, TEST_KEY, rows, cols)) == 16
        _, rows, cols = _streams(TEST_KEY)
        assert len(build_mutation_schedule(3, 5, TEST_KEY, rows, cols, repeat_factor=4)) == 60

    def test_pinned_targets(self):
        """Regression targets for the test key on a 4x4 matrix."""
        _, rows, cols = _streams(TEST_KEY)
        schedule = build_mutation_schedule(4, 4, TEST_KEY, rows, cols)

        assert schedule.targets == [
            (1, 1), (1, 0), (1, 3), (1, 1), (2, 1), (1, 2), (3, 3), (0, 3),
            (1, 3), (1, 3), (1, 2), (0, 0), (1, 3), (1, 1), (2, 0), (1, 0),
        ]  # fmt: skip

    def test_first_column_wraps_for_small_keys(self):
        """(key - 128) wraps at 2**256 for keys below 128."""
        key = SecretKey(5)
        _, rows, cols = _streams(key)
        schedule = build_mutation_schedule(3, 7, key, rows, cols)

        assert schedule.targets[0] == (5 % 3, ((1 << 256) - 123) % 7)

    def test_invalid_repeat_factor(self):
        """The repeat factor must be positive."""
        _, rows, cols = _streams(TEST_KEY)
        with pytest.raises(InvalidDimensionError, match="Repeat factor"):
            build_mutation_schedule(2, 2, TEST_KEY, rows, cols, repeat_factor=0)

    def test_invalid_dimensions(self):
        """Empty matrices have no schedule."""
        _, rows, cols = _streams(TEST_KEY)
        with pytest.raises(InvalidDimensionError):
            build_mutation_schedule(0, 4, TEST_KEY, rows, cols)


class TestApplyPasses:
    """Tests for the crossover and mutation passes on the worked example."""

    def test_crossover_pass(self):
        """Crossing every row's adjacent columns reproduces the crossed spectrum bit for bit."""
        crossed = apply_crossover_pass(SAMPLE_SPECTRUM, full_crossover_schedule(4, 4))
        np.testing.assert_array_equal(crossed, CROSSED_SPECTRUM)

    def test_crossover_pass_twice(self):
        """Re-applying the schedule restores the original exactly."""
        schedule = full_crossover_schedule(4, 4)
        restored = apply_crossover_pass(apply_crossover_pass(SAMPLE_SPECTRUM, schedule), schedule)
        np.testing.assert_array_equal(restored, SAMPLE_SPECTRUM)

    def test_mutation_pass(self):
        """Reflecting columns 0 and 2 with constant 5 reproduces the mutated spectrum."""
        mutated = apply_mutation_pass(CROSSED_SPECTRUM, column_mutation_schedule(4, 4), DEMO_MUTATION_CONSTANT)
        np.testing.assert_allclose(mutated, MUTATED_SPECTRUM, rtol=0, atol=1e-9)

    def test_mutation_pass_twice(self):
        """Re-applying the mutation schedule restores the crossed spectrum."""
        schedule = column_mutation_schedule(4, 4)
        once = apply_mutation_pass(CROSSED_SPECTRUM, schedule, DEMO_MUTATION_CONSTANT)
        np.testing.assert_allclose(
            apply_mutation_pass(once, schedule, DEMO_MUTATION_CONSTANT), CROSSED_SPECTRUM, rtol=0, atol=1e-9
        )

    def test_empty_schedules(self):
        """Empty schedules leave the spectrum unchanged."""
        np.testing.assert_array_equal(apply_crossover_pass(SAMPLE_SPECTRUM, CrossoverSchedule((4, 4))), SAMPLE_SPECTRUM)
        empty = MutationSchedule.from_targets((4, 4), [])
        np.testing.assert_array_equal(apply_mutation_pass(SAMPLE_SPECTRUM, empty, 7), SAMPLE_SPECTRUM)

    def test_magnitudes_change(self):
        """The crossover and mutation chain changes some component magnitude by more than 1%."""
        ratio = np.abs(MUTATED_SPECTRUM) / np.abs(SAMPLE_SPECTRUM)
        assert np.any(np.abs(ratio - 1) > 0.01)

    def test_shape_mismatch(self):
        """A schedule built for another shape is rejected."""
        with pytest.raises(InvalidDimensionError, match="cannot be applied"):
            apply_crossover_pass(SAMPLE_SPECTRUM, full_crossover_schedule(2, 4))
        with pytest.raises(InvalidDimensionError, match="cannot be applied"):
            apply_mutation_pass(SAMPLE_SPECTRUM, column_mutation_schedule(4, 6), 5)

    def test_schedules_validate_positions(self):
        """Schedules refuse out-of-bounds or degenerate entries."""
        with pytest.raises(ScheduleError):
            CrossoverSchedule((2, 2), (((0, 0), (0, 2)),))
        with pytest.raises(ScheduleError):
            CrossoverSchedule((2, 2), (((1, 1), (1, 1)),))
        with pytest.raises(ScheduleError):
            MutationSchedule.from_targets((2, 2), [(2, 0)])

    @pytest.mark.parametrize(
        "pairs",
        [
            (((0, 0), (0, 1)), ((0, 0), (1, 0))),
            (((0, 0), (0, 1)), ((1, 1), (0, 1))),
            (((0, 0), (0, 1)), ((0, 1), (0, 0))),
        ],
    )
    def test_crossover_pairs_must_be_disjoint(self, pairs):
        """A position shared by two pairs would stop the pass from undoing itself."""
        with pytest.raises(ScheduleError, match="more than one crossover pair"):
            CrossoverSchedule((2, 2), pairs)

    def test_built_crossover_schedules_are_disjoint(self):
        """Stream-driven and full schedules pass the disjointness check and undo themselves."""
        key = SecretKey.parse("9f3c5e7a1b2d4f6081a3c5e7092b4d6f8a1c3e5f7b9d0f2143658799badcfe10")
        rng = np.random.default_rng(5)
        spec = rng.normal(size=(4, 5)) + 1j * rng.normal(size=(4, 5))
        built = build_crossover_schedule(4, 5, key, derive_stream(key, StreamLabel.CROSSOVER_ROW))
        for schedule in (built, full_crossover_schedule(4, 5)):
            positions = [pos for pair in schedule.pairs for pos in pair]
            assert len(positions) == len(set(positions))
            twice = apply_crossover_pass(apply_crossover_pass(spec, schedule), schedule)
            np.testing.assert_array_equal(twice, spec)


class TestOperatorProperties:
    """Randomized invariants of the spectral operators."""

    @settings(max_examples=150, deadline=None)
    @given(case=spectra_with_crossover())
    def test_crossover_is_an_exact_involution(self, case):
        """Two crossover passes with the same schedule are the identity, bit for bit."""
        spec, schedule = case
        np.testing.assert_array_equal(apply_crossover_pass(apply_crossover_pass(spec, schedule), schedule), spec)

    @settings(max_examples=150, deadline=None)
    @given(case=spectra_with_crossover())
    def test_crossover_conserves_part_multisets(self, case):
        """Real parts stay in place and imaginary parts are only permuted."""
        spec, schedule = case
        crossed = apply_crossover_pass(spec, schedule)

        np.testing.assert_array_equal(crossed.real, spec.real)
        np.testing.assert_array_equal(np.sort(crossed.imag, axis=None), np.sort(spec.imag, axis=None))

    @settings(max_examples=150, deadline=None)
    @given(case=spectra_with_mutation(), k=st.integers(1, 10**6))
    def test_mutation_is_an_involution(self, case, k):
        """Two mutation passes with the same schedule restore every element within 1e-9."""
        spec, schedule = case
        twice = apply_mutation_pass(apply_mutation_pass(spec, schedule, k), schedule, k)
        np.testing.assert_allclose(twice, spec, rtol=0, atol=1e-9)

    @settings(max_examples=150, deadline=None)
    @given(case=spectra_with_mutation(), k=st.integers(1, 10**6))
    def test_mutation_pass_matches_sequential_application(self, case, k):
        """The pass equals mutating each target in order."""
        spec, schedule = case
        expected = spec
        for target in schedule.targets:
            expected = mutate_component(expected, target, k)

        np.testing.assert_allclose(apply_mutation_pass(spec, schedule, k), expected, rtol=0, atol=1e-9)
        np.testing.assert_array_equal(apply_mutation_pass(spec, schedule, k).imag, spec.imag)
