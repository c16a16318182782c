"""Spectral crossover and keyed mutation, and the passes that sweep them over a spectrum.

Crossover exchanges the imaginary parts of two components; mutation replaces a
component's real part ``r`` with ``k - r``. Both are involutions, so decryption
re-applies the same schedules in reverse order.
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError, ScheduleError
from .keyed_transform import KeyScalar
from .keys import SecretKey
from .lfsr_rng import IndexStream

logger = logging.getLogger(__name__)

MUTATION_COLUMN_OFFSET = 128

Position = tuple[int, int]
Shape = tuple[int, int]


def _check_shape(shape: Sequence[int]) -> Shape:
    if len(shape) != 2 or shape[0] < 1 or shape[1] < 1:
        raise InvalidDimensionError(f"Expected positive matrix dimensions, got {tuple(shape)}")
    return int(shape[0]), int(shape[1])


def _check_position(pos: Sequence[int], shape: Shape) -> Position:
    row, col = int(pos[0]), int(pos[1])
    if not (0 <= row < shape[0] and 0 <= col < shape[1]):
        raise ScheduleError(f"Position {(row, col)} outside a {shape[0]}x{shape[1]} matrix")
    return row, col


@dataclass(frozen=True)
class CrossoverSchedule:
    """Ordered component pairs whose imaginary parts are exchanged.

    No position occurs in more than one pair, so a pass is its own inverse.

    Attributes:
        shape: Dimensions of the spectrum the schedule was built for.
        pairs: ``((row_a, col_a), (row_b, col_b))`` entries, applied in order.
    """

    shape: Shape
    pairs: tuple[tuple[Position, Position], ...] = ()

    def __post_init__(self):
        """Validate every pair against the shape and the pairs against each other."""
        shape = _check_shape(self.shape)
        pairs = []
        used: set[Position] = set()
        for pos_a, pos_b in self.pairs:
            a, b = _check_position(pos_a, shape), _check_position(pos_b, shape)
            if a == b:
                raise ScheduleError(f"Crossover pair uses the same position twice: {a}")
            for pos in (a, b):
                if pos in used:
                    raise ScheduleError(f"Position {pos} appears in more than one crossover pair")
                used.add(pos)
            pairs.append((a, b))
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "pairs", tuple(pairs))

    def __len__(self) -> int:
        """Return the number of pairs."""
        return len(self.pairs)


@dataclass(frozen=True, eq=False)
class MutationSchedule:
    """Ordered mutation targets, held as parallel row and column index arrays.

    Attributes:
        shape: Dimensions of the spectrum the schedule was built for.
        rows: Row of each target.
        cols: Column of each target.
        repeat_factor: Multiplier of the image size used to size the schedule.
    """

    shape: Shape
    rows: np.ndarray
    cols: np.ndarray
    repeat_factor: int = 1

    def __post_init__(self):
        """Validate bounds and freeze the index arrays."""
        shape = _check_shape(self.shape)
        rows = np.array(self.rows, dtype=np.int64).reshape(-1)
        cols = np.array(self.cols, dtype=np.int64).reshape(-1)
        if rows.shape != cols.shape:
            raise ScheduleError(f"Row and column lists differ in length ({rows.size} vs {cols.size})")
        if rows.size and (rows.min() < 0 or rows.max() >= shape[0] or cols.min() < 0 or cols.max() >= shape[1]):
            raise ScheduleError(f"Mutation target outside a {shape[0]}x{shape[1]} matrix")
        if self.repeat_factor < 1:
            raise InvalidDimensionError(f"Repeat factor must be at least 1, got {self.repeat_factor}")
        rows.flags.writeable = False
        cols.flags.writeable = False
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @classmethod
    def from_targets(cls, shape: Shape, targets: Iterable[Position], repeat_factor: int = 1) -> "MutationSchedule":
        """Build a schedule from explicit ``(row, col)`` targets."""
        targets = list(targets)
        rows = [row for row, _ in targets]
        cols = [col for _, col in targets]
        return cls(shape, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64), repeat_factor)

    @property
    def targets(self) -> list[Position]:
        """Return the targets as a list of ``(row, col)`` tuples."""
        return list(zip(self.rows.tolist(), self.cols.tolist()))

    def __len__(self) -> int:
        """Return the number of targets."""
        return int(self.rows.size)


def _require_schedule_shape(spec: np.ndarray, shape: Shape) -> None:
    if spec.ndim != 2 or spec.shape != shape:
        raise InvalidDimensionError(f"Schedule built for {shape[0]}x{shape[1]} cannot be applied to shape {spec.shape}")


def _swap_imaginary(data: np.ndarray, a: Position, b: Position) -> None:
    imag = data.imag
    imag[a], imag[b] = imag[b], imag[a]


def crossover_pair(spec: np.ndarray, pos_a: Position, pos_b: Position) -> np.ndarray:
    """Return a copy of ``spec`` with the imaginary parts at two positions exchanged.

    ``R1 + jI1`` and ``R2 + jI2`` become ``R1 + jI2`` and ``R2 + jI1``.

    Raises:
        ScheduleError: If a position is out of bounds or both positions coincide.
    """
    out = np.array(spec, dtype=np.complex128)
    shape = _check_shape(out.shape)
    a, b = _check_position(pos_a, shape), _check_position(pos_b, shape)
    if a == b:
        raise ScheduleError(f"Crossover pair uses the same position twice: {a}")
    _swap_imaginary(out, a, b)
    return out


def mutate_component(spec: np.ndarray, pos: Position, k: KeyScalar | float) -> np.ndarray:
    """Return a copy of ``spec`` with the real part ``r`` at ``pos`` replaced by ``k - r``."""
    out = np.array(spec, dtype=np.complex128)
    row, col = _check_position(pos, _check_shape(out.shape))
    out.real[row, col] = float(k) - out.real[row, col]
    return out


def build_crossover_schedule(rows: int, cols: int, key: SecretKey, stream: IndexStream) -> CrossoverSchedule:
    """Pair adjacent columns ``(2t, 2t+1)`` on stream-selected rows.

    The first row is ``key mod rows``; after every pair the row is redrawn from
    ``stream``. An odd trailing column is left alone and fewer than two columns
    give an empty schedule.
    """
    shape = _check_shape((rows, cols))
    pair_count = cols // 2
    if pair_count == 0:
        return CrossoverSchedule(shape)

    draws = stream.take(pair_count, rows).tolist()
    row_sequence = [key.bits % rows, *draws[:-1]]
    pairs = tuple(((row, 2 * t), (row, 2 * t + 1)) for t, row in enumerate(row_sequence))
    logger.debug(f"Built crossover schedule with {len(pairs)} pairs for {rows}x{cols}")
    return CrossoverSchedule(shape, pairs)


def build_mutation_schedule(
    rows: int,
    cols: int,
    key: SecretKey,
    row_stream: IndexStream,
    col_stream: IndexStream,
    repeat_factor: int = 1,
) -> MutationSchedule:
    """Draw ``rows * cols * repeat_factor`` mutation targets.

    The first target is ``(key mod rows, (key - 128) mod cols)`` with the
    subtraction wrapping at 2**256; the remaining rows and columns come from the
    two streams.
    """
    shape = _check_shape((rows, cols))
    if repeat_factor < 1:
        raise InvalidDimensionError(f"Repeat factor must be at least 1, got {repeat_factor}")

    total = rows * cols * repeat_factor
    target_rows = np.empty(total, dtype=np.int64)
    target_cols = np.empty(total, dtype=np.int64)
    target_rows[0] = key.bits % rows
    target_cols[0] = key.wrapping_sub(MUTATION_COLUMN_OFFSET) % cols
    target_rows[1:] = row_stream.take(total - 1, rows)
    target_cols[1:] = col_stream.take(total - 1, cols)
    logger.debug(f"Built mutation schedule with {total} targets for {rows}x{cols} (repeat factor {repeat_factor})")
    return MutationSchedule(shape, target_rows, target_cols, repeat_factor)


def apply_crossover_pass(spec: np.ndarray, schedule: CrossoverSchedule) -> np.ndarray:
    """Apply every crossover pair of ``schedule`` in order, returning a new matrix.

    Raises:
        InvalidDimensionError: If the schedule was built for another shape.
    """
    out = np.array(spec, dtype=np.complex128)
    _require_schedule_shape(out, schedule.shape)
    for pos_a, pos_b in schedule.pairs:
        _swap_imaginary(out, pos_a, pos_b)
    return out


def apply_mutation_pass(spec: np.ndarray, schedule: MutationSchedule, k: KeyScalar | float) -> np.ndarray:
    """Apply every mutation target of ``schedule``, returning a new matrix.

    Reflection is an involution, so the sequential result only depends on how
    often each position occurs: odd counts reflect once, even counts cancel.

    Raises:
        InvalidDimensionError: If the schedule was built for another shape.
    """
    out = np.array(spec, dtype=np.complex128)
    _require_schedule_shape(out, schedule.shape)
    rows, cols = schedule.shape
    counts = np.bincount(schedule.rows * cols + schedule.cols, minlength=rows * cols)
    odd = (counts % 2 == 1).reshape(rows, cols)
    out.real[odd] = float(k) - out.real[odd]
    return out


def full_crossover_schedule(rows: int, cols: int) -> CrossoverSchedule:
    """Pair adjacent columns ``(2t, 2t+1)`` on every row, row by row."""
    shape = _check_shape((rows, cols))
    pairs = tuple(((row, 2 * t), (row, 2 * t + 1)) for row in range(rows) for t in range(cols // 2))
    return CrossoverSchedule(shape, pairs)


def column_mutation_schedule(rows: int, cols: int, columns: Iterable[int] | None = None) -> MutationSchedule:
    """Target every row of the given columns (default: the even columns)."""
    shape = _check_shape((rows, cols))
    columns = range(0, cols, 2) if columns is None else columns
    return MutationSchedule.from_targets(shape, [(row, col) for row in range(rows) for col in columns])
