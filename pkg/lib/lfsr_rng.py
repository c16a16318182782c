"""Index generation from a bank of 32 eight-cell linear feedback shift registers.

Each register implements the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1: the
state shifts right by one and the feedback ``b4 ^ b3 ^ b2 ^ b0`` of the old state
enters bit 7. A bank output clocks every register eight times and concatenates the
32 fresh bytes (S0 most significant) into a 256-bit number.

An index stream feeds every output back as the next seed, rotated left by one bit
so that neighbouring registers exchange a bit on every draw.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import InvalidDimensionError
from .keys import KEY_BITS, KEY_BYTES, KEY_MASK, SecretKey

logger = logging.getLogger(__name__)

BANK_SIZE = 32
REGISTER_MASK = 0xFF
# Zero is absorbing under XOR feedback, so seeds never hold it.
ZERO_SEED_REPLACEMENT = 0xFF
STREAM_ROTATION_BITS = 1
COLUMN_KEY_ROTATION_BITS = 128


def step_register(state: int) -> int:
    """Advance one 8-bit register by a single clock.

    Args:
        state: Current register value (cells b7..b0).

    Returns:
        The next register value.
    """
    feedback = ((state >> 4) ^ (state >> 3) ^ (state >> 2) ^ state) & 1
    return ((state >> 1) | (feedback << 7)) & REGISTER_MASK


def clock_register_8(state: int) -> int:
    """Apply eight clocks to one register, producing a fully refreshed byte."""
    for _ in range(8):
        state = step_register(state)
    return state


_CLOCK8_TABLE = bytes(clock_register_8(s) for s in range(256))
_ZERO_GUARD_TABLE = bytes([ZERO_SEED_REPLACEMENT, *range(1, 256)])


@dataclass
class LfsrBank:
    """The 32 registers S0..S31, stored as one byte each.

    Attributes:
        registers: Register states, S0 first.
    """

    registers: bytearray = field(default_factory=lambda: bytearray([ZERO_SEED_REPLACEMENT] * BANK_SIZE))

    def __post_init__(self):
        """Validate the register count."""
        self.registers = bytearray(self.registers)
        if len(self.registers) != BANK_SIZE:
            raise InvalidDimensionError(f"An LFSR bank has exactly {BANK_SIZE} registers, got {len(self.registers)}")


def _seed_bytes(value: int) -> bytearray:
    return bytearray(value.to_bytes(KEY_BYTES, "big").translate(_ZERO_GUARD_TABLE))


def seed_bank(key: SecretKey) -> LfsrBank:
    """Seed a bank from a key, byte i (most significant first) going to register S_i.

    Zero bytes are replaced by 0xFF.
    """
    return LfsrBank(_seed_bytes(key.bits))


def bank_output(bank: LfsrBank) -> int:
    """Clock every register eight times and return the concatenated 256-bit value.

    The bank is advanced in place.
    """
    fresh = bytes(bank.registers).translate(_CLOCK8_TABLE)
    bank.registers[:] = fresh
    return int.from_bytes(fresh, "big")


def _rotate_left(value: int, count: int = STREAM_ROTATION_BITS) -> int:
    return ((value << count) | (value >> (KEY_BITS - count))) & KEY_MASK


class StreamLabel(str, Enum):
    """Purpose tag of an index stream."""

    CROSSOVER_ROW = "crossover-row"
    MUTATION_ROW = "mutation-row"
    MUTATION_COL = "mutation-col"


class IndexStream:
    """A chained sequence of bounded indices drawn from one LFSR bank.

    A stream is single-owner: it carries mutable state and must not be shared
    between concurrent consumers.
    """

    def __init__(self, bank: LfsrBank, label: StreamLabel):
        """Wrap a seeded bank.

        Args:
            bank: The seeded bank; the stream takes ownership of it.
            label: What the stream is used for.
        """
        self.bank = bank
        self.label = StreamLabel(label)

    def next_index(self, bound: int) -> int:
        """Draw the next index in ``[0, bound)``.

        Raises:
            InvalidDimensionError: If ``bound`` is not positive.
        """
        _check_bound(bound)
        output = bank_output(self.bank)
        self.bank.registers[:] = _seed_bytes(_rotate_left(output))
        return output % bound

    def take(self, count: int, bound: int) -> np.ndarray:
        """Draw ``count`` consecutive indices at once.

        Produces exactly the values ``count`` calls to :meth:`next_index` would.

        Returns:
            An int64 array of length ``count``.
        """
        _check_bound(bound)
        if count < 0:
            raise InvalidDimensionError(f"Cannot draw a negative number of indices ({count})")

        state = bytes(self.bank.registers)
        indices = []
        append = indices.append
        for _ in range(count):
            output = int.from_bytes(state.translate(_CLOCK8_TABLE), "big")
            append(output % bound)
            state = _rotate_left(output).to_bytes(KEY_BYTES, "big").translate(_ZERO_GUARD_TABLE)
        self.bank.registers[:] = state
        return np.fromiter(indices, dtype=np.int64, count=count)


def _check_bound(bound: int) -> None:
    if bound < 1:
        raise InvalidDimensionError(f"Index bound must be at least 1, got {bound}")


def next_index(stream: IndexStream, bound: int) -> int:
    """Advance ``stream`` and return an index in ``[0, bound)``."""
    return stream.next_index(bound)


def derive_stream(key: SecretKey, label: StreamLabel) -> IndexStream:
    """Create a fresh stream for ``label``.

    Row streams seed from the key itself; the column stream seeds from the key
    rotated left by 128 bits so that row and column trajectories differ.
    """
    label = StreamLabel(label)
    if label is StreamLabel.MUTATION_COL:
        key = key.rotate_left(COLUMN_KEY_ROTATION_BITS)
    logger.debug(f"Seeding {label.value} stream")
    return IndexStream(seed_bank(key), label)
