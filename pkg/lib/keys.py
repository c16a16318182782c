"""256-bit secret keys and the textual spellings accepted for them."""

import random
import re
from dataclasses import dataclass
from enum import Enum

from .errors import KeyFormatError

KEY_BITS = 256
KEY_BYTES = KEY_BITS // 8
KEY_MASK = (1 << KEY_BITS) - 1

_HEX_RE = re.compile(r"[0-9a-fA-F]{1,64}")
_DEC_RE = re.compile(r"[0-9]+")


class KeyFormat(str, Enum):
    """Textual key encodings."""

    HEX = "hex"
    DEC = "dec"


@dataclass(frozen=True)
class SecretKey:
    """An unsigned 256-bit key.

    Attributes:
        bits: The key value, 0 <= bits < 2**256.
    """

    bits: int

    def __post_init__(self):
        """Reject values that do not fit in 256 bits."""
        if isinstance(self.bits, bool) or not isinstance(self.bits, int):
            raise KeyFormatError(f"Key must be an integer, got {type(self.bits).__name__}")
        if not 0 <= self.bits <= KEY_MASK:
            raise KeyFormatError("Key must fit in 256 unsigned bits")

    @classmethod
    def parse(cls, text: str, key_format: KeyFormat | str = KeyFormat.HEX) -> "SecretKey":
        """Parse a hexadecimal or decimal key string.

        Hex keys are 1 to 64 digits with an optional ``0x`` prefix; decimal keys have
        arbitrary length but must stay below 2**256. Both zero-extend to 256 bits.
        Surrounding whitespace and ``_`` digit separators are ignored.

        Args:
            text: The key as typed by the user.
            key_format: ``hex`` or ``dec``.

        Returns:
            The parsed key.

        Raises:
            KeyFormatError: If the text is not a valid key in the requested format.
        """
        try:
            key_format = KeyFormat(key_format)
        except ValueError as e:
            raise KeyFormatError(f"Unknown key format '{key_format}' (expected 'hex' or 'dec')") from e

        cleaned = text.strip().replace("_", "")
        if key_format is KeyFormat.HEX:
            if cleaned[:2].lower() == "0x":
                cleaned = cleaned[2:]
            if not _HEX_RE.fullmatch(cleaned):
                raise KeyFormatError(f"Invalid hex key '{text}': expected 1-64 hexadecimal digits")
            value = int(cleaned, 16)
        else:
            if not _DEC_RE.fullmatch(cleaned):
                raise KeyFormatError(f"Invalid decimal key '{text}': expected decimal digits only")
            value = int(cleaned, 10)
            if value > KEY_MASK:
                raise KeyFormatError(f"Decimal key '{text}' does not fit in 256 bits")
        return cls(value)

    @classmethod
    def random(cls, rng: random.Random) -> "SecretKey":
        """Draw a uniformly random key from ``rng``."""
        return cls(rng.getrandbits(KEY_BITS))

    def to_bytes(self) -> bytes:
        """Return the 32 key bytes, most significant first."""
        return self.bits.to_bytes(KEY_BYTES, "big")

    def to_hex(self) -> str:
        """Return the key as 64 lowercase hex digits."""
        return f"{self.bits:064x}"

    def flip_bit(self, index: int) -> "SecretKey":
        """Return a copy with bit ``index`` (0 = least significant) inverted."""
        if not 0 <= index < KEY_BITS:
            raise KeyFormatError(f"Bit index {index} outside [0, {KEY_BITS})")
        return SecretKey(self.bits ^ (1 << index))

    def rotate_left(self, count: int) -> "SecretKey":
        """Rotate the 256-bit value left by ``count`` bits."""
        count %= KEY_BITS
        return SecretKey(((self.bits << count) | (self.bits >> (KEY_BITS - count))) & KEY_MASK)

    def wrapping_sub(self, amount: int) -> int:
        """Subtract ``amount`` modulo 2**256."""
        return (self.bits - amount) & KEY_MASK
