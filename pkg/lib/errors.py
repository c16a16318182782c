"""Exception hierarchy shared by the cipher, codec, analysis and CLI layers."""


class CipherError(Exception):
    """Base class for every error raised by this package.

    The message is kept on the instance so the CLI can print it without a traceback.
    """

    def __init__(self, message: str = "A cipher error occurred."):
        """Initialize the error with a custom message.

        Args:
            message: The error message to display.
        """
        super().__init__(message)
        self.message = message


class KeyFormatError(CipherError, ValueError):
    """Raised when a key string cannot be parsed into a 256-bit key."""


class InvalidDimensionError(CipherError, ValueError):
    """Raised for empty matrices, a zero bound, or shapes that do not match a schedule."""


class NonFiniteInputError(CipherError, ValueError):
    """Raised when a pixel or spectral matrix contains NaN or infinity."""


class ScheduleError(CipherError, IndexError):
    """Raised when a schedule position is out of bounds or a pair collapses onto one position."""


class IntegrityError(CipherError):
    """Raised when a decrypted channel is not a real 8-bit image within tolerance.

    Wrong keys, corrupted spectra and a mismatched repeat factor all end up here.
    """

    def __init__(
        self,
        message: str,
        channel: int | None = None,
        imag_residue: float = 0.0,
        rounding_residue: float = 0.0,
    ):
        """Create an integrity error for a specific channel.

        Args:
            message: The error message to display.
            channel: Index of the failing channel, if known.
            imag_residue: Largest absolute imaginary part after the inverse transform.
            rounding_residue: Largest distance from the nearest integer of the real part.
        """
        super().__init__(message)
        self.channel = channel
        self.imag_residue = imag_residue
        self.rounding_residue = rounding_residue


class ImageFormatError(CipherError):
    """Raised for unsupported, malformed or truncated image files."""


class ContainerFormatError(CipherError):
    """Raised when a cipher container has a bad magic, version, header field or payload length."""


class UndefinedCorrelationError(CipherError, ArithmeticError):
    """Raised when a correlation is requested over a zero-variance sample."""
