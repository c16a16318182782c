"""End-to-end encryption and decryption of 8-bit images.

Encryption runs keyed DFT, crossover pass and mutation pass on every channel.
Decryption re-derives the same schedules from the key and undoes them in
reverse order before the keyed inverse transform. The authoritative ciphertext
is the complex spectrum; :func:`render_cipher` only produces a viewable 8-bit
picture of it.
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..lib.de_ops import (
    CrossoverSchedule,
    MutationSchedule,
    apply_crossover_pass,
    apply_mutation_pass,
    build_crossover_schedule,
    build_mutation_schedule,
)
from ..lib.errors import IntegrityError, InvalidDimensionError, NonFiniteInputError
from ..lib.keyed_transform import KeyScalar, keyed_dft_2d, keyed_idft_2d, scalar_from_key
from ..lib.keys import SecretKey
from ..lib.lfsr_rng import StreamLabel, derive_stream

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
SUPPORTED_CHANNELS = (1, 3)
DEFAULT_IMAG_TOLERANCE = 1e-3
DEFAULT_ROUNDING_TOLERANCE = 0.5


def _check_channels(count: int) -> None:
    if count not in SUPPORTED_CHANNELS:
        raise InvalidDimensionError(f"Images have 1 or 3 channels, got {count}")


@dataclass(frozen=True, eq=False)
class PlainImage:
    """An 8-bit image stored channel-first.

    Attributes:
        pixels: uint8 array of shape (channels, height, width).
    """

    pixels: np.ndarray

    def __post_init__(self):
        """Validate the layout and value range and freeze the array."""
        raw = np.asarray(self.pixels)
        if raw.ndim != 3 or raw.shape[1] < 1 or raw.shape[2] < 1:
            raise InvalidDimensionError(f"Expected pixels shaped (channels, height, width), got {raw.shape}")
        _check_channels(raw.shape[0])
        if not np.issubdtype(raw.dtype, np.integer):
            if not np.all(np.isfinite(raw)) or np.any(raw != np.rint(raw)):
                raise NonFiniteInputError("Pixel values must be finite integers")
        if raw.size and (raw.min() < 0 or raw.max() > 255):
            raise InvalidDimensionError("Pixel values must lie in [0, 255]")
        pixels = raw.astype(np.uint8)
        pixels.flags.writeable = False
        object.__setattr__(self, "pixels", pixels)

    @classmethod
    def from_array(cls, array) -> "PlainImage":
        """Build an image from a display-layout array, (height, width) or (height, width, channels)."""
        array = np.asarray(array)
        if array.ndim == 2:
            return cls(array[np.newaxis, :, :])
        if array.ndim == 3:
            return cls(np.moveaxis(array, -1, 0))
        raise InvalidDimensionError(f"Expected a 2-D or 3-D pixel array, got shape {array.shape}")

    def to_array(self) -> np.ndarray:
        """Return the pixels in display layout: (height, width) for gray, (height, width, 3) for color."""
        if self.channels == 1:
            return self.pixels[0]
        return np.moveaxis(self.pixels, 0, -1)

    @property
    def channels(self) -> int:
        """Number of channels (1 or 3)."""
        return self.pixels.shape[0]

    @property
    def height(self) -> int:
        """Number of rows."""
        return self.pixels.shape[1]

    @property
    def width(self) -> int:
        """Number of columns."""
        return self.pixels.shape[2]

    def channel(self, index: int) -> np.ndarray:
        """Return one channel as a float64 pixel matrix."""
        return self.pixels[index].astype(np.float64)

    def __eq__(self, other) -> bool:
        """Images are equal when their pixels are."""
        if not isinstance(other, PlainImage):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CipherImage:
    """Encrypted image: one complex spectrum per channel.

    Attributes:
        spectra: complex128 array of shape (channels, height, width).
        repeat_factor: Mutation schedule length multiplier used at encryption.
        format_version: Container format version.
    """

    spectra: np.ndarray
    repeat_factor: int = 1
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        """Validate the layout and finiteness and freeze the array."""
        spectra = np.array(self.spectra, dtype=np.complex128)
        if spectra.ndim != 3 or spectra.shape[1] < 1 or spectra.shape[2] < 1:
            raise InvalidDimensionError(f"Expected spectra shaped (channels, height, width), got {spectra.shape}")
        _check_channels(spectra.shape[0])
        if not np.all(np.isfinite(spectra)):
            raise NonFiniteInputError("Cipher spectra contain NaN or infinite values")
        if self.repeat_factor < 1:
            raise InvalidDimensionError(f"Repeat factor must be at least 1, got {self.repeat_factor}")
        spectra.flags.writeable = False
        object.__setattr__(self, "spectra", spectra)

    @property
    def channels(self) -> int:
        """Number of channels (1 or 3)."""
        return self.spectra.shape[0]

    @property
    def height(self) -> int:
        """Number of rows."""
        return self.spectra.shape[1]

    @property
    def width(self) -> int:
        """Number of columns."""
        return self.spectra.shape[2]

    def __eq__(self, other) -> bool:
        """Ciphers are equal when every double matches bit for bit."""
        if not isinstance(other, CipherImage):
            return NotImplemented
        return (
            self.repeat_factor == other.repeat_factor
            and self.format_version == other.format_version
            and self.spectra.shape == other.spectra.shape
            and self.spectra.tobytes() == other.spectra.tobytes()
        )

    __hash__ = None


def channel_schedules(
    rows: int, cols: int, key: SecretKey, repeat_factor: int = 1
) -> tuple[CrossoverSchedule, MutationSchedule]:
    """Derive the crossover and mutation schedules of one channel from fresh key streams."""
    crossover = build_crossover_schedule(rows, cols, key, derive_stream(key, StreamLabel.CROSSOVER_ROW))
    mutation = build_mutation_schedule(
        rows,
        cols,
        key,
        derive_stream(key, StreamLabel.MUTATION_ROW),
        derive_stream(key, StreamLabel.MUTATION_COL),
        repeat_factor,
    )
    return crossover, mutation


def encrypt_spectrum(
    spec: np.ndarray, crossover: CrossoverSchedule, mutation: MutationSchedule, k: KeyScalar | float
) -> np.ndarray:
    """Crossover pass followed by mutation pass."""
    return apply_mutation_pass(apply_crossover_pass(spec, crossover), mutation, k)


def decrypt_spectrum(
    spec: np.ndarray, crossover: CrossoverSchedule, mutation: MutationSchedule, k: KeyScalar | float
) -> np.ndarray:
    """Mutation pass followed by crossover pass, undoing :func:`encrypt_spectrum`."""
    return apply_crossover_pass(apply_mutation_pass(spec, mutation, k), crossover)


def encrypt_channel(img, key: SecretKey, repeat_factor: int = 1) -> np.ndarray:
    """Encrypt one pixel matrix into a complex spectrum.

    Args:
        img: M x N pixel matrix.
        key: The secret key.
        repeat_factor: Mutation schedule length as a multiple of M * N.

    Returns:
        The M x N complex128 cipher spectrum.
    """
    k = scalar_from_key(key)
    spectrum = keyed_dft_2d(img, k)
    crossover, mutation = channel_schedules(*spectrum.shape, key, repeat_factor)
    return encrypt_spectrum(spectrum, crossover, mutation, k)


def _restore_pixels(
    spectrum: np.ndarray,
    crossover: CrossoverSchedule,
    mutation: MutationSchedule,
    k: KeyScalar,
    *,
    strict: bool,
    imag_tolerance: float,
    rounding_tolerance: float,
    channel: int | None,
) -> np.ndarray:
    restored = keyed_idft_2d(decrypt_spectrum(spectrum, crossover, mutation, k), k)
    rounded = np.rint(restored.real)
    imag_residue = float(np.abs(restored.imag).max())
    rounding_residue = float(np.abs(restored.real - rounded).max())
    logger.debug(f"Channel {channel}: imaginary residue {imag_residue:.3g}, rounding residue {rounding_residue:.3g}")

    if not (imag_residue < imag_tolerance and rounding_residue < rounding_tolerance):
        where = "" if channel is None else f" in channel {channel}"
        message = (
            f"Decryption integrity check failed{where}: imaginary residue {imag_residue:.3g} "
            f"(limit {imag_tolerance:g}), rounding residue {rounding_residue:.3g} (limit {rounding_tolerance:g}). "
            "Wrong key, corrupted cipher or mismatched repeat factor."
        )
        if strict:
            raise IntegrityError(message, channel, imag_residue, rounding_residue)
        logger.warning(f"{message} Continuing because the check is disabled.")
    return np.clip(rounded, 0, 255)


def decrypt_channel(
    spec,
    key: SecretKey,
    repeat_factor: int = 1,
    *,
    strict: bool = True,
    imag_tolerance: float = DEFAULT_IMAG_TOLERANCE,
    rounding_tolerance: float = DEFAULT_ROUNDING_TOLERANCE,
) -> np.ndarray:
    """Decrypt one cipher spectrum back to a pixel matrix.

    Args:
        spec: M x N complex cipher spectrum.
        key: The secret key used for encryption.
        repeat_factor: The repeat factor used for encryption.
        strict: Raise on an integrity failure instead of returning the clamped best effort.
        imag_tolerance: Largest accepted imaginary residue after the inverse transform.
        rounding_tolerance: Largest accepted distance of a real value from its nearest integer.

    Returns:
        The M x N float64 pixel matrix, integral and clamped to [0, 255].

    Raises:
        IntegrityError: If ``strict`` and a residue exceeds its tolerance.
    """
    spectrum = np.asarray(spec, dtype=np.complex128)
    if spectrum.ndim != 2 or 0 in spectrum.shape:
        raise InvalidDimensionError(f"Expected a non-empty 2-D spectrum, got shape {spectrum.shape}")
    crossover, mutation = channel_schedules(*spectrum.shape, key, repeat_factor)
    return _restore_pixels(
        spectrum,
        crossover,
        mutation,
        scalar_from_key(key),
        strict=strict,
        imag_tolerance=imag_tolerance,
        rounding_tolerance=rounding_tolerance,
        channel=None,
    )


def encrypt_image(img: PlainImage, key: SecretKey, repeat_factor: int = 1) -> CipherImage:
    """Encrypt every channel of ``img`` independently with the same key."""
    k = scalar_from_key(key)
    # Schedules depend only on key and shape, so one derivation serves every channel.
    crossover, mutation = channel_schedules(img.height, img.width, key, repeat_factor)
    spectra = np.stack(
        [encrypt_spectrum(keyed_dft_2d(img.channel(c), k), crossover, mutation, k) for c in range(img.channels)]
    )
    logger.debug(f"Encrypted {img.channels}-channel {img.height}x{img.width} image (repeat factor {repeat_factor})")
    return CipherImage(spectra, repeat_factor)


def decrypt_image(
    cipher: CipherImage,
    key: SecretKey,
    repeat_factor: int | None = None,
    *,
    strict: bool = True,
    imag_tolerance: float = DEFAULT_IMAG_TOLERANCE,
    rounding_tolerance: float = DEFAULT_ROUNDING_TOLERANCE,
) -> PlainImage:
    """Decrypt every channel of ``cipher``.

    Args:
        cipher: The cipher image.
        key: The secret key.
        repeat_factor: Overrides the repeat factor recorded in the cipher.
        strict: Fail the whole image if any channel fails its integrity check.
        imag_tolerance: See :func:`decrypt_channel`.
        rounding_tolerance: See :func:`decrypt_channel`.

    Returns:
        The decrypted image.

    Raises:
        IntegrityError: If ``strict`` and any channel fails its integrity check.
    """
    repeat_factor = cipher.repeat_factor if repeat_factor is None else repeat_factor
    k = scalar_from_key(key)
    crossover, mutation = channel_schedules(cipher.height, cipher.width, key, repeat_factor)
    channels = [
        _restore_pixels(
            cipher.spectra[c],
            crossover,
            mutation,
            k,
            strict=strict,
            imag_tolerance=imag_tolerance,
            rounding_tolerance=rounding_tolerance,
            channel=c,
        )
        for c in range(cipher.channels)
    ]
    return PlainImage(np.stack(channels).astype(np.uint8))


def render_spectrum(spec, centered: bool = False) -> np.ndarray:
    """Map one spectrum to 8 bits by min-max scaling ``log(1 + |F|)``.

    A spectrum whose magnitudes are all equal renders as zeros. ``centered`` moves
    the DC term to the middle for display.
    """
    spectrum = np.asarray(spec, dtype=np.complex128)
    if centered:
        spectrum = np.fft.fftshift(spectrum)
    magnitude = np.log1p(np.abs(spectrum))
    low, high = magnitude.min(), magnitude.max()
    if high == low:
        return np.zeros(spectrum.shape, dtype=np.uint8)
    return np.rint(255.0 * (magnitude - low) / (high - low)).astype(np.uint8)


def render_cipher(cipher: CipherImage, centered: bool = False) -> PlainImage:
    """Render every channel of ``cipher`` as an 8-bit log-magnitude image."""
    return PlainImage(np.stack([render_spectrum(spectrum, centered) for spectrum in cipher.spectra]))
