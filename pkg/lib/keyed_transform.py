"""Keyed forward and inverse 2-D discrete Fourier transforms.

The forward transform replaces the usual 1/MN multiplier with k/MN and the
inverse carries 1/k, so the product of the two multipliers is still 1/MN and the
pair stays a lossless roundtrip for the right key scalar only.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimensionError, NonFiniteInputError
from .keys import SecretKey

SCALAR_MODULUS = 1 << 32


@dataclass(frozen=True)
class KeyScalar:
    """Float-domain key multiplier, an integer in ``[1, 2**32)`` so it is exact in a double."""

    value: int

    def __post_init__(self):
        """Check the range."""
        if not 1 <= self.value < SCALAR_MODULUS:
            raise ValueError(f"Key scalar must lie in [1, 2**32), got {self.value}")

    def __float__(self) -> float:
        """Return the scalar as a float."""
        return float(self.value)


def scalar_from_key(key: SecretKey) -> KeyScalar:
    """Reduce a 256-bit key to its scalar: ``key mod 2**32``, with 0 mapped to 1."""
    return KeyScalar(key.bits % SCALAR_MODULUS or 1)


def _as_matrix(data, dtype) -> np.ndarray:
    matrix = np.asarray(data, dtype=dtype)
    if matrix.ndim != 2 or 0 in matrix.shape:
        raise InvalidDimensionError(f"Expected a non-empty 2-D matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteInputError("Matrix contains NaN or infinite values")
    return matrix


def keyed_dft_2d(img, k: KeyScalar) -> np.ndarray:
    """Compute ``F(u, v) = (k / MN) * sum f(x, y) exp(-j2pi(ux/M + vy/N))``.

    Args:
        img: M x N real pixel matrix.
        k: The key scalar.

    Returns:
        The M x N complex128 spectrum.

    Raises:
        InvalidDimensionError: If ``img`` is not a non-empty 2-D matrix.
        NonFiniteInputError: If ``img`` contains NaN or infinity.
    """
    pixels = _as_matrix(img, np.float64)
    rows, cols = pixels.shape
    return np.fft.fft2(pixels) * (float(k) / (rows * cols))


def keyed_idft_2d(spec, k: KeyScalar) -> np.ndarray:
    """Compute ``f(x, y) = (1 / k) * sum F(u, v) exp(+j2pi(ux/M + vy/N))``.

    The result is complex; deciding what to do with the imaginary residue is up to the caller.
    """
    spectrum = _as_matrix(spec, np.complex128)
    rows, cols = spectrum.shape
    # numpy's ifft2 already divides by MN.
    return np.fft.ifft2(spectrum) * ((rows * cols) / float(k))
