"""Histogram, correlation, key-sensitivity and timing analyses.

Cipher-side statistics are computed on :func:`render_cipher` output, so every
function here works on 8-bit pixel data.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import stats

from ..cipher.pipeline import PlainImage, decrypt_image, encrypt_image, render_cipher
from ..lib.errors import (
    IntegrityError,
    InvalidDimensionError,
    NonFiniteInputError,
    UndefinedCorrelationError,
)
from ..lib.keys import KEY_BITS, SecretKey

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 256
DEFAULT_SAMPLES = 2000
DEFAULT_SEED = 0
DEFAULT_CHI_SQUARE_QUANTILE = 0.999
DEFAULT_TIMING_RUNS = 5
MSB_INDEX = KEY_BITS - 1
LSB_INDEX = 0


class Direction(str, Enum):
    """Neighbour used by the adjacent-pixel correlation."""

    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"


# (row, column) offset of the neighbour: right, below, below-right.
NEIGHBOR_OFFSETS = {
    Direction.HORIZONTAL: (0, 1),
    Direction.VERTICAL: (1, 0),
    Direction.DIAGONAL: (1, 1),
}


@dataclass(frozen=True)
class CorrelationReport:
    """Adjacent-pixel correlation in all three directions."""

    horizontal: float
    vertical: float
    diagonal: float
    sample_count: int
    rng_seed: int


@dataclass(frozen=True)
class HistogramGate:
    """Two-sample chi-square comparison of a plain and a cipher histogram."""

    statistic: float
    critical: float
    passed: bool


@dataclass(frozen=True)
class KeySensitivityReport:
    """Correlations between renders of one image encrypted under three related keys.

    Attributes:
        key_a: The key under test (hex).
        key_b: ``key_a`` with its most significant bit flipped (hex).
        key_c: ``key_a`` with its least significant bit flipped (hex).
        r_ab: Correlation of the renders under keys A and B.
        r_bc: Correlation of the renders under keys B and C.
        r_ca: Correlation of the renders under keys C and A.
        wrong_key_correlation: Correlation between the plaintext and the cipher under A
            force-decrypted with B, or None when the forced output is constant.
        wrong_key_integrity_failure: Whether decrypting with B failed the integrity check.
    """

    key_a: str
    key_b: str
    key_c: str
    r_ab: float
    r_bc: float
    r_ca: float
    wrong_key_correlation: float | None
    wrong_key_integrity_failure: bool


@dataclass(frozen=True)
class TimingReport:
    """Median wall-clock seconds of encrypt_image and decrypt_image."""

    encrypt_seconds: float
    decrypt_seconds: float
    runs: int
    pixels: int


def _pixel_values(img) -> np.ndarray:
    if isinstance(img, PlainImage):
        return img.pixels
    return np.asarray(img)


def _pixel_matrix(img) -> np.ndarray:
    if isinstance(img, PlainImage):
        if img.channels != 1:
            raise InvalidDimensionError(f"Expected a single-channel image, got {img.channels} channels")
        return img.channel(0)
    matrix = np.asarray(img, dtype=np.float64)
    if matrix.ndim != 2:
        raise InvalidDimensionError(f"Expected a 2-D pixel matrix, got shape {matrix.shape}")
    return matrix


def histogram(img) -> np.ndarray:
    """Count pixels per gray level.

    Args:
        img: Pixel values in [0, 255], any shape, or a PlainImage (all channels counted).

    Returns:
        256 int64 counts summing to the number of values.

    Raises:
        InvalidDimensionError: If a value lies outside [0, 255].
        NonFiniteInputError: If a value is not a finite integer.
    """
    values = _pixel_values(img).ravel()
    if not np.issubdtype(values.dtype, np.integer):
        if not np.all(np.isfinite(values)) or np.any(values != np.rint(values)):
            raise NonFiniteInputError("Histogram input must hold finite integer pixel values")
    if values.size and (values.min() < 0 or values.max() > HISTOGRAM_BINS - 1):
        raise InvalidDimensionError("Histogram input must lie in [0, 255]")
    return np.bincount(values.astype(np.int64), minlength=HISTOGRAM_BINS)


def correlation_coefficient(x, y) -> float:
    """Pearson correlation ``cov(x, y) / (sqrt(D(x)) * sqrt(D(y)))`` with 1/N moments.

    Raises:
        InvalidDimensionError: If the sequences differ in length or hold fewer than 2 values.
        UndefinedCorrelationError: If either sequence is constant.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.size != y.size:
        raise InvalidDimensionError(f"Sequences differ in length: {x.size} != {y.size}")
    if x.size < 2:
        raise InvalidDimensionError("Correlation needs at least 2 value pairs")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("Correlation is undefined for a constant sequence")

    dx = x - x.mean()
    dy = y - y.mean()
    var_x = np.mean(dx * dx)
    var_y = np.mean(dy * dy)
    if var_x == 0 or var_y == 0:
        raise UndefinedCorrelationError("Correlation is undefined for a zero-variance sequence")
    r = np.mean(dx * dy) / (np.sqrt(var_x) * np.sqrt(var_y))
    return float(np.clip(r, -1.0, 1.0))


def adjacent_pixel_correlation(
    img, direction: Direction | str, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> float:
    """Correlate ``samples`` random pixels with their neighbour in ``direction``.

    Positions are drawn uniformly, with replacement, from a generator seeded with
    ``seed``, so equal arguments give an identical result.

    Raises:
        InvalidDimensionError: If the image has no pair in that direction or ``samples`` < 2.
        UndefinedCorrelationError: If the sampled values are constant.
    """
    direction = Direction(direction)
    pixels = _pixel_matrix(img)
    d_row, d_col = NEIGHBOR_OFFSETS[direction]
    rows, cols = pixels.shape[0] - d_row, pixels.shape[1] - d_col
    if rows < 1 or cols < 1:
        raise InvalidDimensionError(f"A {pixels.shape} image has no {direction.value} neighbour pairs")
    if samples < 2:
        raise InvalidDimensionError(f"Need at least 2 samples, got {samples}")

    rng = np.random.default_rng(seed)
    r = rng.integers(0, rows, size=samples)
    c = rng.integers(0, cols, size=samples)
    return correlation_coefficient(pixels[r, c], pixels[r + d_row, c + d_col])


def correlation_report(img, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> CorrelationReport:
    """Run :func:`adjacent_pixel_correlation` in every direction with the same seed."""
    coefficients = {
        direction.value: adjacent_pixel_correlation(img, direction, samples, seed) for direction in Direction
    }
    return CorrelationReport(**coefficients, sample_count=samples, rng_seed=seed)


def inter_image_correlation(a, b) -> float:
    """Correlate all corresponding pixels of two equally sized images."""
    a = _pixel_values(a)
    b = _pixel_values(b)
    if np.shape(a) != np.shape(b):
        raise InvalidDimensionError(f"Image dimensions differ: {np.shape(a)} != {np.shape(b)}")
    return correlation_coefficient(a, b)


def histogram_chi_square(a, b) -> float:
    """Two-sample chi-square ``sum((a - b)**2 / (a + b))`` over the non-empty bins of two histograms."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != (HISTOGRAM_BINS,) or b.shape != (HISTOGRAM_BINS,):
        raise InvalidDimensionError(f"Expected two {HISTOGRAM_BINS}-bin histograms, got {a.shape} and {b.shape}")
    total = a + b
    occupied = total > 0
    return float(np.sum((a[occupied] - b[occupied]) ** 2 / total[occupied]))


def chi_square_critical(df: int = HISTOGRAM_BINS - 1, quantile: float = DEFAULT_CHI_SQUARE_QUANTILE) -> float:
    """Critical value of the chi-square distribution."""
    return float(stats.chi2.ppf(quantile, df))


def histogram_gate(plain, cipher, quantile: float = DEFAULT_CHI_SQUARE_QUANTILE) -> HistogramGate:
    """Check that the histograms of ``plain`` and ``cipher`` differ at the given confidence."""
    statistic = histogram_chi_square(histogram(plain), histogram(cipher))
    critical = chi_square_critical(HISTOGRAM_BINS - 1, quantile)
    logger.debug(f"Histogram chi-square {statistic:.1f} against critical value {critical:.1f}")
    return HistogramGate(statistic, critical, statistic > critical)


def key_sensitivity_suite(img: PlainImage, key: SecretKey, repeat_factor: int = 1) -> KeySensitivityReport:
    """Encrypt ``img`` under ``key`` and its MSB-flipped and LSB-flipped neighbours.

    The renders of the three ciphers are correlated pairwise. The cipher under the
    original key is then decrypted with the MSB-flipped key, and the forced result
    is correlated with the plaintext.
    """
    key_a = key
    key_b = key.flip_bit(MSB_INDEX)
    key_c = key.flip_bit(LSB_INDEX)
    ciphers = [encrypt_image(img, k, repeat_factor) for k in (key_a, key_b, key_c)]
    renders = [render_cipher(cipher).pixels for cipher in ciphers]
    cipher_a = ciphers[0]

    try:
        wrong = decrypt_image(cipher_a, key_b)
        integrity_failure = False
    except IntegrityError as e:
        logger.debug(f"Wrong-key decryption rejected: {e.message}")
        integrity_failure = True
        wrong = decrypt_image(cipher_a, key_b, strict=False)
    try:
        wrong_key_correlation = inter_image_correlation(wrong, img)
    except UndefinedCorrelationError:
        wrong_key_correlation = None

    return KeySensitivityReport(
        key_a=key_a.to_hex(),
        key_b=key_b.to_hex(),
        key_c=key_c.to_hex(),
        r_ab=inter_image_correlation(renders[0], renders[1]),
        r_bc=inter_image_correlation(renders[1], renders[2]),
        r_ca=inter_image_correlation(renders[2], renders[0]),
        wrong_key_correlation=wrong_key_correlation,
        wrong_key_integrity_failure=integrity_failure,
    )


def timing_report(
    img: PlainImage, key: SecretKey, runs: int = DEFAULT_TIMING_RUNS, repeat_factor: int = 1
) -> TimingReport:
    """Median wall-clock time of ``runs`` encrypt and decrypt calls."""
    if runs < 1:
        raise ValueError(f"runs must be at least 1, got {runs}")
    encrypt_times = []
    decrypt_times = []
    for _ in range(runs):
        start = time.perf_counter()
        cipher = encrypt_image(img, key, repeat_factor)
        encrypted = time.perf_counter()
        decrypt_image(cipher, key)
        decrypt_times.append(time.perf_counter() - encrypted)
        encrypt_times.append(encrypted - start)
    report = TimingReport(
        encrypt_seconds=float(np.median(encrypt_times)),
        decrypt_seconds=float(np.median(decrypt_times)),
        runs=runs,
        pixels=img.channels * img.height * img.width,
    )
    logger.debug(f"Timing over {runs} runs: {report}")
    return report
