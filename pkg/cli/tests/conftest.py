"""Shared pytest fixtures for cli tests."""

from pathlib import Path

import numpy as np
import pytest

from ...analysis.tests.natural_images import power_law_image


@pytest.fixture
def tiny_pgm(tmp_path) -> Path:
    """The 2x2 P5 example image."""
    path = tmp_path / "tiny.pgm"
    path.write_bytes(b"P5 2 2 255\n" + bytes([0, 128, 255, 64]))
    return path


@pytest.fixture
def natural_pgm(tmp_path) -> Path:
    """A 128x128 smooth grayscale image."""
    pixels = power_law_image(128, 2.0, 0)
    path = tmp_path / "natural.pgm"
    path.write_bytes(f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode() + pixels.tobytes())
    return path


@pytest.fixture
def noise_pgm(tmp_path) -> Path:
    """A 16x16 random grayscale image."""
    pixels = np.random.default_rng(21).integers(0, 256, size=(16, 16), dtype=np.uint8)
    path = tmp_path / "noise.pgm"
    path.write_bytes(b"P5\n16 16\n255\n" + pixels.tobytes())
    return path
