"""Image files (binary PGM, 8-bit PNG) and the binary cipher container.

Container layout, all little-endian::

    magic           4 bytes  b"DEFC"
    version         uint8    1
    height          uint32
    width           uint32
    channels        uint8    1 or 3
    repeat_factor   uint32
    payload         channels x height x width complex values, row-major,
                    each stored as two float64 (real, imaginary)
"""

import io
import logging
import os
import re
import struct
import tempfile
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..cipher.pipeline import FORMAT_VERSION, SUPPORTED_CHANNELS, CipherImage, PlainImage
from ..lib.errors import ContainerFormatError, ImageFormatError, NonFiniteInputError

logger = logging.getLogger(__name__)

CONTAINER_MAGIC = b"DEFC"
CONTAINER_HEADER = struct.Struct("<4sBIIBI")
CONTAINER_HEADER_SIZE = CONTAINER_HEADER.size
COMPLEX_DTYPE = np.dtype("<c16")
UINT32_MAX = 0xFFFFFFFF

PGM_MAGIC = b"P5"
PGM_MAXVAL = 255
PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
PNG_MODES = {"L", "RGB"}
# IHDR follows the signature: length(4) type(4) width(4) height(4) bit_depth(1) color_type(1).
PNG_BIT_DEPTH_OFFSET = 24
PNG_COLOR_TYPE_OFFSET = 25
PNG_COLOR_TYPES = {0: "grayscale", 2: "RGB"}

PGM_SUFFIXES = {".pgm"}
PNG_SUFFIXES = {".png"}

# P5 <ws> width <ws> height <ws> maxval <single ws>, comments allowed between fields.
_PGM_HEADER_RE = re.compile(rb"P5(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)(?:\s+|#[^\n]*\n)+(\d+)\s")


def container_size(channels: int, height: int, width: int) -> int:
    """Return the exact byte size of a container holding the given spectra."""
    return CONTAINER_HEADER_SIZE + channels * height * width * COMPLEX_DTYPE.itemsize


def _new_file_mode() -> int:
    # The umask can only be read by setting it.
    umask = os.umask(0o022)
    os.umask(umask)
    return 0o666 & ~umask


@contextmanager
def atomic_output(path: Path) -> Iterator[io.BufferedWriter]:
    """Write to a temporary sibling of ``path`` and rename it into place on success.

    The result gets the permissions of a newly created file under the current
    umask. On any error the temporary file is removed and ``path`` is left untouched.
    """
    path = Path(path)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            yield handle
        os.chmod(tmp_name, _new_file_mode())
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def decode_pgm(data: bytes) -> PlainImage:
    """Decode a binary (P5) 8-bit PGM file.

    Raises:
        ImageFormatError: On a malformed header, a maxval other than 255, or a truncated raster.
    """
    match = _PGM_HEADER_RE.match(data)
    if match is None:
        raise ImageFormatError("Malformed PGM header (expected 'P5 <width> <height> <maxval>')")
    width, height, maxval = (int(group) for group in match.groups())
    if width < 1 or height < 1:
        raise ImageFormatError(f"PGM dimensions must be positive, got {width}x{height}")
    if maxval > PGM_MAXVAL:
        raise ImageFormatError(f"16-bit PGM (maxval {maxval}) is not supported")
    if maxval != PGM_MAXVAL:
        raise ImageFormatError(f"PGM maxval {maxval} is not supported (expected {PGM_MAXVAL})")

    start = match.end()
    expected = width * height
    raster = data[start : start + expected]
    if len(raster) < expected:
        raise ImageFormatError(f"Truncated PGM raster: expected {expected} bytes, found {len(raster)}")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width)
    return PlainImage.from_array(pixels)


def encode_pgm(img: PlainImage) -> bytes:
    """Encode a single-channel image as binary PGM."""
    if img.channels != 1:
        raise ImageFormatError(f"PGM holds grayscale images only, got {img.channels} channels")
    header = f"P5\n{img.width} {img.height}\n{PGM_MAXVAL}\n".encode("ascii")
    return header + img.pixels[0].tobytes()


def decode_png(data: bytes) -> PlainImage:
    """Decode an 8-bit grayscale or RGB PNG with Pillow.

    Raises:
        ImageFormatError: For other modes, 16-bit samples, or corrupt data.
    """
    if len(data) <= PNG_COLOR_TYPE_OFFSET:
        raise ImageFormatError("Truncated PNG header")
    bit_depth, color_type = data[PNG_BIT_DEPTH_OFFSET], data[PNG_COLOR_TYPE_OFFSET]
    if bit_depth == 16:
        raise ImageFormatError("16-bit PNG is not supported")
    if bit_depth != 8 or color_type not in PNG_COLOR_TYPES:
        raise ImageFormatError(
            f"PNG with bit depth {bit_depth} and color type {color_type} is not supported (expected 8-bit L or RGB)"
        )

    try:
        with Image.open(io.BytesIO(data)) as image:
            image.load()
            mode = image.mode
            if mode not in PNG_MODES:
                raise ImageFormatError(f"PNG mode {mode} is not supported (expected 8-bit L or RGB)")
            pixels = np.asarray(image, dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as e:
        raise ImageFormatError(f"Corrupt or truncated PNG: {e}") from e
    return PlainImage.from_array(pixels)


def encode_png(img: PlainImage) -> bytes:
    """Encode an image as PNG (mode L or RGB)."""
    buffer = io.BytesIO()
    Image.fromarray(np.ascontiguousarray(img.to_array())).save(buffer, format="PNG")
    return buffer.getvalue()


def read_image(path: Path) -> PlainImage:
    """Read a PGM (P5) or PNG file, chosen by its leading bytes.

    Raises:
        OSError: If the file cannot be read.
        ImageFormatError: If the format is unsupported or the file is malformed.
    """
    data = Path(path).read_bytes()
    if data.startswith(PGM_MAGIC):
        image = decode_pgm(data)
    elif data.startswith(PNG_SIGNATURE):
        image = decode_png(data)
    else:
        raise ImageFormatError(f"{path}: unsupported image format (expected binary PGM or PNG)")
    logger.debug(f"Read {image.channels}-channel {image.height}x{image.width} image from {path}")
    return image


def write_image(img: PlainImage, path: Path) -> None:
    """Write ``img`` as PGM or PNG according to the file suffix.

    Raises:
        ImageFormatError: For an unknown suffix or a color image sent to PGM.
        OSError: If the file cannot be written.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in PGM_SUFFIXES:
        data = encode_pgm(img)
    elif suffix in PNG_SUFFIXES:
        data = encode_png(img)
    else:
        raise ImageFormatError(f"{path}: unsupported output extension '{path.suffix}' (use .pgm or .png)")
    with atomic_output(path) as handle:
        handle.write(data)


def encode_cipher(cipher: CipherImage) -> bytes:
    """Serialize a cipher image into container bytes."""
    if cipher.height > UINT32_MAX or cipher.width > UINT32_MAX or cipher.repeat_factor > UINT32_MAX:
        raise ContainerFormatError("Cipher dimensions or repeat factor exceed the 32-bit header fields")
    header = CONTAINER_HEADER.pack(
        CONTAINER_MAGIC,
        cipher.format_version,
        cipher.height,
        cipher.width,
        cipher.channels,
        cipher.repeat_factor,
    )
    return header + cipher.spectra.astype(COMPLEX_DTYPE, copy=False).tobytes()


def decode_cipher(data: bytes) -> CipherImage:
    """Parse container bytes, validating every header field before the payload.

    Raises:
        ContainerFormatError: On a bad magic, version, field value or payload length.
    """
    if len(data) < CONTAINER_HEADER_SIZE:
        raise ContainerFormatError(f"Truncated cipher header: {len(data)} of {CONTAINER_HEADER_SIZE} bytes")
    magic, version, height, width, channels, repeat_factor = CONTAINER_HEADER.unpack_from(data)
    if magic != CONTAINER_MAGIC:
        raise ContainerFormatError(f"Bad cipher magic {magic!r} (expected {CONTAINER_MAGIC!r})")
    if version != FORMAT_VERSION:
        raise ContainerFormatError(f"Unsupported cipher format version {version} (expected {FORMAT_VERSION})")
    if height < 1 or width < 1:
        raise ContainerFormatError(f"Cipher dimensions must be positive, got {height}x{width}")
    if channels not in SUPPORTED_CHANNELS:
        raise ContainerFormatError(f"Cipher channel count must be 1 or 3, got {channels}")
    if repeat_factor < 1:
        raise ContainerFormatError("Cipher repeat factor must be at least 1")

    expected = container_size(channels, height, width)
    if len(data) != expected:
        raise ContainerFormatError(f"Cipher payload length mismatch: file has {len(data)} bytes, expected {expected}")

    payload = np.frombuffer(data, dtype=COMPLEX_DTYPE, offset=CONTAINER_HEADER_SIZE)
    try:
        return CipherImage(payload.reshape(channels, height, width), repeat_factor, version)
    except NonFiniteInputError as e:
        raise ContainerFormatError(f"Cipher payload contains non-finite values: {e}") from e


def write_cipher(cipher: CipherImage, path: Path) -> None:
    """Write ``cipher`` to ``path`` atomically."""
    data = encode_cipher(cipher)
    with atomic_output(Path(path)) as handle:
        handle.write(data)
    logger.debug(f"Wrote {len(data)}-byte cipher container to {path}")


def read_cipher(path: Path) -> CipherImage:
    """Read a cipher container from ``path``."""
    return decode_cipher(Path(path).read_bytes())


def is_cipher_file(path: Path) -> bool:
    """Return True when ``path`` starts with the container magic."""
    with open(path, "rb") as handle:
        return handle.read(len(CONTAINER_MAGIC)) == CONTAINER_MAGIC
