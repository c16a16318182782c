"""Command-line interface for the image cipher."""

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..analysis.analysis import (
    correlation_report,
    histogram,
    histogram_gate,
    key_sensitivity_suite,
    timing_report,
)
from ..cipher.pipeline import PlainImage, decrypt_image, encrypt_image, render_cipher
from ..image_codec.codec import is_cipher_file, read_cipher, read_image, write_cipher, write_image
from ..lib.errors import CipherError, ImageFormatError, IntegrityError, KeyFormatError
from ..lib.keys import KeyFormat, SecretKey
from .config import REPORT_FORMATS, UINT32_MAX, CipherConfig, ConfigError, load_config
from .constants import (
    ANALYZE_MODES,
    CIPHER_PREFIX,
    EXIT_FORMAT,
    EXIT_INTEGRITY,
    EXIT_IO,
    EXIT_SUCCESS,
    EXIT_USAGE,
    KEYED_ANALYZE_MODES,
)
from .reporting import Entry, format_report, report_entries

logger = logging.getLogger(__name__)

# Flags that override configuration values when given explicitly.
CONFIG_FLAGS = ("repeat_factor", "seed", "samples", "report", "key_format")


class CipherArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage exit code on errors."""

    def error(self, message: str):
        """Print usage and exit with EXIT_USAGE."""
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def positive_int(value: str) -> int:
    """Validate a positive integer flag.

    Raises:
        argparse.ArgumentTypeError: If ``value`` is not an integer >= 1.
    """
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"'{value}' must be at least 1")
    return number


def repeat_factor_value(value: str) -> int:
    """Validate a repeat factor that fits the 32-bit container field."""
    number = positive_int(value)
    if number > UINT32_MAX:
        raise argparse.ArgumentTypeError(f"'{value}' exceeds the largest repeat factor {UINT32_MAX}")
    return number


def non_negative_int(value: str) -> int:
    """Validate a seed."""
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{value}' is not an integer") from None
    if number < 0:
        raise argparse.ArgumentTypeError(f"'{value}' must not be negative")
    return number


def _add_key_arguments(parser: argparse.ArgumentParser, required: bool) -> None:
    parser.add_argument("--key", required=required, help="Secret key, up to 256 bits")
    parser.add_argument(
        "--key-format",
        choices=[fmt.value for fmt in KeyFormat],
        help="Spelling of --key (default: hex)",
    )
    parser.add_argument(
        "--repeat-factor",
        type=repeat_factor_value,
        help="Mutation schedule length as a multiple of the pixel count (default: 1)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Enable verbose output")
    common.add_argument("--config", type=Path, help="YAML file with default settings")

    parser = CipherArgumentParser(
        prog="defc",
        description="Encrypt 8-bit images in the frequency domain and analyze the result",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Exit codes:
  0 success, 1 usage, 2 I/O error, 3 malformed input, 4 integrity check failed

Examples:
  # Encrypt and decrypt with a hexadecimal key:
  defc encrypt --in lena.pgm --out lena.defc --key 1589853085422475
  defc decrypt --in lena.defc --out restored.pgm --key 1589853085422475

  # The same key spelled in decimal:
  defc decrypt --in lena.defc --out restored.pgm --key 1551917990046475381 --key-format dec

  # Viewable rendering of a cipher:
  defc render --in lena.defc --out lena-cipher.png --centered

  # Statistics of a plain image and of its cipher:
  defc analyze --mode correlation --in lena.pgm --key 1589853085422475 --report kv
        """,
    )
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="{encrypt,decrypt,render,analyze}")

    encrypt = subparsers.add_parser("encrypt", parents=[common], help="Encrypt a PGM or PNG image")
    encrypt.add_argument("--in", dest="input", type=Path, required=True, help="Plain image (.pgm or .png)")
    encrypt.add_argument("--out", dest="output", type=Path, required=True, help="Cipher container to write")
    _add_key_arguments(encrypt, required=True)

    decrypt = subparsers.add_parser("decrypt", parents=[common], help="Decrypt a cipher container")
    decrypt.add_argument("--in", dest="input", type=Path, required=True, help="Cipher container")
    decrypt.add_argument("--out", dest="output", type=Path, required=True, help="Image to write (.pgm or .png)")
    _add_key_arguments(decrypt, required=True)
    decrypt.add_argument(
        "--force",
        action="store_true",
        help="Write the clamped result even if the integrity check fails",
    )

    render = subparsers.add_parser("render", parents=[common], help="Render a cipher as an 8-bit image")
    render.add_argument("--in", dest="input", type=Path, required=True, help="Cipher container")
    render.add_argument("--out", dest="output", type=Path, required=True, help="Image to write (.pgm or .png)")
    render.add_argument("--centered", action="store_true", help="Move the DC term to the image center")

    analyze = subparsers.add_parser("analyze", parents=[common], help="Run a statistical analysis")
    analyze.add_argument("--mode", choices=ANALYZE_MODES, required=True, help="Analysis to run")
    analyze.add_argument("--in", dest="input", type=Path, required=True, help="Plain image or cipher container")
    _add_key_arguments(analyze, required=False)
    analyze.add_argument("--seed", type=non_negative_int, help="Sampling seed (default: 0)")
    analyze.add_argument("--samples", type=positive_int, help="Sampled pixel pairs (default: 2000)")
    analyze.add_argument("--report", choices=REPORT_FORMATS, help="Report format (default: text)")
    return parser


def parse_arguments(argv: list[str] | None = None) -> argparse.Namespace:
    """Parse and validate command-line arguments.

    Returns:
        argparse.Namespace: Parsed and validated arguments.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze" and args.mode in KEYED_ANALYZE_MODES and args.key is None:
        parser.error(f"--key is required for --mode {args.mode}")
    return args


def resolve_config(args: argparse.Namespace) -> CipherConfig:
    """Layer explicit flags over the configuration file over the defaults."""
    config = load_config(args.config)
    overrides = {name: getattr(args, name) for name in CONFIG_FLAGS if getattr(args, name, None) is not None}
    return replace(config, **overrides)


def _parse_key(args: argparse.Namespace, config: CipherConfig) -> SecretKey:
    return SecretKey.parse(args.key, config.key_format)


def _read_analysis_input(path: Path) -> tuple[PlainImage, bool]:
    """Return the image to analyze and whether it came from a cipher container."""
    if is_cipher_file(path):
        return render_cipher(read_cipher(path)), True
    return read_image(path), False


def _channel_prefix(image: PlainImage, channel: int) -> str:
    return f"channel{channel}." if image.channels > 1 else ""


def _require_plain(path: Path, is_cipher: bool, mode: str) -> None:
    if is_cipher:
        raise ImageFormatError(f"{path}: --mode {mode} needs a plain image, got a cipher container")


def cmd_encrypt(args: argparse.Namespace, config: CipherConfig) -> int:
    """Encrypt an image file into a cipher container."""
    key = _parse_key(args, config)
    image = read_image(args.input)
    cipher = encrypt_image(image, key, config.repeat_factor)
    write_cipher(cipher, args.output)
    logger.info(f"Encrypted {args.input} ({image.channels}x{image.height}x{image.width}) to {args.output}")
    return EXIT_SUCCESS


def cmd_decrypt(args: argparse.Namespace, config: CipherConfig) -> int:
    """Decrypt a cipher container into an image file.

    The repeat factor recorded in the container is used unless --repeat-factor is given.
    """
    key = _parse_key(args, config)
    cipher = read_cipher(args.input)
    image = decrypt_image(
        cipher,
        key,
        args.repeat_factor,
        strict=not args.force,
        imag_tolerance=config.imag_tolerance,
        rounding_tolerance=config.rounding_tolerance,
    )
    write_image(image, args.output)
    logger.info(f"Decrypted {args.input} to {args.output}")
    return EXIT_SUCCESS


def cmd_render(args: argparse.Namespace, config: CipherConfig) -> int:
    """Write the log-magnitude rendering of a cipher container."""
    rendering = render_cipher(read_cipher(args.input), centered=args.centered)
    write_image(rendering, args.output)
    logger.info(f"Rendered {args.input} to {args.output}")
    return EXIT_SUCCESS


def _histogram_entries(image: PlainImage, cipher_render: PlainImage | None, config: CipherConfig) -> list[Entry]:
    entries = [
        (f"{_channel_prefix(image, c)}histogram", histogram(image.pixels[c])) for c in range(image.channels)
    ]
    if cipher_render is not None:
        entries += [
            (f"{CIPHER_PREFIX}.{_channel_prefix(image, c)}histogram", histogram(cipher_render.pixels[c]))
            for c in range(image.channels)
        ]
        for c in range(image.channels):
            gate = histogram_gate(image.pixels[c], cipher_render.pixels[c], config.chi_square_quantile)
            prefix = f"{_channel_prefix(image, c)}chi_square_"
            entries += [
                (f"{prefix}statistic", gate.statistic),
                (f"{prefix}critical", gate.critical),
                (f"{prefix}passed", gate.passed),
            ]
    return entries


def _correlation_entries(image: PlainImage, cipher_render: PlainImage | None, config: CipherConfig) -> list[Entry]:
    entries = []
    for c in range(image.channels):
        report = correlation_report(image.pixels[c], config.samples, config.seed)
        entries += report_entries(report, _channel_prefix(image, c))
    if cipher_render is not None:
        for c in range(image.channels):
            report = correlation_report(cipher_render.pixels[c], config.samples, config.seed)
            entries += report_entries(report, f"{CIPHER_PREFIX}.{_channel_prefix(image, c)}")
    return entries


def cmd_analyze(args: argparse.Namespace, config: CipherConfig) -> int:
    """Run one analysis and print its report on stdout.

    Cipher containers are rendered before any statistic is computed. For plain
    images, a key adds the same statistics for the rendered cipher.
    """
    image, is_cipher = _read_analysis_input(args.input)
    key = _parse_key(args, config) if args.key is not None else None
    cipher_render = None
    if key is not None and not is_cipher and args.mode in ("histogram", "correlation"):
        cipher_render = render_cipher(encrypt_image(image, key, config.repeat_factor))

    if args.mode == "histogram":
        entries = _histogram_entries(image, cipher_render, config)
    elif args.mode == "correlation":
        entries = _correlation_entries(image, cipher_render, config)
    elif args.mode == "keysens":
        _require_plain(args.input, is_cipher, args.mode)
        entries = report_entries(key_sensitivity_suite(image, key, config.repeat_factor))
    else:
        _require_plain(args.input, is_cipher, args.mode)
        entries = report_entries(timing_report(image, key, config.timing_runs, config.repeat_factor))

    print(format_report(entries, config.report))
    return EXIT_SUCCESS


COMMANDS = {
    "encrypt": cmd_encrypt,
    "decrypt": cmd_decrypt,
    "render": cmd_render,
    "analyze": cmd_analyze,
}


def run(args: argparse.Namespace) -> int:
    """Execute the selected command and map failures to exit codes."""
    try:
        config = resolve_config(args)
        return COMMANDS[args.command](args, config)
    except (KeyFormatError, ConfigError) as e:
        logger.error(e.message)
        return EXIT_USAGE
    except IntegrityError as e:
        logger.error(e.message)
        return EXIT_INTEGRITY
    except CipherError as e:
        # Malformed images or containers, bad dimensions and undefined statistics
        logger.error(e.message)
        return EXIT_FORMAT
    except OSError as e:
        target = f"{e.filename}: " if e.filename else ""
        logger.error(f"{target}{e.strerror or e}")
        return EXIT_IO


def main(argv: list[str] | None = None) -> None:
    """Main entry point for the CLI."""
    args = parse_arguments(argv)

    # Configure logging at application entry point
    log_level = logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(level=log_level, format="%(levelname)s: %(message)s")

    sys.exit(run(args))
