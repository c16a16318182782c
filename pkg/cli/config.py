"""Optional YAML configuration for the CLI."""

from dataclasses import dataclass, fields
from pathlib import Path

import yaml

from ..lib.keys import KeyFormat

REPORT_FORMATS = ("text", "kv")
UINT32_MAX = 0xFFFFFFFF


class ConfigError(ValueError):
    """Raised when a configuration file or override is invalid."""

    def __init__(self, message: str):
        """Create a configuration error."""
        super().__init__(message)
        self.message = message


@dataclass(frozen=True)
class CipherConfig:
    """Settings shared by the CLI subcommands.

    Values come from the defaults below, then the YAML file given with
    ``--config``, then explicit command-line flags.
    """

    repeat_factor: int = 1
    seed: int = 0
    samples: int = 2000
    report: str = "text"
    key_format: str = "hex"
    timing_runs: int = 5
    imag_tolerance: float = 1e-3
    rounding_tolerance: float = 0.5
    chi_square_quantile: float = 0.999

    def __post_init__(self):
        """Check types and ranges."""
        for field in fields(self):
            value = getattr(self, field.name)
            if field.type is int and (isinstance(value, bool) or not isinstance(value, int)):
                raise ConfigError(f"'{field.name}' must be an integer, got {value!r}")
            if field.type is float:
                if isinstance(value, bool) or not isinstance(value, int | float):
                    raise ConfigError(f"'{field.name}' must be a number, got {value!r}")
                object.__setattr__(self, field.name, float(value))
            if field.type is str and not isinstance(value, str):
                raise ConfigError(f"'{field.name}' must be a string, got {value!r}")

        if not 1 <= self.repeat_factor <= UINT32_MAX:
            raise ConfigError(f"'repeat_factor' must lie in [1, {UINT32_MAX}], got {self.repeat_factor}")
        if self.seed < 0:
            raise ConfigError(f"'seed' must be non-negative, got {self.seed}")
        if self.samples < 2:
            raise ConfigError(f"'samples' must be at least 2, got {self.samples}")
        if self.timing_runs < 1:
            raise ConfigError(f"'timing_runs' must be at least 1, got {self.timing_runs}")
        if self.report not in REPORT_FORMATS:
            raise ConfigError(f"'report' must be one of {', '.join(REPORT_FORMATS)}, got '{self.report}'")
        if self.key_format not in {fmt.value for fmt in KeyFormat}:
            raise ConfigError(f"'key_format' must be hex or dec, got '{self.key_format}'")
        if self.imag_tolerance <= 0 or self.rounding_tolerance <= 0:
            raise ConfigError("Integrity tolerances must be positive")
        if not 0 < self.chi_square_quantile < 1:
            raise ConfigError(f"'chi_square_quantile' must lie in (0, 1), got {self.chi_square_quantile}")


def load_config(path: Path | None) -> CipherConfig:
    """Load a configuration file, or the defaults when ``path`` is None.

    Args:
        path: YAML mapping whose keys are CipherConfig field names.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: If the file is not a mapping, has unknown keys or holds invalid values.
        OSError: If the file cannot be read.
    """
    if path is None:
        return CipherConfig()

    try:
        data = yaml.safe_load(Path(path).read_text())
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}") from e
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"Configuration must be a YAML mapping: {path}")

    known = {field.name for field in fields(CipherConfig)}
    unknown = sorted(str(name) for name in data if name not in known)
    if unknown:
        raise ConfigError(f"Unknown configuration keys in {path}: {', '.join(unknown)}")
    return CipherConfig(**data)
