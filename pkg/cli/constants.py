"""Constants shared by the command-line interface."""

# Exit codes
EXIT_SUCCESS = 0
EXIT_USAGE = 1  # Bad flags, unparsable key or invalid configuration
EXIT_IO = 2  # File could not be read or written
EXIT_FORMAT = 3  # Malformed image or cipher container, or an undefined statistic
EXIT_INTEGRITY = 4  # Decryption failed its integrity check

ANALYZE_MODES = ("histogram", "correlation", "keysens", "timing")
KEYED_ANALYZE_MODES = ("keysens", "timing")

# Prefix of report lines describing the rendered cipher of a plain input
CIPHER_PREFIX = "cipher"
