"""Entry point for running the CLI as a module.

Usage:
    python -m defc.cli encrypt --in image.pgm --out image.defc --key 1589853085422475
    python -m defc.cli analyze --mode correlation --in image.pgm
"""

from .cli import main

if __name__ == "__main__":
    main()
