"""DEFC image cipher

Frequency-domain encryption of 8-bit images: a keyed 2-D DFT followed by
LFSR-indexed crossover and keyed mutation of spectral components, together with
the statistical analyses used to evaluate it.

Usage:
    from defc.cipher.pipeline import encrypt_image, decrypt_image
    from defc.lib.keys import SecretKey
    from defc import analysis, image_codec
"""

# Import submodules to enable the convenient import patterns shown above
from . import analysis, cipher, cli, image_codec, lib

__all__ = ["analysis", "cipher", "cli", "image_codec", "lib"]
