"""Image encryption and decryption built on the core primitives."""
