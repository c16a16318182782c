"""Core primitives: keys, LFSR index streams, the keyed transform and the spectral operators."""
