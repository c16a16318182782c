"""Hand-checked 4x4 worked example shared by the transform, operator and pipeline tests."""

import numpy as np

SAMPLE_KEY_SCALAR = 16
DEMO_MUTATION_CONSTANT = 5

SAMPLE_PIXELS = np.array(
    [
        [2, 4, 17, 100],
        [3955, 4, 23, 199],
        [1, 3, 4, 5],
        [9, 7, 6, 5],
    ],
    dtype=np.float64,
)

# Keyed DFT of SAMPLE_PIXELS with k = 16.
SAMPLE_SPECTRUM = np.array(
    [
        [4344, 3917 + 291j, 3690, 3917 - 291j],
        [110 - 4154j, 185 - 3835j, -82 - 3772j, -209 - 4023j],
        [-4072, -3953 - 95j, -3866, -3953 + 95j],
        [110 + 4154j, -209 + 4023j, -82 + 3772j, 185 + 3835j],
    ],
    dtype=np.complex128,
)

# SAMPLE_SPECTRUM after crossing columns (0, 1) and (2, 3) on every row.
CROSSED_SPECTRUM = np.array(
    [
        [4344 + 291j, 3917, 3690 - 291j, 3917],
        [110 - 3835j, 185 - 4154j, -82 - 4023j, -209 - 3772j],
        [-4072 - 95j, -3953, -3866 + 95j, -3953],
        [110 + 4023j, -209 + 4154j, -82 + 3835j, 185 + 3772j],
    ],
    dtype=np.complex128,
)

# CROSSED_SPECTRUM after reflecting columns 0 and 2 with the constant 5.
MUTATED_SPECTRUM = np.array(
    [
        [-4339 + 291j, 3917, -3685 - 291j, 3917],
        [-105 - 3835j, 185 - 4154j, 87 - 4023j, -209 - 3772j],
        [4077 - 95j, -3953, 3871 + 95j, -3953],
        [-105 + 4023j, -209 + 4154j, 87 + 3835j, 185 + 3772j],
    ],
    dtype=np.complex128,
)

MUTATED_RENDERING = np.array(
    [
        [255, 91, 0, 91],
        [58, 185, 133, 34],
        [154, 105, 73, 105],
        [133, 185, 58, 34],
    ],
    dtype=np.uint8,
)

# Regression key used across the suite; equals 1551917990046475381 in decimal.
TEST_KEY_HEX = "1589853085422475"
TEST_KEY_DEC = "1551917990046475381"
