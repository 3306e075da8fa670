"""Unit conventions shared across the package.

All public inputs and outputs are ordinary frequencies (kHz or MHz),
fields in mT and times in microseconds.  Angular frequencies only appear
inside propagator exponents, through the helpers below.
"""

import numpy as np

#: rad/us per kHz of ordinary frequency
ANGULAR_PER_KHZ = 2.0 * np.pi * 1e-3


def angular(f_khz):
    """Ordinary kHz -> angular rad/us."""
    return ANGULAR_PER_KHZ * np.asarray(f_khz, dtype=float)


def ordinary(w):
    """Angular rad/us -> ordinary kHz."""
    return np.asarray(w, dtype=float) / ANGULAR_PER_KHZ
