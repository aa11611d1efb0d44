"""Low-discrepancy point sequences via the radical-inverse (van der Corput)
construction, paired across coprime bases for 2-D layouts."""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray


def halton(index: int, base: int) -> float:
    """Radical inverse of ``index`` in the given base.

    Digits of the index are mirrored about the radix point, giving a value
    in (0, 1) that fills the unit interval evenly as the index grows.
    Indexing starts at 1; index 0 would map to the degenerate value 0.
    """
    if index < 1:
        raise ValueError(f"index must be >= 1, got {index}")
    if base < 2:
        raise ValueError(f"base must be >= 2, got {base}")
    result = 0.0
    scale = 1.0
    i = int(index)
    while i > 0:
        i, digit = divmod(i, base)
        scale /= base
        result += digit * scale
    return result


def halton_pairs(count: int, bases: tuple[int, int] = (2, 3)) -> NDArray[np.float64]:
    """First ``count`` points of the 2-D sequence for the given bases.

    Returns an array of shape (count, 2) with coordinates in (0, 1);
    row i holds the point for index i + 1.
    """
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    out = np.empty((count, 2))
    for i in range(count):
        out[i, 0] = halton(i + 1, bases[0])
        out[i, 1] = halton(i + 1, bases[1])
    return out
