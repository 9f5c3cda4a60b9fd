"""Harmonic functions on the curve from two boundary values.

On the uniform chain a harmonic function is linear in the arc-length
parameter, so the value at an addressed vertex is a + (b - a) * theta,
where theta is the base-8 parameter of the addressed corner.  Every 8^i
is a power of two, so theta is dyadic and the evaluation is exact; the
vector sampler mirrors the same arithmetic bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite

import numpy as np

from .geometry import P0, P1, Point2, WordLike, _as_word, check_level


@dataclass(frozen=True)
class BoundaryData:
    """Prescribed values: a at P0, b at P1."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (isfinite(a) and isfinite(b)):
            raise ValueError(f"boundary values must be finite, got ({self.a}, {self.b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def harmonic_at(bd: BoundaryData, word: WordLike, corner: Point2) -> float:
    """Harmonic value at the vertex f_w(corner); corner is P0 or P1.

    The base-8 parameter of f_w(P0) is sum_i (w_i - 1) / 8^i; the P1
    corner sits one cell further at theta + 8^-m.
    """
    w = _as_word(word)
    if corner == P0:
        shift = 0.0
    elif corner == P1:
        shift = 8.0 ** (-len(w))
    else:
        raise ValueError(f"corner must be P0 or P1, got {corner!r}")
    theta = 0.0
    for depth, letter in enumerate(w.letters, start=1):
        theta += (letter - 1) / 8.0**depth
    theta += shift
    return bd.a + (bd.b - bd.a) * theta


def sample_harmonic(bd: BoundaryData, m: int) -> np.ndarray:
    """Harmonic samples on the level-m chain: a + (b - a) * k/8^m."""
    check_level(m)
    params = np.arange(8**m + 1) / 8.0**m
    return bd.a + (bd.b - bd.a) * params
