"""Netpbm output: plain PBM for supports, binary PPM for coloured carpets."""

from __future__ import annotations

import colorsys
from typing import Iterable, Iterator, Mapping

import numpy as np

from .carpet import FieldMatrix, SupportMatrix
from .errors import UsageError
from .finite_field import FieldSpec

WHITE = (255, 255, 255)
BLACK = (0, 0, 0)

# Plain PBM lines may not exceed 70 characters: 35 space-separated digits is 69.
_PBM_DIGITS_PER_LINE = 35

Palette = Mapping[int, tuple[int, int, int]]


def iter_pbm(width: int, height: int, bit_rows: Iterable) -> Iterator[bytes]:
    """Chunks of a plain (P1) PBM; 1 = black = nonzero entry."""
    yield f"P1\n{width} {height}\n".encode("ascii")
    for row in bit_rows:
        digits = ["1" if b else "0" for b in np.asarray(row).tolist()]
        lines = [" ".join(digits[s:s + _PBM_DIGITS_PER_LINE])
                 for s in range(0, len(digits), _PBM_DIGITS_PER_LINE)]
        yield ("\n".join(lines) + "\n").encode("ascii")


def to_pbm(sup: SupportMatrix) -> bytes:
    height, width = sup.bits.shape
    return b"".join(iter_pbm(width, height, sup.bits))


def _hsv_rgb(hue: float) -> tuple[int, int, int]:
    r, g, b = colorsys.hsv_to_rgb(hue % 1.0, 1.0, 1.0)
    return int(round(r * 255)), int(round(g * 255)), int(round(b * 255))


def default_palette(field: FieldSpec, symmetric: bool = False) -> dict[int, tuple[int, int, int]]:
    """Zero is white; the other encodings get evenly spaced hues.

    With ``symmetric`` the hue index is folded so that k and p - k share a
    colour, which suits the m = 1 carpets over GF(p).
    """
    q = field.q
    if symmetric and field.k > 1:
        raise UsageError("the symmetric palette is defined over prime fields only")
    palette = {0: WHITE}
    if q == 2:
        palette[1] = BLACK
        return palette
    for n in range(1, q):
        if symmetric:
            folded = min(n, q - n)
            palette[n] = _hsv_rgb((folded - 1) / ((q - 1) // 2))
        else:
            palette[n] = _hsv_rgb((n - 1) / (q - 1))
    return palette


def iter_ppm(width: int, height: int, value_rows: Iterable, palette: Palette) -> Iterator[bytes]:
    """Chunks of a binary (P6) PPM; pixel (i, j) takes the colour of entry (i, j)."""
    size = max(palette) + 1 if palette else 0
    lut = np.zeros((size, 3), dtype=np.uint8)
    known = np.zeros(size, dtype=bool)
    for n, rgb in palette.items():
        lut[n] = rgb
        known[n] = True
    yield f"P6\n{width} {height}\n255\n".encode("ascii")
    for row in value_rows:
        row = np.asarray(row, dtype=np.int64)
        if row.size and (row.max() >= size or not known[row].all()):
            missing = sorted(set(row.tolist()) - {n for n in palette})
            raise UsageError(f"palette has no colour for encodings {missing[:10]}")
        yield lut[row].tobytes()


def to_ppm(matrix: FieldMatrix, palette: Palette) -> bytes:
    height, width = matrix.values.shape
    return b"".join(iter_ppm(width, height, matrix.values, palette))
