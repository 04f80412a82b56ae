"""Coloured tile sets whose forced assemblies reproduce the carpets.

Tiles are combinatorial: a kind plus named coloured regions.  Matching rules
are checked on colours only; the geometric notches that would enforce them
physically are not modelled.

Two catalogues exist.  For ``m = 0`` every tile is a square with regions
North ``x``, West ``y`` and Big South-East ``x + y``.  For ``m != 0`` there is
one corner tile, one border tile (used along both axes) and an interior tile
per active side ``(west, northwest, north)`` with body
``west + m*northwest + north``.

The quadrant is laid out in matrix coordinates: row index grows away from
the horizontal axis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from enum import Enum

import numpy as np

from .analysis import has_zeros
from .carpet import CarpetParams, _check_dense, support, tensor_construction
from .errors import CapacityError, ConsistencyError, DomainError
from .finite_field import FieldElement, FieldSpec

MAX_CATALOG = 10**6


class TileKind(str, Enum):
    TYPE_ONE = "TYPE_ONE"  # corner
    TYPE_TWO = "TYPE_TWO"  # border
    TYPE_THREE = "TYPE_THREE"  # interior
    PASCAL = "PASCAL"


@dataclass(frozen=True)
class Tile:
    kind: TileKind
    regions: dict[str, int] = dc_field(hash=False)

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "regions": dict(self.regions)}


@dataclass(frozen=True)
class TileSet:
    case: str  # "m_zero" or "m_nonzero"
    tiles: tuple[Tile, ...]
    r: int | None

    def as_dict(self) -> dict:
        return {"case": self.case, "r": self.r, "tiles": [t.as_dict() for t in self.tiles]}


def catalog_bound(tileset: TileSet, p: int) -> int:
    """Catalogue size bound: p^2 tiles for m = 0, r^3 + 2 otherwise."""
    return p * p if tileset.case == "m_zero" else tileset.r**3 + 2


def generated_subfield(m: FieldElement) -> list[FieldElement]:
    """Elements of GF(p)[m], i.e. those fixed by the Frobenius power that fixes m."""
    t = m.degree_over_prime()
    return [a for a in m.field.elements() if a.frobenius(t) == a]


def build_tile_set(field: FieldSpec, m: FieldElement) -> TileSet:
    if m == -field.one or not has_zeros(field, m):
        raise DomainError(f"F({field.p}, {int(m)}) over {field} has no zeros; no aperiodic tile set")
    if m.is_zero:
        prime = [field.from_int(v) for v in range(field.p)]
        tiles = tuple(
            Tile(TileKind.PASCAL, {"north": int(x), "west": int(y), "big_southeast": int(x + y)})
            for x, y in itertools.product(prime, repeat=2)
        )
        return TileSet("m_zero", tiles, None)
    colours = generated_subfield(m)
    r = len(colours)
    if r**3 + 2 > MAX_CATALOG:
        raise CapacityError(f"a catalogue of {r**3 + 2} tiles exceeds the limit of {MAX_CATALOG}")
    tiles = [Tile(TileKind.TYPE_ONE, {"body": 1}), Tile(TileKind.TYPE_TWO, {"body": 1})]
    for x, y, z in itertools.product(colours, repeat=3):
        tiles.append(Tile(TileKind.TYPE_THREE, {
            "west": int(x), "northwest": int(y), "north": int(z), "big_body": int(x + m * y + z),
        }))
    return TileSet("m_nonzero", tuple(tiles), r)


@dataclass(frozen=True, eq=False)
class Assembly:
    """A square region of the quadrant covered by tiles.

    ``colours`` holds the monochromatic square colours (equal to ``M_d``);
    ``placements`` the catalogue index of the tile covering each cell, or -1
    for cells coloured by the axes rather than by a tile.  ``orientations``
    marks border tiles as lying along ``"Ox"`` or ``"Oy"``.
    """

    colours: np.ndarray
    placements: np.ndarray
    orientations: dict[tuple[int, int], str]
    ambiguous: tuple[tuple[int, int], ...]


def _active_index(tileset: TileSet, kind: TileKind, keys: tuple[str, ...]) -> dict[tuple, list[int]]:
    index: dict[tuple, list[int]] = {}
    for n, tile in enumerate(tileset.tiles):
        if tile.kind is kind:
            index.setdefault(tuple(tile.regions[k] for k in keys), []).append(n)
    return index


def _pick(index: dict, key: tuple, cell: tuple[int, int], ambiguous: list) -> int:
    candidates = index.get(key)
    if not candidates:
        raise ConsistencyError(f"no tile matches the neighbours {key} at cell {cell}")
    if len(candidates) > 1:
        ambiguous.append(cell)
    return candidates[0]


def assemble(tileset: TileSet, field: FieldSpec, m: FieldElement, d: int) -> Assembly:
    """Tile the ``p^d x p^d`` corner of the quadrant row by row from the origin.

    Each cell takes the tile whose active side matches the colours already
    placed to its west, north-west and north.
    """
    side = field.p**d
    _check_dense(side)
    colours = np.zeros((side, side), dtype=np.int64)
    placements = np.full((side, side), -1, dtype=np.int64)
    orientations: dict[tuple[int, int], str] = {}
    ambiguous: list[tuple[int, int]] = []

    if tileset.case == "m_zero":
        # Axis colours are 1; the tile covering quadrant cell (i, j) paints
        # its big south-east region into cell (i+1, j+1).
        colours[0, :] = 1
        colours[:, 0] = 1
        index = _active_index(tileset, TileKind.PASCAL, ("north", "west"))
        for i in range(1, side):
            for j in range(1, side):
                n = _pick(index, (int(colours[i - 1, j]), int(colours[i, j - 1])), (i, j), ambiguous)
                placements[i, j] = n
                colours[i, j] = tileset.tiles[n].regions["big_southeast"]
    else:
        corner = next(n for n, t in enumerate(tileset.tiles) if t.kind is TileKind.TYPE_ONE)
        border = next(n for n, t in enumerate(tileset.tiles) if t.kind is TileKind.TYPE_TWO)
        placements[0, 0] = corner
        colours[0, 0] = tileset.tiles[corner].regions["body"]
        for t in range(1, side):
            placements[0, t] = placements[t, 0] = border
            colours[0, t] = colours[t, 0] = tileset.tiles[border].regions["body"]
            orientations[(0, t)] = "Ox"
            orientations[(t, 0)] = "Oy"
        index = _active_index(tileset, TileKind.TYPE_THREE, ("west", "northwest", "north"))
        for i in range(1, side):
            for j in range(1, side):
                key = (int(colours[i, j - 1]), int(colours[i - 1, j - 1]), int(colours[i - 1, j]))
                n = _pick(index, key, (i, j), ambiguous)
                placements[i, j] = n
                colours[i, j] = tileset.tiles[n].regions["big_body"]
    return Assembly(colours, placements, orientations, tuple(ambiguous))


def largest_empty_square(sup) -> int:
    """Side of the largest all-zero square block of a 0/1 support."""
    bits = np.asarray(sup.bits if hasattr(sup, "bits") else sup)
    rows, cols = bits.shape
    best = 0
    prev = [0] * (cols + 1)
    for i in range(rows):
        cur = [0] * (cols + 1)
        row = bits[i].tolist()
        for j in range(cols):
            if row[j] == 0:
                cur[j + 1] = min(prev[j], prev[j + 1], cur[j]) + 1
                if cur[j + 1] > best:
                    best = cur[j + 1]
        prev = cur
    return best


def aperiodicity_witness(field: FieldSpec, m: FieldElement, d_max: int) -> tuple[int, ...]:
    """Largest white square of the depth-d carpet for d = 1..d_max.

    Unbounded growth of these holes is what rules out a translation symmetry
    of the infinite tiling.
    """
    if not has_zeros(field, m):
        raise DomainError(f"F({field.p}, {int(m)}) over {field} has no zeros")
    return tuple(
        largest_empty_square(support(tensor_construction(CarpetParams(field, m, d))))
        for d in range(1, d_max + 1)
    )


def is_strictly_increasing_after_start(seq) -> bool:
    """True when the sequence strictly increases from its first nonzero term on."""
    tail = list(seq)
    while tail and tail[0] == 0:
        tail.pop(0)
    return bool(tail) and all(a < b for a, b in zip(tail, tail[1:]))
