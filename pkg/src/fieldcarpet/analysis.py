"""Zero sets, symmetry groups, dimension, field scans and integer identities.

Everything here works on the fundamental block ``F(p, m)``; deeper carpets
inherit their zero structure from it through the tensor factorisation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable

import numpy as np

from .carpet import SupportMatrix, block_rows, fundamental_block, support
from .errors import CapacityError, DomainError, UsageError
from .finite_field import FieldElement, FieldSpec

SCAN_LIMIT = 10**6

Cell = tuple[int, int]


# -- the eight isometries of the square -----------------------------------------
# Each maps a target cell (i, j) of an n x n grid to the source cell it reads.

_ISOMETRY_MAPS = {
    "identity": lambda i, j, n: (i, j),
    "rot90": lambda i, j, n: (j, n - 1 - i),
    "rot180": lambda i, j, n: (n - 1 - i, n - 1 - j),
    "rot270": lambda i, j, n: (n - 1 - j, i),
    "main_diagonal": lambda i, j, n: (j, i),
    "anti_diagonal": lambda i, j, n: (n - 1 - j, n - 1 - i),
    "horizontal_axis": lambda i, j, n: (n - 1 - i, j),
    "vertical_axis": lambda i, j, n: (i, n - 1 - j),
}

ISOMETRIES = tuple(_ISOMETRY_MAPS)
D8 = frozenset(ISOMETRIES)
K4 = frozenset({"identity", "main_diagonal", "anti_diagonal", "rot180"})
S2 = frozenset({"identity", "main_diagonal"})


def apply_isometry(name: str, arr: np.ndarray) -> np.ndarray:
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise UsageError(f"isometries act on square arrays, got shape {arr.shape}")
    i, j = np.indices((n, n))
    si, sj = _ISOMETRY_MAPS[name](i, j, n)
    return arr[si, sj]


def map_cell(name: str, cell: Cell, n: int) -> Cell:
    i, j = _ISOMETRY_MAPS[name](cell[0], cell[1], n)
    return int(i), int(j)


class SymmetryLabel(str, Enum):
    PASCAL_S2 = "PASCAL_S2"
    FULL_SQUARE_D8 = "FULL_SQUARE_D8"
    CROSS_D8 = "CROSS_D8"
    KLEIN_K4 = "KLEIN_K4"


_LABEL_GROUPS = {
    SymmetryLabel.PASCAL_S2: S2,
    SymmetryLabel.FULL_SQUARE_D8: D8,
    SymmetryLabel.CROSS_D8: D8,
    SymmetryLabel.KLEIN_K4: K4,
}


@dataclass(frozen=True)
class SymmetryClass:
    label: SymmetryLabel | None
    subgroup: frozenset[str]

    @property
    def isometries(self) -> list[str]:
        return [g for g in ISOMETRIES if g in self.subgroup]


def symmetry_subgroup(sup: SupportMatrix) -> frozenset[str]:
    """Isometries of the square that fix the support pointwise."""
    bits = sup.bits
    return frozenset(g for g in ISOMETRIES if np.array_equal(apply_isometry(g, bits), bits))


def _prime_value(m: FieldElement | int, p: int) -> int:
    if isinstance(m, FieldElement):
        if m.field.p != p:
            raise UsageError(f"{m!r} does not live in characteristic {p}")
        if not m.in_prime_field:
            raise DomainError(f"{m!r} is not in the prime field GF({p})")
        return m.coeffs[0]
    return int(m) % p


def classify_symmetry(p: int, m: FieldElement | int) -> SymmetryClass:
    """Symmetry class of the carpet for ``m`` in GF(p), read off the value of m."""
    v = _prime_value(m, p)
    if v == p - 1:
        label = SymmetryLabel.FULL_SQUARE_D8
    elif v == 0:
        label = SymmetryLabel.PASCAL_S2
    elif v == 1:
        label = SymmetryLabel.CROSS_D8
    else:
        label = SymmetryLabel.KLEIN_K4
    return SymmetryClass(label, _LABEL_GROUPS[label])


def label_for_subgroup(subgroup: frozenset[str], zeros_present: bool) -> SymmetryLabel | None:
    """Name a brute-force subgroup when it is one of the four classified groups."""
    if subgroup == D8:
        return SymmetryLabel.CROSS_D8 if zeros_present else SymmetryLabel.FULL_SQUARE_D8
    if subgroup == K4:
        return SymmetryLabel.KLEIN_K4
    if subgroup == S2:
        return SymmetryLabel.PASCAL_S2
    return None


def observed_symmetry(field: FieldSpec, m: FieldElement) -> SymmetryClass:
    """Brute-force symmetry class of ``F(p, m)`` for any m."""
    sup = support(fundamental_block(field, m))
    group = symmetry_subgroup(sup)
    return SymmetryClass(label_for_subgroup(group, bool(sup.zeros)), group)


# -- zeros --------------------------------------------------------------------------

def first_row_zero_index(field: FieldSpec, m: FieldElement) -> int | None:
    """The unique k with ``a[1, k] = 0``, i.e. ``k = -(m+1)^-1`` in GF(p); None for m = -1."""
    p = field.p
    v = _prime_value(m, p)
    if (v + 1) % p == 0:
        return None
    return (-pow(v + 1, -1, p)) % p


def has_zeros(field: FieldSpec, m: FieldElement) -> bool:
    """Whether ``F(p, m)`` (hence every ``M_d``) contains a zero.

    An m of degree above (p-1)/2 over GF(p) never yields zeros.  Otherwise the
    zero set is symmetric in both diagonals, so scanning the top half suffices.
    """
    p = field.p
    if not m.is_zero and m.degree_over_prime() > (p - 1) // 2:
        return False
    return bool((block_rows(field, m, p // 2 + 1) == 0).any())


def cross(p: int) -> frozenset[Cell]:
    c = (p - 1) // 2
    return frozenset({(c, i) for i in range(1, p, 2)} | {(i, c) for i in range(1, p, 2)})


def odd_diagonal_plus(p: int) -> frozenset[Cell]:
    return frozenset((i, i) for i in range(1, p - 1, 2))


def odd_diagonal_minus(p: int) -> frozenset[Cell]:
    return frozenset((i, p - 1 - i) for i in range(1, p, 2))


def _orbit_of_cell(cell: Cell, group: Iterable[str], n: int) -> frozenset[Cell]:
    return frozenset(map_cell(g, cell, n) for g in group)


@dataclass(frozen=True)
class ZeroReport:
    field: FieldSpec
    m: FieldElement
    zeros: tuple[Cell, ...]
    regular: tuple[Cell, ...]
    sporadic: tuple[Cell, ...]
    rule: str


def regular_pattern(field: FieldSpec, m: FieldElement) -> tuple[frozenset[Cell], str]:
    """Cells that are structurally expected to vanish, and the rule that names them.

    ``m = 1``: the cross.  ``m = -2`` / ``m = -1/2``: the odd diagonals.
    Other m in GF(p): the symmetry orbit of the unique zero in row 1.
    Off the prime field no zeros count as regular.
    """
    p = field.p
    if m == -field.one:
        return frozenset(), "none"
    if m == field.one:
        return cross(p), "cross"
    if m.in_prime_field and not m.is_zero and p > 2:
        if m == field.from_int(-2):
            return odd_diagonal_plus(p), "odd_diagonal_plus"
        if m == -field.from_int(2).inverse():
            return odd_diagonal_minus(p), "odd_diagonal_minus"
    if m.in_prime_field:
        k = first_row_zero_index(field, m)
        group = symmetry_subgroup(support(fundamental_block(field, m)))
        return _orbit_of_cell((1, k), group, p), "first_row_orbit"
    return frozenset(), "none"


def zero_report(field: FieldSpec, m: FieldElement) -> ZeroReport:
    zeros = support(fundamental_block(field, m)).zeros
    pattern, rule = regular_pattern(field, m)
    regular = tuple(z for z in zeros if z in pattern)
    sporadic = tuple(z for z in zeros if z not in pattern)
    return ZeroReport(field, m, tuple(zeros), regular, sporadic, rule)


def edge_adjacent_zeros(field: FieldSpec, m: FieldElement) -> list[tuple[Cell, Cell]]:
    """Pairs of zeros of ``F(p, m)`` sharing an edge (expected to be empty, never enforced)."""
    z = fundamental_block(field, m).values == 0
    pairs = []
    for i, j in zip(*np.nonzero(z[:, :-1] & z[:, 1:])):
        pairs.append(((int(i), int(j)), (int(i), int(j) + 1)))
    for i, j in zip(*np.nonzero(z[:-1, :] & z[1:, :])):
        pairs.append(((int(i), int(j)), (int(i) + 1, int(j))))
    return sorted(pairs)


def zero_count_floor(p: int) -> int:
    """Guaranteed number of zeros in ``F(p, m)`` for any m != -1 in GF(p)."""
    if p >= 11:
        return 4
    if p == 7:
        return 3
    if p > 3:
        return 2
    return 1


@dataclass(frozen=True)
class BoundsReport:
    p: int
    required: int
    counts: dict[int, int]

    @property
    def passed(self) -> bool:
        return all(c >= self.required for c in self.counts.values())


def zero_count_bounds_check(p: int) -> BoundsReport:
    field = FieldSpec(p)
    counts = {}
    for v in range(p - 1):  # m = p-1 is -1
        counts[v] = int((fundamental_block(field, field.decode(v)).values == 0).sum())
    return BoundsReport(p, zero_count_floor(p), counts)


@dataclass(frozen=True)
class Dimension:
    count: int
    side: int

    @property
    def ln_ratio(self) -> float:
        return math.log(self.count) / math.log(self.side)


def fractal_dimension(sup: SupportMatrix) -> Dimension:
    """Similarity dimension ``ln(#nonzero) / ln(side)`` of the self-similar set."""
    side = sup.side
    if side < 2:
        raise UsageError("the block side must be at least 2")
    count = int(sup.bits.sum())
    if count == 0:
        raise DomainError("an all-zero block has no dimension")
    return Dimension(count, side)


# -- scanning a field for carpets with holes ------------------------------------------

def orbit(m: FieldElement) -> frozenset[int]:
    """Encodings of all Frobenius conjugates of m and of its inverse."""
    if m.is_zero:
        return frozenset({0})
    out = set()
    for base in (m, m.inverse()):
        x = base
        for _ in range(m.field.k):
            out.add(int(x))
            x = x.frobenius()
    return frozenset(out)


def scan_field(field: FieldSpec, limit: int = SCAN_LIMIT) -> list[int]:
    """Canonical (minimal-encoding) representatives of all m whose carpet has holes.

    m, its inverse and their Frobenius conjugates give the same or mirrored
    carpets, so each such orbit is reported once.
    """
    if field.q > limit:
        raise CapacityError(f"scanning {field} ({field.q} elements) exceeds the limit of {limit}")
    seen = np.zeros(field.q, dtype=bool)
    found = []
    for n in range(field.q):
        if seen[n]:
            continue
        m = field.decode(n)
        members = orbit(m)
        seen[list(members)] = True
        if has_zeros(field, m):
            found.append(min(members))
    return sorted(found)


# -- integer identities ----------------------------------------------------------------

def central_sum_S(n: int) -> int:
    """``sum_a (-2)^a C(n, a) C(2n-a, n-a)``, the value f(n, n) over the integers at m = -2."""
    if n < 0:
        raise UsageError("n must be non-negative")
    return sum((-2) ** a * math.comb(n, a) * math.comb(2 * n - a, n - a) for a in range(n + 1))


def delannoy(n: int, k: int) -> int:
    """Delannoy number: f(n, k) at m = 1 over the integers."""
    if n < 0 or k < 0:
        raise UsageError("indices must be non-negative")
    return sum(math.comb(n, a) * math.comb(n + k - a, k - a) for a in range(min(n, k) + 1))


# -- JSON report -----------------------------------------------------------------------

def params_dict(field: FieldSpec, m: FieldElement | None = None, depth: int | None = None) -> dict:
    out = {"field": field.descriptor, "p": field.p, "k": field.k}
    if m is not None:
        out["m"] = int(m)
    if depth is not None:
        out["depth"] = depth
    return out


def symmetry_of(field: FieldSpec, m: FieldElement) -> SymmetryClass:
    if m.in_prime_field:
        return classify_symmetry(field.p, m)
    return observed_symmetry(field, m)


def symmetry_dict(cls: SymmetryClass) -> dict:
    return {"label": cls.label.value if cls.label else None, "isometries": cls.isometries}


def dimension_dict(dim: Dimension) -> dict:
    return {"count": dim.count, "ln_ratio": dim.ln_ratio}


def report(field: FieldSpec, m: FieldElement) -> dict:
    """Full analysis of ``F(p, m)`` in the JSON report layout."""
    zr = zero_report(field, m)
    sup = support(fundamental_block(field, m))
    return {
        "params": params_dict(field, m),
        "zeros": [list(z) for z in zr.zeros],
        "regular": [list(z) for z in zr.regular],
        "sporadic": [list(z) for z in zr.sporadic],
        "symmetry": symmetry_dict(symmetry_of(field, m)),
        "dimension": dimension_dict(fractal_dimension(sup)),
    }
