"""Carpet matrices M_d and the structural operators acting on them.

``M_d`` is the ``p^d x p^d`` matrix with ones on the first row and column and
``a[i, j] = a[i-1, j] + m*a[i-1, j-1] + a[i, j-1]`` elsewhere.  It can be
produced three ways, which must agree entry for entry:

* :func:`generate_recurrence` runs the recurrence row by row;
* :func:`tensor_construction` multiplies Frobenius conjugates of the
  fundamental block ``F = M_1`` as Kronecker products;
* :class:`CarpetIndex` / :func:`entry_at` evaluate single entries as a
  product over the base-p digits of the two indices, without building
  anything dense.

Matrices store integer encodings of field elements (see
:mod:`fieldcarpet.finite_field`) in read-only numpy arrays.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import CapacityError, DomainError, UsageError
from .finite_field import FieldElement, FieldSpec

DENSE_LIMIT = 2**26
DENSE_LIMIT_ENV = "FIELDCARPET_DENSE_LIMIT"
MAX_STREAM_DEPTH = 12


def dense_limit() -> int:
    """Largest number of entries a dense matrix may have (env override allowed)."""
    raw = os.environ.get(DENSE_LIMIT_ENV)
    if raw is None:
        return DENSE_LIMIT
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{DENSE_LIMIT_ENV} must be an integer, got {raw!r}") from None


def _check_dense(side: int) -> None:
    if side * side > dense_limit():
        raise CapacityError(
            f"a dense {side}x{side} matrix exceeds the limit of {dense_limit()} entries; "
            "use entry_at or stream_rows instead"
        )


@dataclass(frozen=True)
class CarpetParams:
    field: FieldSpec
    m: FieldElement
    depth: int = 1

    def __post_init__(self):
        if self.m.field != self.field:
            raise UsageError(f"m = {self.m!r} does not belong to {self.field}")
        if int(self.depth) < 1:
            raise UsageError(f"depth must be >= 1, got {self.depth}")
        object.__setattr__(self, "depth", int(self.depth))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def side(self) -> int:
        return self.field.p ** self.depth

    def with_depth(self, depth: int) -> "CarpetParams":
        return CarpetParams(self.field, self.m, depth)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class FieldMatrix:
    """A matrix over ``field`` held as integer encodings."""

    field: FieldSpec
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 2:
            raise UsageError(f"expected a 2-d array, got shape {vals.shape}")
        if vals.size and (vals.min() < 0 or vals.max() >= self.field.q):
            raise UsageError(f"entries out of range for {self.field}")
        object.__setattr__(self, "values", _readonly(vals.astype(self.field.dtype, copy=True)))

    @classmethod
    def from_elements(cls, field: FieldSpec, rows: Sequence[Sequence[FieldElement | int]]):
        return cls(field, np.array([[int(x) for x in row] for row in rows], dtype=np.int64))

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def side(self) -> int:
        rows, cols = self.values.shape
        if rows != cols:
            raise UsageError(f"matrix is not square: {rows}x{cols}")
        return rows

    def entry(self, i: int, j: int) -> FieldElement:
        return self.field.decode(int(self.values[i, j]))

    def tolist(self) -> list[list[int]]:
        return self.values.astype(np.int64).tolist()

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"{type(self).__name__}({self.field}, shape={self.values.shape})"


@dataclass(frozen=True, eq=False)
class CarpetMatrix(FieldMatrix):
    """``M_d`` together with the parameters that produced it."""

    params: CarpetParams | None = None

    def as_field_matrix(self) -> FieldMatrix:
        return FieldMatrix(self.field, self.values)


@dataclass(frozen=True, eq=False)
class SupportMatrix:
    """0/1 shadow of a matrix: 1 exactly where the entry is nonzero."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 2:
            raise UsageError(f"expected a 2-d array, got shape {bits.shape}")
        object.__setattr__(self, "bits", _readonly((bits != 0).astype(np.uint8)))

    @property
    def side(self) -> int:
        rows, cols = self.bits.shape
        if rows != cols:
            raise UsageError(f"support is not square: {rows}x{cols}")
        return rows

    @property
    def zeros(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.bits == 0))]

    def __eq__(self, other):
        if not isinstance(other, SupportMatrix):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __repr__(self):
        return f"SupportMatrix(shape={self.bits.shape})"


# -- recurrence -----------------------------------------------------------------

def _prefix_sums(field: FieldSpec, increments: np.ndarray, start: int) -> np.ndarray:
    """``start + cumsum(increments)`` in the field (addition is digitwise)."""
    if field.k == 1:
        return (np.cumsum(increments) + start) % field.p
    digits = np.cumsum(field.to_digits(increments), axis=0) + field.to_digits(start)
    return field.from_digits(digits % field.p)


def _fill_recurrence(field: FieldSpec, m: FieldElement, a: np.ndarray, i0: int, j0: int) -> None:
    """Fill ``a[i0:, j0:]`` in place from row ``i0-1`` and column ``j0-1``.

    Row i follows from row i-1: ``a[i, j] = a[i, j-1] + (a[i-1, j] + m*a[i-1, j-1])``,
    a prefix sum along the row.
    """
    for i in range(i0, a.shape[0]):
        prev = a[i - 1].astype(np.int64)
        inc = field.add_arrays(prev[j0:], field.scale_array(prev[j0 - 1:-1], m))
        a[i, j0:] = _prefix_sums(field, inc, int(a[i, j0 - 1]))


def _recurrence_rows(field: FieldSpec, m: FieldElement, nrows: int, ncols: int) -> np.ndarray:
    a = np.empty((nrows, ncols), dtype=field.dtype)
    a[0, :] = 1
    a[:, 0] = 1
    _fill_recurrence(field, m, a, 1, 1)
    return a


def generate_recurrence(params: CarpetParams) -> CarpetMatrix:
    """Build ``M_d`` by running the recurrence over the whole ``p^d x p^d`` grid."""
    side = params.side
    _check_dense(side)
    values = _recurrence_rows(params.field, params.m, side, side)
    return CarpetMatrix(params.field, values, params)


def fundamental_block(field: FieldSpec, m: FieldElement) -> CarpetMatrix:
    """``F(p, m) = M_1``."""
    return generate_recurrence(CarpetParams(field, m, 1))


def block_rows(field: FieldSpec, m: FieldElement, nrows: int) -> np.ndarray:
    """First ``nrows`` rows of ``F(p, m)`` (cheap prefix used by zero scans)."""
    return _recurrence_rows(field, m, min(nrows, field.p), field.p)


def propagate_blocks(field: FieldSpec, m: FieldElement,
                     alpha: FieldElement, beta: FieldElement, gamma: FieldElement) -> FieldMatrix:
    """Seed ``[[alpha F, beta F], [gamma F, .]]`` and let the recurrence fill the last block."""
    p = field.p
    F = fundamental_block(field, m).values
    a = np.zeros((2 * p, 2 * p), dtype=field.dtype)
    a[:p, :p] = field.scale_array(F, alpha)
    a[:p, p:] = field.scale_array(F, beta)
    a[p:, :p] = field.scale_array(F, gamma)
    _fill_recurrence(field, m, a, p, p)
    return FieldMatrix(field, a[p:, p:])


# -- closed form ----------------------------------------------------------------

def binom_mod_p(n: int, r: int, p: int) -> int:
    """C(n, r) mod p via Lucas' theorem."""
    if r < 0 or r > n:
        return 0
    result = 1
    while n or r:
        ni, ri = n % p, r % p
        if ri > ni:
            return 0
        result = result * math.comb(ni, ri) % p
        n //= p
        r //= p
    return result


def closed_form_f(n: int, k: int, m: FieldElement) -> FieldElement:
    """``sum_a m^a C(n, a) C(n+k-a, k-a)``, the value of the recurrence at (n, k)."""
    if n < 0 or k < 0:
        raise UsageError(f"indices must be non-negative, got ({n}, {k})")
    field = m.field
    p = field.p
    total = field.zero
    power = field.one
    for a in range(min(n, k) + 1):
        c = binom_mod_p(n, a, p) * binom_mod_p(n + k - a, k - a, p) % p
        if c:
            total = total + power * c
        power = power * m
    return total


def last_row(field: FieldSpec, m: FieldElement) -> tuple[FieldElement, ...]:
    """``(1, -m, (-m)^2, ..., (-m)^(p-1))``: last row and column of ``F(p, m)``."""
    return tuple((-m) ** i for i in range(field.p))


# -- matrix operators -----------------------------------------------------------

def tensor_product(A: FieldMatrix, B: FieldMatrix) -> FieldMatrix:
    """Kronecker product with block layout ``(a[i, j] * B)``."""
    if A.field != B.field:
        raise UsageError(f"cannot tensor matrices over {A.field} and {B.field}")
    (s, t), (u, v) = A.shape, B.shape
    prod = A.field.mul_arrays(A.values[:, None, :, None], B.values[None, :, None, :])
    return FieldMatrix(A.field, prod.reshape(s * u, t * v))


def frobenius_matrix(A: FieldMatrix, times: int = 1) -> FieldMatrix:
    """Apply the Frobenius automorphism entrywise, ``times`` times."""
    return FieldMatrix(A.field, A.field.frobenius_array(A.values, times))


def tensor_construction(params: CarpetParams) -> CarpetMatrix:
    """``phi^(d-1)(F) (x) ... (x) phi(F) (x) F``, left associated."""
    _check_dense(params.side)
    F = fundamental_block(params.field, params.m).as_field_matrix()
    result = frobenius_matrix(F, params.depth - 1)
    for t in range(params.depth - 2, -1, -1):
        result = tensor_product(result, frobenius_matrix(F, t))
    return CarpetMatrix(params.field, result.values, params)


def support(A: FieldMatrix) -> SupportMatrix:
    return SupportMatrix(A.values != 0)


def mirror(A):
    """Reverse the column order of a matrix or a support matrix."""
    if isinstance(A, SupportMatrix):
        return SupportMatrix(A.bits[:, ::-1])
    return FieldMatrix(A.field, A.values[:, ::-1])


def row_rescale_O(F: CarpetMatrix) -> FieldMatrix:
    """Divide row i of a fundamental block by ``(-m)^i``."""
    if F.params is None or F.params.depth != 1:
        raise UsageError("the row rescaling operator acts on fundamental blocks only")
    m = F.params.m
    if m.is_zero:
        raise DomainError("row rescaling needs m != 0")
    field = F.field
    step = (-m).inverse()
    factor = field.one
    rows = []
    for i in range(F.values.shape[0]):
        rows.append(field.scale_array(F.values[i], factor))
        factor = factor * step
    return FieldMatrix(field, np.array(rows))


# -- random access ----------------------------------------------------------------

class CarpetIndex:
    """Entries of ``M_d`` from the base-p digits of their indices.

    With ``i = sum i_t p^t`` and ``j = sum j_t p^t`` the entry is
    ``prod_t phi^t(F)[i_t, j_t]``.  Only the distinct conjugates of ``F`` are
    stored, so memory is ``O(p^2 min(d, k))``.
    """

    def __init__(self, params: CarpetParams):
        self.params = params
        field = params.field
        F = fundamental_block(field, params.m).values.astype(np.int64)
        self._blocks = np.stack([field.frobenius_array(F, t) for t in range(min(params.depth, field.k))])

    @property
    def side(self) -> int:
        return self.params.side

    def _block(self, t: int) -> np.ndarray:
        return self._blocks[t % len(self._blocks)]

    def __call__(self, i: int, j: int) -> FieldElement:
        side = self.side
        if not (0 <= i < side and 0 <= j < side):
            raise UsageError(f"index ({i}, {j}) outside the {side}x{side} carpet")
        field = self.params.field
        p = field.p
        result = field.one
        for t in range(self.params.depth):
            i, it = divmod(i, p)
            j, jt = divmod(j, p)
            value = int(self._block(t)[it, jt])
            if value == 0:
                return field.zero
            result = result * field.decode(value)
        return result

    def entries(self, rows, cols) -> np.ndarray:
        """Vectorised lookup for arrays of row and column indices."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        side = self.side
        if rows.size and (rows.min() < 0 or rows.max() >= side or cols.min() < 0 or cols.max() >= side):
            raise UsageError(f"indices outside the {side}x{side} carpet")
        field = self.params.field
        p = field.p
        result = np.ones(np.broadcast(rows, cols).shape, dtype=np.int64)
        for t in range(self.params.depth):
            rows, it = np.divmod(rows, p)
            cols, jt = np.divmod(cols, p)
            result = field.mul_arrays(result, self._block(t)[it, jt])
        return result

    def rows(self) -> Iterator[np.ndarray]:
        """Yield the rows of ``M_d`` in order, as Kronecker products of block rows."""
        field = self.params.field
        p = field.p

        def expand(level: int, prefix: np.ndarray) -> Iterator[np.ndarray]:
            block = self._block(level)
            for digit in range(p):
                part = field.mul_arrays(prefix[:, None], block[digit][None, :]).reshape(-1)
                if level == 0:
                    yield part
                else:
                    yield from expand(level - 1, part)

        yield from expand(self.params.depth - 1, np.ones(1, dtype=np.int64))

    def dense(self) -> CarpetMatrix:
        _check_dense(self.side)
        idx = np.arange(self.side, dtype=np.int64)
        values = self.entries(idx[:, None], idx[None, :])
        return CarpetMatrix(self.params.field, values, self.params)


@functools.lru_cache(maxsize=64)
def carpet_index(params: CarpetParams) -> CarpetIndex:
    return CarpetIndex(params)


def entry_at(params: CarpetParams, i: int, j: int) -> FieldElement:
    return carpet_index(params)(i, j)


def stream_rows(params: CarpetParams) -> Iterator[np.ndarray]:
    if params.depth > MAX_STREAM_DEPTH:
        raise CapacityError(f"streaming is limited to depth {MAX_STREAM_DEPTH}, got {params.depth}")
    return carpet_index(params).rows()


METHODS = ("recurrence", "tensor", "stream")


# -- text format ----------------------------------------------------------------

def text_header(params: CarpetParams) -> str:
    f = params.field
    return f"{f.p} {f.k} {','.join(map(str, f.modulus))} {int(params.m)} {params.depth}"


def iter_text(params: CarpetParams, rows) -> Iterator[str]:
    """Lines (newline terminated) of the matrix text format."""
    yield text_header(params) + "\n"
    for row in rows:
        yield " ".join(map(str, np.asarray(row).tolist())) + "\n"


def iter_carpet_text(params: CarpetParams, method: str = "recurrence") -> Iterator[str]:
    if method == "recurrence":
        rows = generate_recurrence(params).values
    elif method == "tensor":
        rows = tensor_construction(params).values
    elif method == "stream":
        rows = stream_rows(params)
    else:
        raise UsageError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    return iter_text(params, rows)


def to_text(matrix: CarpetMatrix) -> str:
    if matrix.params is None:
        raise UsageError("only carpet matrices with parameters can be serialised")
    return "".join(iter_text(matrix.params, matrix.values))


def parse_text(text: str) -> CarpetMatrix:
    lines = text.splitlines()
    try:
        p, k, modulus, m, d = lines[0].split()
        field = FieldSpec(int(p), int(k), tuple(int(c) for c in modulus.split(",")))
        params = CarpetParams(field, field.decode(int(m)), int(d))
        values = np.array([[int(x) for x in line.split()] for line in lines[1:] if line.strip()],
                          dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"malformed matrix text: {exc}") from None
    if values.shape != (params.side, params.side):
        raise UsageError(f"expected {params.side}x{params.side} entries, got {values.shape}")
    return CarpetMatrix(field, values, params)
