"""Exact arithmetic in GF(p) and GF(p^k) over an explicit modulus polynomial.

Elements are tuples of coefficients over GF(p), constant term first.  The
integer encoding of an element reads those coefficients as base-p digits, so
``a*x + b`` in GF(19^2) is encoded as ``19*a + b``.

Besides the scalar :class:`FieldElement` arithmetic, :class:`FieldSpec` offers
vectorised operations on numpy arrays of encodings.  The carpet generators
work on those arrays.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence, Union

import numpy as np

from .errors import DomainError, UsageError

# Multiplication tables are built for extension fields up to this order.
MUL_TABLE_MAX_ORDER = 1024

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n < 3.3 * 10**24."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n % b == 0:
            return n == b
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``n`` in increasing order."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def primes_up_to(n: int) -> list[int]:
    return [x for x in range(2, n + 1) if is_prime(x)]


# Polynomials over GF(p): lists, constant term first, no trailing zeros.

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _poly_divmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    if not b:
        raise DomainError("polynomial division by zero")
    r = list(a)
    _trim(r)
    inv_lead = pow(b[-1], -1, p)
    q = [0] * max(len(r) - len(b) + 1, 0)
    while len(r) >= len(b):
        shift = len(r) - len(b)
        c = r[-1] * inv_lead % p
        q[shift] = c
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - c * bi) % p
        _trim(r)
    return _trim(q), r


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    return _poly_divmod(a, b, p)[1]


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        c = pow(a[-1], -1, p)
        a = [x * c % p for x in a]
    return a


def _poly_powmod(a: Sequence[int], e: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, mod, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), mod, p)
        base = _poly_mod(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p).

    ``f`` of degree k is irreducible iff ``x^(p^k) = x (mod f)`` and
    ``gcd(x^(p^(k/t)) - x, f) = 1`` for every prime ``t`` dividing k.
    """
    f = _trim(list(modulus))
    k = len(f) - 1
    if k < 1 or f[-1] != 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    # frob_powers[i] = x^(p^i) mod f
    frob_powers = [x]
    for _ in range(k):
        frob_powers.append(_poly_powmod(frob_powers[-1], p, f, p))
    if _poly_sub(frob_powers[k], x, p):
        return False
    for t in prime_factors(k):
        h = _poly_sub(frob_powers[k // t], x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def default_modulus(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree k, comparing coefficients constant term first."""
    if k == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=k):
        if low[0] == 0:
            continue
        cand = low + (1,)
        if is_irreducible(cand, p):
            return cand
    raise DomainError(f"no irreducible polynomial of degree {k} over GF({p})")  # pragma: no cover


_DESCRIPTOR = re.compile(r"^\s*(\d+)(?:\^(\d+))?(?:/([\d,\s]+))?\s*$")


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^k) realised as GF(p)[x] / (modulus).

    ``modulus`` is monic of degree k, constant term first.  When omitted the
    smallest irreducible is chosen.  For k = 1 the modulus is always ``x``
    and arithmetic is plain integer arithmetic mod p.
    """

    p: int
    k: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        p, k = self.p, self.k
        if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
            raise UsageError(f"characteristic must be prime, got {p!r}")
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise UsageError(f"extension degree must be >= 1, got {k!r}")
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "k", int(k))
        if not self.modulus:
            mod = default_modulus(self.p, self.k)
        else:
            mod = tuple(int(c) for c in self.modulus)
            if len(mod) != k + 1 or mod[-1] != 1 or any(not 0 <= c < p for c in mod):
                raise UsageError(f"modulus must be monic of degree {k} over GF({p}), got {mod}")
            if k == 1:
                # every degree-1 modulus acts the same on constants
                mod = (0, 1)
            elif not is_irreducible(mod, p):
                raise UsageError(f"modulus {mod} is reducible over GF({p})")
        object.__setattr__(self, "modulus", mod)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``"p"``, ``"p^k"`` or ``"p^k/c0,c1,...,ck"``."""
        match = _DESCRIPTOR.match(text)
        if not match:
            raise UsageError(f"bad field descriptor {text!r}; expected p, p^k or p^k/c0,...,ck")
        p = int(match.group(1))
        k = int(match.group(2)) if match.group(2) else 1
        coeffs: tuple[int, ...] = ()
        if match.group(3):
            try:
                coeffs = tuple(int(c) for c in match.group(3).split(","))
            except ValueError:
                raise UsageError(f"bad modulus in field descriptor {text!r}") from None
        return cls(p, k, coeffs)

    @property
    def descriptor(self) -> str:
        return f"{self.p}^{self.k}/" + ",".join(map(str, self.modulus))

    @property
    def q(self) -> int:
        return self.p ** self.k

    def __str__(self):
        return f"GF({self.p})" if self.k == 1 else f"GF({self.p}^{self.k})"

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.k)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(self, (1,) + (0,) * (self.k - 1))

    def decode(self, n: int) -> "FieldElement":
        n = int(n)
        if not 0 <= n < self.q:
            raise UsageError(f"encoding {n} out of range for {self}")
        coeffs = []
        for _ in range(self.k):
            n, c = divmod(n, self.p)
            coeffs.append(c)
        return FieldElement(self, tuple(coeffs))

    def from_int(self, n: int) -> "FieldElement":
        """Image of the integer ``n`` in the prime subfield."""
        return FieldElement(self, (int(n) % self.p,) + (0,) * (self.k - 1))

    def elements(self) -> Iterator["FieldElement"]:
        for n in range(self.q):
            yield self.decode(n)

    # -- vectorised layer over integer encodings --------------------------------

    @cached_property
    def dtype(self) -> np.dtype:
        """Smallest unsigned storage type for encodings."""
        return np.dtype(np.min_scalar_type(self.q - 1)) if self.q <= 2**32 else np.dtype(np.int64)

    def to_digits(self, arr) -> np.ndarray:
        a = np.asarray(arr, dtype=np.int64)
        out = np.empty(a.shape + (self.k,), dtype=np.int64)
        for i in range(self.k):
            a, out[..., i] = np.divmod(a, self.p)
        return out

    def from_digits(self, digits: np.ndarray) -> np.ndarray:
        acc = np.zeros(digits.shape[:-1], dtype=np.int64)
        for i in reversed(range(self.k)):
            acc = acc * self.p + digits[..., i]
        return acc

    def add_arrays(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a + b) % self.p
        return self.from_digits((self.to_digits(a) + self.to_digits(b)) % self.p)

    def neg_arrays(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return (-a) % self.p
        return self.from_digits((-self.to_digits(a)) % self.p)

    def mul_arrays(self, a, b) -> np.ndarray:
        """Elementwise product of two broadcastable encoding arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return a * b % self.p
        if self._mul_table is not None:
            return self._mul_table[a, b].astype(np.int64)
        return self._mul_digits(a, b)

    def _mul_digits(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, k = self.p, self.k
        da, db = np.broadcast_arrays(self.to_digits(a), self.to_digits(b))
        prod = np.zeros(da.shape[:-1] + (2 * k - 1,), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[..., i + j] += da[..., i] * db[..., j]
        prod %= p
        # x^k = -(c0 + c1 x + ... + c_{k-1} x^{k-1})
        for t in range(2 * k - 2, k - 1, -1):
            lead = prod[..., t].copy()
            for i in range(k):
                prod[..., t - k + i] -= lead * self.modulus[i]
            prod[..., t] = 0
            prod %= p
        return self.from_digits(prod[..., :k])

    @cached_property
    def _mul_table(self) -> np.ndarray | None:
        if self.k == 1 or self.q > MUL_TABLE_MAX_ORDER:
            return None
        idx = np.arange(self.q, dtype=np.int64)
        return self._mul_digits(idx[:, None], idx[None, :]).astype(np.int32)

    def linear_map(self, c: "FieldElement") -> np.ndarray:
        """Matrix of ``a -> c*a`` on coefficient vectors: digits(c*a) = digits(a) @ M mod p."""
        rows = []
        basis = self.one
        xgen = FieldElement(self, (0, 1) + (0,) * (self.k - 2)) if self.k > 1 else self.one
        for _ in range(self.k):
            rows.append((c * basis).coeffs)
            basis = basis * xgen
        return np.array(rows, dtype=np.int64)

    def scale_array(self, a, c: "FieldElement") -> np.ndarray:
        """Multiply every encoding in ``a`` by the constant ``c``."""
        a = np.asarray(a, dtype=np.int64)
        if self.k == 1:
            return a * c.coeffs[0] % self.p
        return self.from_digits(self.to_digits(a) @ self.linear_map(c) % self.p)

    @cached_property
    def _frobenius_map(self) -> np.ndarray:
        """Matrix of the Frobenius map on coefficient vectors (row i = digits of x^(i p))."""
        rows = []
        xp = _poly_powmod([0, 1], self.p, self.modulus, self.p) if self.k > 1 else [1]
        cur = [1]
        for _ in range(self.k):
            rows.append(_pad(cur, self.k))
            cur = _poly_mod(_poly_mul(cur, xp, self.p), self.modulus, self.p)
        return np.array(rows, dtype=np.int64)

    def frobenius_array(self, a, times: int = 1) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        times %= self.k
        if times == 0:
            return a.copy()
        d = self.to_digits(a)
        for _ in range(times):
            d = d @ self._frobenius_map % self.p
        return self.from_digits(d)


def _pad(coeffs: Sequence[int], k: int) -> tuple[int, ...]:
    return tuple(coeffs) + (0,) * (k - len(coeffs))


Operand = Union["FieldElement", int]


@dataclass(frozen=True)
class FieldElement:
    """An element of a :class:`FieldSpec`, stored as canonical coefficients."""

    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.field.k or any(not 0 <= c < self.field.p for c in coeffs):
            raise UsageError(f"{coeffs} is not a canonical element of {self.field}")
        object.__setattr__(self, "coeffs", coeffs)

    def _coerce(self, other: Operand) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise UsageError(f"cannot combine elements of {self.field} and {other.field}")
            return other
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return NotImplemented

    def __add__(self, other: Operand) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other: Operand) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other: Operand) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other: Operand) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        if f.k == 1:
            return FieldElement(f, (self.coeffs[0] * other.coeffs[0] % f.p,))
        prod = _poly_mod(_poly_mul(self.coeffs, other.coeffs, f.p), f.modulus, f.p)
        return FieldElement(f, _pad(prod, f.k))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        """Multiplicative inverse by the extended Euclidean algorithm."""
        f = self.field
        if self.is_zero:
            raise DomainError(f"zero has no inverse in {f}")
        if f.k == 1:
            return FieldElement(f, (pow(self.coeffs[0], -1, f.p),))
        r0, r1 = list(f.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while r1:
            quo, rem = _poly_divmod(r0, r1, f.p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quo, s1, f.p), f.p)
        if len(r0) != 1:  # pragma: no cover - modulus is irreducible
            raise DomainError(f"{self} is not invertible modulo {f.modulus}")
        c = pow(r0[0], -1, f.p)
        return FieldElement(f, _pad([s * c % f.p for s in s0], f.k))

    def __truediv__(self, other: Operand) -> "FieldElement":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, e: int) -> "FieldElement":
        base = self
        if e < 0:
            base, e = self.inverse(), -e
        result = self.field.one
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def frobenius(self, times: int = 1) -> "FieldElement":
        """``self ** (p ** times)``, applied as a linear map on coefficients."""
        f = self.field
        times %= f.k
        if times == 0:
            return self
        vec = np.array(self.coeffs, dtype=np.int64)
        for _ in range(times):
            vec = vec @ f._frobenius_map % f.p
        return FieldElement(f, tuple(int(c) for c in vec))

    def degree_over_prime(self) -> int:
        """Smallest t >= 1 with frobenius^t(self) == self."""
        t, cur = 1, self.frobenius()
        while cur != self:
            cur = cur.frobenius()
            t += 1
        return t

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    @property
    def in_prime_field(self) -> bool:
        return not any(self.coeffs[1:])

    def __int__(self):
        n = 0
        for c in reversed(self.coeffs):
            n = n * self.field.p + c
        return n

    __index__ = __int__

    def __str__(self):
        terms = []
        for i in reversed(range(len(self.coeffs))):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "x" if i == 1 else f"x^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) or "0"

    def __repr__(self):
        return f"<{self.field} {self}>"


# Functional spellings of the element operations.

def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def frobenius(a: FieldElement) -> FieldElement:
    return a.frobenius()


def degree_over_prime(a: FieldElement) -> int:
    return a.degree_over_prime()


def encode(a: FieldElement) -> int:
    return int(a)


def decode(n: int, field: FieldSpec) -> FieldElement:
    return field.decode(n)


def parse_element(text: str, field: FieldSpec) -> FieldElement:
    """Read an element from its integer encoding; ``-n`` means the negative of element n."""
    try:
        n = int(text)
    except (TypeError, ValueError):
        raise UsageError(f"field elements are given as integer encodings, got {text!r}") from None
    if n < 0:
        return -field.decode(-n)
    return field.decode(n)
