"""Machine checks of the carpet theorems over finite parameter ranges.

Each check returns a :class:`CheckResult`; the first failing case is kept as
a counterexample.  Default bounds are the desk-scale ranges the test suite
uses, and every check finishes in seconds at those bounds.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterator

import numpy as np

from . import analysis, carpet, render, tiling
from .carpet import CarpetParams, fundamental_block, support
from .finite_field import FieldSpec, primes_up_to

EXTENSION_FIELDS = ("2^2", "3^2", "5^2")


@dataclass
class Bounds:
    primes: tuple[int, ...] = (2, 3, 5, 7)
    dmax: int = 3
    pmax: int = 31
    pmax_large: int = 101
    seed: int = 0


@dataclass
class CheckResult:
    name: str
    statement: str
    passed: bool = True
    cases: int = 0
    counterexample: dict | None = None
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {
            "name": self.name, "statement": self.statement, "passed": self.passed,
            "cases": self.cases, "counterexample": self.counterexample,
        }


class _Recorder:
    def __init__(self, result: CheckResult):
        self.result = result

    def case(self, ok: bool, **detail) -> None:
        self.result.cases += 1
        if not ok and self.result.passed:
            self.result.passed = False
            self.result.counterexample = {k: _jsonable(v) for k, v in detail.items()}


def _jsonable(v):
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


def _odd_primes(lo: int, hi: int) -> list[int]:
    return [p for p in primes_up_to(hi) if p >= lo and p > 2]


# -- the checks ---------------------------------------------------------------------

def check_tensor(b: Bounds, rec: _Recorder) -> None:
    cases = [(FieldSpec(p), b.dmax) for p in b.primes]
    cases += [(FieldSpec.parse(f), min(b.dmax, 2)) for f in EXTENSION_FIELDS]
    for field, dmax in cases:
        for m in field.elements():
            for d in range(1, dmax + 1):
                params = CarpetParams(field, m, d)
                rec_m = carpet.generate_recurrence(params)
                ten_m = carpet.tensor_construction(params)
                idx_m = carpet.CarpetIndex(params).dense()
                rec.case(rec_m == ten_m == idx_m, field=field.descriptor, m=int(m), d=d)


def check_closed_form(b: Bounds, rec: _Recorder) -> None:
    for p in [p for p in b.primes if p <= 7]:
        field = FieldSpec(p)
        for m in field.elements():
            values = carpet.generate_recurrence(CarpetParams(field, m, 2)).values
            for n in range(p * p):
                for k in range(p * p):
                    ok = int(carpet.closed_form_f(n, k, m)) == int(values[n, k])
                    if not ok:
                        rec.case(False, p=p, m=int(m), n=n, k=k)
                        return
            rec.case(True)


def check_last_row(b: Bounds, rec: _Recorder) -> None:
    fields = [FieldSpec(p) for p in primes_up_to(b.pmax)] + [FieldSpec.parse(f) for f in EXTENSION_FIELDS]
    for field in fields:
        for m in field.elements():
            F = fundamental_block(field, m).values
            expected = [int(x) for x in carpet.last_row(field, m)]
            rec.case(F[-1].tolist() == expected and F[:, -1].tolist() == expected,
                     field=field.descriptor, m=int(m))


def check_block_propagation(b: Bounds, rec: _Recorder) -> None:
    rng = random.Random(b.seed)
    fields = [FieldSpec(p) for p in (3, 5, 7)] + [FieldSpec.parse(f) for f in EXTENSION_FIELDS + ("19^2/1,0,1",)]
    for field in fields:
        for _ in range(25):
            m, alpha, beta, gamma = (field.decode(rng.randrange(field.q)) for _ in range(4))
            got = carpet.propagate_blocks(field, m, alpha, beta, gamma)
            delta = m.frobenius() * alpha + beta + gamma
            F = fundamental_block(field, m).values
            rec.case(np.array_equal(got.values, field.scale_array(F, delta)),
                     field=field.descriptor, m=int(m), alpha=int(alpha), beta=int(beta), gamma=int(gamma))


def _nonzero_ms(field: FieldSpec) -> Iterator:
    for n in range(1, field.q):
        yield field.decode(n)


def _duality_fields(b: Bounds) -> list[FieldSpec]:
    return [FieldSpec(p) for p in primes_up_to(b.pmax)] + [FieldSpec.parse(f) for f in EXTENSION_FIELDS]


def check_duality(b: Bounds, rec: _Recorder) -> None:
    for field in _duality_fields(b):
        for m in _nonzero_ms(field):
            lhs = carpet.row_rescale_O(fundamental_block(field, m))
            rhs = carpet.mirror(fundamental_block(field, m.inverse()))
            rec.case(lhs == rhs, field=field.descriptor, m=int(m))


def check_elementwise(b: Bounds, rec: _Recorder) -> None:
    for field in _duality_fields(b):
        p = field.p
        for m in _nonzero_ms(field):
            a = fundamental_block(field, m)
            a_inv = fundamental_block(field, m.inverse())
            lam_inv = (-m).inverse()
            ok1 = ok2 = True
            for i in range(p):
                si = lam_inv ** i
                for j in range(p):
                    lhs = a.entry(i, j) * si
                    ok1 &= a_inv.entry(i, p - 1 - j) == lhs
                    ok2 &= lhs == a.entry(p - 1 - j, p - 1 - i) * (-m) ** (j + 1 - p)
            rec.case(ok1 and ok2, field=field.descriptor, m=int(m), item1=ok1, item2=ok2)


def check_mirror_support(b: Bounds, rec: _Recorder) -> None:
    for field in _duality_fields(b):
        for m in _nonzero_ms(field):
            lhs = support(fundamental_block(field, m))
            rhs = carpet.mirror(support(fundamental_block(field, m.inverse())))
            rec.case(lhs == rhs, field=field.descriptor, m=int(m))


def check_symmetry(b: Bounds, rec: _Recorder) -> None:
    for p in primes_up_to(b.pmax):
        field = FieldSpec(p)
        for m in field.elements():
            cls = analysis.classify_symmetry(p, m)
            observed = analysis.symmetry_subgroup(support(fundamental_block(field, m)))
            rec.case(cls.subgroup == observed, p=p, m=int(m), d=1,
                     label=cls.label.value, observed=sorted(observed))
            if p in b.primes:
                for d in range(2, b.dmax + 1):
                    sup = support(carpet.tensor_construction(CarpetParams(field, m, d)))
                    observed = analysis.symmetry_subgroup(sup)
                    rec.case(cls.subgroup == observed, p=p, m=int(m), d=d,
                             label=cls.label.value, observed=sorted(observed))


def check_odd_diagonals(b: Bounds, rec: _Recorder) -> None:
    for p in _odd_primes(5, b.pmax_large):
        field = FieldSpec(p)
        for m, diag in ((field.from_int(-2), lambda i: (i, i)),
                        (-field.from_int(2).inverse(), lambda i: (i, p - 1 - i))):
            F = fundamental_block(field, m).values
            bad = [i for i in range(1, p - 1)
                   if (F[diag(i)] == 0) != (i % 2 == 1)]
            rec.case(not bad, p=p, m=int(m), indices=bad)
    S = [analysis.central_sum_S(n) for n in range(203)]
    for n in range(201):
        rec.case(4 * (n + 1) * S[n] + (n + 2) * S[n + 2] == 0, n=n, S=S[n])
    from math import comb
    rec.case(S[0] == 1 and S[1] == 0, n=0)
    for s in range(101):
        rec.case(S[2 * s] == (-1) ** s * comb(2 * s, s) and S[2 * s + 1] == 0, s=s)


def check_cross(b: Bounds, rec: _Recorder) -> None:
    for p in _odd_primes(3, b.pmax_large):
        field = FieldSpec(p)
        F = fundamental_block(field, field.one).values.astype(np.int64)
        last_ok = F[p - 1].tolist() == [1 if k % 2 == 0 else p - 1 for k in range(p)]
        signs = np.where(np.arange(p) % 2 == 0, 1, -1)[:, None]
        anti_ok = np.array_equal(F % p, (signs * F[:, ::-1]) % p)
        cross_ok = all(F[c] == 0 for c in analysis.cross(p))
        rec.case(last_ok and anti_ok and cross_ok, p=p, last_row=last_ok, antisymmetry=anti_ok, cross=cross_ok)


def count_paths(n: int, k: int) -> int:
    """Enumerate every S / SE / E lattice path from (0, 0) to (n, k)."""
    steps = ((1, 0), (1, 1), (0, 1))
    count = 0
    stack = [(0, 0)]
    while stack:
        i, j = stack.pop()
        if (i, j) == (n, k):
            count += 1
            continue
        for di, dj in steps:
            if i + di <= n and j + dj <= k:
                stack.append((i + di, j + dj))
    return count


def check_delannoy(b: Bounds, rec: _Recorder) -> None:
    for n in range(7):
        for k in range(7):
            rec.case(analysis.delannoy(n, k) == count_paths(n, k), n=n, k=k)
    for p in (3, 5, 7, 11, 13):
        field = FieldSpec(p)
        for n in range(p):
            for k in range(p):
                rec.case(analysis.delannoy(n, k) % p == int(carpet.closed_form_f(n, k, field.one)),
                         p=p, n=n, k=k)


def check_zero_bounds(b: Bounds, rec: _Recorder) -> None:
    for p in primes_up_to(b.pmax_large):
        rep = analysis.zero_count_bounds_check(p)
        low = {m: c for m, c in rep.counts.items() if c < rep.required}
        rec.case(rep.passed, p=p, required=rep.required, failing=sorted(low.items()))


def check_tiling(b: Bounds, rec: _Recorder) -> None:
    for p in [p for p in b.primes if p <= 7]:
        field = FieldSpec(p)
        for m in field.elements():
            if not analysis.has_zeros(field, m):
                continue
            ts = tiling.build_tile_set(field, m)
            rec.case(len(ts.tiles) <= tiling.catalog_bound(ts, p), p=p, m=int(m), tiles=len(ts.tiles))
            for d in (1, 2):
                asm = tiling.assemble(ts, field, m, d)
                expected = carpet.generate_recurrence(CarpetParams(field, m, d)).values
                rec.case(np.array_equal(asm.colours, expected) and not asm.ambiguous,
                         p=p, m=int(m), d=d, ambiguous=list(asm.ambiguous))
            seq = tiling.aperiodicity_witness(field, m, 3 if p <= 3 else 2)
            rec.case(tiling.is_strictly_increasing_after_start(seq), p=p, m=int(m), witness=seq)


def check_nesting(b: Bounds, rec: _Recorder) -> None:
    for p, dmax in ((2, 5), (3, 4), (5, 3), (7, 2)):
        field = FieldSpec(p)
        for m in field.elements():
            prev = None
            for d in range(1, dmax + 1):
                sup = support(carpet.tensor_construction(CarpetParams(field, m, d)))
                if prev is not None:
                    s = prev.side
                    top_left = render.to_pbm(carpet.SupportMatrix(sup.bits[:s, :s]))
                    rec.case(top_left == render.to_pbm(prev), p=p, m=int(m), d=d)
                prev = sup


@dataclass(frozen=True)
class Check:
    name: str
    statement: str
    run: Callable[[Bounds, _Recorder], None] = dc_field(repr=False)


CHECKS = {c.name: c for c in (
    Check("tensor", "recurrence, tensor factorisation and digit-product access agree", check_tensor),
    Check("closed_form", "the binomial sum equals the recurrence on the depth-2 grid", check_closed_form),
    Check("last_row", "last row and column of F(p,m) are the powers of -m", check_last_row),
    Check("block_propagation", "seeded blocks alpha F, beta F, gamma F force (phi(m) alpha + beta + gamma) F",
          check_block_propagation),
    Check("duality", "row rescaling of F(p,m) equals the mirror of F(p,1/m)", check_duality),
    Check("elementwise", "entrywise duality and second-diagonal identities", check_elementwise),
    Check("mirror_support", "support of F(p,m) is the mirrored support of F(p,1/m)", check_mirror_support),
    Check("symmetry", "symmetry classification matches brute-force subgroups", check_symmetry),
    Check("odd_diagonals", "odd diagonal zeros for m = -2, -1/2 and the central sum recurrence",
          check_odd_diagonals),
    Check("cross", "m = 1: alternating last row, row antisymmetry, cross of zeros", check_cross),
    Check("delannoy", "Delannoy numbers count lattice paths and reduce to the carpet mod p", check_delannoy),
    Check("zero_bounds", "minimum zero counts for m != -1", check_zero_bounds),
    Check("tiling", "tile assemblies reproduce the carpets; witness holes grow", check_tiling),
    Check("nesting", "the PBM of M_d is the top-left corner of the PBM of M_(d+1)", check_nesting),
)}


def run_check(name: str, bounds: Bounds | None = None) -> CheckResult:
    check = CHECKS[name]
    result = CheckResult(check.name, check.statement)
    start = time.perf_counter()
    check.run(bounds or Bounds(), _Recorder(result))
    result.seconds = time.perf_counter() - start
    return result


def run_all(names=None, bounds: Bounds | None = None) -> list[CheckResult]:
    return [run_check(n, bounds) for n in (names or CHECKS)]
