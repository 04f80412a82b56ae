"""Command-line entry point: ``fieldcarpet <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error,
3 capacity guard exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analysis, carpet, render, tiling, verify
from .carpet import CarpetParams, fundamental_block, support
from .errors import CapacityError, CarpetError, UsageError
from .finite_field import FieldElement, FieldSpec, parse_element

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    field: FieldSpec
    m: FieldElement | None
    depth: int | None

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        field = FieldSpec.parse(args.field)
        m = parse_element(args.m, field) if getattr(args, "m", None) is not None else None
        depth = getattr(args, "depth", None)
        if depth is not None:
            CarpetParams(field, m or field.zero, depth)  # validates depth
        return cls(field, m, depth)

    @property
    def params(self) -> CarpetParams:
        return CarpetParams(self.field, self.m, self.depth)


def _emit_json(payload, output: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    cfg = RunConfig.from_args(args)
    lines = carpet.iter_carpet_text(cfg.params, args.method)
    if args.output:
        with open(args.output, "w") as fh:
            fh.writelines(lines)
    else:
        sys.stdout.writelines(lines)
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = RunConfig.from_args(args)
    cls = analysis.symmetry_of(cfg.field, cfg.m)
    observed = analysis.symmetry_subgroup(support(fundamental_block(cfg.field, cfg.m)))
    payload = {
        "params": analysis.params_dict(cfg.field, cfg.m),
        "symmetry": analysis.symmetry_dict(cls),
        "observed_isometries": [g for g in analysis.ISOMETRIES if g in observed],
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_zeros(args) -> int:
    cfg = RunConfig.from_args(args)
    zr = analysis.zero_report(cfg.field, cfg.m)
    payload = {
        "params": analysis.params_dict(cfg.field, cfg.m),
        "zeros": [list(z) for z in zr.zeros],
        "regular": [list(z) for z in zr.regular],
        "sporadic": [list(z) for z in zr.sporadic],
        "regular_rule": zr.rule,
        "edge_adjacent": [[list(a), list(b)] for a, b in analysis.edge_adjacent_zeros(cfg.field, cfg.m)],
    }
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_dimension(args) -> int:
    cfg = RunConfig.from_args(args)
    dim = analysis.fractal_dimension(support(fundamental_block(cfg.field, cfg.m)))
    _emit_json({"params": analysis.params_dict(cfg.field, cfg.m),
                "dimension": analysis.dimension_dict(dim)}, args.output)
    return EXIT_OK


def cmd_scan(args) -> int:
    cfg = RunConfig.from_args(args)
    _emit_json({"params": analysis.params_dict(cfg.field),
                "scan": analysis.scan_field(cfg.field)}, args.output)
    return EXIT_OK


def cmd_tiles(args) -> int:
    cfg = RunConfig.from_args(args)
    ts = tiling.build_tile_set(cfg.field, cfg.m)
    payload = ts.as_dict()
    payload["bound"] = tiling.catalog_bound(ts, cfg.field.p)
    if args.assemble is not None:
        asm = tiling.assemble(ts, cfg.field, cfg.m, args.assemble)
        params = CarpetParams(cfg.field, cfg.m, args.assemble)
        text = "".join(carpet.iter_text(params, asm.colours))
        if args.assembly_output:
            Path(args.assembly_output).write_text(text)
        else:
            payload["assembly"] = text
        payload["ambiguous_cells"] = [list(c) for c in asm.ambiguous]
    _emit_json(payload, args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    cfg = RunConfig.from_args(args)
    params = cfg.params
    side = params.side
    rows = carpet.stream_rows(params)
    if args.format == "pbm":
        chunks = render.iter_pbm(side, side, ((r != 0) for r in rows))
    else:
        palette = render.default_palette(cfg.field, symmetric=args.symmetric)
        chunks = render.iter_ppm(side, side, rows, palette)
    with open(args.output, "wb") as fh:
        for chunk in chunks:
            fh.write(chunk)
    return EXIT_OK


def cmd_verify(args) -> int:
    bounds = verify.Bounds()
    if args.p:
        bounds.primes = tuple(args.p)
    if args.dmax is not None:
        bounds.dmax = args.dmax
    if args.pmax is not None:
        bounds.pmax = args.pmax
    if args.pmax_large is not None:
        bounds.pmax_large = args.pmax_large
    unknown = [c for c in args.check or [] if c not in verify.CHECKS]
    if unknown:
        raise UsageError(f"unknown checks {unknown}; available: {', '.join(verify.CHECKS)}")
    results = verify.run_all(args.check, bounds)
    passed = all(r.passed for r in results)
    _emit_json({"passed": passed, "checks": [r.as_dict() for r in results]}, args.output)
    return EXIT_OK if passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fieldcarpet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, m=True, depth=False, output=True):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--field", required=True, help='field descriptor: "p", "p^k" or "p^k/c0,...,ck"')
        if m:
            sp.add_argument("--m", required=True, help="integer encoding of m (-n for the negative of n)")
        if depth:
            sp.add_argument("--depth", type=int, required=True, help="carpet depth d >= 1")
        if output:
            sp.add_argument("--output", "-o", help="write to this file instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = add("generate", cmd_generate, "write M_d in the matrix text format", depth=True)
    sp.add_argument("--method", choices=carpet.METHODS, default="recurrence")
    add("classify", cmd_classify, "symmetry class of the carpet")
    add("zeros", cmd_zeros, "zeros of F(p,m), split into regular and sporadic")
    add("dimension", cmd_dimension, "similarity dimension from the zero count")
    add("scan", cmd_scan, "all m (up to inverse and Frobenius) whose carpet has holes", m=False)
    sp = add("tiles", cmd_tiles, "tile catalogue, optionally with an assembled region")
    sp.add_argument("--assemble", type=int, metavar="D", help="also assemble the p^D x p^D corner")
    sp.add_argument("--assembly-output", help="write the assembly in matrix text format here")
    sp = add("render", cmd_render, "write a PBM or PPM image of M_d", depth=True, output=False)
    sp.add_argument("--output", "-o", required=True, help="image file")
    sp.add_argument("--format", choices=("pbm", "ppm"), default="pbm")
    sp.add_argument("--symmetric", action="store_true", help="fold colours so k and p-k match")

    sp = sub.add_parser("verify", help="run the theorem checks and report JSON")
    sp.add_argument("--check", action="append", help=f"one of: {', '.join(verify.CHECKS)} (repeatable)")
    sp.add_argument("--p", type=int, action="append", help="restrict prime-list checks to these primes")
    sp.add_argument("--dmax", type=int)
    sp.add_argument("--pmax", type=int)
    sp.add_argument("--pmax-large", type=int)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"fieldcarpet: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except CarpetError as exc:
        print(f"fieldcarpet: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
