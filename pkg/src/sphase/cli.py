"""Command-line surface: symbol grids, reconstructions, P-function values,
kernel expansions, and the verification suite.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
error; numeric errors print one machine-parsable line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    DivergenceError,
    GridCoverageError,
    PhaseSpaceError,
    PSingularError,
    SingularConversionError,
    SingularParameterError,
    TruncationError,
)
from .fock import DEFAULT_DIM, hs_distance
from .grid import PhaseGrid, write_symbol_csv
from .ordering import exp_number, render, reorder
from .quasiprob import (
    mehta_p,
    reconstruct_from_elements,
    reconstruct_from_symbol,
    s_symbol_field,
)
from .statespec import build_density, parse, parse_cnum
from .verify import run_verify

_NUMERIC_ERRORS = (
    SingularConversionError,
    SingularParameterError,
    DivergenceError,
    TruncationError,
    GridCoverageError,
    PSingularError,
)


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sphase", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add_grid_args(p, with_out=True):
        p.add_argument("--state", required=True, help="state specification")
        p.add_argument("--radius", type=float, default=5.0)
        p.add_argument("--step", type=float, default=0.1)
        p.add_argument("--dim", type=int, default=DEFAULT_DIM)
        if with_out:
            p.add_argument("--out", required=True)

    g = sub.add_parser("grid", help="sample a symbol field and write CSV")
    add_grid_args(g)
    g.add_argument("--s", type=float, default=0.0)

    r = sub.add_parser("reconstruct", help="roundtrip reconstruction, JSON report")
    add_grid_args(r)
    r.add_argument("--s", type=float, default=0.0)
    r.add_argument("--route", choices=("symbol", "elements"), default="symbol")

    m = sub.add_parser("mehta", help="P function value at a point")
    add_grid_args(m, with_out=False)
    m.add_argument("--z", required=True, help="complex point, e.g. 0.5+0.5i")

    e = sub.add_parser("expand", help="print an ordered kernel and its reductions")
    e.add_argument("--op", choices=("exp_number",), required=True)
    e.add_argument("--lambda", dest="lam", type=float, required=True)
    e.add_argument("--s", type=float, default=0.0)

    v = sub.add_parser("verify", help="run the verification suite, JSON report")
    v.add_argument("--quick", action="store_true")
    return ap


def _check_s_range(s: float) -> None:
    if not -1.0 <= s <= 1.0:
        raise argparse.ArgumentTypeError(f"--s must lie in [-1, 1], got {s}")


def _grid_payload(grid: PhaseGrid) -> dict:
    return {
        "center_re": grid.center.real,
        "center_im": grid.center.imag,
        "half_extent": grid.half_extent,
        "step": grid.step,
    }


def run(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except argparse.ArgumentTypeError as exc:
        print(f"error kind=usage message={json.dumps(str(exc))}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"error kind={exc.kind} message={json.dumps(str(exc))}", file=sys.stderr)
        return 3
    except PhaseSpaceError as exc:
        print(f"error kind={exc.kind} message={json.dumps(str(exc))}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "grid":
        _check_s_range(args.s)
        rho = build_density(parse(args.state), args.dim)
        grid = PhaseGrid(args.radius, args.step)
        field = s_symbol_field(rho, args.s, grid)
        write_symbol_csv(field, args.out)
        return 0

    if args.command == "reconstruct":
        _check_s_range(args.s)
        rho = build_density(parse(args.state), args.dim)
        grid = PhaseGrid(args.radius, args.step)
        if args.route == "symbol":
            rec = reconstruct_from_symbol(s_symbol_field(rho, args.s, grid), args.dim)
        else:
            rec = reconstruct_from_elements(rho, args.s, grid, args.dim)
        payload = {
            "schema": 1,
            "hs_error": hs_distance(rec.rho.op, rho.op),
            "trace": rec.trace,
            "tail_mass": rho.tail_mass,
            "dim": args.dim,
            "grid": _grid_payload(grid),
        }
        with open(args.out, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, indent=2) + "\n")
        return 0

    if args.command == "mehta":
        rho = build_density(parse(args.state), args.dim)
        grid = PhaseGrid(args.radius, args.step)
        val = mehta_p(rho, parse_cnum(args.z), grid)
        print(f"P({args.z}) = {val.real:.12g}{val.imag:+.12g}i")
        return 0

    if args.command == "expand":
        _check_s_range(args.s)
        kernel = exp_number(args.lam, args.s)
        print(f"s-ordered:        {render(kernel)}")
        print(f"normal (s=1):     {render(reorder(kernel, 1.0))}")
        print(f"weyl (s=0):       {render(reorder(kernel, 0.0))}")
        print(f"antinormal (s=-1): {render(reorder(kernel, -1.0))}")
        return 0

    if args.command == "verify":
        report = run_verify(quick=args.quick)
        sys.stdout.write(report.to_json())
        return 0 if report.passed else 1

    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
