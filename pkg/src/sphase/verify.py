"""Verification suite: one check per acceptance criterion.

Each criterion runs a parameter sweep and reports the worst measured error
against its pinned tolerance.  The CLI ``verify`` subcommand and the
acceptance test module both run this registry.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import PSingularError, StateSpecError, ParseError
from .fock import (
    DensityMatrix,
    _coherent_amp_batch,
    coherent_vector,
    expm_oracle,
    hs_distance,
    leading_block,
    outer,
    thermal_density,
    FockOperator,
    number_state,
)
from .grid import PhaseGrid
from .ordering import (
    coherent_projector,
    exp_number,
    fourier_oracle,
    realize,
    reorder,
    wigner_kernel,
)
from .quasiprob import (
    _mehta_values,
    completeness_check,
    mehta_p,
    orthogonality_probe,
    reconstruct_from_elements,
    reconstruct_from_symbol,
    s_symbol,
    s_symbol_field,
    symbol_of_operator,
    weyl_monomial,
)
from . import statespec
from .statespec import Cat, Coherent, Fock, Mix, Thermal, Vacuum, build_density, parse, render


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    identity: str
    measured_error: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...]
    schema: int = 1

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        payload = {
            "schema": self.schema,
            "passed": self.passed,
            "checks": [
                {
                    "check_id": c.check_id,
                    "identity": c.identity,
                    "measured_error": c.measured_error,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                }
                for c in self.checks
            ],
        }
        return json.dumps(payload, indent=2) + "\n"


_S_SWEEP = (-0.9, -0.5, 0.0, 0.5, 0.9)
_LAM_SWEEP = (-0.5, 0.2, 0.5)


def _coherent_density(z: complex, dim: int) -> DensityMatrix:
    v = coherent_vector(z, dim)
    return DensityMatrix(outer(v), tail_mass=v.tail_mass)


def check_ordering_anchors(quick: bool = False) -> tuple[float, float]:
    """Symbolic conversion anchors for the two closed kernel families."""
    z = 0.8 - 0.3j
    err = 0.0
    sweep = _S_SWEEP if not quick else (-0.5, 0.5)
    lams = _LAM_SWEEP if not quick else (0.2,)
    for s in sweep:
        cp = coherent_projector(z, s)
        n = reorder(cp, 1.0)
        err = max(err, abs(n.prefactor - 1.0), abs(n.curvature + 1.0), abs(n.center - z))
        w = reorder(cp, 0.0)
        err = max(err, abs(w.prefactor - 2.0), abs(w.curvature + 2.0), abs(w.center - z))
        for lam in lams:
            el = math.exp(lam)
            g = exp_number(lam, s)
            n1 = reorder(g, 1.0)
            err = max(err, abs(n1.prefactor - 1.0), abs(n1.curvature - (el - 1.0)))
            w0 = reorder(g, 0.0)
            err = max(
                err,
                abs(w0.prefactor - 2.0 / (1.0 + el)),
                abs(w0.curvature - 2.0 * (el - 1.0) / (1.0 + el)),
            )
            a1 = reorder(g, -1.0)
            err = max(
                err,
                abs(a1.prefactor - math.exp(-lam)),
                abs(a1.curvature - (1.0 - math.exp(-lam))),
            )
    return err, 1e-12


def check_exp_number_realization(quick: bool = False) -> tuple[float, float]:
    """realize(exp_number) against the matrix-exponential oracle."""
    dim, block = (48, 24) if not quick else (32, 16)
    sweep = _S_SWEEP if not quick else (-0.5, 0.5)
    lams = _LAM_SWEEP if not quick else (0.2,)
    n_op = np.diag(np.arange(dim).astype(complex))
    err = 0.0
    for lam in lams:
        ref = expm_oracle(FockOperator(lam * n_op))
        for s in sweep:
            got = realize(exp_number(lam, s), dim)
            err = max(err, hs_distance(leading_block(got, block), leading_block(ref, block)))
    return err, 1e-8


def check_coherent_symbol(quick: bool = False) -> tuple[float, float]:
    """Symbol of a coherent state against its Gaussian closed form."""
    dim = 48
    svals = (-0.5, 0.0, 0.5, 1.0) if not quick else (0.0, 1.0)
    pairs = [(1.0 + 0j, 0.5 + 0.5j), (-1.2 + 0.4j, 0.3 - 1.1j), (2.0 + 0j, -1.0j)]
    if quick:
        pairs = pairs[:1]
    err = 0.0
    for s in svals:
        for z, al in pairs:
            rho = _coherent_density(z, dim)
            got = s_symbol(rho, s, al)
            want = (2.0 / (1.0 + s)) * np.exp(-2.0 * abs(z - al) ** 2 / (1.0 + s))
            err = max(err, abs(got - want))
    return err, 1e-8


def check_coherent_limit_kernel(quick: bool = False) -> tuple[float, float]:
    """Kernel at the antinormal boundary: 2 pi Delta_{-1}(alpha) = |alpha><alpha|."""
    dim = 48
    alphas = [0j, 0.5 + 0.3j, 1.5 - 1.2j, 2.0 + 0j]
    if quick:
        alphas = alphas[:2]
    err = 0.0
    for al in alphas:
        k = realize(wigner_kernel(al, -1.0), dim)
        proj = outer(coherent_vector(al, dim))
        err = max(err, hs_distance(FockOperator(2.0 * math.pi * k.mat), proj))
    return err, 1e-10


def check_fourier_oracle(quick: bool = False) -> tuple[float, float]:
    """Quadrature of the defining integral vs the factorized realization."""
    if quick:
        dim, grid = 24, PhaseGrid(4.0, 0.2)
        cases = [(-0.5, 0j)]
    else:
        dim, grid = 32, PhaseGrid(5.0, 0.1)
        cases = [(s, al) for s in (-1.0, -0.5) for al in (0j, 0.5 + 0.3j)]
    err = 0.0
    for s, al in cases:
        num = fourier_oracle(al, s, grid, dim)
        ref = realize(wigner_kernel(al, s), dim)
        err = max(err, hs_distance(num, ref))
    return err, 1e-4


def check_completeness(quick: bool = False) -> tuple[float, float]:
    """Weighted kernel sums resolve the identity on the leading block."""
    if quick:
        dim, grid, svals = 16, PhaseGrid(5.0, 0.2), (0.0,)
    else:
        dim, grid, svals = 32, PhaseGrid(6.0, 0.1), (-1.0, -0.5, 0.0)
    err = 0.0
    for s in svals:
        err = max(err, completeness_check(s, grid, dim))
    return err, 1e-3


def check_symbol_roundtrip(quick: bool = False) -> tuple[float, float]:
    """Symbol then expansion reproduces the state."""
    if quick:
        dim, grid = 24, PhaseGrid(4.0, 0.2)
        cases = [(Vacuum(), 0.0)]
    else:
        dim, grid = 32, PhaseGrid(5.0, 0.1)
        cases = [(st, s) for st in (Vacuum(), Thermal(0.5)) for s in (-0.5, 0.0)]
    err = 0.0
    for st, s in cases:
        rho = build_density(st, dim)
        field = s_symbol_field(rho, s, grid)
        rec = reconstruct_from_symbol(field, dim)
        err = max(err, hs_distance(rec.rho.op, rho.op))
    return err, 1e-3


def check_element_reconstruction(quick: bool = False) -> tuple[float, float]:
    """Cross-element expansion reproduces the state and agrees with the
    symbol route where both are defined."""
    if quick:
        dim, grid = 24, PhaseGrid(4.0, 0.2)
        states = (Vacuum(),)
        svals = (0.0,)
    else:
        dim, grid = 32, PhaseGrid(5.0, 0.1)
        states = (Vacuum(), Thermal(0.5), Coherent(0.8 + 0j))
        svals = (-1.0, -0.5, 0.0)
    err = 0.0
    for st in states:
        rho = build_density(st, dim)
        for s in svals:
            rec_el = reconstruct_from_elements(rho, s, grid, dim)
            err = max(err, hs_distance(rec_el.rho.op, rho.op))
            if s > -1.0:
                rec_sym = reconstruct_from_symbol(s_symbol_field(rho, s, grid), dim)
                err = max(err, hs_distance(rec_el.rho.op, rec_sym.rho.op))
    return err, 2e-3


def check_mehta(quick: bool = False) -> tuple[float, float]:
    """P-function integral formula: thermal value at the origin, grid
    reassembly of the state, and the singular diagnostic on vacuum."""
    dim = 40 if not quick else 28
    bgrid = PhaseGrid(6.5, 0.1) if not quick else PhaseGrid(6.5, 0.2)
    rho = thermal_density(1.0, dim)
    err = abs(mehta_p(rho, 0j, bgrid) - 1.0)
    if not quick:
        zgrid = PhaseGrid(5.0, 0.1)
        zs = zgrid.points
        pvals = _mehta_values(rho, zs, bgrid)
        amps = _coherent_amp_batch(zs, dim)
        w = (zgrid.weight / math.pi) * pvals
        assembled = amps.T @ (w[:, None] * amps.conj())
        err = max(err, float(np.linalg.norm(assembled - rho.mat)))
    vac = build_density(Vacuum(), dim)
    try:
        mehta_p(vac, 0j, bgrid)
        err = max(err, 1.0)  # diagnostic did not fire
    except PSingularError:
        pass
    return err, 1e-3


def check_weyl_monomials(quick: bool = False) -> tuple[float, float]:
    """Symbols of symmetrized monomials are the bare monomials x^m p^n."""
    dim = 64
    pairs = [(m, n) for m in range(5) for n in range(5) if m + n <= 4]
    pts = [(x, p) for x in (-1.5, 0.0, 1.5) for p in (-1.5, 0.0, 1.5)]
    if quick:
        pairs = [(1, 1), (2, 0)]
        pts = pts[::4]
    err = 0.0
    for m, n in pairs:
        op = weyl_monomial(m, n, dim)
        for x, p in pts:
            al = complex(x, p) / math.sqrt(2.0)
            got = symbol_of_operator(op, 0.0, al)
            err = max(err, abs(got - (x**m) * (p**n)))
    return err, 1e-4


def check_orthogonality_probe(quick: bool = False) -> tuple[float, float]:
    """Smeared trace-orthogonality of the dual kernel pair."""
    if quick:
        dim, grid = 24, PhaseGrid(4.0, 0.15)
        cases = [(0.0, 0j)]
    else:
        dim, grid = 48, PhaseGrid(5.0, 0.1)
        cases = [(s, ap) for s in (-0.5, 0.0, 0.5) for ap in (0j, 0.5 + 0j)]
    err = 0.0
    for s, ap in cases:
        val = orthogonality_probe(s, ap, 1.0, grid, dim)
        err = max(err, abs(val - 1.0))
    return err, 1e-2


_PARSER_CASES_GOOD = [
    ("vacuum", Vacuum()),
    ("fock(3)", Fock(3)),
    ("coherent(1+0.5i)", Coherent(1 + 0.5j)),
    ("coherent(-1.5)", Coherent(-1.5 + 0j)),
    ("thermal(0.8)", Thermal(0.8)),
    ("thermal(0)", Thermal(0.0)),
    ("cat(1.2,+)", Cat(1.2 + 0j, 1)),
    ("cat(0.9-0.1i,-)", Cat(0.9 - 0.1j, -1)),
    ("  vacuum  ", Vacuum()),
    ("(vacuum)", Vacuum()),
    ("coherent(1e-2+2e-3i)", Coherent(0.01 + 0.002j)),
    (
        "0.3*coherent(1+0.5i) + 0.7*thermal(0.8)",
        Mix(((0.3, Coherent(1 + 0.5j)), (0.7, Thermal(0.8)))),
    ),
    ("0.5*vacuum+0.5*fock(1)", Mix(((0.5, Vacuum()), (0.5, Fock(1))))),
    (
        "0.25*(0.5*vacuum + 0.5*fock(2)) + 0.75*coherent(2)",
        Mix(
            (
                (0.25, Mix(((0.5, Vacuum()), (0.5, Fock(2))))),
                (0.75, Coherent(2 + 0j)),
            )
        ),
    ),
]

# (text, expected offset of the error)
_PARSER_CASES_BAD = [
    ("thermal(-1)", 8),
    ("foo(1)", 0),
    ("fock(1.5)", 6),
    ("coherent(1+)", 10),
    ("0*vacuum", 0),
    ("vacuum + ", 9),
    ("cat(1,*)", 6),
    ("", 0),
    ("vacuum extra", 7),
    ("(((((((((vacuum)))))))))", 8),
]


def check_parser(quick: bool = False) -> tuple[float, float]:
    """State grammar: round-trips, structural equality, exact error offsets."""
    failures = 0
    for text, want in _PARSER_CASES_GOOD:
        try:
            got = parse(text)
        except StateSpecError:
            failures += 1
            continue
        if got != want:
            failures += 1
            continue
        import warnings as _w

        with _w.catch_warnings():
            _w.simplefilter("ignore")
            if parse(render(got)) != got:
                failures += 1
    for text, offset in _PARSER_CASES_BAD:
        try:
            import warnings as _w

            with _w.catch_warnings():
                _w.simplefilter("ignore")
                parse(text)
            failures += 1
        except StateSpecError as exc:
            if exc.offset != offset:
                failures += 1
    # weight normalization with warning
    import warnings as _w

    with _w.catch_warnings(record=True) as rec:
        _w.simplefilter("always")
        mix = parse("2*vacuum + 2*fock(0)")
        if not rec:
            failures += 1
    if not (
        isinstance(mix, Mix)
        and abs(sum(w for w, _ in mix.parts) - 1.0) < 1e-9
        and abs(mix.parts[0][0] - 0.5) < 1e-12
    ):
        failures += 1
    return float(failures), 0.0


_REGISTRY: list[tuple[str, str, Callable[[bool], tuple[float, float]]]] = [
    (
        "c01-ordering-anchors",
        "ordering-tag conversion anchors of the coherent-projector and exponential-of-number kernels",
        check_ordering_anchors,
    ),
    (
        "c02-exp-number-realization",
        "exponential-of-number kernel realization vs matrix-exponential oracle",
        check_exp_number_realization,
    ),
    (
        "c03-coherent-symbol",
        "coherent-state symbol matches its Gaussian closed form",
        check_coherent_symbol,
    ),
    (
        "c04-coherent-limit-kernel",
        "antinormal-boundary kernel equals the coherent projector over 2 pi",
        check_coherent_limit_kernel,
    ),
    (
        "c05-fourier-oracle",
        "defining-integral quadrature agrees with the factorized kernel realization",
        check_fourier_oracle,
    ),
    (
        "c06-completeness",
        "weighted kernel sum resolves the identity",
        check_completeness,
    ),
    (
        "c07-symbol-roundtrip",
        "symbol-expansion duality roundtrip reproduces the state",
        check_symbol_roundtrip,
    ),
    (
        "c08-element-reconstruction",
        "cross-element expansion reproduces the state and matches the symbol route",
        check_element_reconstruction,
    ),
    (
        "c09-mehta",
        "P-function integral formula value, reassembly, and singular diagnostic",
        check_mehta,
    ),
    (
        "c10-weyl-monomials",
        "symmetrized monomial operators have bare monomial symbols",
        check_weyl_monomials,
    ),
    (
        "c11-orthogonality-probe",
        "smeared trace-orthogonality of the dual kernel pair",
        check_orthogonality_probe,
    ),
    (
        "c12-state-grammar",
        "state grammar round-trips and exact error offsets",
        check_parser,
    ),
]


def run_verify(quick: bool = False) -> VerifyReport:
    results = []
    for check_id, identity, fn in _REGISTRY:
        measured, tol = fn(quick)
        results.append(
            CheckResult(
                check_id=check_id,
                identity=identity,
                measured_error=float(measured),
                tolerance=float(tol),
                passed=bool(measured <= tol),
            )
        )
    return VerifyReport(checks=tuple(results))
