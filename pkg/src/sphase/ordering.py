"""Ordering-parameterized Gaussian operator kernels.

An ordering tag sigma labels how products of a and a^dag are arranged:
+1 normal (creators left), 0 symmetric (Weyl), -1 antinormal.  Inside an
ordered symbol the mode operators commute, so a Gaussian exponent is a
plain c-number expression; the whole calculus lives in two closed families:

  Displaced:  C * sym_sigma[ exp( c3 (a^dag - conj(w)) (a - v) ) ]
  Linear:     C * sym_sigma[ exp( c1 a^dag + c2 a ) ]

The bra-side center w defaults to the ket-side center v (hermitian case);
the density-expansion kernel needs them independent.

Conversion between tags is a one-parameter rescaling (``reorder``) and a
kernel is turned into a Fock matrix by converting to the normal tag and
using the factorized form exp(c a^dag) diag((1+g)^n) exp(c' a), whose
entries are exact on the truncated block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    DivergenceError,
    InvalidParameterError,
    OrderingRangeError,
    SingularConversionError,
    SingularParameterError,
)
from .fock import FockOperator, PhasePoint, _check_dim, _displacement_bands
from .grid import PhaseGrid

NORMAL = 1.0
WEYL = 0.0
ANTINORMAL = -1.0

_TAU_EPS = 1e-12


@dataclass(frozen=True)
class DisplacedGaussian:
    """C * sym[ exp( c3 (a^dag - conj(w)) (a - v) ) ] at ordering tag ``order``.

    ``bra_center`` (w) is None when it coincides with ``center`` (v).
    """

    order: float
    prefactor: complex
    center: complex
    curvature: complex
    bra_center: complex | None = None

    def __post_init__(self):
        if self.curvature == 0:
            raise InvalidParameterError("displaced kernel requires nonzero curvature")
        if not math.isfinite(self.order):
            raise InvalidParameterError("ordering tag must be finite")

    @property
    def left_center(self) -> complex:
        return self.center if self.bra_center is None else self.bra_center

    def is_hermitian_form(self) -> bool:
        return (
            self.bra_center is None
            and abs(complex(self.prefactor).imag) == 0.0
            and abs(complex(self.curvature).imag) == 0.0
        )


@dataclass(frozen=True)
class LinearGaussian:
    """C * sym[ exp( c1 a^dag + c2 a ) ] at ordering tag ``order``."""

    order: float
    prefactor: complex
    coeff_create: complex
    coeff_annihilate: complex

    def is_hermitian_form(self) -> bool:
        return (
            self.coeff_create == 0
            and self.coeff_annihilate == 0
            and complex(self.prefactor).imag == 0.0
        )


SOrderedGaussian = Union[DisplacedGaussian, LinearGaussian]


def reorder(g: SOrderedGaussian, target: float) -> SOrderedGaussian:
    """Rewrite a kernel at another ordering tag.

    Displaced: tau = 1 + c3 (sigma - target)/2 rescales prefactor and
    curvature, centers are untouched.  Linear: only the prefactor picks up
    exp(c1 c2 (target - sigma)/2).  Round-trips are exact.
    """
    if isinstance(g, LinearGaussian):
        shift = np.exp(g.coeff_create * g.coeff_annihilate * (target - g.order) / 2.0)
        return LinearGaussian(
            order=target,
            prefactor=g.prefactor * complex(shift),
            coeff_create=g.coeff_create,
            coeff_annihilate=g.coeff_annihilate,
        )
    tau = 1.0 + g.curvature * (g.order - target) / 2.0
    if abs(tau) <= _TAU_EPS:
        raise SingularConversionError(
            f"kernel has no representation at tag {target} (scale factor vanished)"
        )
    return DisplacedGaussian(
        order=target,
        prefactor=g.prefactor / tau,
        center=g.center,
        curvature=g.curvature / tau,
        bra_center=g.bra_center,
    )


def realization_is_bounded(g: SOrderedGaussian) -> bool:
    """True when the normal-form diagonal (1+g)^n does not grow, i.e. the
    realized matrix is truncation-reliable."""
    if isinstance(g, LinearGaussian):
        return True
    gg = reorder(g, NORMAL).curvature
    return abs(1.0 + gg) <= 1.0 + 1e-12


def _int_powers(z: complex, dim: int) -> np.ndarray:
    out = np.empty(dim, dtype=complex)
    out[0] = 1.0
    if dim > 1:
        out[1:] = np.cumprod(np.full(dim - 1, z, dtype=complex))
    return out


def _exp_raising_bands(cs: np.ndarray, dim: int) -> np.ndarray:
    """Batch of exp(c a^dag) matrices, shape (n, dim, dim); entries exact."""
    cs = np.asarray(cs, dtype=complex)
    n = cs.size
    out = np.zeros((n, dim, dim), dtype=complex)
    idx = np.arange(dim)
    out[:, idx, idx] = 1.0
    band = np.ones(dim)
    cpow = np.ones(n, dtype=complex)
    for k in range(1, dim):
        j = np.arange(dim - k)
        band = band[: dim - k] * np.sqrt(j + k) / k
        cpow = cpow * cs
        out[:, j + k, j] = cpow[:, None] * band[None, :]
    return out


def _exp_raising(c: complex, dim: int) -> np.ndarray:
    return _exp_raising_bands(np.array([c]), dim)[0]


def realize(g: SOrderedGaussian, dim: int) -> FockOperator:
    """Fock matrix of a kernel.

    The kernel is first converted to the normal tag; a singular conversion
    (delta-type kernel) propagates as SingularConversionError.  Matrix
    elements are exact on the truncated block.
    """
    dim = _check_dim(dim)
    if isinstance(g, LinearGaussian):
        norm = reorder(g, NORMAL)
        left = _exp_raising(norm.coeff_create, dim)
        right = _exp_raising(norm.coeff_annihilate, dim).T
        return FockOperator(norm.prefactor * (left @ right))
    norm = reorder(g, NORMAL)
    gg = norm.curvature
    v = norm.center
    w = norm.left_center
    lam = _int_powers(1.0 + gg, dim)
    scalar = norm.prefactor * complex(np.exp(gg * np.conj(w) * v))
    left = _exp_raising(-gg * v, dim)
    right = _exp_raising(-gg * np.conj(w), dim).T
    return FockOperator(scalar * ((left * lam[None, :]) @ right))


def wigner_kernel(alpha: PhasePoint, s: float) -> DisplacedGaussian:
    """Phase-space kernel Delta_s(alpha) in normal-ordered form:
    prefactor 1/((1-s) pi), center alpha, curvature -2/(1-s).

    Realizes to exp(c a^dag) diag(z^n) exp(conj(c) a)-type matrices with
    z = (s+1)/(s-1); the diagonal uses integer powers so z < 0 (parity at
    s = 0) needs no logarithm branch.
    """
    if s >= 1:
        raise OrderingRangeError(f"kernel defined for s < 1, got {s}")
    return DisplacedGaussian(
        order=NORMAL,
        prefactor=1.0 / ((1.0 - s) * math.pi),
        center=complex(alpha),
        curvature=-2.0 / (1.0 - s),
    )


def coherent_projector(z: PhasePoint, s: float) -> DisplacedGaussian:
    """|z><z| as an s-tagged kernel: C = 2/(1+s), curvature -2/(1+s).

    At s -> -1 the kernel degenerates to a delta; out of range there.
    """
    if s <= -1:
        raise OrderingRangeError(f"coherent projector kernel requires s > -1, got {s}")
    return DisplacedGaussian(
        order=float(s),
        prefactor=2.0 / (1.0 + s),
        center=complex(z),
        curvature=-2.0 / (1.0 + s),
    )


def vacuum_projector(s: float) -> DisplacedGaussian:
    """|0><0| as an s-tagged kernel (coherent projector at z = 0)."""
    return coherent_projector(0j, s)


def exp_number(lam: float, s: float) -> SOrderedGaussian:
    """exp(lam a^dag a) as an s-tagged kernel.

    With D = 1 + s - s e^lam + e^lam: prefactor 2/D, curvature
    2(e^lam - 1)/D, center 0.  lam = 0 degenerates to the identity, which
    is returned as a Linear kernel (zero coefficients).
    """
    el = np.exp(complex(lam)) if isinstance(lam, complex) else math.exp(lam)
    d = 1.0 + s - s * el + el
    if abs(d) <= 1e-12:
        raise SingularParameterError(f"expansion denominator vanished (lam={lam}, s={s})")
    c3 = 2.0 * (el - 1.0) / d
    if c3 == 0:
        return LinearGaussian(order=float(s), prefactor=1.0, coeff_create=0j, coeff_annihilate=0j)
    return DisplacedGaussian(order=float(s), prefactor=2.0 / d, center=0j, curvature=c3)


def density_kernel(beta: PhasePoint, s: float) -> DisplacedGaussian:
    """Expansion kernel pairing the reflected cross element <-beta|rho|beta>.

    Canonical form: order s, curvature 2/(1-s), ket center beta, bra center
    -beta, prefactor (2/(1-s)) exp(2|beta|^2).  The bra and ket centers
    differ (reflected), so the kernel is not hermitian for beta != 0, and
    its normal-order conversion is singular: it is a delta-type object and
    has no finite realization.  Reconstruction therefore pairs it through
    its closed-form symbol (see quasiprob.cross_symbol_weight).
    """
    if s >= 1:
        raise OrderingRangeError(f"expansion kernel defined for s < 1, got {s}")
    b = complex(beta)
    mag2 = b.real**2 + b.imag**2
    return DisplacedGaussian(
        order=float(s),
        prefactor=(2.0 / (1.0 - s)) * math.exp(2.0 * mag2),
        center=b,
        curvature=2.0 / (1.0 - s),
        bra_center=-b if b != 0 else None,
    )


def displacement_ordered(beta: PhasePoint, order: float) -> LinearGaussian:
    """Displacement written as an ordered linear kernel: coefficients
    (beta, -conj(beta)); realizes to D(beta) exp(order |beta|^2 / 2)."""
    b = complex(beta)
    return LinearGaussian(
        order=float(order), prefactor=1.0, coeff_create=b, coeff_annihilate=-b.conjugate()
    )


def fourier_oracle(alpha: PhasePoint, s: float, grid: PhaseGrid, dim: int) -> FockOperator:
    """Brute-force kernel via quadrature of the defining integral
    (1/2 pi^2) int d^2b exp(s|b|^2/2) D(b) exp(conj(b) alpha - b conj(alpha)).

    Independent of ``realize``; used only as its oracle.  Requires s <= 0
    and a grid that reaches the decay of the integrand envelope
    exp((s-1)|b|^2 / 2).
    """
    dim = _check_dim(dim)
    if s > 0:
        raise OrderingRangeError(f"quadrature oracle requires s <= 0, got {s}")
    pts = grid.points
    env = np.exp(0.5 * (s - 1.0) * np.abs(pts) ** 2)
    if env[grid.boundary_mask].max() > 1e-6 * env.max():
        raise DivergenceError(
            "integrand envelope does not decay at the grid boundary; enlarge the grid"
        )
    a = complex(alpha)
    acc = np.zeros((dim, dim), dtype=complex)
    scale = grid.weight / (2.0 * math.pi**2)
    for _, row in grid.rows():
        d = _displacement_bands(row, dim)
        w = scale * np.exp(0.5 * s * np.abs(row) ** 2 + row.conj() * a - row * np.conj(a))
        acc += np.einsum("c,cmn->mn", w, d)
    return FockOperator(acc)


def _fmt_num(x: complex | float) -> str:
    x = complex(x)
    if x.imag == 0.0:
        return f"{x.real:.17g}"
    sign = "+" if x.imag >= 0 else "-"
    return f"({x.real:.17g}{sign}{abs(x.imag):.17g}i)"


def render(g: SOrderedGaussian) -> str:
    """Plain-text rendering with 17-significant-digit numerals."""
    if isinstance(g, LinearGaussian):
        return (
            f"{_fmt_num(g.prefactor)} * S[s={g.order:.17g}]{{ exp( "
            f"{_fmt_num(g.coeff_create)}*ad + {_fmt_num(g.coeff_annihilate)}*a ) }}"
        )
    v = _fmt_num(g.center)
    wc = _fmt_num(np.conj(g.left_center))
    return (
        f"{_fmt_num(g.prefactor)} * S[s={g.order:.17g}]{{ exp( "
        f"{_fmt_num(g.curvature)}*(ad - {wc})*(a - {v}) ) }}"
    )
