"""Truncated Fock-space substrate.

Dense complex matrices on the number basis |0>, ..., |dim-1>: ladder
operators, coherent states, displacement matrices, reference density
matrices, Hilbert-Schmidt metrics and a brute-force matrix exponential.
Everything here is the numeric ground truth the symbolic layer is tested
against.

Conventions: alpha = (x + i p) / sqrt(2), X = (a^dag + a)/sqrt(2),
P = i (a^dag - a)/sqrt(2).  All arrays are complex128 and are frozen
(read-only) after construction; every function is pure.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidDimensionError, InvalidParameterError

DEFAULT_DIM = 48
TAIL_TOLERANCE = 1e-8

# alpha, beta, z are plain python complex numbers throughout.
PhasePoint = complex


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=complex)
    out.flags.writeable = False
    return out


class FockVector:
    """State vector on the truncated number basis.

    ``tail_mass`` records the probability weight the truncation dropped,
    when the constructor knows it.
    """

    def __init__(self, amp: np.ndarray, tail_mass: float = 0.0):
        amp = _frozen(amp)
        if amp.ndim != 1 or amp.size < 1:
            raise InvalidDimensionError("amplitude vector must be 1-d and non-empty")
        if not np.all(np.isfinite(amp.view(float))):
            raise InvalidParameterError("non-finite amplitude")
        self.amp = amp
        self.dim = amp.size
        self.tail_mass = float(tail_mass)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amp))


class FockOperator:
    """Dense operator on the truncated number basis."""

    def __init__(self, mat: np.ndarray):
        mat = _frozen(mat)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise InvalidDimensionError("operator matrix must be square")
        if not np.all(np.isfinite(mat.view(float))):
            raise InvalidParameterError("non-finite matrix entry")
        self.mat = mat
        self.dim = mat.shape[0]

    def dag(self) -> "FockOperator":
        return FockOperator(self.mat.conj().T)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        require_same_dim(self, other)
        return FockOperator(self.mat @ other.mat)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        require_same_dim(self, other)
        return FockOperator(self.mat + other.mat)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        require_same_dim(self, other)
        return FockOperator(self.mat - other.mat)

    def __rmul__(self, scalar: complex) -> "FockOperator":
        return FockOperator(scalar * self.mat)


def require_same_dim(*objs) -> int:
    dims = {o.dim for o in objs}
    if len(dims) != 1:
        raise InvalidDimensionError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop()


def _check_dim(dim: int) -> int:
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise InvalidDimensionError(f"dim must be an integer >= 2, got {dim!r}")
    return int(dim)


def ladder_matrices(dim: int) -> tuple[FockOperator, FockOperator, FockOperator, FockOperator]:
    """Return (a, a^dag, X, P) at the given truncation."""
    dim = _check_dim(dim)
    a = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    a[ns - 1, ns] = np.sqrt(ns)
    adag = a.conj().T
    x = (adag + a) / math.sqrt(2.0)
    p = 1j * (adag - a) / math.sqrt(2.0)
    return FockOperator(a), FockOperator(adag), FockOperator(x), FockOperator(p)


def number_state(n: int, dim: int) -> FockVector:
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise InvalidParameterError(f"number state {n} outside truncation {dim}")
    amp = np.zeros(dim, dtype=complex)
    amp[n] = 1.0
    return FockVector(amp)


def _coherent_amp_batch(alphas: np.ndarray, dim: int) -> np.ndarray:
    """Coherent amplitudes for a batch of alphas, shape (n, dim).

    amp_n = exp(-|a|^2/2) a^n / sqrt(n!), built with the multiplicative
    recurrence amp_n = amp_{n-1} * a / sqrt(n) (no factorials).
    """
    alphas = np.asarray(alphas, dtype=complex)
    out = np.empty((alphas.size, dim), dtype=complex)
    out[:, 0] = np.exp(-0.5 * (alphas.real**2 + alphas.imag**2))
    for n in range(1, dim):
        out[:, n] = out[:, n - 1] * alphas / math.sqrt(n)
    return out


def coherent_vector(alpha: PhasePoint, dim: int) -> FockVector:
    """Coherent state |alpha> truncated to dim levels; tail mass recorded."""
    dim = _check_dim(dim)
    amp = _coherent_amp_batch(np.array([alpha]), dim)[0]
    tail = max(0.0, 1.0 - float(np.sum(np.abs(amp) ** 2)))
    return FockVector(amp, tail_mass=tail)


def outer(ket: FockVector, bra: FockVector | None = None) -> FockOperator:
    """|ket><bra| (bra defaults to ket)."""
    if bra is None:
        bra = ket
    require_same_dim(ket, bra)
    return FockOperator(np.outer(ket.amp, bra.amp.conj()))


def _displacement_bands(betas: np.ndarray, dim: int) -> np.ndarray:
    """Displacement matrices for a batch of betas, shape (n, dim, dim).

    Closed-form matrix elements via scaled associated-Laguerre recurrences;
    all prefactors are built multiplicatively.  These are the exact
    infinite-dimensional elements restricted to the truncated block.
    """
    betas = np.asarray(betas, dtype=complex)
    n = betas.size
    x = betas.real**2 + betas.imag**2  # real (n,)
    damp = np.exp(-0.5 * x)
    out = np.zeros((n, dim, dim), dtype=complex)
    inv_sqrt_kfact = 1.0
    bpow = np.ones(n, dtype=complex)       # beta^k
    bneg = np.ones(n, dtype=complex)       # (-conj(beta))^k
    for k in range(dim):
        if k > 0:
            inv_sqrt_kfact /= math.sqrt(k)
            bpow = bpow * betas
            bneg = bneg * (-betas.conj())
        lower = damp * bpow
        upper = damp * bneg
        # h_j = sqrt(j!/(j+k)!) L_j^{(k)}(x), three-term recurrence in j
        h_prev = np.zeros(n)
        h = np.full(n, inv_sqrt_kfact)
        out[:, k, 0] = lower * h
        if k > 0:
            out[:, 0, k] = upper * h
        for j in range(1, dim - k):
            h_next = ((2 * j - 1 + k - x) * h - math.sqrt((j - 1) * (j - 1 + k)) * h_prev) / math.sqrt(
                j * (j + k)
            )
            h_prev, h = h, h_next
            out[:, j + k, j] = lower * h
            if k > 0:
                out[:, j, j + k] = upper * h
    return out


def displacement_matrix(beta: PhasePoint, dim: int) -> FockOperator:
    """Matrix of exp(beta a^dag - conj(beta) a).

    Analytic Laguerre-form entries; agrees with the matrix-exponential
    oracle on the leading block away from the truncation edge.
    """
    dim = _check_dim(dim)
    return FockOperator(_displacement_bands(np.array([beta]), dim)[0])


class DensityMatrix:
    """Hermitian, positive, unit-trace operator (within tolerances).

    ``tail_mass`` is the probability weight beyond the truncation; the
    trace check allows for it.  Constructors of approximate matrices
    (e.g. reconstructions) pass relaxed tolerances explicitly.
    """

    def __init__(
        self,
        op: FockOperator,
        tail_mass: float = 0.0,
        *,
        herm_tol: float = 1e-12,
        psd_tol: float = 1e-10,
        trace_tol: float | None = None,
    ):
        if tail_mass < 0:
            raise InvalidParameterError("tail_mass must be >= 0")
        m = op.mat
        herm_dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
        if herm_dev > herm_tol:
            raise InvalidParameterError(f"matrix not hermitian: deviation {herm_dev:.3e}")
        eigmin = float(np.linalg.eigvalsh((m + m.conj().T) / 2).min())
        if eigmin < -psd_tol:
            raise InvalidParameterError(f"matrix not positive: min eigenvalue {eigmin:.3e}")
        tr = complex(np.trace(m))
        if trace_tol is None:
            trace_tol = tail_mass + TAIL_TOLERANCE
        if abs(tr - 1.0) > trace_tol:
            raise InvalidParameterError(f"trace {tr:.6g} outside 1 +/- {trace_tol:.3g}")
        self.op = op
        self.dim = op.dim
        self.tail_mass = float(tail_mass)

    @property
    def mat(self) -> np.ndarray:
        return self.op.mat


def thermal_density(nbar: float, dim: int) -> DensityMatrix:
    """Thermal state with mean occupation nbar (geometric populations)."""
    dim = _check_dim(dim)
    if nbar < 0:
        raise InvalidParameterError(f"nbar must be >= 0, got {nbar}")
    p = np.zeros(dim)
    p[0] = 1.0 / (1.0 + nbar)
    ratio = nbar / (1.0 + nbar)
    for n in range(1, dim):
        p[n] = p[n - 1] * ratio
    tail = max(0.0, 1.0 - float(p.sum()))
    return DensityMatrix(FockOperator(np.diag(p.astype(complex))), tail_mass=tail)


def _cross_elements(rho: DensityMatrix, betas: np.ndarray) -> np.ndarray:
    """<-beta| rho |beta> for a batch of betas."""
    amps = _coherent_amp_batch(betas, rho.dim)            # amplitudes of |beta>
    signs = np.where(np.arange(rho.dim) % 2 == 0, 1.0, -1.0)
    left = amps * signs[None, :]                          # amplitudes of |-beta>
    g = amps @ rho.mat.T                                  # g[i, d] = (rho @ amp_i)[d]
    return np.sum(left.conj() * g, axis=1)


def cross_element(rho: DensityMatrix, beta: PhasePoint) -> complex:
    """Coherent cross matrix element <-beta| rho |beta>."""
    return complex(_cross_elements(rho, np.array([beta]))[0])


def hs_distance(a: FockOperator, b: FockOperator) -> float:
    """Hilbert-Schmidt distance sqrt(Tr[(A-B)^dag (A-B)])."""
    require_same_dim(a, b)
    return float(np.linalg.norm(a.mat - b.mat))


def trace(a: FockOperator) -> complex:
    return complex(np.trace(a.mat))


def leading_block(a: FockOperator, k: int) -> FockOperator:
    if not 1 <= k <= a.dim:
        raise InvalidDimensionError(f"block size {k} outside 1..{a.dim}")
    return FockOperator(a.mat[:k, :k])


def embed(a: FockOperator, dim: int) -> FockOperator:
    """Zero-pad an operator into a larger truncation (explicit, never silent)."""
    dim = _check_dim(dim)
    if dim < a.dim:
        raise InvalidDimensionError(f"cannot embed dim {a.dim} into smaller dim {dim}")
    out = np.zeros((dim, dim), dtype=complex)
    out[: a.dim, : a.dim] = a.mat
    return FockOperator(out)


def expm_oracle(a: FockOperator) -> FockOperator:
    """Matrix exponential by scaling-and-squaring of the Taylor series.

    Independent of any library routine; used as the oracle for
    displacement matrices and ordering-kernel realizations.
    """
    m = a.mat
    norm = float(np.max(np.sum(np.abs(m), axis=0))) if m.size else 0.0
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    b = m / (2.0**squarings)
    acc = np.eye(a.dim, dtype=complex)
    term = np.eye(a.dim, dtype=complex)
    for j in range(1, 400):
        term = term @ b / j
        acc = acc + term
        if np.max(np.abs(term)) <= 1e-17 * max(1.0, float(np.max(np.abs(acc)))):
            break
    else:
        raise InvalidParameterError("matrix exponential series did not converge")
    for _ in range(squarings):
        acc = acc @ acc
    return FockOperator(acc)
