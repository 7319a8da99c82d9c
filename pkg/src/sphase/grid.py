"""Uniform square grids on the complex plane and sampled symbol fields.

Grid points are ordered row-major: imaginary part varies slowest
(ascending), real part fastest.  Each point carries quadrature weight
step**2 (midpoint rule).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidParameterError


@dataclass(frozen=True)
class PhaseGrid:
    half_extent: float
    step: float
    center: complex = 0j

    def __post_init__(self):
        if self.half_extent <= 0 or self.step <= 0:
            raise InvalidParameterError("half_extent and step must be positive")
        if self.step > self.half_extent:
            raise InvalidParameterError("step larger than half_extent")

    @property
    def n(self) -> int:
        return int(np.floor(self.half_extent / self.step + 1e-9))

    @property
    def side(self) -> int:
        return 2 * self.n + 1

    @property
    def weight(self) -> float:
        return self.step * self.step

    @cached_property
    def points(self) -> np.ndarray:
        offs = (np.arange(-self.n, self.n + 1)) * self.step
        pts = (self.center + offs[None, :] + 1j * offs[:, None]).ravel()
        pts.flags.writeable = False
        return pts

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        idx = np.arange(-self.n, self.n + 1)
        on_edge = np.abs(idx) == self.n
        mask = (on_edge[:, None] | on_edge[None, :]).ravel()
        mask.flags.writeable = False
        return mask

    def rows(self):
        """Yield (slice, row_points) in row-major order."""
        pts = self.points
        for r in range(self.side):
            sl = slice(r * self.side, (r + 1) * self.side)
            yield sl, pts[sl]


@dataclass(frozen=True)
class SymbolField:
    """Sampled symbol values on a grid, row-major, one complex per point."""

    grid: PhaseGrid
    s: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=complex)
        if vals.shape != (self.grid.side**2,):
            raise InvalidParameterError(
                f"field length {vals.shape} does not match grid ({self.grid.side ** 2} points)"
            )
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)


def _g17(x: float) -> str:
    return f"{x:.17g}"


def write_symbol_csv(field: SymbolField, path) -> None:
    """CSV serialization: header re_alpha,im_alpha,re_value,im_value,
    rows in row-major grid order, 17 significant digits, LF endings."""
    pts = field.grid.points
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("re_alpha,im_alpha,re_value,im_value\n")
        for pt, val in zip(pts, field.values):
            fh.write(
                f"{_g17(pt.real)},{_g17(pt.imag)},{_g17(val.real)},{_g17(val.imag)}\n"
            )


def read_symbol_csv(path, s: float) -> SymbolField:
    """Inverse of write_symbol_csv; infers the grid from the point lattice."""
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    if data.ndim == 1:
        data = data[None, :]
    re, im = data[:, 0], data[:, 1]
    side = int(round(np.sqrt(data.shape[0])))
    if side * side != data.shape[0]:
        raise InvalidParameterError("CSV rows do not form a square grid")
    step = float(re[1] - re[0]) if side > 1 else 1.0
    center = complex(np.mean(re), np.mean(im))
    n = (side - 1) // 2
    grid = PhaseGrid(half_extent=(n + 0.5) * step if n else step, step=step, center=center)
    if grid.side != side:
        raise InvalidParameterError("inconsistent grid inferred from CSV")
    return SymbolField(grid, s, data[:, 2] + 1j * data[:, 3])
