"""Uniform 2D grid metadata shared by every field in the package.

Arrays living on a grid are indexed ``[ix, iy]`` (first axis along x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    dx: float
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.nx < 4 or self.ny < 4:
            raise ValueError(f"grid must be at least 4x4, got {self.nx}x{self.ny}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")

    @classmethod
    def centered(cls, nx: int, ny: int, dx: float) -> "GridSpec":
        """Grid whose geometric center sits at (0, 0)."""
        return cls(nx, ny, dx, (-(nx - 1) * dx / 2.0, -(ny - 1) * dx / 2.0))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        x = self.origin[0] + self.dx * np.arange(self.nx)
        y = self.origin[1] + self.dx * np.arange(self.ny)
        return x, y

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        x, y = self.axes()
        return np.meshgrid(x, y, indexing="ij")

    def dual(self) -> "GridSpec":
        """Grid of plaquette (cell) centers, one smaller along each axis."""
        return GridSpec(
            self.nx - 1,
            self.ny - 1,
            self.dx,
            (self.origin[0] + self.dx / 2, self.origin[1] + self.dx / 2),
        )
