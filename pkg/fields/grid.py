"""
Periodic grid fields on the 2-torus.

A ScalarField keeps its real samples and lazily computes the matching
Fourier coefficients; a VectorField is a tuple of ScalarFields. Both are
immutable snapshots and can be shared between threads.
"""

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft


@dataclass(frozen=True)
class GridSpec:
    n: int = 64
    dim: int = 2
    length: float = 2 * math.pi
    dealias_fraction: float = 2 / 3

    def __post_init__(self):
        if self.n < 8 or self.n & (self.n - 1):
            raise ValueError(f"grid.n must be a power of two >= 8, got {self.n}")
        if self.dim != 2:
            raise ValueError(f"grid.dim must be 2, got {self.dim}")
        if self.length <= 0:
            raise ValueError(f"grid.length must be positive, got {self.length}")
        if not 0 < self.dealias_fraction <= 1:
            raise ValueError(f"grid.dealias_fraction must lie in (0, 1], got {self.dealias_fraction}")
        if self.k_max < 2:
            raise ValueError(f"dealias cutoff k_max={self.k_max} must be >= 2")

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.dim

    @property
    def k_max(self) -> int:
        return int(math.floor(self.dealias_fraction * self.n / 2))

    @cached_property
    def coordinates(self) -> tuple:
        x = self.length * np.arange(self.n) / self.n
        return tuple(np.meshgrid(x, x, indexing="ij"))

    @cached_property
    def integer_wavenumbers(self) -> tuple:
        k = fft.fftfreq(self.n, d=1.0 / self.n)
        return tuple(np.meshgrid(k, k, indexing="ij"))

    @cached_property
    def wavenumbers(self) -> tuple:
        scale = 2 * math.pi / self.length
        return tuple(scale * k for k in self.integer_wavenumbers)

    @cached_property
    def derivative_wavenumbers(self) -> tuple:
        # Nyquist column zeroed so spectral derivatives of real fields stay real
        k = fft.fftfreq(self.n, d=1.0 / self.n) * (2 * math.pi / self.length)
        k[self.n // 2] = 0.0
        return tuple(np.meshgrid(k, k, indexing="ij"))

    @cached_property
    def laplacian_symbol(self) -> np.ndarray:
        return -sum(k**2 for k in self.derivative_wavenumbers)

    @cached_property
    def radius(self) -> np.ndarray:
        """|xi| on the grid, used by the radial Littlewood-Paley profiles."""
        return np.sqrt(sum(k**2 for k in self.wavenumbers))

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        kx, ky = self.integer_wavenumbers
        return (np.abs(kx) <= self.k_max) & (np.abs(ky) <= self.k_max)


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError(f"values shape {values.shape} does not match grid {self.grid.shape}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @cached_property
    def spectrum(self) -> np.ndarray:
        spectrum = fft.fft2(self.values)
        spectrum.setflags(write=False)
        return spectrum

    @classmethod
    def from_spectrum(cls, grid: GridSpec, spectrum: np.ndarray) -> "ScalarField":
        return cls(grid, fft.ifft2(spectrum).real)

    @classmethod
    def constant(cls, grid: GridSpec, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ScalarField":
        return cls.constant(grid, 0.0)

    @classmethod
    def from_function(cls, grid: GridSpec, func) -> "ScalarField":
        """Sample func(x, y) on the grid nodes."""
        return cls(grid, np.broadcast_to(func(*grid.coordinates), grid.shape))

    def mean(self) -> float:
        return float(self.values.mean())

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def _wrap(self, values) -> "ScalarField":
        return ScalarField(self.grid, values)

    def _other(self, other):
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise ValueError("fields live on different grids")
            return other.values
        return other

    def __add__(self, other):
        return self._wrap(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.values - self._other(other))

    def __rsub__(self, other):
        return self._wrap(self._other(other) - self.values)

    def __mul__(self, other):
        if isinstance(other, VectorField):
            return NotImplemented
        return self._wrap(self.values * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._wrap(self.values / self._other(other))

    def __rtruediv__(self, other):
        return self._wrap(self._other(other) / self.values)

    def __neg__(self):
        return self._wrap(-self.values)

    def __pow__(self, exponent):
        return self._wrap(self.values**exponent)


@dataclass(frozen=True, eq=False)
class VectorField:
    components: tuple
    divergence_free: bool = False

    def __post_init__(self):
        components = tuple(self.components)
        if len(components) == 0:
            raise ValueError("a vector field needs at least one component")
        grid = components[0].grid
        if any(c.grid != grid for c in components):
            raise ValueError("vector components live on different grids")
        if len(components) != grid.dim:
            raise ValueError(f"expected {grid.dim} components, got {len(components)}")
        object.__setattr__(self, "components", components)
        if self.divergence_free:
            div_hat = sum(1j * k * c.spectrum for k, c in zip(grid.derivative_wavenumbers, components))
            div_norm = np.sqrt(np.sum(np.abs(div_hat) ** 2))
            norm = np.sqrt(sum(np.sum(np.abs(c.spectrum) ** 2) for c in components))
            if div_norm > 1e-10 * norm:
                raise ValueError(f"field flagged divergence-free has relative divergence {div_norm / norm:.3e}")

    @property
    def grid(self) -> GridSpec:
        return self.components[0].grid

    @classmethod
    def zeros(cls, grid: GridSpec) -> "VectorField":
        return cls(tuple(ScalarField.zeros(grid) for _ in range(grid.dim)), divergence_free=True)

    @classmethod
    def from_arrays(cls, grid: GridSpec, *arrays, divergence_free: bool = False) -> "VectorField":
        return cls(tuple(ScalarField(grid, a) for a in arrays), divergence_free=divergence_free)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i) -> ScalarField:
        return self.components[i]

    def magnitude(self) -> ScalarField:
        return ScalarField(self.grid, np.sqrt(sum(c.values**2 for c in self.components)))

    def dot(self, other: "VectorField") -> ScalarField:
        return ScalarField(self.grid, sum(a.values * b.values for a, b in zip(self, other)))

    def _map(self, func, other=None):
        if isinstance(other, VectorField):
            parts = tuple(func(a, b) for a, b in zip(self, other))
        else:
            parts = tuple(func(a, other) for a in self)
        return VectorField(parts)

    def __add__(self, other):
        return self._map(lambda a, b: a + b, other)

    __radd__ = __add__

    def __sub__(self, other):
        return self._map(lambda a, b: a - b, other)

    def __mul__(self, other):
        # scalars and ScalarFields multiply pointwise
        return self._map(lambda a, b: a * b, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._map(lambda a, b: a / b, other)

    def __neg__(self):
        return self._map(lambda a, _: -a)


def random_field(grid: GridSpec, rng: np.random.Generator, k_cut: int = None) -> ScalarField:
    """
    Draw a real, mean-free field whose modes satisfy |k_x|, |k_y| <= k_cut.

    Parameters:
    grid (GridSpec): target grid.
    rng (np.random.Generator): source of randomness.
    k_cut (int): spectral box half-width, defaults to the dealias cutoff.

    Returns:
    ScalarField: normalized to unit L2 norm.
    """
    k_cut = grid.k_max if k_cut is None else k_cut
    kx, ky = grid.integer_wavenumbers
    box = (np.abs(kx) <= k_cut) & (np.abs(ky) <= k_cut)
    spectrum = (rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)) * box
    spectrum[0, 0] = 0.0
    values = fft.ifft2(spectrum).real
    values /= np.sqrt(np.mean(values**2))
    return ScalarField(grid, values)


def random_vector_field(grid: GridSpec, rng: np.random.Generator, k_cut: int = None) -> VectorField:
    return VectorField(tuple(random_field(grid, rng, k_cut) for _ in range(grid.dim)))
