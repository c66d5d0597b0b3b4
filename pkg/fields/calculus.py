"""
Spectral differential calculus on periodic grid fields.

Derivatives multiply Fourier coefficients by i*k; products are taken
pointwise on the grid and truncated with the 2/3 rule by `product`.
"""

import math

import numpy as np

from fields.grid import GridSpec, ScalarField, VectorField


def apply_multiplier(f, symbol: np.ndarray):
    """Apply a Fourier multiplier to a scalar field, or componentwise to a vector field."""
    if isinstance(f, VectorField):
        return VectorField(tuple(apply_multiplier(c, symbol) for c in f))
    return ScalarField.from_spectrum(f.grid, symbol * f.spectrum)


def dealias(f):
    """
    Zero every mode with a wavenumber component above k_max.

    Parameters:
    f (ScalarField | VectorField): field to truncate.

    Returns:
    Same type as f, band-limited to the retained modes.
    """
    return apply_multiplier(f, f.grid.dealias_mask)


def product(a: ScalarField, b: ScalarField) -> ScalarField:
    """Pointwise product followed by 2/3-rule truncation."""
    return dealias(ScalarField(a.grid, a.values * b.values))


def partial(f: ScalarField, axis: int) -> ScalarField:
    k = f.grid.derivative_wavenumbers[axis]
    return ScalarField.from_spectrum(f.grid, 1j * k * f.spectrum)


def gradient(f: ScalarField) -> VectorField:
    return VectorField(tuple(partial(f, i) for i in range(f.grid.dim)))


def divergence(v: VectorField) -> ScalarField:
    grid = v.grid
    spectrum = sum(1j * k * c.spectrum for k, c in zip(grid.derivative_wavenumbers, v))
    return ScalarField.from_spectrum(grid, spectrum)


def laplacian(f: ScalarField) -> ScalarField:
    return ScalarField.from_spectrum(f.grid, f.grid.laplacian_symbol * f.spectrum)


def inverse_laplacian(f: ScalarField) -> ScalarField:
    """
    Solve Delta g = f for the mean-zero g.

    Modes where the Laplacian symbol vanishes (the mean and the pure
    Nyquist modes) are set to zero, so the data is implicitly projected
    onto the range of the operator.
    """
    symbol = f.grid.laplacian_symbol
    inverse = np.zeros_like(symbol)
    nonzero = symbol != 0
    inverse[nonzero] = 1.0 / symbol[nonzero]
    return ScalarField.from_spectrum(f.grid, inverse * f.spectrum)


def _require_planar(grid: GridSpec, name: str):
    if grid.dim != 2:
        raise ValueError(f"{name} is only defined in dimension 2, got dim={grid.dim}")


def curl2d(v: VectorField) -> ScalarField:
    """Scalar vorticity d1 v2 - d2 v1."""
    _require_planar(v.grid, "curl2d")
    k1, k2 = v.grid.derivative_wavenumbers
    spectrum = 1j * k1 * v[1].spectrum - 1j * k2 * v[0].spectrum
    return ScalarField.from_spectrum(v.grid, spectrum)


def perp_gradient(f: ScalarField) -> VectorField:
    """Rotated gradient (-d2 f, d1 f); always divergence-free."""
    _require_planar(f.grid, "perp_gradient")
    k1, k2 = f.grid.derivative_wavenumbers
    first = ScalarField.from_spectrum(f.grid, -1j * k2 * f.spectrum)
    second = ScalarField.from_spectrum(f.grid, 1j * k1 * f.spectrum)
    return VectorField((first, second), divergence_free=True)


def leray_project(v: VectorField) -> VectorField:
    """
    Remove the gradient part of v: v - grad(inverse_laplacian(div v)).

    Parameters:
    v (VectorField): arbitrary vector field.

    Returns:
    VectorField: divergence-free part, flagged as such.
    """
    grid = v.grid
    ks = grid.derivative_wavenumbers
    k_squared = -grid.laplacian_symbol
    safe = np.where(k_squared == 0, 1.0, k_squared)
    k_dot_v = sum(k * c.spectrum for k, c in zip(ks, v))
    projected = []
    for k, c in zip(ks, v):
        spectrum = c.spectrum - np.where(k_squared == 0, 0.0, k * k_dot_v / safe)
        projected.append(ScalarField.from_spectrum(grid, spectrum))
    return VectorField(tuple(projected), divergence_free=True)


def lp_norm(f, p: float = 2) -> float:
    """
    L^p norm with respect to the normalized measure (total mass 1).

    Parameters:
    f (ScalarField | VectorField): vector fields use the pointwise Euclidean magnitude.
    p (float): exponent in [1, inf]; math.inf gives the grid maximum.

    Returns:
    float: (average of |f|^p)^(1/p), or max |f| for p = inf.
    """
    if p < 1:
        raise ValueError(f"L^p exponent must be >= 1, got {p}")
    values = f.magnitude().values if isinstance(f, VectorField) else np.abs(f.values)
    if math.isinf(p):
        return float(values.max())
    if p == 1:
        return float(values.mean())
    if p == 2:
        return float(np.sqrt(np.mean(values**2)))
    return float(np.mean(values**p) ** (1.0 / p))


def advect(u: VectorField, f: ScalarField) -> ScalarField:
    """Dealiased transport term u . grad f."""
    grad_f = gradient(f)
    return dealias(ScalarField(f.grid, sum(ui.values * gi.values for ui, gi in zip(u, grad_f))))


def advect_vector(u: VectorField, v: VectorField) -> VectorField:
    return VectorField(tuple(advect(u, c) for c in v))


def velocity_gradient_sup(u: VectorField) -> float:
    """Grid maximum of the pointwise Frobenius norm of the matrix (d_i u^j)."""
    squares = sum(g.values**2 for c in u for g in gradient(c))
    return float(np.sqrt(squares).max())
