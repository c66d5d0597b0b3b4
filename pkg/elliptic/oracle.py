"""Dense reference solve of the collocation pressure operator, for small grids only."""

import numpy as np
from scipy import linalg

from elliptic.pressure import check_density
from fields.grid import GridSpec, ScalarField, VectorField

MAX_DENSE_N = 32


def derivative_matrices(grid: GridSpec) -> list:
    """Real dense matrices of the spectral partial derivatives on flattened grid values."""
    n = grid.n
    one_d = linalg.dft(n)
    forward = np.kron(one_d, one_d)
    inverse = forward.conj().T / n**2
    return [(inverse @ (1j * k.ravel()[:, None] * forward)).real for k in grid.derivative_wavenumbers]


def direct_pressure_solve(rho: ScalarField, F: VectorField) -> tuple:
    """
    Least-squares solve of -div((1/rho) grad Pi) = div F with explicit matrices.

    The minimum-norm solution is orthogonal to the operator kernel, which
    matches the zero-mean gauge of the iterative solver.

    Returns:
    tuple: (Pi, gradPi)
    """
    grid = rho.grid
    if grid.n > MAX_DENSE_N:
        raise ValueError(f"dense pressure oracle limited to n <= {MAX_DENSE_N}, got n={grid.n}")
    check_density(rho)
    D = derivative_matrices(grid)
    a = 1.0 / rho.values.ravel()
    operator = -sum(Di @ (a[:, None] * Di) for Di in D)
    rhs = sum(Di @ Fi.values.ravel() for Di, Fi in zip(D, F))
    solution, *_ = linalg.lstsq(operator, rhs)
    solution -= solution.mean()
    Pi = ScalarField(grid, solution.reshape(grid.shape))
    gradPi = VectorField(tuple(ScalarField(grid, (Di @ solution).reshape(grid.shape)) for Di in D))
    return Pi, gradPi
