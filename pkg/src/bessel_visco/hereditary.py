"""Hereditary (integral) form of the constitutive law on uniform grids.

Strain follows from stress through the Stieltjes convolution

    eps(t) = J(0+) sigma(t) + int_0^{t - t0} sigma(t - u) dJ(u).

Each panel of the ``dJ`` integral pairs the exact increment
``J(u_{m+1}) - J(u_m)`` with the panel average of ``sigma``. The creep rate
of a Bessel body blows up like ``t**-1/2`` at the origin, and this pairing
never samples it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DomainError, IllConditionedError

__all__ = ["SampledHistory", "convolution_matrix", "strain_from_stress", "stress_from_strain"]

Kind = Literal["stress", "strain"]


@dataclass(frozen=True)
class SampledHistory:
    """Samples ``values[n]`` at ``t0 + n*dt``; the history is 0 before ``t0``.

    ``values[0]`` is the right limit at ``t0``, so a step is simply a
    constant array.
    """

    t0: float
    dt: float
    values: np.ndarray
    kind: Kind

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise DomainError("a sampled history needs at least 2 values")
        if not self.dt > 0:
            raise DomainError(f"dt must be > 0, got {self.dt!r}")
        if self.kind not in ("stress", "strain"):
            raise DomainError(f"kind must be 'stress' or 'strain', got {self.kind!r}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    def __len__(self) -> int:
        return int(self.values.size)


def convolution_matrix(J: Callable, dt: float, n: int) -> np.ndarray:
    """Lower-triangular map from stress samples to strain samples.

    Row ``k`` encodes ``J(0) x_k + 1/2 sum_{m<k} dJ_m (x_{k-m} + x_{k-m-1})``
    with ``dJ_m = J((m+1) dt) - J(m dt)``.
    """
    grid = dt * np.arange(n)
    try:
        Jv = np.asarray(J(grid), dtype=float)
    except (TypeError, ValueError):
        Jv = None
    if Jv is None or Jv.shape != grid.shape:
        Jv = np.array([float(J(float(u))) for u in grid])
    dJ = np.diff(Jv)
    A = np.zeros((n, n))
    idx = np.arange(n)
    A[idx, idx] = Jv[0]
    for m in range(n - 1):
        w = 0.5 * dJ[m]
        rows = np.arange(m + 1, n)
        A[rows, rows - m] += w
        A[rows, rows - m - 1] += w
    return A


def strain_from_stress(J: Callable, sigma: SampledHistory) -> SampledHistory:
    """Strain history produced by the stress history ``sigma``.

    ``J`` maps times (scalar or array) to creep compliance. Accuracy is
    second order in ``dt`` for smooth stress, first order in the panels
    next to a kink or the ``sqrt t`` onset of ``J``.
    """
    A = convolution_matrix(J, sigma.dt, len(sigma))
    return SampledHistory(sigma.t0, sigma.dt, A @ sigma.values, "strain")


def stress_from_strain(J: Callable, eps: SampledHistory, *, min_diagonal: float = 1e-12) -> SampledHistory:
    """Stress history that produces ``eps``: forward substitution on the same system.

    Raises
    ------
    IllConditionedError
        If ``J(0+)`` or ``J(0+) + dJ_0/2`` falls below ``min_diagonal``.
    """
    A = convolution_matrix(J, eps.dt, len(eps))
    diag = np.diag(A)
    if np.min(np.abs(diag)) < min_diagonal:
        raise IllConditionedError(
            f"diagonal weight {np.min(np.abs(diag)):.3g} below {min_diagonal:g}; J(0+) must be positive"
        )
    sigma = solve_triangular(A, eps.values, lower=True)
    return SampledHistory(eps.t0, eps.dt, sigma, "stress")
