"""Caputo fractional derivative on power series and its Laplace rule."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .entire import EntireSeries
from .errors import DomainError, InsufficientDataError

__all__ = ["PowerJet", "FracSeries", "caputo_power", "caputo_series", "caputo_laplace"]


@dataclass(frozen=True)
class PowerJet:
    """Right limits ``f^(k)(0+)`` for ``k = 0..K``."""

    values: tuple

    def __init__(self, values: Iterable):
        object.__setattr__(self, "values", tuple(values))

    @property
    def K(self) -> int:
        return len(self.values) - 1

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def require(self, length: int, what: str = "jet") -> None:
        if len(self.values) < length:
            raise InsufficientDataError(
                f"{what} needs at least {length} entries (orders 0..{length - 1}), got {len(self.values)}",
                required=length,
            )


@dataclass(frozen=True)
class FracSeries:
    """Finite sum ``sum c * t**e`` with distinct, increasing exponents ``e >= 0``."""

    terms: tuple

    def __init__(self, terms: Iterable[tuple[float, float]] = ()):
        merged: dict[float, float] = {}
        for e, c in terms:
            if e < 0:
                raise DomainError(f"exponents must be >= 0, got {e}")
            merged[e] = merged.get(e, 0.0) + c
        object.__setattr__(
            self, "terms", tuple((e, merged[e]) for e in sorted(merged) if merged[e] != 0)
        )

    def __add__(self, other: "FracSeries") -> "FracSeries":
        return FracSeries(self.terms + other.terms)

    def scale(self, a: float) -> "FracSeries":
        return FracSeries((e, a * c) for e, c in self.terms)

    def __call__(self, t: float) -> float:
        return math.fsum(c * (t**e if e else 1.0) for e, c in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms


def caputo_power(m: int, alpha: float) -> FracSeries:
    """Caputo derivative of order ``alpha`` of ``t**m``.

    Zero when ``m < ceil(alpha)``, otherwise
    ``Gamma(m+1)/Gamma(m-alpha+1) * t**(m-alpha)``.
    """
    if m < 0 or int(m) != m:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    if m < math.ceil(alpha):
        return FracSeries()
    if float(alpha).is_integer():
        coeff = float(math.perm(m, int(alpha)))
    elif m < 170:
        coeff = math.gamma(m + 1) / math.gamma(m - alpha + 1)
    else:
        coeff = math.exp(math.lgamma(m + 1) - math.lgamma(m - alpha + 1))
    return FracSeries([(m - alpha, coeff)])


def caputo_series(f: EntireSeries | Sequence[float], alpha: float, truncation: int | None = None) -> FracSeries:
    """Apply the Caputo derivative termwise to ``sum b_m t**m`` (degree <= truncation)."""
    coeffs = f.coefficients() if isinstance(f, EntireSeries) else list(f)
    if truncation is not None:
        coeffs = coeffs[: truncation + 1]
    out: list[tuple[float, float]] = []
    for m, b in enumerate(coeffs):
        if b == 0:
            continue
        for e, c in caputo_power(m, alpha).terms:
            out.append((e, float(b) * c))
    return FracSeries(out)


def caputo_laplace(
    f_tilde: Callable[[complex], complex],
    jet: PowerJet | Sequence[float],
    alpha: float,
    s: complex,
) -> complex:
    """Laplace transform of the Caputo derivative of order ``alpha``.

    ``s**alpha F(s) - sum_{k < ceil(alpha)} f^(k)(0+) s**(alpha-k-1)`` with
    the principal branch ``s**a = exp(a log s)``.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    if not isinstance(jet, PowerJet):
        jet = PowerJet(jet)
    n = math.ceil(alpha)
    jet.require(n)
    s = complex(s)
    if s.real <= 0:
        raise DomainError(f"Re(s) must be > 0, got {s}")
    log_s = cmath.log(s)
    out = cmath.exp(alpha * log_s) * f_tilde(s)
    for k in range(n):
        out -= jet[k] * cmath.exp((alpha - k - 1) * log_s)
    return out
