"""The Bessel body: Laplace symbol, creep compliance and its short-time limit.

``s J~(s) = I_nu(sqrt s) / I_{nu+2}(sqrt s)`` and, in the time domain,

    J(t) = 2(nu+2)/(nu+3) + 4(nu+1)(nu+2) t
           - 4(nu+1) sum_n exp(-j_n**2 t) / j_n**2,

with ``j_n`` the positive zeros of ``J_{nu+2}``. The exponential sum needs
``O(t**-1/2)`` zeros, so below ``t_star`` the compliance is obtained by
Talbot inversion of the symbol instead.
"""

from __future__ import annotations

import cmath
import math
import os
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PoleProximityError, ZeroCapExceededError
from .laplace import InversionParams, invert
from .specfun import MAX_ZEROS, ZeroTable, bessel_I_ratio, bessel_J_zeros, log_bessel_I

__all__ = [
    "BesselBody",
    "laplace_sJ",
    "creep_compliance",
    "creep_derivative",
    "creep_constant_term",
    "rayleigh_sum",
    "rayleigh_closed_form",
    "fm_half_creep",
    "fm_half_symbol",
    "short_time_gap",
]

ZERO_BLOCK = 256
ENV_ZERO_CAP = "BESSEL_VISCO_ZERO_CAP"


def _default_zero_cap() -> int:
    raw = os.environ.get(ENV_ZERO_CAP)
    if raw is None:
        return MAX_ZEROS
    try:
        cap = int(raw)
    except ValueError:
        raise DomainError(f"{ENV_ZERO_CAP} must be an integer, got {raw!r}") from None
    if not 1 <= cap <= MAX_ZEROS:
        raise DomainError(f"{ENV_ZERO_CAP} must lie in [1, {MAX_ZEROS}], got {cap}")
    return cap


@dataclass(eq=False)
class BesselBody:
    """Bessel material of parameter ``nu > -1``.

    Holds a lazily grown table of zeros of ``J_{nu+2}``. Growth happens in
    blocks of 256 under a lock, and the new table is published only once
    complete, so concurrent readers always see a finished table.
    """

    nu: float
    series_tol: float = 1e-12
    t_star: float = 1e-4
    zero_cap: int = field(default_factory=_default_zero_cap)
    inversion: InversionParams = field(default_factory=InversionParams)
    _table: ZeroTable | None = field(default=None, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self):
        if not math.isfinite(self.nu) or self.nu <= -1:
            raise DomainError(f"nu must be > -1, got {self.nu!r}")
        if not self.series_tol > 0:
            raise DomainError("series_tol must be positive")

    @property
    def order(self) -> float:
        """Order of the Bessel function whose zeros drive the creep series."""
        return self.nu + 2.0

    def zero_table(self, n: int = ZERO_BLOCK) -> ZeroTable:
        """Table holding at least ``n`` zeros of ``J_{nu+2}``."""
        table = self._table
        if table is not None and table.count >= n:
            return table
        if n > self.zero_cap:
            raise ZeroCapExceededError(
                f"{n} zeros of J_{self.order} requested but the cap is {self.zero_cap}; "
                f"evaluate smaller t through the Laplace-inversion branch (t < t_star)"
            )
        with self._lock:
            table = self._table
            if table is None or table.count < n:
                size = min(self.zero_cap, ZERO_BLOCK * math.ceil(n / ZERO_BLOCK))
                table = bessel_J_zeros(self.order, size)
                self._table = table
        return table


# ---------------------------------------------------------------------------
# Laplace domain
# ---------------------------------------------------------------------------


def laplace_sJ(body: BesselBody, s: complex, *, pole_rtol: float = 1e-12) -> complex:
    """``s J~(s) = I_nu(sqrt s) / I_{nu+2}(sqrt s)`` with the principal root.

    Small ``|s|`` takes the difference of the two logarithms, so nothing
    overflows; large ``|s|`` takes the ratio of the Hankel expansions, in
    which ``exp(sqrt s)`` cancels exactly.

    Raises
    ------
    PoleProximityError
        When ``s`` sits on the negative real axis within ``pole_rtol``
        (relative) of a pole ``-j_n**2``, or ``|I_{nu+2}(sqrt s)| < 1e-300``.
    """
    s = complex(s)
    if s == 0:
        raise DomainError("s must be nonzero")
    if s.real < 0 and abs(s.imag) <= pole_rtol * abs(s):
        _check_pole(body, s, pole_rtol)
    z = cmath.sqrt(s)
    lb = log_bessel_I(body.nu + 2.0, z)
    if lb.real < math.log(1e-300):
        raise PoleProximityError(f"|I_{body.nu + 2}(sqrt s)| < 1e-300 at s={s}")
    out = bessel_I_ratio(body.nu, body.nu + 2.0, z)
    if abs(s.imag) == 0 and s.real > 0:
        return complex(out.real, 0.0)
    return out


def _check_pole(body: BesselBody, s: complex, rtol: float) -> None:
    y = math.sqrt(-s.real)
    n_need = int(y / math.pi) + 4
    if n_need > body.zero_cap:
        return
    j = body.zero_table(n_need).zeros
    i = int(np.argmin(np.abs(j - y)))
    if abs(s.real + j[i] ** 2) <= rtol * j[i] ** 2:
        raise PoleProximityError(
            f"s={s} is within relative {rtol:g} of the pole -j_{i + 1}^2 = {-j[i] ** 2!r}"
        )


def fm_half_symbol(nu: float, s: complex) -> complex:
    """``s J~(s)`` of the fractional Maxwell law of order 1/2, ``1 + 2(nu+1)/sqrt(s)``."""
    return 1.0 + 2.0 * (nu + 1.0) / cmath.sqrt(complex(s))


# ---------------------------------------------------------------------------
# Time domain
# ---------------------------------------------------------------------------


def creep_constant_term(nu: float) -> float:
    """The constant ``2(nu+2)/(nu+3)`` displayed in front of the creep series."""
    return 2.0 * (nu + 2.0) / (nu + 3.0)


def rayleigh_closed_form(order: float, power: int) -> float:
    """``sum_n j_{order,n}**-power`` for power 2 or 4."""
    if power == 2:
        return 1.0 / (4.0 * (order + 1.0))
    if power == 4:
        return 1.0 / (16.0 * (order + 1.0) ** 2 * (order + 2.0))
    raise DomainError(f"power must be 2 or 4, got {power!r}")


def rayleigh_sum(order: float, power: int, n_terms: int, table: ZeroTable | None = None) -> tuple[float, float]:
    """Partial sum of ``j_{order,n}**-power`` over ``n <= n_terms`` and its tail.

    The tail replaces the remaining zeros by their leading asymptotic
    positions ``(n + order/2 - 1/4) pi`` and integrates from ``n_terms + 1/2``.
    """
    if power not in (2, 4):
        raise DomainError(f"power must be 2 or 4, got {power!r}")
    if table is None or table.count < n_terms or table.order != order:
        table = bessel_J_zeros(order, n_terms)
    j = table.zeros[:n_terms]
    partial = math.fsum(np.sort(j ** (-float(power)))[::1])
    start = n_terms + 0.5 + 0.5 * order - 0.25
    tail = math.pi ** (-power) * start ** (1 - power) / (power - 1)
    return partial, tail


def _zeros_needed(body: BesselBody, t_min: float, power: int = 0) -> int:
    """Zero count after which the terms ``j**(2 power) exp(-j**2 t)`` are negligible.

    Negligible means below ``series_tol`` relative to the first term (or
    absolutely, for the creep series itself, whose value is >= 1).
    """
    target = math.log(4.0 * (body.nu + 1.0) / body.series_tol) + 2.0
    j1 = max(body.order, 1.0)  # j_{mu,1} > mu
    j2 = j1 * j1 + target / t_min
    for _ in range(4):
        j2 = j1 * j1 + (target + power * math.log(j2 / (j1 * j1))) / t_min
    return int(math.sqrt(j2) / math.pi + 0.5 * body.order) + 2


def _series_sum(body: BesselBody, t: np.ndarray) -> np.ndarray:
    """``sum_n exp(-j_n**2 t)/j_n**2`` summed to tolerance for every ``t > 0``."""
    t_min = float(np.min(t))
    table = body.zero_table(_zeros_needed(body, t_min))
    j = table.zeros
    # geometric tail bound: beyond zero n the gaps exceed pi (order > 1/2)
    lead = np.exp(-(j**2) * t_min) / j**2
    q = np.exp(-2.0 * math.pi * j * t_min)
    bound = 4.0 * (body.nu + 1.0) * lead * (1.0 + q / (1.0 - q))
    ok = np.flatnonzero(bound <= body.series_tol)
    if ok.size == 0:
        raise ZeroCapExceededError(
            f"creep series at t={t_min:g} not converged with {table.count} zeros; use t < t_star branch"
        )
    n = int(ok[0]) + 1
    jj = j[:n]
    terms = np.exp(-np.outer(t, jj**2)) / jj**2
    # smallest terms first
    return np.sum(terms[:, ::-1], axis=1)


def creep_compliance(body: BesselBody, t):
    """Creep compliance ``J(t; nu)`` for scalar or array ``t >= 0``.

    ``J(0) = 1``: the exponential sum at ``t = 0`` is the Rayleigh value
    ``1/(4(nu+3))``. For ``0 < t < body.t_star`` the value comes from
    Talbot inversion of ``laplace_sJ(s)/s``.
    """
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(~np.isfinite(tt)) or np.any(tt < 0):
        raise DomainError("t must be finite and >= 0")
    nu = body.nu
    out = np.empty_like(tt)
    const = creep_constant_term(nu)
    rate = 4.0 * (nu + 1.0) * (nu + 2.0)

    zero = tt == 0
    out[zero] = const - 4.0 * (nu + 1.0) * rayleigh_closed_form(body.order, 2)

    short = (tt > 0) & (tt < body.t_star)
    for i in np.flatnonzero(short):
        out[i] = invert(lambda s: laplace_sJ(body, s) / s, float(tt[i]), body.inversion)

    long_ = tt >= body.t_star
    if np.any(long_):
        tl = tt[long_]
        out[long_] = const + rate * tl - 4.0 * (nu + 1.0) * _series_sum(body, tl)
    return float(out[0]) if scalar else out


def creep_derivative(body: BesselBody, t, order: int = 1):
    """``d^m J / dt^m`` for ``t > 0`` by termwise differentiation.

    For ``m >= 1`` this is ``4(nu+1)(nu+2) [m == 1]
    + (-1)**(m-1) 4(nu+1) sum_n j_n**(2m-2) exp(-j_n**2 t)``, with the sum
    accumulated in the log domain so tiny values do not underflow early.
    """
    m = int(order)
    if m < 1:
        raise DomainError("order must be >= 1")
    scalar = np.ndim(t) == 0
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(tt <= 0):
        raise DomainError("derivatives need t > 0")
    n = _zeros_needed(body, float(np.min(tt)), power=m - 1)
    j = body.zero_table(n).zeros[:n]
    logs = (2 * m - 2) * np.log(j)[None, :] - np.outer(tt, j**2)
    top = np.max(logs, axis=1, keepdims=True)
    log_sum = top[:, 0] + np.log(np.sum(np.exp(logs - top), axis=1))
    val = (-1.0) ** (m - 1) * np.exp(math.log(4.0 * (body.nu + 1.0)) + log_sum)
    if m == 1:
        val = val + 4.0 * (body.nu + 1.0) * (body.nu + 2.0)
    return float(val[0]) if scalar else val


def fm_half_creep(nu: float, t):
    """Creep compliance ``1 + 4(nu+1) sqrt(t/pi)`` of the order-1/2 fractional Maxwell law."""
    if nu <= -1:
        raise DomainError(f"nu must be > -1, got {nu!r}")
    tt = np.asarray(t, dtype=float)
    if np.any(tt < 0):
        raise DomainError("t must be >= 0")
    out = 1.0 + 4.0 * (nu + 1.0) * np.sqrt(tt / math.pi)
    return float(out) if np.ndim(t) == 0 else out


def short_time_gap(body: BesselBody, t):
    """``creep_compliance(t) - fm_half_creep(nu, t)`` for ``0 < t <= 1``."""
    tt = np.asarray(t, dtype=float)
    if np.any(tt <= 0) or np.any(tt > 1):
        raise DomainError("short_time_gap needs 0 < t <= 1")
    return creep_compliance(body, t) - fm_half_creep(body.nu, t)
