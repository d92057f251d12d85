"""Entire functions as coefficient sequences and infinite-order operators.

Coefficients are held as ``(sign, log|a_n|)`` pairs: the operator
coefficients below fall under the double-precision floor near ``n ~ 80``,
while the order/type fit needs them out to ``n ~ 1000``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import DomainError, InsufficientDataError, OrderEstimationError

__all__ = [
    "EntireSeries",
    "BesselOperatorPair",
    "OperatorResult",
    "OrderTypeEstimate",
    "apply_operator",
    "cutoff_coeffs",
    "estimate_order_type",
    "stirling_log_inverse_coeff",
]

Which = Literal["P", "Q"]


@dataclass(frozen=True)
class EntireSeries:
    """Power series ``sum a_n z**n`` stored densely from ``n = 0``.

    ``signs[n]`` is -1, 0 or +1; ``log_mags[n]`` is ``log|a_n|`` and is
    ignored (conventionally ``-inf``) wherever the sign is 0.
    """

    signs: np.ndarray = field(repr=False)
    log_mags: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.asarray(self.signs, dtype=np.int8).copy()
        lm = np.asarray(self.log_mags, dtype=float).copy()
        if s.shape != lm.shape or s.ndim != 1:
            raise ValueError("signs and log_mags must be 1-d arrays of equal length")
        if not np.all(np.isin(s, (-1, 0, 1))):
            raise ValueError("signs must be -1, 0 or +1")
        lm[s == 0] = -np.inf
        s.setflags(write=False)
        lm.setflags(write=False)
        object.__setattr__(self, "signs", s)
        object.__setattr__(self, "log_mags", lm)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[float]) -> "EntireSeries":
        c = np.asarray(coeffs, dtype=float)
        with np.errstate(divide="ignore"):
            return cls(np.sign(c).astype(np.int8), np.log(np.abs(c)))

    @classmethod
    def zeros(cls, length: int) -> "EntireSeries":
        return cls(np.zeros(length, dtype=np.int8), np.full(length, -np.inf))

    def __len__(self) -> int:
        return int(self.signs.size)

    @property
    def length(self) -> int:
        return len(self)

    def coefficient(self, n: int) -> float:
        if self.signs[n] == 0:
            return 0.0
        return float(self.signs[n]) * math.exp(self.log_mags[n])

    def coefficients(self) -> np.ndarray:
        """Coefficients as floats (underflow to 0 is expected for long series)."""
        with np.errstate(under="ignore"):
            return self.signs * np.exp(self.log_mags)

    def terms(self):
        """Iterate ``(n, sign, log_mag)`` triples."""
        for n in range(len(self)):
            yield n, int(self.signs[n]), float(self.log_mags[n])

    def evaluate(self, x: float) -> float:
        """Sum the stored terms at real ``x`` (log-shifted to avoid overflow)."""
        if x == 0:
            return self.coefficient(0) if len(self) else 0.0
        n = np.arange(len(self))
        mask = self.signs != 0
        logs = self.log_mags[mask] + n[mask] * math.log(abs(x))
        signs = self.signs[mask] * np.where((n[mask] % 2 == 1) & (x < 0), -1, 1)
        if logs.size == 0:
            return 0.0
        top = float(np.max(logs))
        return math.exp(top) * math.fsum(signs * np.exp(logs - top))


@dataclass(frozen=True)
class BesselOperatorPair:
    """Coefficients of the Bessel operators for material parameter ``nu``.

    ``raw_p(k) = 1 / (k! Gamma(nu+k+1) 4**(k + nu/2))`` and
    ``raw_q(k) = 1 / (k! Gamma(nu+k+3) 4**(k + 1 + nu/2))`` are the
    coefficients of the fractional-power operators. The regularized
    generating functions are ``reg_p(z) = sum z**k / (k! Gamma(nu+k+1) 4**k)``
    and ``reg_q(z) = sum z**(k+1) / (k! Gamma(nu+k+3) 4**(k+1))``.
    """

    nu: float

    def __post_init__(self):
        if not math.isfinite(self.nu) or self.nu <= -1:
            raise DomainError(f"nu must be > -1, got {self.nu!r}")

    @property
    def half_nu_ceil(self) -> int:
        return math.ceil(self.nu / 2)

    def log_raw_p(self, k: int) -> float:
        return -(math.lgamma(k + 1) + math.lgamma(self.nu + k + 1) + (k + self.nu / 2) * math.log(4.0))

    def log_raw_q(self, k: int) -> float:
        return -(math.lgamma(k + 1) + math.lgamma(self.nu + k + 3) + (k + 1 + self.nu / 2) * math.log(4.0))

    def raw_p(self, k: int) -> float:
        return math.exp(self.log_raw_p(k))

    def raw_q(self, k: int) -> float:
        return math.exp(self.log_raw_q(k))

    def reg_p(self, n_terms: int) -> EntireSeries:
        """First ``n_terms`` coefficients (powers 0..n_terms-1) of reg_p."""
        k = np.arange(n_terms, dtype=float)
        lg = np.array([math.lgamma(x + 1) + math.lgamma(self.nu + x + 1) for x in k])
        return EntireSeries(np.ones(n_terms, dtype=np.int8), -(lg + k * math.log(4.0)))

    def reg_q(self, n_terms: int) -> EntireSeries:
        """First ``n_terms`` coefficients (powers 0..n_terms-1) of reg_q; power 0 is zero."""
        signs = np.ones(n_terms, dtype=np.int8)
        logs = np.full(n_terms, -np.inf)
        if n_terms:
            signs[0] = 0
        for n in range(1, n_terms):
            k = n - 1
            logs[n] = -(math.lgamma(k + 1) + math.lgamma(self.nu + k + 3) + (k + 1) * math.log(4.0))
        return EntireSeries(signs, logs)

    def reg(self, which: Which, n_terms: int) -> EntireSeries:
        return self.reg_p(n_terms) if _which(which) == "P" else self.reg_q(n_terms)


def _which(which: str) -> str:
    w = str(which).upper()
    if w not in ("P", "Q"):
        raise DomainError(f"which must be 'P' or 'Q', got {which!r}")
    return w


# ---------------------------------------------------------------------------
# Operator application
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OperatorResult:
    series: EntireSeries
    converged: bool
    # |last increment| / |value| for every retained output coefficient
    last_increment: np.ndarray = field(repr=False)


def apply_operator(
    phi: EntireSeries,
    f: EntireSeries,
    truncation: int,
    out_length: int | None = None,
    *,
    rtol: float = 1e-14,
) -> OperatorResult:
    """Apply ``phi(D) = sum_{n<=truncation} a_n D**n`` to the series ``f``.

    The coefficient of ``t**m`` in the output is
    ``sum_n a_n b_{m+n} (m+n)!/m!``. The result is flagged converged when,
    for every retained ``m``, the ``n = truncation`` increment is at most
    ``rtol`` times the running value; this certifies observed numerical
    convergence only, not applicability in the analytic sense.
    """
    N = int(truncation)
    if N < 0:
        raise DomainError("truncation must be >= 0")
    if out_length is None:
        out_length = len(f) - N
    required = N + out_length
    if out_length < 1 or len(f) < required:
        raise InsufficientDataError(
            f"operand needs at least {max(required, N + 1)} coefficients, got {len(f)}",
            required=max(required, N + 1),
        )
    n = np.arange(N + 1)
    a_s = np.zeros(N + 1, dtype=np.int8)
    a_l = np.full(N + 1, -np.inf)
    k = min(N + 1, len(phi))
    a_s[:k] = phi.signs[:k]
    a_l[:k] = phi.log_mags[:k]

    out_s = np.zeros(out_length, dtype=np.int8)
    out_l = np.full(out_length, -np.inf)
    incr = np.zeros(out_length)
    for m in range(out_length):
        idx = m + n
        sg = a_s * f.signs[idx]
        live = sg != 0
        if not np.any(live):
            continue
        logs = np.full(N + 1, -np.inf)
        logs[live] = (
            a_l[live]
            + f.log_mags[idx][live]
            + np.array([math.lgamma(m + j + 1) for j in n[live]])
            - math.lgamma(m + 1)
        )
        top = float(np.max(logs[live]))
        scaled = np.where(live, sg * np.exp(logs - top), 0.0)
        total = math.fsum(scaled)
        if total != 0.0:
            out_s[m] = 1 if total > 0 else -1
            out_l[m] = top + math.log(abs(total))
            incr[m] = abs(scaled[-1]) / abs(total)
        else:
            incr[m] = 0.0 if scaled[-1] == 0 else math.inf
    return OperatorResult(EntireSeries(out_s, out_l), bool(np.all(incr <= rtol)), incr)


def cutoff_coeffs(pair: BesselOperatorPair, which: Which, N: int) -> EntireSeries:
    """Cut-off operator coefficients, exact in the log domain.

    For ``P`` these are the powers ``0..N`` of reg_p; for ``Q`` the ``N+1``
    terms ``z**1 .. z**(N+1)`` of reg_q (stored densely, so power 0 is a
    zero entry).
    """
    if N < 0:
        raise DomainError("N must be >= 0")
    if _which(which) == "P":
        return pair.reg_p(N + 1)
    return pair.reg_q(N + 2)


# ---------------------------------------------------------------------------
# Order and type
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderTypeEstimate:
    rho: float
    sigma: float
    residual: float
    fit_coefficients: tuple[float, float, float]
    residuals: np.ndarray = field(repr=False)
    # log(1/|a_n|) / (n log n) over the fit range, the raw liminf sequence
    ratios: np.ndarray = field(repr=False)
    n: np.ndarray = field(repr=False)


def estimate_order_type(f: EntireSeries, fit_range: tuple[int, int]) -> OrderTypeEstimate:
    """Estimate order and type of an entire function from its coefficients.

    ``log(1/|a_n|)`` is regressed on ``n log n``, ``n`` and ``log n`` over
    ``fit_range``; the ``n log n`` slope estimates ``1/rho``. The type
    comes from ``(e rho sigma)**(1/rho) = n**(1/rho) |a_n|**(1/n)`` at the
    top of the range using the fitted order.
    """
    n_lo, n_hi = (int(v) for v in fit_range)
    if n_lo < 2 or n_hi < 2 * n_lo:
        raise OrderEstimationError(f"fit range must satisfy 2 <= n_lo and n_hi >= 2*n_lo, got {fit_range}")
    if len(f) <= n_hi:
        raise InsufficientDataError(f"series needs {n_hi + 1} coefficients, got {len(f)}", required=n_hi + 1)
    n = np.arange(n_lo, n_hi + 1)
    signs = f.signs[n]
    if np.any(signs == 0):
        bad = int(n[np.flatnonzero(signs == 0)[0]])
        raise OrderEstimationError(f"coefficient a_{bad} is zero; the estimator needs nonzero coefficients")
    y = -f.log_mags[n]
    nf = n.astype(float)
    ln = np.log(nf)
    X = np.column_stack([nf * ln, nf, ln])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    inv_rho = float(coef[0])
    rho = 1.0 / inv_rho
    log_a_hi = -y[-1]
    sigma = math.exp(math.log(n_hi) + log_a_hi / (n_hi * inv_rho)) / (math.e * rho)
    return OrderTypeEstimate(
        rho=rho,
        sigma=sigma,
        residual=float(np.sqrt(np.mean(resid**2))),
        fit_coefficients=(float(coef[0]), float(coef[1]), float(coef[2])),
        residuals=resid,
        ratios=y / (nf * ln),
        n=n,
    )


def stirling_log_inverse_coeff(pair: BesselOperatorPair, which: Which, n: int) -> tuple[float, float]:
    """``(log(1/|a_n|), 2 n log n)`` for the regularized series.

    ``a_n`` is the coefficient of ``z**n``: ``1/(n! Gamma(nu+n+1) 4**n)``
    for P and ``1/((n-1)! Gamma(nu+n+2) 4**n)`` for Q.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if _which(which) == "P":
        exact = math.lgamma(n + 1) + math.lgamma(pair.nu + n + 1) + n * math.log(4.0)
    else:
        exact = math.lgamma(n) + math.lgamma(pair.nu + n + 2) + n * math.log(4.0)
    return exact, 2.0 * n * math.log(n)
