"""Special-function kernels.

Log-gamma, the modified Bessel function of the first kind from its
ascending series, the Bessel function of the first kind, and the positive
real zeros of the latter.

Branch convention: ``z**alpha`` is ``exp(alpha * log(z))`` with the
principal logarithm, so ``I_alpha`` carries the factor ``exp(+i*pi*alpha)``
on the negative real axis (approached from above or on it) and
``exp(-i*pi*alpha)`` below it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from numbers import Real

import mpmath
import numpy as np

from .errors import (
    DomainError,
    SeriesNonConvergenceError,
    ZeroAuditError,
    ZeroRefinementError,
)

__all__ = [
    "ZeroTable",
    "log_gamma",
    "log_bessel_I",
    "bessel_I_ratio",
    "bessel_I",
    "bessel_J",
    "bessel_J_zeros",
]

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_RESCALE = 1e-280
_LOG_RESCALE = math.log(_RESCALE)

# |z| at and above which complex arguments use the Hankel expansion; its
# truncation error there is below exp(-2|z|) ~ 1e-35.
ASYMPTOTIC_THRESHOLD = 40.0
SERIES_CAP = 1e4
MAX_ZEROS = 100_000


def log_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for ``x > 0``.

    Examples
    --------
    >>> log_gamma(1.0)
    0.0
    >>> round(log_gamma(0.5), 10)
    0.5723649429
    """
    if not isinstance(x, Real) or math.isnan(x) or x <= 0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    if 0.5 < x < 3.0:
        # ln Gamma vanishes at 1 and 2; relative accuracy there needs extra digits
        with mpmath.workdps(30):
            return float(mpmath.loggamma(mpmath.mpf(float(x))))
    return math.lgamma(x)


def _check_order(alpha: float, name: str = "alpha") -> None:
    if not isinstance(alpha, Real) or not math.isfinite(alpha) or alpha <= -1:
        raise DomainError(f"{name} must be a finite real > -1, got {alpha!r}")


# ---------------------------------------------------------------------------
# 0F1(; b; w) = sum_k w^k / (k! (b)_k), the common core of I and J.
# ---------------------------------------------------------------------------


def _log_hyp0f1_positive(b: float, w: float, tol: float, max_terms: int) -> float:
    """log 0F1(;b;w) for w >= 0; every term is positive so no cancellation.

    Terms are generated by their ratio and the accumulator is rescaled
    before it overflows, so only the logarithm ever leaves this function.
    """
    term = 1.0
    total = 1.0
    log_scale = 0.0
    k = 0
    while True:
        k += 1
        if k > max_terms:
            raise SeriesNonConvergenceError(
                f"0F1 series not converged after {max_terms} terms",
                partial_sum=math.exp(min(log_scale + math.log(total), 709.0)),
                terms_used=max_terms,
            )
        ratio = w / (k * (b + k - 1.0))
        term *= ratio
        total += term
        if total > 1e280:
            term *= _RESCALE
            total *= _RESCALE
            log_scale -= _LOG_RESCALE
        if ratio < 1.0 and term <= tol * total:
            return log_scale + math.log(total)


def _hyp0f1_extended(b: float, w: complex, extra_bits: int, max_terms: int):
    """0F1(;b;w) summed in extended precision (returns an mpmath number).

    Used wherever the alternating or rotating terms cancel: the working
    precision carries ``extra_bits`` guard bits above double.
    """
    prec = 53 + extra_bits
    with mpmath.workprec(prec):
        wm = mpmath.mpmathify(w)
        bm = mpmath.mpf(b)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        eps = mpmath.mpf(2) ** (-60)
        k = 0
        while True:
            k += 1
            if k > max_terms:
                raise SeriesNonConvergenceError(
                    f"0F1 series not converged after {max_terms} terms",
                    partial_sum=complex(total),
                    terms_used=max_terms,
                )
            ratio = wm / (k * (bm + k - 1))
            term = term * ratio
            total = total + term
            if abs(ratio) < 1 and abs(term) <= eps * abs(total):
                return total


# ---------------------------------------------------------------------------
# Modified Bessel function of the first kind
# ---------------------------------------------------------------------------


def _hankel_sums(alpha: float, z: complex) -> tuple[complex, complex]:
    """Return (sum (-1)^k a_k z^-k, sum a_k z^-k) for the Hankel expansion."""
    mu = 4.0 * alpha * alpha
    term = 1.0 + 0j
    alt = 1.0 + 0j
    plain = 1.0 + 0j
    prev = math.inf
    for k in range(1, 200):
        term = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * z)
        size = abs(term)
        if size == 0.0:
            break
        if size > prev:
            # asymptotic series started diverging; the smallest term is the error
            break
        alt += term if k % 2 == 0 else -term
        plain += term
        if size < 1e-17 * abs(plain):
            break
        prev = size
    return alt, plain


def _log_bessel_I_hankel(alpha: float, z: complex, real_axis: bool) -> complex:
    alt, plain = _hankel_sums(alpha, z)
    base = z - 0.5 * cmath.log(2.0 * math.pi * z)
    if real_axis:
        return base + cmath.log(alt)
    sign = 1.0 if z.imag >= 0 else -1.0
    c = sign * 1j * cmath.exp(sign * 1j * math.pi * alpha)
    return base + cmath.log(alt + c * cmath.exp(-2.0 * z) * plain)


def log_bessel_I(
    alpha: float,
    z: complex,
    *,
    series_cap: float = SERIES_CAP,
    asymptotic_threshold: float = ASYMPTOTIC_THRESHOLD,
    tol: float = 1e-16,
    max_terms: int = 1_000_000,
) -> complex:
    """Principal logarithm of ``I_alpha(z)``.

    Real arguments use the ascending series with a rescaled accumulator up
    to ``series_cap`` and the Hankel expansion beyond it. Complex
    arguments off the real axis are summed in extended precision (their
    terms rotate and cancel) until ``|z|`` reaches ``asymptotic_threshold``,
    after which the two-exponential Hankel form is used.
    """
    _check_order(alpha)
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"z must be finite, got {z!r}")
    if z == 0:
        if alpha == 0:
            return 0j
        return complex(-math.inf if alpha > 0 else math.inf, 0.0)

    phase = 0.0
    if z.real < 0:
        # I_a(-w) = exp(+-i pi a) I_a(w) under the principal branch
        phase = math.pi * alpha if z.imag >= 0 else -math.pi * alpha
        z = -z
        if z.imag == 0:
            z = complex(z.real, 0.0)

    real_axis = z.imag == 0.0
    r = abs(z)
    if real_axis:
        x = z.real
        if x > series_cap:
            out = _log_bessel_I_hankel(alpha, complex(x), True)
        else:
            log_pref = alpha * math.log(0.5 * x) - math.lgamma(alpha + 1.0)
            out = complex(log_pref + _log_hyp0f1_positive(alpha + 1.0, 0.25 * x * x, tol, max_terms))
    elif r >= asymptotic_threshold:
        out = _log_bessel_I_hankel(alpha, z, False)
    else:
        loss = r - z.real
        extra = int(math.ceil(loss / math.log(2.0))) + 16
        s = _hyp0f1_extended(alpha + 1.0, 0.25 * z * z, extra, max_terms)
        log_pref = alpha * cmath.log(0.5 * z) - math.lgamma(alpha + 1.0)
        out = log_pref + complex(mpmath.log(s))
    return out + 1j * phase


def bessel_I_ratio(a: float, b: float, z: complex) -> complex:
    """``I_a(z) / I_b(z)`` without forming either function.

    For large ``|z|`` the common factor ``exp(z) / sqrt(2 pi z)`` of the two
    Hankel expansions cancels analytically; subtracting two logarithms of
    size ``|z|`` would instead cost ``|z| * eps`` in relative accuracy.
    """
    _check_order(a, "a")
    _check_order(b, "b")
    z = complex(z)
    w = -z if z.real < 0 else z
    if abs(w) < max(ASYMPTOTIC_THRESHOLD, a * a, b * b):
        return cmath.exp(log_bessel_I(a, z) - log_bessel_I(b, z))
    alt_a, plain_a = _hankel_sums(a, w)
    alt_b, plain_b = _hankel_sums(b, w)
    if w.imag == 0.0:
        ratio = alt_a / alt_b
    else:
        sign = 1.0 if w.imag >= 0 else -1.0
        e = cmath.exp(-2.0 * w)
        ca = sign * 1j * cmath.exp(sign * 1j * math.pi * a)
        cb = sign * 1j * cmath.exp(sign * 1j * math.pi * b)
        ratio = (alt_a + ca * e * plain_a) / (alt_b + cb * e * plain_b)
    if z.real < 0:
        ratio *= cmath.exp((1j if z.imag >= 0 else -1j) * math.pi * (a - b))
    return ratio


def bessel_I(alpha: float, z: complex, **kwargs) -> complex | float:
    """Modified Bessel function of the first kind ``I_alpha(z)``.

    Sum of ``(z/2)**(2k+alpha) / (k! Gamma(alpha+k+1))`` over ``k >= 0``.
    Returns a float for real ``z >= 0`` and a complex number otherwise.
    Values that overflow double precision come back as ``inf``; use
    :func:`log_bessel_I` to stay in the log domain.

    Raises
    ------
    DomainError
        If ``alpha <= -1`` or ``z`` is not finite.
    SeriesNonConvergenceError
        If the series needs more than ``max_terms`` terms; the exception
        carries the partial sum.
    """
    real_input = isinstance(z, Real) and not isinstance(z, bool)
    lg = log_bessel_I(alpha, z, **kwargs)
    if real_input and z >= 0:
        if lg.real > 709.78:
            return math.inf
        return math.exp(lg.real)
    if lg.real > 709.78:
        return complex(math.inf, math.inf)
    return cmath.exp(lg)


# ---------------------------------------------------------------------------
# Bessel function of the first kind
# ---------------------------------------------------------------------------


def _series_limit(nu: float) -> float:
    """Largest x evaluated by the ascending series for order nu."""
    return 25.0 + nu * nu


def _bessel_J_series(nu: float, x: float) -> float:
    extra = int(math.ceil(x / math.log(2.0))) + 16
    s = _hyp0f1_extended(nu + 1.0, -0.25 * x * x, extra, 100_000)
    log_pref = nu * math.log(0.5 * x) - math.lgamma(nu + 1.0)
    if log_pref < -745.0:
        return 0.0
    return float(s) * math.exp(log_pref)


def _bessel_J_hankel(nu: float, x: np.ndarray) -> np.ndarray:
    """Hankel asymptotic expansion of J_nu for large x (vectorised)."""
    x = np.asarray(x, dtype=float)
    mu = 4.0 * nu * nu
    term = np.ones_like(x)
    p = np.ones_like(x)
    q = np.zeros_like(x)
    for k in range(1, 120):
        term = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * x)
        if k % 4 == 1:
            q += term
        elif k % 4 == 2:
            p -= term
        elif k % 4 == 3:
            q -= term
        else:
            p += term
        if np.max(np.abs(term), initial=0.0) < 1e-18:
            break
    phi = (0.5 * nu + 0.25) * math.pi
    cphi, sphi = math.cos(phi), math.sin(phi)
    cx, sx = np.cos(x), np.sin(x)
    # cos(x - phi) and sin(x - phi) without forming x - phi
    cw = cx * cphi + sx * sphi
    sw = sx * cphi - cx * sphi
    return np.sqrt(2.0 / (math.pi * x)) * (p * cw - q * sw)


def bessel_J(nu: float, x: float) -> float:
    """Bessel function of the first kind ``J_nu(x)`` for ``x >= 0``.

    The ascending series is summed in extended precision for
    ``x <= 25 + nu**2``; larger arguments use the Hankel expansion.
    Absolute error is below 1e-12 on ``[0, 200]`` for moderate orders.
    """
    _check_order(nu, "nu")
    if not isinstance(x, Real) or math.isnan(x) or x < 0:
        raise DomainError(f"bessel_J requires x >= 0, got {x!r}")
    x = float(x)
    if x == 0.0:
        if nu == 0:
            return 1.0
        return 0.0 if nu > 0 else math.inf
    if x <= _series_limit(nu):
        return _bessel_J_series(nu, x)
    return float(_bessel_J_hankel(nu, np.array([x]))[0])


def _bessel_J_vec(nu: float, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x <= _series_limit(nu)
    for i in np.flatnonzero(small):
        out[i] = bessel_J(nu, float(x[i]))
    if np.any(~small):
        out[~small] = _bessel_J_hankel(nu, x[~small])
    return out


# ---------------------------------------------------------------------------
# Zeros
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroTable:
    """First ``count`` positive zeros of ``J_order``, strictly increasing."""

    order: float
    zeros: np.ndarray = field(repr=False)

    def __post_init__(self):
        z = np.array(self.zeros, dtype=float)
        if z.ndim != 1:
            raise ValueError("zeros must be one-dimensional")
        if z.size and (z[0] <= 0 or np.any(np.diff(z) <= 0)):
            raise ValueError("zeros must be positive and strictly increasing")
        z.setflags(write=False)
        object.__setattr__(self, "zeros", z)

    @property
    def count(self) -> int:
        return int(self.zeros.size)

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, item):
        return self.zeros[item]


def _refine(nu: float, a: float, b: float, fa: float, fb: float, index: int) -> float:
    """Safeguarded Newton on a sign-change bracket [a, b]."""
    x = 0.5 * (a + b)
    for _ in range(200):
        fx = bessel_J(nu, x)
        if fx == 0.0:
            return x
        if (fx > 0) == (fa > 0):
            a, fa = x, fx
        else:
            b = x
        dfx = (nu / x) * fx - bessel_J(nu + 1.0, x)
        step_ok = dfx != 0.0
        if step_ok:
            xn = x - fx / dfx
            step_ok = a < xn < b
        if not step_ok:
            xn = 0.5 * (a + b)
        if abs(xn - x) <= 4e-16 * xn or b - a <= 4e-16 * x:
            return xn
        x = xn
    raise ZeroRefinementError(f"zero number {index} of J_{nu} did not converge", index)


def _mcmahon(nu: float, n: np.ndarray) -> np.ndarray:
    beta = (n + 0.5 * nu - 0.25) * math.pi
    mu = 4.0 * nu * nu
    e = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / e
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e**3)
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * e**5)
    )


def bessel_J_zeros(nu: float, n_max: int, *, audit: bool = True) -> ZeroTable:
    """First ``n_max`` positive zeros of ``J_nu``.

    Zeros below the series limit are found by a sign-change scan with
    step 0.2 (consecutive zeros are never that close); the rest start from
    McMahon's expansion, are bracketed by +-pi/2 and polished by Newton,
    falling back to bisection when Newton leaves the bracket. Every zero
    satisfies ``|J_nu(j)| <= 1e-12``.

    Raises
    ------
    ZeroRefinementError
        Names the index ``n`` whose refinement failed.
    ZeroAuditError
        If the sign-change audit finds a skipped or duplicated zero.
    """
    _check_order(nu, "nu")
    if int(n_max) != n_max or n_max < 1:
        raise DomainError(f"n_max must be an integer >= 1, got {n_max!r}")
    n_max = int(n_max)
    if n_max > MAX_ZEROS:
        raise DomainError(f"n_max must be <= {MAX_ZEROS}, got {n_max}")

    limit = _series_limit(nu)
    found: list[float] = []
    h = 0.2
    a = h
    fa = bessel_J(nu, a)
    while a < limit and len(found) < n_max:
        b = a + h
        fb = bessel_J(nu, b)
        if fa == 0.0:
            found.append(a)
        elif (fa > 0) != (fb > 0):
            found.append(_refine(nu, a, b, fa, fb, len(found) + 1))
        a, fa = b, fb
    n_low = len(found)

    zeros = np.array(found, dtype=float)
    if n_low < n_max:
        idx = np.arange(n_low + 1, n_max + 1, dtype=float)
        guess = _mcmahon(nu, idx)
        lo = guess - 0.5 * math.pi
        hi = guess + 0.5 * math.pi
        flo = _bessel_J_hankel(nu, lo)
        fhi = _bessel_J_hankel(nu, hi)
        bracketed = np.sign(flo) != np.sign(fhi)
        x = guess.copy()
        for _ in range(8):
            f = _bessel_J_hankel(nu, x)
            df = (nu / x) * f - _bessel_J_hankel(nu + 1.0, x)
            x = x - f / df
        f = _bessel_J_hankel(nu, x)
        ok = bracketed & (x > lo) & (x < hi) & (np.abs(f) <= 1e-13)
        for i in np.flatnonzero(~ok):
            n = int(idx[i])
            if not bracketed[i]:
                raise ZeroRefinementError(f"no sign change bracketing zero number {n} of J_{nu}", n)
            x[i] = _refine(nu, float(lo[i]), float(hi[i]), float(flo[i]), float(fhi[i]), n)
        zeros = np.concatenate([zeros, x])

    check = _bessel_J_vec(nu, zeros)
    bad = np.flatnonzero(np.abs(check) > 1e-12)
    if bad.size:
        n = int(bad[0]) + 1
        raise ZeroRefinementError(f"|J_{nu}(j_{n})| = {abs(check[bad[0]]):.3g} exceeds 1e-12", n)
    if audit:
        _audit_zeros(nu, zeros, n_low)
    return ZeroTable(float(nu), zeros)


def _audit_zeros(nu: float, zeros: np.ndarray, n_low: int) -> None:
    if zeros.size == 0:
        return
    if zeros[0] <= 0 or np.any(np.diff(zeros) <= 0):
        raise ZeroAuditError(f"zeros of J_{nu} are not strictly increasing")
    if zeros.size < 2:
        return
    mids = 0.5 * (zeros[:-1] + zeros[1:])
    signs = np.sign(_bessel_J_vec(nu, mids))
    expected = np.where(np.arange(1, mids.size + 1) % 2 == 1, -1.0, 1.0)
    wrong = np.flatnonzero(signs != expected)
    if wrong.size:
        n = int(wrong[0]) + 1
        raise ZeroAuditError(f"sign pattern broken between zeros {n} and {n + 1} of J_{nu}")
    # beyond the scanned range consecutive zeros sit about pi apart
    gaps = np.diff(zeros[max(n_low - 1, 0):])
    if gaps.size and np.any(np.abs(gaps - math.pi) > 0.5):
        n = int(np.flatnonzero(np.abs(gaps - math.pi) > 0.5)[0]) + max(n_low, 1)
        raise ZeroAuditError(f"gap after zero {n} of J_{nu} is far from pi; a zero may be skipped")
