"""Exact checks of the initial-data bookkeeping for the Bessel operators.

The summation identities are combinatorial and are checked with
:class:`fractions.Fraction` coefficients and exponents. Floating point only
enters through the operator coefficients ``p_n``, ``q_n``, which contain
gamma functions of real argument.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Number, Rational
from typing import Iterable, Mapping, Sequence

from .entire import BesselOperatorPair, _which
from .errors import DomainError, InsufficientDataError
from .fraccalc import PowerJet

__all__ = [
    "SPolynomial",
    "heaviside",
    "fractional_part",
    "delta",
    "lemma3_sides",
    "lemma4_sides",
    "gated_bracket",
    "boundary_terms",
    "boundary_terms_direct",
    "pair_balance_residual",
    "is_balanced",
    "balanced_strain_jet",
]


def heaviside(x: int) -> int:
    """Integer-argument gate with ``heaviside(0) == 1``."""
    return 1 if x >= 0 else 0


def _exact(alpha) -> Fraction:
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, Rational):
        return Fraction(alpha)
    return Fraction(float(alpha))


def fractional_part(alpha) -> Fraction:
    a = _exact(alpha)
    return a - math.floor(a)


def delta(alpha) -> int:
    """0 for integer ``alpha``, 1 otherwise."""
    return 0 if _exact(alpha).denominator == 1 else 1


class SPolynomial:
    """Finite sum ``sum c_e s**e`` keyed by exact exponent.

    All exponents share one fractional offset. Zero coefficients are
    dropped, so two instances compare equal exactly when they are the same
    polynomial.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable[tuple] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, Number] = {}
        for e, c in items:
            e = _exact(e)
            acc[e] = acc.get(e, 0) + c
        self._terms = {e: c for e, c in sorted(acc.items()) if c != 0}
        offsets = {e - math.floor(e) for e in self._terms}
        if len(offsets) > 1:
            raise ValueError(f"exponents mix fractional offsets {sorted(offsets)}")

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def offset(self) -> Fraction | None:
        for e in self._terms:
            return e - math.floor(e)
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, SPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __add__(self, other: "SPolynomial") -> "SPolynomial":
        return SPolynomial(list(self._terms.items()) + list(other._terms.items()))

    def __sub__(self, other: "SPolynomial") -> "SPolynomial":
        return self + SPolynomial({e: -c for e, c in other._terms.items()})

    def shift(self, by) -> "SPolynomial":
        """Multiply by ``s**by``."""
        by = _exact(by)
        return SPolynomial({e + by: c for e, c in self._terms.items()})

    def __call__(self, s: complex) -> complex:
        ls = cmath.log(complex(s))
        return sum(complex(c) * cmath.exp(float(e) * ls) for e, c in self._terms.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        if not self._terms:
            return "SPolynomial(0)"
        body = " + ".join(f"({c})*s^({e})" for e, c in self._terms.items())
        return f"SPolynomial({body})"


def _as_jet(jet) -> PowerJet:
    return jet if isinstance(jet, PowerJet) else PowerJet(jet)


def lemma3_sides(jet: PowerJet | Sequence, alpha) -> tuple[SPolynomial, SPolynomial]:
    """Both sides of the index-reversal identity for the Caputo boundary sum.

    ``lhs = sum_{k=0}^{ceil(a)-1} f^(k) s**(a-k-1)`` and
    ``rhs = s**({a}-delta_a) * sum_{r=1}^{ceil(a)} f^(ceil(a)-r) s**(r-1)``,
    each expanded term by term independently.
    """
    a = _exact(alpha)
    if a <= 0:
        raise DomainError(f"alpha must be > 0, got {alpha!r}")
    jet = _as_jet(jet)
    n = math.ceil(a)
    jet.require(n)
    lhs = SPolynomial([(a - k - 1, jet[k]) for k in range(n)])
    inner = SPolynomial([(r - 1, jet[n - r]) for r in range(1, n + 1)])
    rhs = inner.shift(fractional_part(a) - delta(a))
    return lhs, rhs


def lemma4_sides(q: Sequence, b: Sequence, M: int, N: int) -> tuple[SPolynomial, SPolynomial]:
    """Both sides of the double-sum rearrangement.

    ``lhs = sum_{n=0}^N q_n sum_{r=1}^{M+n} s**r b_{M+n-r}``;
    ``rhs = sum_{k=1}^{N+M} s**k [H(M-k) sum_{h=0}^N q_h b_{M+h-k}
    + H(k-M-1) sum_{h=k-M}^N q_h b_{M+h-k}]`` with ``H(0) = 1``.
    """
    if M < 0 or N < 0:
        raise DomainError("M and N must be non-negative")
    if len(q) < N + 1:
        raise InsufficientDataError(f"q needs {N + 1} entries (q_0..q_{N}), got {len(q)}", required=N + 1)
    if len(b) < M + N:
        raise InsufficientDataError(
            f"missing b_{len(b)}: b needs {M + N} entries (b_0..b_{M + N - 1})", required=M + N
        )
    lhs_terms = []
    for n in range(N + 1):
        for r in range(1, M + n + 1):
            lhs_terms.append((r, q[n] * b[M + n - r]))
    rhs_terms = [(k, gated_bracket(q, b, M, k, N)) for k in range(1, N + M + 1)]
    return SPolynomial(lhs_terms), SPolynomial(rhs_terms)


def gated_bracket(c: Sequence, b: Sequence, M: int, k: int, N: int):
    """``H(M-k) sum_{h=0}^N c_h b_{M+h-k} + H(k-M-1) sum_{h=k-M}^N c_h b_{M+h-k}``."""
    total = 0
    if heaviside(M - k):
        for h in range(0, N + 1):
            total += c[h] * b[M + h - k]
    if heaviside(k - M - 1):
        for h in range(k - M, N + 1):
            total += c[h] * b[M + h - k]
    return total


# ---------------------------------------------------------------------------
# Boundary terms of the cut-off Bessel operators
# ---------------------------------------------------------------------------


def _operator_data(pair: BesselOperatorPair, which: str, N: int):
    """Coefficients, shift M and Caputo base order for P or Q."""
    c = pair.half_nu_ceil
    if _which(which) == "P":
        return [pair.raw_p(n) for n in range(N + 1)], c, Fraction(0)
    return [pair.raw_q(n) for n in range(N + 1)], c + 1, Fraction(1)


def _half_nu(pair: BesselOperatorPair) -> Fraction:
    return _exact(pair.nu) / 2


def boundary_terms(pair: BesselOperatorPair, which: str, jet: PowerJet | Sequence, N: int, s: complex) -> complex:
    """Subtracted initial-data part of the transform of a cut-off operator.

    Evaluates ``s**({nu/2} - delta_{nu/2}) / s * sum_k s**k [gated bracket]``
    with ``M = ceil(nu/2)`` for P and ``M = ceil(nu/2) + 1`` for Q.
    """
    coeffs, M, _ = _operator_data(pair, which, N)
    jet = _as_jet(jet)
    jet.require(M + N)
    h = _half_nu(pair)
    ls = cmath.log(complex(s))
    total = 0j
    for k in range(1, M + N + 1):
        total += gated_bracket(coeffs, jet.values, M, k, N) * cmath.exp(k * ls)
    return cmath.exp(float(fractional_part(h) - delta(h) - 1) * ls) * total


def boundary_terms_direct(pair: BesselOperatorPair, which: str, jet: PowerJet | Sequence, N: int, s: complex) -> complex:
    """Same quantity summed straight from the Caputo rule, before rearrangement.

    ``sum_n c_n sum_{k=0}^{ceil(a_n)-1} f^(k)(0+) s**(a_n-k-1)`` where
    ``a_n = nu/2 + n`` (P) or ``nu/2 + n + 1`` (Q).
    """
    coeffs, M, base = _operator_data(pair, which, N)
    jet = _as_jet(jet)
    jet.require(M + N)
    h = _half_nu(pair)
    ls = cmath.log(complex(s))
    total = 0j
    for n in range(N + 1):
        a = h + n + base
        for k in range(max(math.ceil(a), 0)):
            total += coeffs[n] * jet[k] * cmath.exp(float(a - k - 1) * ls)
    return total


def _balance_sides(pair, sigma_jet, eps_jet, k, N):
    c = pair.half_nu_ceil
    p = [pair.raw_p(n) for n in range(N + 1)]
    q = [pair.raw_q(n) for n in range(N + 1)]
    sj, ej = _as_jet(sigma_jet), _as_jet(eps_jet)
    # the largest derivative orders that any k >= 1 can reach
    sj.require(max(c + N - k + 1, 0), "stress jet")
    ej.require(c + N + 2 - k, "strain jet")
    lhs = gated_bracket(p, _padded(sj.values, c + N + 1), c, k, N)
    rhs = gated_bracket(q, _padded(ej.values, c + N + 2), c + 1, k, N)
    return lhs, rhs


def _padded(values: Sequence, length: int) -> list:
    # entries beyond the required length are never read for this k
    return list(values) + [0.0] * max(0, length - len(values))


def pair_balance_residual(
    pair: BesselOperatorPair,
    sigma_jet: PowerJet | Sequence,
    eps_jet: PowerJet | Sequence,
    k: int,
    N: int,
) -> float:
    """LHS - RHS of the level-``k`` initial-data balance, truncated at ``n = N``.

    LHS is the stress bracket with ``M = ceil(nu/2)`` and coefficients
    ``p_n``; RHS the strain bracket with ``M = ceil(nu/2) + 1`` and ``q_n``.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    lhs, rhs = _balance_sides(pair, sigma_jet, eps_jet, k, N)
    return lhs - rhs


def is_balanced(
    pair: BesselOperatorPair,
    sigma_jet,
    eps_jet,
    N: int,
    k_max: int | None = None,
    rtol: float = 1e-10,
) -> bool:
    """True when every level ``k = 1..k_max`` balances to ``rtol`` of the larger side."""
    if k_max is None:
        k_max = pair.half_nu_ceil + N + 1
    for k in range(1, k_max + 1):
        lhs, rhs = _balance_sides(pair, sigma_jet, eps_jet, k, N)
        scale = max(abs(lhs), abs(rhs))
        if abs(lhs - rhs) > rtol * scale:
            return False
    return True


def balanced_strain_jet(pair: BesselOperatorPair, sigma_jet: PowerJet | Sequence, N: int) -> PowerJet:
    """Strain jet ``eps^(0..c+N)`` that balances ``sigma_jet`` at every level.

    Level ``k = c+N+1`` involves only ``eps(0+)``, level ``c+N`` adds
    ``eps'(0+)``, and so on: the system is triangular and is solved from
    the top level down.
    """
    c = pair.half_nu_ceil
    q = [pair.raw_q(n) for n in range(N + 1)]
    p = [pair.raw_p(n) for n in range(N + 1)]
    sj = _padded(_as_jet(sigma_jet).values, c + N + 1)
    size = c + N + 1
    eps = [0.0] * size
    for j in range(size):
        k = c + N + 1 - j
        target = gated_bracket(p, sj, c, k, N)
        # strain bracket at level k uses eps^(c+1+n-k); eps^(j) pairs with q_N
        known = gated_bracket(q, eps + [0.0], c + 1, k, N)
        eps[j] = (target - known) / q[N]
    return PowerJet(eps)
