import cmath
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bessel_visco.entire import BesselOperatorPair
from bessel_visco.errors import DomainError, InsufficientDataError
from bessel_visco.fraccalc import caputo_laplace
from bessel_visco.identities import (
    SPolynomial,
    balanced_strain_jet,
    boundary_terms,
    boundary_terms_direct,
    delta,
    fractional_part,
    gated_bracket,
    heaviside,
    is_balanced,
    lemma3_sides,
    lemma4_sides,
    pair_balance_residual,
)

F = Fraction
rationals = st.fractions(min_value=-100, max_value=100, max_denominator=50)
ALPHAS = [F(1, 3), F(1, 2), F(1), F(3, 2), F(2), F(5, 2), F(7, 3)]


# ---------------------------------------------------------------- helpers


def test_heaviside_is_one_at_zero():
    assert (heaviside(-1), heaviside(0), heaviside(3)) == (0, 1, 1)


@pytest.mark.parametrize("a, frac, d", [(F(5, 2), F(1, 2), 1), (F(2), F(0), 0), (F(7, 3), F(1, 3), 1), (0.5, F(1, 2), 1)])
def test_fractional_part_and_delta(a, frac, d):
    assert fractional_part(a) == frac
    assert delta(a) == d


def test_spolynomial_drops_zeros_and_compares_exactly():
    a = SPolynomial({F(1, 2): F(1, 3), F(3, 2): 0})
    b = SPolynomial([(F(1, 2), F(1, 6)), (F(1, 2), F(1, 6))])
    assert a == b
    assert a.offset == F(1, 2)
    assert not (a - b)


def test_spolynomial_rejects_mixed_offsets():
    with pytest.raises(ValueError):
        SPolynomial({F(1, 2): 1, F(1): 1})


def test_spolynomial_evaluates_with_principal_branch():
    p = SPolynomial({F(1, 2): 2, F(-1, 2): 1})
    s = 1 + 1j
    assert p(s) == pytest.approx(2 * cmath.sqrt(s) + 1 / cmath.sqrt(s))


# ---------------------------------------------------------------- index reversal


def test_index_reversal_single_term():
    lhs, rhs = lemma3_sides([3], F(1, 2))
    assert lhs == rhs == SPolynomial({F(-1, 2): 3})


def test_index_reversal_integer_order():
    f0, f1 = F(2, 7), F(-5, 3)
    lhs, rhs = lemma3_sides([f0, f1], 2)
    assert lhs == rhs == SPolynomial({1: f0, 0: f1})


def test_index_reversal_five_halves():
    lhs, rhs = lemma3_sides([1, 2, 3], F(5, 2))
    assert lhs == SPolynomial({F(3, 2): 1, F(1, 2): 2, F(-1, 2): 3})
    assert rhs == lhs


@settings(max_examples=200, deadline=None)
@given(alpha=st.sampled_from(ALPHAS), jet=st.lists(rationals, min_size=8, max_size=8))
def test_index_reversal_is_exact(alpha, jet):
    lhs, rhs = lemma3_sides(jet, alpha)
    assert lhs == rhs


def test_index_reversal_needs_long_enough_jet():
    with pytest.raises(InsufficientDataError):
        lemma3_sides([1], F(3, 2))
    with pytest.raises(DomainError):
        lemma3_sides([1], 0)


# ---------------------------------------------------------------- double-sum rearrangement


def test_rearrangement_n1_m2_expansion():
    q0, q1 = F(2), F(-3, 5)
    b0, b1, b2 = F(1, 7), F(4), F(-2, 3)
    lhs, rhs = lemma4_sides([q0, q1], [b0, b1, b2], M=2, N=1)
    expected = SPolynomial({1: q0 * b1 + q1 * b2, 2: q0 * b0 + q1 * b1, 3: q1 * b0})
    assert lhs == expected
    assert rhs == expected


def test_rearrangement_with_zero_coefficients():
    lhs, rhs = lemma4_sides([0] * 4, [F(1)] * 8, M=5, N=3)
    assert not lhs and not rhs


@settings(max_examples=200, deadline=None)
@given(data=st.data(), N=st.integers(1, 12), M=st.integers(1, 8))
def test_rearrangement_is_exact(data, N, M):
    q = data.draw(st.lists(rationals, min_size=N + 1, max_size=N + 1))
    b = data.draw(st.lists(rationals, min_size=M + N, max_size=M + N))
    lhs, rhs = lemma4_sides(q, b, M, N)
    assert lhs == rhs


def test_rearrangement_largest_instance_seeded():
    rng = random.Random(20240601)
    q = [F(rng.randint(-99, 99), rng.randint(1, 30)) for _ in range(13)]
    b = [F(rng.randint(-99, 99), rng.randint(1, 30)) for _ in range(20)]
    lhs, rhs = lemma4_sides(q, b, M=8, N=12)
    # brute force: expand both sides into coefficient dictionaries independently
    brute_l: dict = {}
    for n in range(13):
        for r in range(1, 8 + n + 1):
            brute_l[r] = brute_l.get(r, 0) + q[n] * b[8 + n - r]
    brute_r = {}
    for k in range(1, 21):
        acc = 0
        for h in range(13):
            if 0 <= 8 + h - k and (k <= 8 or h >= k - 8):
                acc += q[h] * b[8 + h - k]
        brute_r[k] = acc
    assert lhs == SPolynomial(brute_l)
    assert rhs == SPolynomial(brute_r)
    assert lhs == rhs


def test_rearrangement_names_missing_index():
    with pytest.raises(InsufficientDataError, match="b_4"):
        lemma4_sides([1, 1, 1], [1, 1, 1, 1], M=3, N=2)


def test_gated_bracket_top_level_keeps_single_term():
    # k = M + N: only h = N survives and multiplies b_0
    assert gated_bracket([1, 2, 3], [5, 0, 0, 0, 0], M=2, k=4, N=2) == 15


# ---------------------------------------------------------------- boundary terms


def test_boundary_terms_zero_jet():
    pair = BesselOperatorPair(1.0)
    assert boundary_terms(pair, "Q", [0.0] * 10, 3, 2.0) == 0


def test_boundary_terms_nu0_q_unit_initial_strain():
    pair = BesselOperatorPair(0.0)
    jet = [1.0, 0.0, 0.0, 0.0]
    s = 2.0
    # only eps(0+) survives: sum_n q_n s^n
    oracle = sum(pair.raw_q(n) * s**n for n in range(3))
    assert boundary_terms(pair, "Q", jet, 2, s) == pytest.approx(oracle, rel=1e-14)
    assert boundary_terms_direct(pair, "Q", jet, 2, s) == pytest.approx(oracle, rel=1e-14)


def test_boundary_terms_nu1_p_unit_rate():
    pair = BesselOperatorPair(1.0)
    jet = [0.0, 1.0, 0.0, 0.0, 0.0]
    s = 1 + 1j
    # orders 1/2 + n; the rate f'(0+) enters once ceil(1/2 + n) >= 2
    oracle = sum(pair.raw_p(n) * s ** (n - 1.5) for n in range(1, 4))
    assert abs(boundary_terms(pair, "P", jet, 3, s) - oracle) <= 1e-14 * abs(oracle)
    assert abs(boundary_terms_direct(pair, "P", jet, 3, s) - oracle) <= 1e-14 * abs(oracle)


@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 2.5, 3.0])
@pytest.mark.parametrize("which", ["P", "Q"])
@pytest.mark.parametrize("N", [0, 2, 5, 10])
def test_rearranged_boundary_matches_direct_sum(nu, which, N):
    rng = random.Random(f"{nu}-{which}-{N}")
    pair = BesselOperatorPair(nu)
    length = pair.half_nu_ceil + N + 2
    for _ in range(5):
        jet = [rng.uniform(-2, 2) for _ in range(length)]
        s = complex(rng.uniform(0.2, 5), rng.uniform(-5, 5))
        a = boundary_terms(pair, which, jet, N, s)
        b = boundary_terms_direct(pair, which, jet, N, s)
        assert abs(a - b) <= 1e-10 * abs(b)


def test_boundary_terms_short_jet():
    with pytest.raises(InsufficientDataError):
        boundary_terms(BesselOperatorPair(2.5), "Q", [1.0, 2.0], 3, 1.0)


# ---------------------------------------------------------------- pair balance


def test_balance_of_zero_jets():
    pair = BesselOperatorPair(0.5)
    for k in range(1, 6):
        assert pair_balance_residual(pair, [0.0] * 8, [0.0] * 8, k, 3) == 0


def test_balance_top_level_has_only_strain_side():
    pair = BesselOperatorPair(0.0)
    N = 3
    sig = [1.0, 2.0, 3.0, 4.0, 5.0]
    eps = [0.7, 0.1, 0.2, 0.3, 0.4]
    # k = N + 1 closes both stress gates; the strain side keeps q_N eps(0+)
    r = pair_balance_residual(pair, sig, eps, N + 1, N)
    assert r == pytest.approx(-pair.raw_q(N) * 0.7, rel=1e-15)


def test_balance_solved_for_one_unknown_at_level_one():
    rng = random.Random(11)
    pair = BesselOperatorPair(0.0)
    N = 6
    c = pair.half_nu_ceil
    sig = [rng.uniform(-1, 1) for _ in range(c + N + 1)]
    eps = [rng.uniform(-1, 1) for _ in range(c + N + 2)]
    # level 1 strain bracket is sum_h q_h eps^(c+h); solve for eps^(c+N)
    stress = sum(pair.raw_p(h) * sig[c + h - 1] for h in range(1, N + 1))
    rest = sum(pair.raw_q(h) * eps[c + h] for h in range(N))
    eps[c + N] = (stress - rest) / pair.raw_q(N)
    assert abs(pair_balance_residual(pair, sig, eps, 1, N)) <= 1e-12


@pytest.mark.parametrize("nu", [0.0, 1.0, 2.5])
@pytest.mark.parametrize("N", [1, 3, 6])
def test_balanced_strain_jet_zeroes_every_level(nu, N):
    rng = random.Random(5)
    pair = BesselOperatorPair(nu)
    sig = [rng.uniform(-1, 1) for _ in range(pair.half_nu_ceil + N + 1)]
    eps = balanced_strain_jet(pair, sig, N)
    assert is_balanced(pair, sig, eps, N)
    for k in range(1, pair.half_nu_ceil + N + 2):
        assert abs(pair_balance_residual(pair, sig, eps, k, N)) <= 1e-12


def test_unbalanced_jets_are_detected():
    pair = BesselOperatorPair(1.0)
    sig = [1.0, 0.0, 0.0, 0.0, 0.0]
    assert not is_balanced(pair, sig, [1.0, 0.0, 0.0, 0.0, 0.0], 2)


def test_balance_rejects_level_zero():
    with pytest.raises(DomainError):
        pair_balance_residual(BesselOperatorPair(0.0), [1.0] * 5, [1.0] * 5, 0, 2)


def _poly_transform(jet):
    # L{sum_k jet_k t^k / k!}(s) = sum_k jet_k / s^(k+1)
    return lambda s: sum(v / s ** (k + 1) for k, v in enumerate(jet))


@pytest.mark.parametrize("nu", [1.0, 2.5])
@pytest.mark.parametrize("N", [2, 4])
@pytest.mark.parametrize("s", [0.7, 3.0, 2 + 1.5j])
def test_balance_turns_transformed_law_into_symbol_identity(nu, N, s):
    # With balanced jets, sum_n p_n L{D^(nu/2+n) sigma} - sum_n q_n L{D^(nu/2+n+1) eps}
    # equals P(s) sigma~ - Q(s) eps~: all initial data cancel.
    rng = random.Random(3)
    pair = BesselOperatorPair(nu)
    sig = [rng.uniform(-1, 1) for _ in range(pair.half_nu_ceil + N + 1)]
    eps = list(balanced_strain_jet(pair, sig, N).values)
    S, E = _poly_transform(sig), _poly_transform(eps)
    h = nu / 2
    lhs = sum(pair.raw_p(n) * caputo_laplace(S, sig, h + n, s) for n in range(N + 1))
    lhs -= sum(pair.raw_q(n) * caputo_laplace(E, eps, h + n + 1, s) for n in range(N + 1))
    sym = sum(pair.raw_p(n) * complex(s) ** (h + n) for n in range(N + 1)) * S(s)
    sym -= sum(pair.raw_q(n) * complex(s) ** (h + n + 1) for n in range(N + 1)) * E(s)
    scale = max(abs(sym), abs(sum(pair.raw_p(n) * complex(s) ** (h + n) for n in range(N + 1)) * S(s)))
    assert abs(lhs - sym) <= 1e-10 * scale
    assert boundary_terms(pair, "P", sig, N, s) == pytest.approx(boundary_terms(pair, "Q", eps, N, s), rel=1e-10)
