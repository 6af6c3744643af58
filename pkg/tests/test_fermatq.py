import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from heilbronn_lab import correlation, fermatq as fq
from heilbronn_lab.core_arith import PrimeContext, build_gamma
from heilbronn_lab.errors import CapExceeded, InvalidArgument

SMALL_PRIMES = [p for p in oracles.primes_upto(139) if p > 2]


def test_fermat_quotient_examples():
    assert fq.fermat_quotient(PrimeContext(5), 1) == 0
    assert fq.fermat_quotient(PrimeContext(5), 2) == 3
    assert fq.fermat_quotient(PrimeContext(1093), 2) == 0


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(SMALL_PRIMES + [1093, 3511]), st.integers(1, 10 ** 6))
def test_fermat_quotient_matches_oracle(p, n):
    if n % p:
        assert fq.fermat_quotient(PrimeContext(p), n) == oracles.fermat_q(p, n)


@pytest.mark.parametrize("p", [3, 5, 31, 1093])
def test_quotient_table(p):
    tab = fq.fermat_quotient_table(PrimeContext(p))
    assert tab.q[0] == -1
    assert [int(v) for v in tab.q[1:]] == [oracles.fermat_q(p, n) for n in range(1, p)]


def test_lp_examples():
    assert fq.compute_lp(PrimeContext(5)).l_p == 2
    assert fq.compute_lp(PrimeContext(1093)).l_p == 3
    assert fq.compute_lp(PrimeContext(3511)).l_p == 3
    for r in fq.lp_sweep(SMALL_PRIMES):
        assert r.l_p == oracles.lp(r.p) >= 2


def test_f_table_examples():
    t5 = fq.f_table(PrimeContext(5))
    assert list(t5.f_values) == [0, 0, 4, 3, 4]
    assert list(t5.F) == [2, 0, 0, 1, 2]
    assert list(fq.f_table(PrimeContext(3)).F) == [2, 1, 0]
    with pytest.raises(CapExceeded):
        fq.f_table(PrimeContext(7), cap=5)


@pytest.mark.parametrize("p", SMALL_PRIMES[:12])
def test_f_table_matches_oracle(p):
    t = fq.f_table(PrimeContext(p))
    assert list(t.f_values) == oracles.f_values(p)
    assert list(t.F) == oracles.F_counts(p)
    assert int(t.F.sum()) == p and t.F[0] >= 1


def _identity(p):
    ctx = PrimeContext(p)
    g = build_gamma(ctx)
    table = correlation.autocorrelation(g.elements, ctx.psq)
    rep = fq.verify_convolution_identity(ctx, g, table, fq.f_table(ctx), fq.fermat_quotient_table(ctx))
    return ctx, table, rep


def test_identity_p5_worked_example():
    ctx, table, rep = _identity(5)
    preds = fq.candidate_predictions(ctx, fq.f_table(ctx), fq.fermat_quotient_table(ctx))
    # x = 8 = 3 + 1*5
    assert table.counts[8] == 2
    assert preds["unshifted"][3 - 1, 1] == 2
    assert preds["literal"][3 - 1, 1] == 0
    assert rep.zero_value_ok and rep.a_zero_ok


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23])
def test_identity_against_brute_force_fibers(p):
    """Independent count: pairs (m1, m2) with m1^p - m2^p = x, grouped by fiber."""
    ctx, table, rep = _identity(p)
    n = p * p
    corr = oracles.correlation(oracles.gamma(p), n)
    fvals = oracles.f_values(p)
    big_f = oracles.F_counts(p)
    for a in range(1, p):
        qa = oracles.fermat_q(p, a)
        ainv = pow(a, p - 2, p)
        for b in range(p):
            arg = (qa - ainv * b) % p
            want = big_f[arg] - 2 * (arg == 0)
            assert corr[(a + b * p) % n] == want
    assert rep.holds("corrected")
    assert rep.mismatch_counts["corrected"] == 0
    assert rep.aggregate_ok and rep.aggregate_values == (p - 2,)
    assert fvals[0] == 0 and fvals[1] == 0


def test_literal_candidate_reported_as_finding():
    _, _, rep = _identity(13)
    tab = rep.match_table()
    assert set(tab) == set(fq.CANDIDATES)
    assert tab["literal"]["mismatches"] > 0
    assert tab["corrected"]["mismatches"] == 0
    assert all(v["matches"] + v["mismatches"] == 13 * 12 for v in tab.values())
    x, a, b, exp, got = rep.mismatches["literal"][0]
    assert x == a + b * 13 and exp != got


def test_top_fiber_ratio_examples():
    r = fq.hk_lemma_check(fq.f_table(PrimeContext(5)))
    assert math.isfinite(r.worst_ratio)
    # m = 1 uses the single largest fiber, F = 2
    assert 2 / 5 ** (2 / 3) == pytest.approx(0.684, abs=1e-3)
    assert r.worst_ratio >= 2 / 5 ** (2 / 3)
    p = 7
    full = 7 / (p ** (2 / 3) * p ** (2 / 3))
    assert full == pytest.approx(p ** (-1 / 3))


def test_u_table_examples():
    u3 = fq.u_table(PrimeContext(3))
    assert list(u3.u) == [1, 0, 2] and int((u3.u ** 2).sum()) == 5
    u5 = fq.u_table(PrimeContext(5))
    assert list(u5.u) == [1, 1, 0, 1, 2]
    prop = fq.proposition_check(u5, 36)
    assert prop.sum_u2 == 7
    assert prop.ratio == pytest.approx(7 / (5 ** 0.125 * 6))
    assert prop.ratio == pytest.approx(0.954, abs=1e-3)
    for p in SMALL_PRIMES:
        assert int(fq.u_table(PrimeContext(p)).u.sum()) == p


def test_character_sums():
    ctx = PrimeContext(5)
    assert fq.character_sums(ctx, 4) == (1, 1)
    assert fq.character_sums(ctx, 1) == (0, 0)
    with pytest.raises(InvalidArgument):
        fq.character_sums(ctx, 5)
    chi = fq.legendre_table(11)
    for a in range(11):
        assert chi[a] == (0 if a == 0 else (1 if pow(a, 5, 11) == 1 else -1))
