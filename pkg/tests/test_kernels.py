"""The numba and numpy kernel paths agree exactly (integers) or to rounding (floats)."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from heilbronn_lab import kernels
from heilbronn_lab.kernels import _numpy

IMPLS = [_numpy, kernels.numba_impl] if kernels.numba_impl is not None else [_numpy]


def _arrays(n, max_size=40):
    return st.lists(st.integers(0, n - 1), min_size=1, max_size=max_size).map(
        lambda xs: np.array(sorted(set(xs)), dtype=np.int64))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 10 ** 9), min_size=1, max_size=30),
       st.integers(0, 10 ** 6), st.integers(2, kernels.POWMOD_MAX_MODULUS))
def test_powmod(bases, e, m):
    b = np.array(bases, dtype=np.int64)
    want = [pow(x, e, m) for x in bases]
    for impl in IMPLS:
        assert list(impl.powmod_array(b, e, m)) == want


def test_powmod_overflow_guard():
    with pytest.raises(OverflowError):
        kernels.powmod_array(np.array([2]), 3, kernels.POWMOD_MAX_MODULUS + 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 200).flatmap(lambda n: st.tuples(st.just(n), _arrays(n), _arrays(n))))
def test_difference_counts(args):
    n, ys, zs = args
    want = np.zeros(n, dtype=np.int64)
    for y in ys:
        for z in zs:
            want[(z - y) % n] += 1
    for impl in IMPLS:
        assert np.array_equal(impl.difference_counts(ys, zs, n), want)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 60).flatmap(lambda n: st.tuples(st.just(n), _arrays(n))))
def test_direct_dft(args):
    n, xs = args
    f = [0.0] * n
    for x in xs:
        f[x] = 1.0
    want = np.array(oracles.dft(f, n))
    for impl in IMPLS:
        got = impl.direct_dft(xs, np.ones(len(xs)), n)
        assert np.max(np.abs(got - want)) < 1e-9


@pytest.mark.parametrize("p", [3, 5, 7, 31])
def test_horner_all(p):
    coeffs = np.arange(1, 6, dtype=np.int64)
    want = [sum(int(c) * x ** k for k, c in enumerate(coeffs)) % p for x in range(p)]
    for impl in IMPLS:
        assert list(impl.horner_all(coeffs, p)) == want


@pytest.mark.parametrize("p", [5, 7, 11])
def test_set_kernels(p):
    n = p * p
    g = np.array(oracles.gamma(p), dtype=np.int64)
    gmask = np.zeros(n, dtype=bool)
    gmask[g] = True
    corr = oracles.correlation(list(g), n)
    counts = np.array([corr[x] for x in range(n)], dtype=np.int64)
    rng = np.random.default_rng(p)
    d = np.unique(rng.integers(1, n, size=2 * p))
    dmask = np.zeros(n, dtype=bool)
    dmask[d] = True
    pts = np.arange(n)
    want_conv = [oracles.d_star_gamma(list(g), n, list(d), x) for x in pts]
    want_triple = oracles.triple_sum(list(g), n, list(d))
    want_block = [[oracles.c3(list(g), n, a, b) for b in d] for a in d]
    for impl in IMPLS:
        assert list(impl.conv_on_set(pts, dmask, g, n)) == want_conv
        assert impl.triple_sum_direct(g, dmask, counts, n) == want_triple
        assert np.array_equal(impl.c3_block(d, g, gmask, n), np.array(want_block))
        # c3_square_sum ranges over alpha = z' - z in D, z, z' in Gamma
        got = impl.c3_square_sum(g, dmask, gmask, n)
        ref = 0
        for z in g:
            alphas = [(zp - z) % n for zp in g if dmask[(zp - z) % n]]
            for zp in g:
                ref += sum(1 for a in alphas if gmask[(zp + a) % n]) ** 2
        assert got == ref


def test_active_backend_reports_choice():
    assert kernels.active_backend() in ("numba", "numpy")
