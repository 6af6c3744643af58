"""Heilbronn sums S(a) = sum_{n=1}^{p} e(a n^p / p^2) and related statistics.

The n = p term equals 1 (p^2 divides p^p), so S(a) = 1 + Gamma_hat(-a); the
full spectrum is computed that way and spot-checked against direct sums.
Phases are reduced modulo p^2 in integer arithmetic before any
trigonometric call.
"""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels, spectral
from .core_arith import build_gamma
from .errors import InvalidArgument, NumericPrecisionError, OutOfHypothesisWarning

EXPONENT_78 = 7 / 8
EXPONENT_5968 = 59 / 68
LOG_EXPONENT_5968 = 5 / 34


def _npower_phases(ctx, a, ns):
    """Exact (a * n^p) mod p^2 for an array of n."""
    n2 = ctx.psq
    ns = np.asarray(ns, dtype=np.int64)
    if n2 <= kernels.POWMOD_MAX_MODULUS:
        pw = kernels.powmod_array(ns, ctx.p, n2)
        return (pw * (int(a) % n2)) % n2
    return np.array([(int(a) * pow(int(n), ctx.p, n2)) % n2 for n in ns], dtype=np.int64)


def _phase_sum(phases, modulus):
    # np.sum is pairwise for contiguous float arrays
    ang = phases.astype(np.float64) * (2 * math.pi / modulus)
    return complex(np.sum(np.cos(ang)), np.sum(np.sin(ang)))


def heilbronn_sum(ctx, a):
    ns = np.arange(1, ctx.p + 1)
    return _phase_sum(_npower_phases(ctx, a, ns), ctx.psq)


@dataclass(frozen=True, eq=False)
class HeilbronnSpectrum:
    ctx: object
    values: np.ndarray
    max_nontrivial: float
    spot_error: float

    def __getitem__(self, a):
        return self.values[a]

    def to_csv(self, path):
        spectral.write_spectrum_csv(path, self.values)


def full_spectrum(ctx, gamma=None, backend="auto", spot_checks=100, seed=0, tol=1e-6):
    gamma = gamma if gamma is not None else build_gamma(ctx)
    n = ctx.psq
    amps = spectral.transform(gamma.indicator(), backend)
    values = 1.0 + amps[(-np.arange(n)) % n]
    values[0] = complex(ctx.p, 0.0)
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, n, size=min(spot_checks, n))
    err = 0.0
    for a in picks:
        err = max(err, abs(values[a] - heilbronn_sum(ctx, int(a))))
    if err > tol:
        raise NumericPrecisionError(f"spectrum spot check error {err:.3g} > {tol}")
    mag = np.abs(values).reshape(ctx.p, ctx.p)
    # drop a = 0 mod p, i.e. column 0 of the (b, a) layout
    mx = float(mag[:, 1:].max()) if ctx.p > 1 else 0.0
    return HeilbronnSpectrum(ctx, values, mx, err)


def incomplete_sum(ctx, a, start, length):
    """sum_{n=start}^{start+length} e(a n^p / p^2) (length + 1 terms)."""
    if start < 0 or length < 0:
        raise InvalidArgument("start and length must be nonnegative")
    if length > ctx.p:
        warnings.warn(f"length {length} > p = {ctx.p}: outside the N <= p hypothesis",
                      OutOfHypothesisWarning, stacklevel=2)
    ns = np.arange(start, start + length + 1)
    return _phase_sum(_npower_phases(ctx, a, ns), ctx.psq)


@dataclass(frozen=True)
class BoundRatios:
    p: int
    max_nontrivial: float
    ratio_78: float
    ratio_5968: float


def bound_ratio_report(spectrum):
    p = spectrum.ctx.p
    mx = spectrum.max_nontrivial
    r1 = mx / p ** EXPONENT_78
    r2 = mx / (p ** EXPONENT_5968 * math.log2(p) ** LOG_EXPONENT_5968)
    return BoundRatios(p, mx, r1, r2)


@dataclass(frozen=True)
class KernelCheck:
    p: int
    length: int
    total: float
    ratio_p: float
    ratio_p2: float


def interval_kernel_abs(ctx, length):
    """|P_hat(x)| for the interval of length+1 consecutive integers, all x mod p^2."""
    big = ctx.psq
    terms = length + 1
    x = np.arange(big, dtype=np.int64)
    # sin(pi m / P) has period 2P in m; reduce exactly first
    num_m = (terms * x) % (2 * big)
    num = np.abs(np.sin(np.pi * num_m / big))
    num[num_m % big == 0] = 0.0
    den = np.abs(np.sin(np.pi * x / big))
    out = np.empty(big)
    out[1:] = num[1:] / den[1:]
    out[0] = terms
    return out


def kernel_43_check(ctx, start, length):
    """sum_x |P_hat(x)|^(4/3) against p N^(1/3) and p^2 N^(1/3).

    |P_hat| does not depend on the interval's start, which is accepted only
    to mirror the interval it describes.
    """
    if start < 0 or length < 0:
        raise InvalidArgument("start and length must be nonnegative")
    total = float(np.sum(interval_kernel_abs(ctx, length) ** (4 / 3)))
    if length == 0:
        return KernelCheck(ctx.p, length, total, math.inf, math.inf)
    scale = length ** (1 / 3)
    return KernelCheck(ctx.p, length, total, total / (ctx.p * scale), total / (ctx.psq * scale))


@dataclass(frozen=True)
class ExponentFit:
    points: tuple
    slope: float
    intercept: float
    residual: float


def exponent_fit(points):
    """Least-squares line through (x, y) pairs; residual is the RMS deviation."""
    pts = tuple((float(x), float(y)) for x, y in points)
    if len(pts) < 3:
        raise InvalidArgument("need at least 3 points")
    x = np.array([q[0] for q in pts])
    y = np.array([q[1] for q in pts])
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx <= 1e-300 * len(x):
        raise InvalidArgument("abscissae are degenerate")
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return ExponentFit(pts, slope, intercept, resid)
