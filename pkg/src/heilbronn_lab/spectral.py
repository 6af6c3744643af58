"""Discrete Fourier analysis on Z/N.

Convention: ``f_hat(xi) = sum_x f(x) e(-xi x / N)`` with ``e(y) = exp(2 pi i y)``.

Three transform backends are available:

``bluestein``
    chirp-z reduction of an arbitrary-length DFT to a power-of-two
    circular convolution.  Length agnostic; memory ~ 4N complex values.
``fiber``
    one Cooley-Tukey step for N = m*m, writing x = a + b*m.  Runs m
    transforms of length m twice.  Cheap enough for N ~ 10^7.
``direct``
    O(N * |supp f|) summation with exact integer phase reduction, the
    reference path for the other two.

``auto`` picks ``bluestein`` up to ``BLUESTEIN_MAX`` and ``fiber`` above
that when N is a perfect square.
"""
import csv
import math
import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core_arith import is_invariant
from .errors import InvalidArgument, PreconditionViolation

BLUESTEIN_MAX = 1 << 20
BACKENDS = ("auto", "bluestein", "fiber", "direct")


@dataclass(frozen=True, eq=False)
class Spectrum:
    n: int
    amps: np.ndarray

    def __len__(self):
        return self.n

    def __getitem__(self, xi):
        return self.amps[xi]

    @property
    def abs(self):
        return np.abs(self.amps)

    def to_csv(self, path):
        write_spectrum_csv(path, self.amps)


def write_spectrum_csv(path, amps):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["xi", "re", "im", "abs"])
        for xi, z in enumerate(amps):
            w.writerow([xi, repr(float(z.real)), repr(float(z.imag)), repr(float(abs(z)))])


class _ChirpCache:
    """Per-length chirp tables; each length is initialized once under a lock."""

    def __init__(self, maxsize=2):
        self._lock = threading.Lock()
        self._tables = OrderedDict()
        self._maxsize = maxsize

    def get(self, n):
        with self._lock:
            if n in self._tables:
                self._tables.move_to_end(n)
                return self._tables[n]
            tables = self._build(n)
            self._tables[n] = tables
            while len(self._tables) > self._maxsize:
                self._tables.popitem(last=False)
            return tables

    @staticmethod
    def _build(n):
        m = 1 << (2 * n - 2).bit_length()
        k = np.arange(n, dtype=np.int64)
        # k^2 mod 2n in exact integers keeps the chirp phase accurate for large n
        k2 = (k * k) % (2 * n)
        chirp = np.exp(-1j * np.pi * k2.astype(np.float64) / n)
        filt = np.zeros(m, dtype=np.complex128)
        filt[:n] = np.conj(chirp)
        filt[m - n + 1:] = np.conj(chirp[1:][::-1])
        return m, chirp, np.fft.fft(filt)


_chirp_cache = _ChirpCache()


def _bluestein(x):
    n = len(x)
    if n == 1:
        return x.astype(np.complex128)
    m, chirp, filt_hat = _chirp_cache.get(n)
    buf = np.zeros(m, dtype=np.complex128)
    buf[:n] = x * chirp
    conv = np.fft.ifft(np.fft.fft(buf) * filt_hat)
    return conv[:n] * chirp


def _isqrt_exact(n):
    m = math.isqrt(n)
    return m if m * m == n else None


def _fiber(x):
    n = len(x)
    m = _isqrt_exact(n)
    if m is None:
        raise InvalidArgument(f"fiber backend needs a square length, got {n}")
    # x[a + b m] -> grid[a, b]
    grid = x.reshape(m, m).T
    inner = np.fft.fft(grid, axis=1)  # over b, frequency xi0
    a = np.arange(m, dtype=np.int64)
    twiddle = np.exp(-2j * np.pi * ((a[:, None] * a[None, :]) % n) / n)
    inner *= twiddle
    outer = np.fft.fft(inner, axis=0)  # over a, frequency xi1
    # result[xi0 + xi1 m] = outer[xi1, xi0]
    return outer.reshape(n)


def _direct(x):
    n = len(x)
    xs = np.flatnonzero(x)
    if xs.size == 0:
        return np.zeros(n, dtype=np.complex128)
    return kernels.direct_dft(xs, x[xs], n)


def _choose(n, backend):
    if backend not in BACKENDS:
        raise InvalidArgument(f"unknown backend {backend!r}")
    if backend != "auto":
        return backend
    if n > BLUESTEIN_MAX and _isqrt_exact(n) is not None:
        return "fiber"
    return "bluestein"


def transform(x, backend="auto"):
    """Forward DFT of a complex array (no input validation)."""
    x = np.asarray(x, dtype=np.complex128)
    kind = _choose(len(x), backend)
    if kind == "bluestein":
        return _bluestein(x)
    if kind == "fiber":
        return _fiber(x)
    return _direct(x)


def dft(f, backend="auto"):
    f = np.asarray(f)
    if f.ndim != 1 or f.size == 0:
        raise InvalidArgument("dft expects a nonempty 1-d array")
    if not np.all(np.isfinite(f)):
        raise InvalidArgument("input contains non-finite values")
    return Spectrum(len(f), transform(f, backend))


def idft(amps, backend="auto"):
    """Inverse transform: f(x) = (1/N) sum_xi amps(xi) e(xi x / N)."""
    amps = np.asarray(amps.amps if isinstance(amps, Spectrum) else amps, dtype=np.complex128)
    return np.conj(transform(np.conj(amps), backend)) / len(amps)


@dataclass(frozen=True)
class ParsevalResult:
    lhs: float
    rhs: float
    relative_error: float


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def parseval_check(f, backend="auto"):
    f = np.asarray(f)
    lhs = float(np.sum(np.abs(f) ** 2))
    amps = transform(f, backend)
    rhs = float(np.sum(np.abs(amps) ** 2) / len(f))
    return ParsevalResult(lhs, rhs, _rel(lhs, rhs))


def cyclic_convolution_direct(f, g):
    """(f*g)(x) = sum_y f(y) g(x - y), summed over the support of f."""
    f = np.asarray(f)
    g = np.asarray(g)
    out = np.zeros(len(f), dtype=np.result_type(f, g, np.float64))
    for y in np.flatnonzero(f):
        out += f[y] * np.roll(g, y)
    return out


def cyclic_correlation_direct(f, g):
    """(f o g)(x) = sum_y f(y) g(y + x), summed over the support of f."""
    f = np.asarray(f)
    g = np.asarray(g)
    out = np.zeros(len(f), dtype=np.result_type(f, g, np.float64))
    for y in np.flatnonzero(f):
        out += f[y] * np.roll(g, -y)
    return out


@dataclass(frozen=True)
class ConvolutionCheck:
    lhs: float
    rhs: float
    relative_error: float


def _max_rel(a, b):
    scale = max(float(np.max(np.abs(b))), 1.0)
    return float(np.max(np.abs(a - b))) / scale


def convolution_identity_check(f, g, backend="auto"):
    """Both sides of the L2 convolution identity and the transform rules.

    ``lhs = sum_y |(f*g)(y)|^2`` from a direct convolution,
    ``rhs = (1/N) sum_xi |f_hat|^2 |g_hat|^2``.  The returned error is the
    largest of that discrepancy and the pointwise errors of
    ``F(f*g) = f_hat g_hat`` and ``F(f o g) = conj(F(conj f)) g_hat``.
    """
    f = np.asarray(f)
    g = np.asarray(g)
    if len(f) != len(g):
        raise InvalidArgument("f and g must have the same length")
    n = len(f)
    fh = transform(f, backend)
    gh = transform(g, backend)
    conv = cyclic_convolution_direct(f, g)
    corr = cyclic_correlation_direct(f, g)
    lhs = float(np.sum(np.abs(conv) ** 2))
    rhs = float(np.sum(np.abs(fh) ** 2 * np.abs(gh) ** 2) / n)
    err_conv = _max_rel(transform(conv, backend), fh * gh)
    fch = np.conj(transform(np.conj(f), backend))
    err_corr = _max_rel(transform(corr, backend), fch * gh)
    return ConvolutionCheck(lhs, rhs, max(_rel(lhs, rhs), err_conv, err_corr))


@dataclass(frozen=True)
class FourierBoundReport:
    q_size: int
    max_nontrivial: float
    term1: float
    term2: float
    term3: float
    satisfied: tuple

    @property
    def bound(self):
        return min(self.term1, self.term2, self.term3)


def invariant_fourier_bound(q, gamma, e_gamma, e_q, backend="auto"):
    """Largest nontrivial coefficient of a Gamma-invariant set vs the three-term bound."""
    if not is_invariant(q, gamma):
        raise PreconditionViolation("Q is not Gamma-invariant")
    n = gamma.ctx.psq
    ind = np.zeros(n)
    ind[np.asarray(list(q) if not isinstance(q, np.ndarray) else q, dtype=np.int64)] = 1.0
    qs = int(ind.sum())
    amps = transform(ind, backend)
    mx = float(np.max(np.abs(amps[1:]))) if n > 1 else 0.0
    t = gamma.t
    term1 = (qs * n / t) ** 0.5
    term2 = qs ** 0.75 * n ** 0.25 * e_gamma ** 0.25 / t
    term3 = n ** 0.125 * e_gamma ** 0.125 * e_q ** 0.125 * (qs / t) ** 0.5
    # absolute slack for rounding in the transform
    tol = 1e-9 * max(1.0, qs)
    sat = tuple(mx <= term + tol for term in (term1, term2, term3))
    return FourierBoundReport(qs, mx, term1, term2, term3, sat)
