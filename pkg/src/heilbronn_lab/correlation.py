"""Correlation tables, additive energies and dyadic level sets.

``(A o A)(x) = |{y in A : y + x in A}|``.  Tables are dense int64 arrays of
length N; ``pairs`` enumerates differences exactly, ``fourier`` inverts
``|A_hat|^2`` and rounds, refusing results whose rounding residual
reaches 0.25.
"""
import csv
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels, spectral
from .errors import CapExceeded, InvalidArgument, NumericPrecisionError

log = logging.getLogger(__name__)

ROUNDING_ALARM = 0.25
DENSE_MAX_N = 3163 ** 2


def _residues(a, n):
    arr = np.asarray(a, dtype=np.int64).ravel()
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise InvalidArgument(f"set elements must lie in [0, {n})")
    return np.unique(arr)


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    n: int
    counts: np.ndarray
    size: int
    backend: str = "pairs"
    max_residual: float = 0.0

    def __getitem__(self, x):
        return int(self.counts[x])

    def support(self):
        return np.flatnonzero(self.counts)

    def sparse_items(self):
        x = self.support()
        return x, self.counts[x]

    @property
    def max_nonzero_shift(self):
        """max over x != 0 of counts[x] (0 if the table vanishes off 0)."""
        return int(self.counts[1:].max()) if self.n > 1 else 0

    @classmethod
    def from_sparse(cls, n, xs, vals, size, backend="cache"):
        counts = np.zeros(n, dtype=np.int64)
        counts[np.asarray(xs, dtype=np.int64)] = vals
        return cls(n, counts, size, backend)

    def to_csv(self, path, p, dense=False):
        xs = np.arange(self.n) if dense else self.support()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "a", "b", "count"])
            for x in xs:
                x = int(x)
                w.writerow([x, x % p, x // p, int(self.counts[x])])


def autocorrelation(a, n, backend="pairs", fft_backend="auto"):
    if n > DENSE_MAX_N:
        raise CapExceeded(f"dense tables are limited to N <= {DENSE_MAX_N}")
    arr = _residues(a, n)
    if backend == "pairs":
        counts = kernels.difference_counts(arr, arr, n)
        return CorrelationTable(n, counts, len(arr), "pairs")
    if backend == "fourier":
        ind = np.zeros(n)
        ind[arr] = 1.0
        amps = spectral.transform(ind, fft_backend)
        raw = spectral.idft(np.abs(amps) ** 2, fft_backend).real
        counts = np.rint(raw)
        resid = float(np.max(np.abs(raw - counts))) if n else 0.0
        if resid >= ROUNDING_ALARM:
            raise NumericPrecisionError(f"rounding residual {resid:.3g} >= {ROUNDING_ALARM}")
        return CorrelationTable(n, counts.astype(np.int64), len(arr), "fourier", resid)
    raise InvalidArgument(f"unknown backend {backend!r}")


def cross_correlation(a, b, n):
    """(A o B)(x) = |{y in A : y + x in B}|."""
    return kernels.difference_counts(_residues(a, n), _residues(b, n), n)


def sum_counts(a, b, n):
    """(A * B)(x) = |{(u, v) in A x B : u + v = x}|."""
    neg_a = (-_residues(a, n)) % n
    return kernels.difference_counts(neg_a, _residues(b, n), n)


def _table(a, n):
    return a if isinstance(a, CorrelationTable) else autocorrelation(a, n)


def _power_sum(values, weights, k):
    """sum weights[i] * values[i]**k, exact; int64 when provably safe."""
    values = np.asarray(values, dtype=np.int64)
    weights = np.asarray(weights, dtype=np.int64)
    if values.size == 0:
        return 0
    vmax = int(np.abs(values).max())
    bound = int(np.abs(weights).sum()) * vmax ** k
    if bound < 2 ** 63:
        return int(np.sum(weights * values ** k))
    log.debug("int64 accumulator would overflow (bound %d); using Python ints", bound)
    return sum(int(w) * int(v) ** k for v, w in zip(values, weights))


def energy(a, n=None):
    """Additive energy E(A) = sum_x (A o A)(x)^2."""
    tab = _table(a, n)
    return energy_k(tab, 2)


def energy_pair(a, b, n, cross_check=True, fft_backend="auto"):
    """E(A, B) = sum_x (A o A)(x) (B o B)(x), optionally checked against the Fourier form."""
    ta = autocorrelation(a, n)
    tb = autocorrelation(b, n)
    e = energy_k_pair(ta, tb, 2)
    if cross_check:
        ia = np.zeros(n)
        ia[_residues(a, n)] = 1.0
        ib = np.zeros(n)
        ib[_residues(b, n)] = 1.0
        ah = spectral.transform(ia, fft_backend)
        bh = spectral.transform(ib, fft_backend)
        ef = float(np.sum(np.abs(ah) ** 2 * np.abs(bh) ** 2) / n)
        if abs(ef - e) > 1e-6 * max(1, e):
            raise NumericPrecisionError(f"E(A,B) exact {e} vs Fourier {ef}")
    return e


def energy_k(table, k):
    """E_k(A) = sum_x (A o A)(x)^k."""
    if k < 2:
        raise InvalidArgument("k must be >= 2")
    # counts are bounded by |A|, so a histogram of the values is small
    hist = np.bincount(table.counts)
    vals = np.flatnonzero(hist[1:]) + 1
    return _power_sum(vals, hist[vals], k)


def energy_k_pair(table_a, table_b, k):
    """E_k(A, B) = sum_x (A o A)(x) (B o B)(x)^(k-1)."""
    if k < 2:
        raise InvalidArgument("k must be >= 2")
    nz = (table_a.counts > 0) & (table_b.counts > 0)
    ca = table_a.counts[nz]
    cb = table_b.counts[nz]
    return _power_sum(cb, ca, k - 1)


@dataclass(frozen=True)
class EnergyReport:
    size: int
    E: int
    K: Fraction
    E3: int
    moments: dict = field(default_factory=dict)


def energy_report(table, ls=(4, 5, 6)):
    e = energy_k(table, 2)
    return EnergyReport(
        size=table.size,
        E=e,
        K=Fraction(table.size ** 3, e),
        E3=energy_k(table, 3),
        moments={l: energy_k(table, l) for l in ls},
    )


def moment_bound_report(report):
    """Normalized energies: E/t^(5/2), E3/(t^3 log2 t), (E_l - t^l)/t^((2l+3)/3)."""
    t = report.size
    out = {
        "E_ratio": report.E / t ** 2.5,
        "E3_ratio": report.E3 / (t ** 3 * math.log2(t)) if t > 1 else math.inf,
    }
    for l, el in sorted(report.moments.items()):
        out[f"E{l}_ratio"] = float(el - t ** l) / t ** ((2 * l + 3) / 3)
    return out


def c3(mask, alpha, beta):
    """C_3(A)(alpha, beta) = sum_z A(z) A(z + alpha) A(z + beta)."""
    n = len(mask)
    z = np.flatnonzero(mask)
    return int(np.count_nonzero(mask[(z + alpha) % n] & mask[(z + beta) % n]))


def _bitlen(q):
    """Elementwise bit length; the shell of v is bitlen(top // v)."""
    out = np.zeros(q.shape, dtype=np.int64)
    v = q.copy()
    while np.any(v):
        nz = v > 0
        out[nz] += 1
        v >>= 1
    return out


@dataclass(frozen=True, eq=False)
class DyadicLevels:
    mode: str
    top: int
    levels: list
    t: int
    E: int
    K: float
    c: float
    c_prime: float
    l: int
    trivial_bounds: list = field(default_factory=list)

    def shell(self, j):
        for jj, d in self.levels:
            if jj == j:
                return d
        return np.zeros(0, dtype=np.int64)

    def union(self):
        if not self.levels:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate([d for _, d in self.levels]))


def dyadic_levels(table, mode="D", c_scale=1):
    """Partition the nonzero support of the table (x != 0) into dyadic shells.

    The per-prime constants are c = M/K and c' = M/t^(2/3), M being the
    largest nonzero-shift count, so the top threshold cK (or c' t^(2/3))
    equals c_scale * M.  Shells are labelled j = 1, 2, ...; ``l`` is
    floor(log2(2 c K^2 / t)).  In S mode, each shell also carries the two
    trivial size bounds as exact integer comparisons.
    """
    if mode not in ("D", "S"):
        raise InvalidArgument("mode must be 'D' or 'S'")
    if c_scale < 1 or int(c_scale) != c_scale:
        raise InvalidArgument("c_scale must be a positive integer")
    t = table.size
    e = energy_k(table, 2)
    k_frac = Fraction(t ** 3, e)
    m = table.max_nonzero_shift
    top = int(c_scale) * m
    c = Fraction(top) / k_frac
    c_prime = top / t ** (2 / 3)
    arg = 2 * c * k_frac ** 2 / t
    l = _floor_log2(arg) if arg > 0 else 0

    counts = table.counts.copy()
    counts[0] = 0
    xs = np.flatnonzero(counts)
    levels = []
    bounds = []
    if xs.size:
        js = _bitlen(top // counts[xs])
        for j in np.unique(js):
            shell = xs[js == j]
            levels.append((int(j), shell))
            if mode == "S":
                size = len(shell)
                # |S_i| c' t^(2/3) 2^-i <= t^2 and |S_i| (c' t^(2/3))^2 2^-2i <= E
                bounds.append({
                    "i": int(j),
                    "size": size,
                    "first": size * top <= t * t * 2 ** int(j),
                    "second": size * top * top <= e * 4 ** int(j),
                })
    return DyadicLevels(mode, top, levels, t, e, float(k_frac), float(c), c_prime, l, bounds)


def _floor_log2(x):
    x = Fraction(x)
    if x <= 0:
        raise InvalidArgument("log of nonpositive value")
    num, den = x.numerator, x.denominator
    j = num.bit_length() - den.bit_length()
    # adjust so 2^j <= x < 2^(j+1)
    while Fraction(2) ** j > x:
        j -= 1
    while Fraction(2) ** (j + 1) <= x:
        j += 1
    return j
