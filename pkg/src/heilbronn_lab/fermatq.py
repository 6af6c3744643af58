"""Fermat quotients, the polynomial f(x) = sum_{k<p} x^k / k over Z_p, and the
identities tying them to the correlation table of Gamma.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core_arith import PrimeContext, pow_mod
from .errors import CapExceeded, InvalidArgument, InvariantViolation

LP_EXPONENT = 7829 / 4284
F_TABLE_CAP = 5000
EPSILONS = (0.0, 0.05, 0.1)


def fermat_quotient(ctx, n):
    p = ctx.p
    if int(n) % p == 0:
        raise InvalidArgument(f"q(n) undefined for n divisible by p = {p}")
    r = pow_mod(n, p - 1, ctx.psq) - 1
    if r % p:
        raise InvariantViolation(f"{n}^(p-1) - 1 not divisible by p = {p}")
    return (r // p) % p


def _powers_mod_psq(ctx, bases, exp):
    if ctx.psq <= kernels.POWMOD_MAX_MODULUS:
        return kernels.powmod_array(bases, exp, ctx.psq)
    return np.array([pow(int(b), exp, ctx.psq) for b in bases], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class FermatQuotientTable:
    p: int
    q: np.ndarray  # q[n] for n in [0, p); q[0] is unused and set to -1

    def __getitem__(self, n):
        return int(self.q[n])


def fermat_quotient_table(ctx):
    p = ctx.p
    n = np.arange(1, p, dtype=np.int64)
    r = (_powers_mod_psq(ctx, n, p - 1) - 1) % ctx.psq
    if np.any(r % p):
        raise InvariantViolation("Fermat's little theorem violated; arithmetic bug")
    q = np.full(p, -1, dtype=np.int64)
    q[1:] = (r // p) % p
    return FermatQuotientTable(p, q)


@dataclass(frozen=True)
class LpResult:
    p: int
    l_p: int
    envelope: float


def compute_lp(ctx):
    """Smallest n >= 1 with q(n) != 0 mod p, with (log2 p)^(7829/4284) for comparison."""
    n = 1
    while pow(n, ctx.p - 1, ctx.psq) == 1:
        n += 1
    return LpResult(ctx.p, n, math.log2(ctx.p) ** LP_EXPONENT)


def inverse_table(p):
    """inv[k] = k^-1 mod p for k in [1, p); inv[0] = 0."""
    inv = np.zeros(p, dtype=np.int64)
    inv[1:] = kernels.powmod_array(np.arange(1, p), p - 2, p)
    return inv


@dataclass(frozen=True, eq=False)
class FCountTable:
    p: int
    f_values: np.ndarray
    F: np.ndarray


def f_table(ctx, cap=F_TABLE_CAP):
    p = ctx.p
    if p > cap:
        raise CapExceeded(f"f table limited to p <= {cap}")
    coeffs = inverse_table(p)  # coefficient of x^k is 1/k, constant term 0
    vals = kernels.horner_all(coeffs, p)
    counts = np.bincount(vals, minlength=p).astype(np.int64)
    return FCountTable(p, vals, counts)


CANDIDATES = ("literal", "unshifted", "corrected")


@dataclass
class IdentityReport:
    p: int
    zero_value_ok: bool
    a_zero_ok: bool
    mismatch_counts: dict = field(default_factory=dict)
    # candidate -> first few (x, a, b, expected, got)
    mismatches: dict = field(default_factory=dict)
    aggregate_ok: bool = True
    aggregate_values: tuple = ()

    def holds(self, candidate="corrected"):
        return self.zero_value_ok and self.a_zero_ok and self.mismatch_counts[candidate] == 0

    def match_table(self):
        total = self.p * (self.p - 1)
        return {c: {"mismatches": m, "matches": total - m} for c, m in self.mismatch_counts.items()}


def candidate_predictions(ctx, f_tab, q_tab):
    """Predicted (Gamma o Gamma)(a + b p) on the grid a in [1, p), b in [0, p).

    literal    F(a q(a) - b)
    unshifted  F(q(a) - b/a)
    corrected  F(q(a) - b/a) - 2 [q(a) - b/a == 0]

    The correction removes v = 0 and v = 1 from the fiber count, the two
    roots of f(v) = 0 that would need m1 = 0 or m2 = 0.
    """
    p = ctx.p
    a = np.arange(1, p, dtype=np.int64)[:, None]
    b = np.arange(p, dtype=np.int64)[None, :]
    qa = q_tab.q[1:][:, None]
    inv = inverse_table(p)[1:][:, None]
    lit = (a * qa - b) % p
    arg = (qa - inv * b) % p
    F = f_tab.F
    return {
        "literal": F[lit],
        "unshifted": F[arg],
        "corrected": F[arg] - 2 * (arg == 0),
    }


def verify_convolution_identity(ctx, gamma, table, f_tab, q_tab, max_listed=50):
    p = ctx.p
    grid = table.counts.reshape(p, p).T  # grid[a, b] = counts[a + b p]
    zero_ok = int(grid[0, 0]) == gamma.t
    a_zero_ok = not np.any(grid[0, 1:])
    preds = candidate_predictions(ctx, f_tab, q_tab)
    got = grid[1:]
    counts, rows = {}, {}
    for name in CANDIDATES:
        bad_a, bad_b = np.nonzero(preds[name] != got)
        counts[name] = len(bad_a)
        rows[name] = [
            (int(ai) + 1 + int(bi) * p, int(ai) + 1, int(bi), int(preds[name][ai, bi]), int(got[ai, bi]))
            for ai, bi in zip(bad_a[:max_listed], bad_b[:max_listed])
        ]
    # fiber a != 0 receives the p - 2 pairs (m1, m2) with m1 - m2 = a mod p
    agg = got.sum(axis=1)
    expected = int(f_tab.F.sum()) - 2
    return IdentityReport(p, zero_ok, a_zero_ok, counts, rows,
                          bool(np.all(agg == expected)), tuple(int(v) for v in np.unique(agg)))


@dataclass(frozen=True)
class HKReport:
    worst_ratio: float
    worst_m: int


def hk_lemma_check(f_tab):
    """max over m of (sum of the m largest F values) / (p^(2/3) m^(2/3))."""
    p = f_tab.p
    top = np.cumsum(np.sort(f_tab.F)[::-1])
    m = np.arange(1, p + 1)
    ratios = top / (p ** (2 / 3) * m ** (2 / 3))
    k = int(np.argmax(ratios))
    return HKReport(float(ratios[k]), k + 1)


@dataclass(frozen=True, eq=False)
class UTable:
    p: int
    u: np.ndarray
    labels: np.ndarray  # labels[x - 1] = xi for x in [1, p]


def u_table(ctx):
    p = ctx.p
    x = np.arange(1, p + 1, dtype=np.int64)
    r = (_powers_mod_psq(ctx, x, p) - x) % ctx.psq
    if np.any(r % p):
        raise InvariantViolation("x^p - x not divisible by p")
    labels = r // p
    return UTable(p, np.bincount(labels, minlength=p).astype(np.int64), labels)


@dataclass(frozen=True)
class PropositionReport:
    p: int
    sum_u2: int
    E: int
    ratios: dict

    @property
    def ratio(self):
        return self.ratios[0.0]


def proposition_check(u_tab, energy):
    s = int(np.sum(u_tab.u ** 2))
    p = u_tab.p
    ratios = {eps: s / (p ** (0.125 + eps) * math.sqrt(energy)) for eps in EPSILONS}
    return PropositionReport(p, s, int(energy), ratios)


def legendre_table(p):
    """chi[a] for a in [0, p): Legendre symbol with chi[0] = 0."""
    chi = np.full(p, -1, dtype=np.int64)
    chi[0] = 0
    sq = np.unique((np.arange(1, p, dtype=np.int64) ** 2) % p)
    chi[sq] = 1
    return chi


def character_sums(ctx, k, q_tab=None, chi=None):
    """(sum_{n<=k} chi(q(n)), sum_{n<=k} chi(n q(n)))."""
    p = ctx.p
    if not 1 <= k <= p - 1:
        raise InvalidArgument(f"k must lie in [1, {p - 1}]")
    q_tab = q_tab if q_tab is not None else fermat_quotient_table(ctx)
    chi = chi if chi is not None else legendre_table(p)
    n = np.arange(1, k + 1, dtype=np.int64)
    q = q_tab.q[1:k + 1]
    return int(chi[q].sum()), int(chi[(n * q) % p].sum())


def lp_sweep(primes):
    return [compute_lp(PrimeContext(p)) for p in primes if p >= 3]
