"""Per-prime summaries and the constant-tracking ledger rows built from them.

A summary holds only exact integers and floats that round-trip through the
cache unchanged; ledger rows are a pure function of the summary, so a warm
cache reproduces a cold run byte for byte.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cache as cache_mod
from . import correlation, fermatq, heilbronn
from .core_arith import PrimeContext, build_gamma

TABLE_CAP = 3163

COLUMNS = (
    "p", "t", "E", "K", "maxS", "ratio_78", "ratio_5968",
    "e_ratio", "e3_ratio", "e4_ratio", "e5_ratio", "e6_ratio", "cprime",
    "l_p", "lp_envelope", "sum_u2", "prop_ratio", "hk_worst_ratio",
    "char_sum1", "char_sum2", "identity_literal_mismatches", "identity_corrected_mismatches",
    "status",
)


@dataclass(frozen=True)
class SweepConfig:
    p_min: int
    p_max: int
    full_table_cap: int = TABLE_CAP
    inspector_cap: int = 313
    jobs: int = 1
    cache_dir: str = None
    output: str = "csv"
    seed: int = 0

    def __post_init__(self):
        if self.p_min > self.p_max:
            raise ValueError("p_min must not exceed p_max")
        if self.full_table_cap <= 0 or self.inspector_cap <= 0:
            raise ValueError("caps must be positive")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass
class PrimeSummary:
    p: int
    status: str = "ok"
    meta: dict = field(default_factory=dict)
    arrays: dict = field(default_factory=dict)


def compute_summary(p, table_cap=TABLE_CAP, seed=0):
    ctx = PrimeContext(p)
    meta = {"t": ctx.t}
    arrays = {}
    lp = fermatq.compute_lp(ctx)
    meta["l_p"] = lp.l_p
    q_tab = fermatq.fermat_quotient_table(ctx)
    arrays["q"] = q_tab.q
    meta["char_sums"] = list(fermatq.character_sums(ctx, p - 1, q_tab))
    u_tab = fermatq.u_table(ctx)
    arrays["u"] = u_tab.u
    if p > table_cap:
        return PrimeSummary(p, "ok", meta, arrays)

    gamma = build_gamma(ctx)
    arrays["gamma"] = gamma.elements
    table = correlation.autocorrelation(gamma.elements, ctx.psq)
    xs, vals = table.sparse_items()
    arrays["corr_x"] = xs
    arrays["corr_count"] = vals
    rep = correlation.energy_report(table)
    meta["E"] = rep.E
    meta["E3"] = rep.E3
    meta["moments"] = {str(k): v for k, v in rep.moments.items()}
    meta["max_shift"] = table.max_nonzero_shift
    spec = heilbronn.full_spectrum(ctx, gamma, seed=seed)
    meta["maxS"] = spec.max_nontrivial
    meta["spot_error"] = spec.spot_error
    if p <= fermatq.F_TABLE_CAP:
        f_tab = fermatq.f_table(ctx)
        arrays["F"] = f_tab.F
        meta["hk_worst"] = fermatq.hk_lemma_check(f_tab).worst_ratio
        ident = fermatq.verify_convolution_identity(ctx, gamma, table, f_tab, q_tab)
        meta["identity"] = {k: int(v) for k, v in ident.mismatch_counts.items()}
        meta["identity_holds"] = ident.holds()
    return PrimeSummary(p, "ok", meta, arrays)


def summary_from_entry(entry):
    return PrimeSummary(entry.p, entry.meta.get("status", "ok"), dict(entry.meta), dict(entry.arrays))


def entry_from_summary(s):
    meta = dict(s.meta)
    meta["status"] = s.status
    return cache_mod.CacheEntry(s.p, meta, dict(s.arrays))


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def ledger_row(s):
    """Column name -> value for one prime (None for unavailable fields)."""
    row = dict.fromkeys(COLUMNS)
    row["p"] = s.p
    row["status"] = s.status
    if s.status != "ok":
        return row
    m = s.meta
    p, t = s.p, m["t"]
    row["t"] = t
    row["l_p"] = m["l_p"]
    row["lp_envelope"] = math.log2(p) ** fermatq.LP_EXPONENT
    row["char_sum1"], row["char_sum2"] = m["char_sums"]
    u = np.asarray(s.arrays["u"])
    sum_u2 = int(np.sum(u * u))
    row["sum_u2"] = sum_u2
    if "E" in m:
        e = m["E"]
        row["E"] = e
        row["K"] = t ** 3 / e
        row["maxS"] = m["maxS"]
        row["ratio_78"] = m["maxS"] / p ** heilbronn.EXPONENT_78
        row["ratio_5968"] = m["maxS"] / (p ** heilbronn.EXPONENT_5968
                                         * math.log2(p) ** heilbronn.LOG_EXPONENT_5968)
        ratios = correlation.moment_bound_report(correlation.EnergyReport(
            t, e, None, m["E3"], {int(k): v for k, v in m["moments"].items()}))
        row["e_ratio"] = ratios["E_ratio"]
        row["e3_ratio"] = ratios["E3_ratio"]
        for l in (4, 5, 6):
            row[f"e{l}_ratio"] = ratios.get(f"E{l}_ratio")
        row["cprime"] = m["max_shift"] / t ** (2 / 3)
        row["prop_ratio"] = sum_u2 / (p ** 0.125 * math.sqrt(e))
    if "hk_worst" in m:
        row["hk_worst_ratio"] = m["hk_worst"]
        row["identity_literal_mismatches"] = m["identity"]["literal"]
        row["identity_corrected_mismatches"] = m["identity"]["corrected"]
    return row


def row_cells(row):
    return [_fmt(row[c]) for c in COLUMNS]


def _failed(p, exc):
    msg = str(exc).replace("\n", " ").replace(",", ";")
    return PrimeSummary(p, f"failed: {type(exc).__name__}: {msg}")


def summarize(p, config):
    """Summary for one prime, via the cache when configured; never raises."""
    try:
        if config.cache_dir:
            entry = cache_mod.load(config.cache_dir, p)
            if entry is not None and entry.meta.get("table_cap") == config.full_table_cap:
                return summary_from_entry(entry)
        s = compute_summary(p, config.full_table_cap, config.seed)
        s.meta["table_cap"] = config.full_table_cap
        if config.cache_dir:
            cache_mod.save(config.cache_dir, entry_from_summary(s))
        return s
    except Exception as exc:  # isolate per-prime failures
        return _failed(p, exc)


def _summarize_star(args):
    return summarize(*args)


def run_sweep(primes, config):
    """Summaries for all primes, sorted by p; parallelism only changes scheduling."""
    primes = sorted(primes)
    if config.jobs == 1 or len(primes) <= 1:
        out = [summarize(p, config) for p in primes]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            out = list(pool.map(_summarize_star, [(p, config) for p in primes], chunksize=4))
    return sorted(out, key=lambda s: s.p)
