"""Command line entry point: ``heilbronn-lab <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 numeric-precision alarm.
"""
import argparse
import csv
import datetime
import io
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, correlation, fermatq, heilbronn, inspector, spectral
from .core_arith import PrimeContext, build_gamma, characterization_report, is_prime, primes_between
from .errors import CapExceeded, InvalidArgument, NumericPrecisionError
from .sweep import COLUMNS, SweepConfig, ledger_row, row_cells, run_sweep

log = logging.getLogger("heilbronn_lab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
DIRECT_DFT_MAX_P = 139


def _header_line(reproducible):
    if reproducible:
        return None
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return f"# generated {stamp} by heilbronn_lab {__version__}"


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def render_sweep(summaries, fmt, reproducible):
    rows = [ledger_row(s) for s in summaries]
    header = _header_line(reproducible)
    if fmt == "json":
        doc = {"columns": list(COLUMNS), "rows": rows}
        if header:
            doc["generated"] = header[2:]
        return json.dumps(doc, indent=1, allow_nan=False, default=str) + "\n"
    buf = io.StringIO()
    if header:
        buf.write(header + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow(row_cells(r))
    return buf.getvalue()


def _config(args):
    return SweepConfig(
        p_min=args.pmin, p_max=args.pmax, full_table_cap=args.cap_table,
        inspector_cap=args.cap_inspect, jobs=args.jobs, cache_dir=args.cache_dir,
        output=args.format, seed=args.seed,
    )


def _primes(args):
    ps = primes_between(args.pmin, args.pmax)
    if 2 in ps:
        print("warning: p = 2 skipped (odd primes only)", file=sys.stderr)
        ps = [p for p in ps if p != 2]
    return ps


def cmd_sweep(args):
    config = _config(args)
    primes = _primes(args)
    summaries = run_sweep(primes, config)
    _emit(render_sweep(summaries, args.format, args.reproducible), args.out)
    failed = [s.p for s in summaries if s.status != "ok"]
    if failed:
        print(f"{len(failed)} prime(s) failed: {failed}", file=sys.stderr)
    return EXIT_OK


class _Failures:
    def __init__(self):
        self.items = []

    def add(self, p, what, x=None, expected=None, got=None):
        self.items.append((p, what, x, expected, got))
        print(f"FAIL p={p} {what} x={x} expected={expected} got={got}")


def verify_prime(p, config, fails):
    """Exact-identity suite for one prime; appends to ``fails``."""
    ctx = PrimeContext(p)
    n = ctx.psq
    gamma = build_gamma(ctx)
    g = gamma.elements
    if not gamma.bitmap[(g * gamma.generator) % n].all():
        fails.add(p, "gamma closure")
    if not gamma.bitmap[(-g) % n].all():
        fails.add(p, "gamma symmetry")
    if not np.array_equal(np.sort(g % p), np.arange(1, p)):
        fails.add(p, "gamma fiber property")
    if not characterization_report(gamma)["x^(p-1)=1"]["coincides"]:
        fails.add(p, "x^(p-1)=1 characterization")
    if p > config.full_table_cap:
        return
    table = correlation.autocorrelation(g, n, "pairs")
    tf = correlation.autocorrelation(g, n, "fourier")
    for x in np.flatnonzero(table.counts != tf.counts)[:20]:
        fails.add(p, "autocorrelation backends", int(x), int(table.counts[x]), int(tf.counts[x]))

    if p <= fermatq.F_TABLE_CAP:
        f_tab = fermatq.f_table(ctx)
        q_tab = fermatq.fermat_quotient_table(ctx)
        rep = fermatq.verify_convolution_identity(ctx, gamma, table, f_tab, q_tab)
        if not rep.zero_value_ok:
            fails.add(p, "correlation at 0", 0, gamma.t, int(table.counts[0]))
        if not rep.a_zero_ok:
            fails.add(p, "correlation vanishes on pZ")
        for x, _a, _b, exp, got in rep.mismatches["corrected"]:
            fails.add(p, "convolution identity", x, exp, got)
        if not rep.aggregate_ok:
            fails.add(p, "fiber sums", None, p - 2, rep.aggregate_values)

    backend = "direct" if p <= DIRECT_DFT_MAX_P else "auto"
    tol = 1e-9 if p <= DIRECT_DFT_MAX_P else 1e-6
    par = spectral.parseval_check(gamma.indicator(), backend)
    if par.relative_error >= tol:
        fails.add(p, "parseval", None, par.lhs, par.rhs)
    spec = heilbronn.full_spectrum(ctx, gamma, seed=config.seed)
    if spec.values[0] != p:
        fails.add(p, "S(0)", 0, p, spec.values[0])
    pc = np.arange(1, p) * p
    worst = float(np.max(np.abs(spec.values[pc])))
    if worst > 1e-9:
        fails.add(p, "S(pc) = 0", None, 0.0, worst)

    if p > config.inspector_cap:
        return
    e = correlation.energy_k(table, 2)
    for kind, label, d in inspector.symmetric_invariant_sets(gamma, table):
        eig = inspector.eigen_check(gamma, d, table)
        if not eig.matches:
            fails.add(p, f"eigen identity ({kind} {label})", None, str(eig.mu_exact),
                      (eig.values_min, eig.values_max))
        if kind == "shell":
            l6 = inspector.lemma6_check(gamma, d, table, e, cap=config.inspector_cap)
            if not l6.holds:
                fails.add(p, f"triple inequality (shell {label})", None, str(l6.lhs), l6.rhs)


def cmd_verify(args):
    config = _config(args)
    primes = _primes(args)
    if not primes:
        print("no primes in range; nothing to verify")
        return EXIT_OK
    fails = _Failures()
    t0 = time.perf_counter()
    for p in primes:
        verify_prime(p, config, fails)
    dt = time.perf_counter() - t0
    status = "FAILED" if fails.items else "ok"
    print(f"verify {status}: {len(primes)} primes in [{args.pmin}, {args.pmax}], "
          f"{len(fails.items)} failure(s), {dt:.2f} s")
    return EXIT_FAIL if fails.items else EXIT_OK


def _out_dir(args):
    d = Path(args.out or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _context(args):
    if not is_prime(args.p):
        raise InvalidArgument(f"{args.p} is not prime")
    return PrimeContext(args.p)


def _check_cap(p, cap, what):
    if p > cap:
        raise CapExceeded(f"p = {p} exceeds the {what} cap {cap}")


def cmd_spectrum(args):
    ctx = _context(args)
    _check_cap(ctx.p, args.cap_table, "spectrum")
    spec = heilbronn.full_spectrum(ctx, seed=args.seed)
    path = _out_dir(args) / f"spectrum_p{ctx.p}.csv"
    spec.to_csv(path)
    ratios = heilbronn.bound_ratio_report(spec)
    print(f"wrote {path}; max|S(a)| over a != 0 mod p = {ratios.max_nontrivial!r}")
    return EXIT_OK


def _json_dump(obj, path):
    path.write_text(json.dumps(obj, indent=1, default=str) + "\n")


def cmd_energy(args):
    ctx = _context(args)
    _check_cap(ctx.p, args.cap_table, "table")
    gamma = build_gamma(ctx)
    table = correlation.autocorrelation(gamma.elements, ctx.psq)
    rep = correlation.energy_report(table)
    out = _out_dir(args)
    doc = {
        "p": ctx.p, "t": gamma.t, "E": rep.E, "K": str(rep.K), "E3": rep.E3,
        "moments": {str(k): v for k, v in rep.moments.items()},
        "ratios": correlation.moment_bound_report(rep),
        "max_shift": table.max_nonzero_shift,
        "cprime": table.max_nonzero_shift / gamma.t ** (2 / 3),
    }
    if args.format == "json":
        path = out / f"energy_p{ctx.p}.json"
        _json_dump(doc, path)
    else:
        path = out / f"correlation_p{ctx.p}.csv"
        table.to_csv(path, ctx.p)
    print(f"wrote {path}; E = {rep.E}, E3 = {rep.E3}")
    return EXIT_OK


def cmd_inspect(args):
    ctx = _context(args)
    _check_cap(ctx.p, args.cap_inspect, "inspector")
    tr = inspector.trace_theorem4(ctx, cap=args.cap_inspect)
    path = _out_dir(args) / f"trace_p{ctx.p}.json"
    _json_dump(tr.to_dict(), path)
    print(f"wrote {path}; sigma = {tr.sigma}, mu = {tr.mu!r},"
          f" triple inequality {tr.lemma6['lhs']} <= {tr.lemma6['rhs']}")
    return EXIT_OK if tr.exact_steps_hold else EXIT_FAIL


def cmd_fermat(args):
    ctx = _context(args)
    lp = fermatq.compute_lp(ctx)
    q_tab = fermatq.fermat_quotient_table(ctx)
    u_tab = fermatq.u_table(ctx)
    c1, c2 = fermatq.character_sums(ctx, ctx.p - 1, q_tab)
    doc = {"p": ctx.p, "l_p": lp.l_p, "lp_envelope": lp.envelope, "sum_u2": int(np.sum(u_tab.u ** 2)),
           "char_sum1": c1, "char_sum2": c2}
    if ctx.p <= min(args.cap_table, fermatq.F_TABLE_CAP):
        gamma = build_gamma(ctx)
        table = correlation.autocorrelation(gamma.elements, ctx.psq)
        f_tab = fermatq.f_table(ctx)
        e = correlation.energy_k(table, 2)
        prop = fermatq.proposition_check(u_tab, e)
        ident = fermatq.verify_convolution_identity(ctx, gamma, table, f_tab, q_tab)
        doc.update({
            "E": e,
            "prop_ratios": {str(k): v for k, v in prop.ratios.items()},
            "hk_worst_ratio": fermatq.hk_lemma_check(f_tab).worst_ratio,
            "identity": {"matches": ident.match_table(), "mismatches": ident.mismatches,
                         "aggregate_values": ident.aggregate_values,
                         "zero_value_ok": ident.zero_value_ok, "a_zero_ok": ident.a_zero_ok},
        })
    out = _out_dir(args)
    path = out / f"fermat_p{ctx.p}.json"
    _json_dump(doc, path)
    print(f"wrote {path}; l_p = {lp.l_p}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="heilbronn-lab", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--cap-table", type=int, default=3163)
        sp.add_argument("--cap-inspect", type=int, default=inspector.INSPECTOR_CAP)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None)

    for name, fn in (("verify", cmd_verify), ("sweep", cmd_sweep)):
        sp = sub.add_parser(name)
        sp.add_argument("--pmin", type=int, required=True)
        sp.add_argument("--pmax", type=int, required=True)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--cache-dir", default=None)
        sp.add_argument("--reproducible", action="store_true")
        common(sp)
        sp.set_defaults(func=fn)
    for name, fn in (("spectrum", cmd_spectrum), ("inspect", cmd_inspect),
                     ("fermat", cmd_fermat), ("energy", cmd_energy)):
        sp = sub.add_parser(name)
        sp.add_argument("p", type=int)
        common(sp)
        sp.set_defaults(func=fn)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "pmin", 0) > getattr(args, "pmax", 1) or getattr(args, "jobs", 1) < 1:
        ap.error("need pmin <= pmax and jobs >= 1")
    try:
        return args.func(args)
    except NumericPrecisionError as exc:
        print(f"numeric precision alarm: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (CapExceeded, InvalidArgument) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
