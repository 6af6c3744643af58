"""Regenerate constants.json: the largest observed bound ratios over 100 < p < 2000.

Run from the repository root with ``python3 tests/golden/make_golden.py``.
The values are a regression baseline; they are recorded, never derived.
"""
import json
import math
import sys
from pathlib import Path

from heilbronn_lab.core_arith import primes_between
from heilbronn_lab.heilbronn import exponent_fit
from heilbronn_lab.sweep import SweepConfig, ledger_row, run_sweep

P_LO, P_HI = 101, 1999
TRACKED = ("ratio_78", "ratio_5968", "e_ratio", "e3_ratio", "hk_worst_ratio", "prop_ratio")
PATH = Path(__file__).with_name("constants.json")


def ledger(p_lo=P_LO, p_hi=P_HI, jobs=1):
    config = SweepConfig(p_lo, p_hi, jobs=jobs)
    return [ledger_row(s) for s in run_sweep(primes_between(p_lo, p_hi), config)]


def maxima(rows):
    out = {}
    for col in TRACKED:
        best = max(rows, key=lambda r: r[col])
        out[col] = {"max": best[col], "argmax_p": best["p"]}
    fit = exponent_fit([(math.log(r["t"]), math.log(r["E"])) for r in rows])
    out["energy_slope"] = {"slope": fit.slope, "intercept": fit.intercept, "residual": fit.residual}
    return out


def main():
    rows = ledger(jobs=int(sys.argv[1]) if len(sys.argv) > 1 else 1)
    bad = [r["p"] for r in rows if r["status"] != "ok"]
    if bad:
        raise SystemExit(f"sweep failed at {bad}")
    doc = {"range": [P_LO, P_HI], "primes": len(rows), "constants": maxima(rows)}
    PATH.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    print(json.dumps(doc, indent=1, sort_keys=True))


if __name__ == "__main__":
    main()
