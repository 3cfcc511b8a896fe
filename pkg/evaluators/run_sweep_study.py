"""
Run the theorem suite over a parameter range and tabulate the outcome.

Writes one CSV row per (digits, check) with the verdict and the number of
values checked, and a second CSV with per-stage wall time for every case.
"""
import argparse
import os
import time

import pandas as pd
from dotenv import load_dotenv

from parry_words.config_loader import SWEEP_M_MAX, SWEEP_T_MAX
from parry_words.verify import run_sweep

load_dotenv(".env")


def verdict_rows(reports) -> pd.DataFrame:
    rows = []
    for r in reports:
        label = ",".join(map(str, r.digits))
        for v in r.verdicts:
            rows.append({
                "digits": label,
                "tag": r.classification["tag"],
                "horizon": r.horizon,
                "check": v.name,
                "passed": v.passed,
                "checked": v.checked,
            })
    return pd.DataFrame(rows)


def timing_rows(reports) -> pd.DataFrame:
    rows = []
    for r in reports:
        row = {"digits": ",".join(map(str, r.digits)), "horizon": r.horizon}
        row.update(r.timings)
        rows.append(row)
    return pd.DataFrame(rows)


def main():
    parser = argparse.ArgumentParser(description="Sweep the theorem suite and write CSV tables")
    parser.add_argument("--m-max", type=int, default=SWEEP_M_MAX)
    parser.add_argument("--t-max", type=int, default=SWEEP_T_MAX)
    parser.add_argument("--nmax", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out-dir", default=os.getenv("SWEEP_OUTPUT_DIR", "sweep_results"))
    args = parser.parse_args()

    print(f"\n{'='*60}")
    print(f"Sweep m <= {args.m_max}, t <= {args.t_max}")
    print(f"{'='*60}\n")

    start = time.perf_counter()
    reports = run_sweep(m_max=args.m_max, t_max=args.t_max, n_max=args.nmax, workers=args.workers, timings=True)
    elapsed = time.perf_counter() - start

    os.makedirs(args.out_dir, exist_ok=True)
    verdicts = verdict_rows(reports)
    verdicts.to_csv(os.path.join(args.out_dir, "verdicts.csv"), index=False)
    timing_rows(reports).to_csv(os.path.join(args.out_dir, "timings.csv"), index=False)

    failed = verdicts[~verdicts["passed"]]
    print(f"{len(reports)} cases, {len(verdicts)} checks, {len(failed)} failed, {elapsed:.1f}s wall time")
    if not failed.empty:
        print(failed.to_string(index=False))
    print(f"Tables written to {args.out_dir}/")


if __name__ == "__main__":
    main()
